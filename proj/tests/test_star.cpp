#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fusible/veblen_star.hpp"

using namespace fusible;

namespace {

StarTerm S(const char* s) { return StarTerm::parse(s); }

StarTerm random_star(std::mt19937_64& rng, unsigned n, unsigned depth) {
    if (depth == 0 || rng() % 3 == 0)
        return StarTerm::zero();
    std::vector<StarTerm> kids;
    for (unsigned i = 0; i < n; ++i)
        kids.push_back(random_star(rng, n, depth - 1));
    return StarTerm::apply(std::move(kids));
}

} // namespace

TEST_CASE("parsing and sizes") {
    CHECK(S("0").is_zero());
    auto v = S("(V 0 0 0)");
    CHECK(v.size() == 1);
    CHECK(v.depth() == 1);
    CHECK(v.str() == "(V 0 0 0)");
    auto w = S("(V 0 0 (V 0 0 0))");
    CHECK(w.size() == 2);
    CHECK(w.depth() == 2);
    CHECK(StarTerm::parse(w.str()) == w);
    CHECK_THROWS_AS(S("(V 0)"), DomainError);
    CHECK_THROWS_AS(S("(V 0 0"), ParseError);
    CHECK_THROWS_AS(S("(W 0 0 0)"), ParseError);
    CHECK_THROWS_AS(S("(V 0 0 (V 0 0))"), DomainError); // mixed arity
}

TEST_CASE("comparison anchors") {
    CHECK(star_less(S("0"), S("(V 0 0 0)")));
    CHECK(star_less(S("(V 0 0 0)"), S("(V 0 0 (V 0 0 0))")));
    CHECK(star_less(S("(V 0 0 (V 0 0 0))"), S("(V (V 0 0 0) 0 0)")));
    CHECK(star_compare(S("(V 0 0 0)"), S("(V 0 0 0)")) == std::strong_ordering::equal);
    CHECK_THROWS_AS(star_compare(S("(V 0 0 0)"), S("(V 0 0)")), DomainError);
}

TEST_CASE("applications dominate their arguments") {
    auto terms = star_enumerate(3, 4);
    for (const auto& t : terms) {
        if (t.is_zero())
            continue;
        for (const auto& c : t.children())
            CHECK(star_less(c, t));
    }
}

TEST_CASE("strict total order on all terms of size <= 3, arity 3") {
    auto terms = star_enumerate(3, 3);
    REQUIRE(terms.size() == 17); // 1 + 1 + 3 + 12
    for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = 0; j < terms.size(); ++j) {
            auto o = star_compare(terms[i], terms[j]);
            if (i == j)
                CHECK(o == std::strong_ordering::equal);
            else
                CHECK(o != std::strong_ordering::equal);
            auto r = star_compare(terms[j], terms[i]);
            if (o == std::strong_ordering::less)
                CHECK(r == std::strong_ordering::greater);
        }
    // enumeration comes back sorted: consecutive strictly ascending, and
    // transitivity holds across all index triples by positional order
    for (size_t i = 0; i + 1 < terms.size(); ++i)
        CHECK(star_less(terms[i], terms[i + 1]));
    for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = i + 1; j < terms.size(); ++j)
            CHECK(star_less(terms[i], terms[j]));
}

TEST_CASE("trichotomy and transitivity on random larger terms") {
    std::mt19937_64 rng(1009);
    for (int k = 0; k < 400; ++k) {
        auto a = random_star(rng, 3, 3), b = random_star(rng, 3, 3), c = random_star(rng, 3, 3);
        auto ab = star_compare(a, b), ba = star_compare(b, a);
        if (ab == std::strong_ordering::equal) {
            CHECK(a == b);
            CHECK(ba == std::strong_ordering::equal);
        } else if (ab == std::strong_ordering::less) {
            CHECK(ba == std::strong_ordering::greater);
        } else {
            CHECK(ba == std::strong_ordering::less);
        }
        if (star_less(a, b) && star_less(b, c))
            CHECK(star_less(a, c));
    }
}

TEST_CASE("argumentwise monotonicity") {
    auto terms = star_enumerate(3, 3);
    for (const auto& t : terms) {
        if (t.is_zero())
            continue;
        for (size_t i = 0; i < 3; ++i) {
            for (const auto& smaller : terms) {
                if (!star_less(smaller, t.children()[i]))
                    continue;
                auto kids = t.children();
                kids[i] = smaller;
                CHECK(star_less(StarTerm::apply(kids), t));
            }
        }
    }
}

TEST_CASE("enumeration prefix of the order") {
    auto small = star_enumerate(3, 1);
    REQUIRE(small.size() == 2);
    CHECK(small[0].is_zero());
    CHECK(small[1].str() == "(V 0 0 0)");

    auto sized = star_enumerate(3, 2);
    REQUIRE(sized.size() == 5);
    CHECK(sized[0].str() == "0");
    CHECK(sized[1].str() == "(V 0 0 0)");
    CHECK(sized[2].str() == "(V 0 0 (V 0 0 0))");
    CHECK(sized[3].str() == "(V 0 (V 0 0 0) 0)");
    CHECK(sized[4].str() == "(V (V 0 0 0) 0 0)");
}

TEST_CASE("the successor of t is V(0,..,0,t)") {
    // no term u of size <= bound+2 lies strictly between t and V(0,..,0,t)
    auto ts = star_enumerate(3, 3);
    auto us = star_enumerate(3, 5);
    for (const auto& t : ts) {
        auto succ = StarTerm::apply({StarTerm::zero(), StarTerm::zero(), t});
        CHECK(star_less(t, succ));
        for (const auto& u : us) {
            bool between = star_less(t, u) && star_less(u, succ);
            CHECK_FALSE(between);
        }
    }
}

TEST_CASE("size-then-serialization enumeration for the embedding") {
    auto seq = star_enumerate_by_size(3, 6);
    REQUIRE(seq.size() == 6);
    CHECK(seq[0].str() == "0");
    CHECK(seq[1].str() == "(V 0 0 0)");
    // the three size-2 terms in serialization order
    CHECK(seq[2].str() == "(V (V 0 0 0) 0 0)");
    CHECK(seq[3].str() == "(V 0 (V 0 0 0) 0)");
    CHECK(seq[4].str() == "(V 0 0 (V 0 0 0))");
    CHECK(seq[5].size() == 3);
}
