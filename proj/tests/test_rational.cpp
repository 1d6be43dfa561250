#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fusible/rational.hpp"

using namespace fusible;

namespace {
Rational Q(const char* s) { return Rational::parse(s); }
}

TEST_CASE("field arithmetic on reduced fractions") {
    CHECK(Q("1/2") + Q("1/3") == Q("5/6"));
    CHECK(Q("1/2") - Q("1/2") == Q("0"));
    CHECK(Q("7/8") / Q("1/8") == Q("7"));
    CHECK(Q("-4/8") == Q("-1/2"));
    CHECK((Q("2/3") * Q("9/4")).str() == "3/2");
}

TEST_CASE("division by zero reports an error") {
    CHECK_THROWS_AS(Q("1/2") / Q("0"), DomainError);
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), DomainError);
}

TEST_CASE("storage is always reduced with positive denominator") {
    Rational r(BigInt(-6), BigInt(-4));
    CHECK(r.num() == 3);
    CHECK(r.den() == 2);
    Rational s(BigInt(6), BigInt(-4));
    CHECK(s.num() == -3);
    CHECK(s.den() == 2);
    CHECK(boost::multiprecision::gcd(abs(s).num(), s.den()) == 1);
}

TEST_CASE("canonical string round-trip") {
    // Deterministic random p/q values; re-parsing the canonical form must
    // reproduce the identical value.
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<long long> num(-1'000'000, 1'000'000);
    std::uniform_int_distribution<long long> den(1, 1'000'000);
    for (int i = 0; i < 2000; ++i) {
        Rational r(BigInt(num(rng)), BigInt(den(rng)));
        CHECK(Rational::parse(r.str()) == r);
    }
    CHECK(Q("17").str() == "17");
    CHECK(Q("-3/6").str() == "-1/2");
    CHECK_THROWS_AS(Q("1/-2"), ParseError);
    CHECK_THROWS_AS(Q("a/b"), ParseError);
    CHECK_THROWS_AS(Q("1/0"), ParseError);
    CHECK_THROWS_AS(Q(""), ParseError);
    CHECK_THROWS_AS(Q("1 / 2"), ParseError);
}

TEST_CASE("rational_pow covers negative exponents") {
    CHECK(rational_pow(3, 0) == Q("1"));
    CHECK(rational_pow(3, 4) == Q("81"));
    CHECK(rational_pow(3, -3) == Q("1/27"));
    CHECK_THROWS_AS(rational_pow(0, -1), DomainError);
}

TEST_CASE("extended rationals order totally") {
    ExtRational minf = ExtRational::minus_inf();
    ExtRational pinf = ExtRational::plus_inf();
    ExtRational half(Q("1/2"));
    CHECK(minf < half);
    CHECK(half < pinf);
    CHECK(minf < pinf);
    CHECK(min(pinf, half) == half);
    CHECK(ExtRational::parse("-inf") == minf);
    CHECK(ExtRational::parse("inf") == pinf);
    CHECK(ExtRational::parse("3/4") == ExtRational(Q("3/4")));
}

TEST_CASE("extended arithmetic is partial by design") {
    ExtRational minf = ExtRational::minus_inf();
    ExtRational pinf = ExtRational::plus_inf();
    CHECK(ExtRational(Q("5")) + minf == minf);
    CHECK(pinf + ExtRational(Q("-7")) == pinf);
    CHECK(ExtRational(Q("1/2")) - minf == pinf);
    CHECK_THROWS_AS(pinf + minf, DomainError);
    CHECK(Q("1/2") * pinf == pinf);
    CHECK(minf / Q("3") == minf);
    CHECK_THROWS_AS(Q("0") * pinf, DomainError);
    CHECK_THROWS_AS(Q("-1") * minf, DomainError);
    CHECK_THROWS_AS(pinf.finite_value(), DomainError);
    CHECK((Q("2") * ExtRational(Q("3/4"))).finite_value() == Q("3/2"));
}

TEST_CASE("fixed point of a contracting affine map") {
    // x = x/2 + 1/2  =>  x = 1
    CHECK(fixed_point(UnaryAffine(Q("1/2"), Q("1/2"))) == Q("1"));
    // x = x/3 + 1/3  =>  x = 1/2 (the diagonal section of g_3 at (0,0))
    CHECK(fixed_point(UnaryAffine(Q("1/3"), Q("1/3"))) == Q("1/2"));
    // constant map
    CHECK(fixed_point(UnaryAffine(Q("0"), Q("5"))) == Q("5"));
    CHECK_THROWS_AS(fixed_point(UnaryAffine(Q("1"), Q("1"))), DomainError);
    CHECK_THROWS_AS(fixed_point(UnaryAffine(Q("3/2"), Q("0"))), DomainError);
    CHECK_THROWS_AS(UnaryAffine(Q("-1/2"), Q("0")), DomainError);
}

TEST_CASE("fixed point satisfies h(fix) = fix exactly and uniquely") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> num(0, 99);
    std::uniform_int_distribution<long long> off(-50, 50);
    for (int i = 0; i < 500; ++i) {
        Rational a(BigInt(num(rng)), BigInt(100)); // 0 <= a < 1
        Rational b(BigInt(off(rng)), BigInt(7));
        UnaryAffine h(a, b);
        Rational fix = fixed_point(h);
        CHECK(h(fix) == fix);
        // uniqueness: h(x) = x is linear with slope != 1
        Rational other = fix + Q("1/3");
        CHECK(h(other) != other);
    }
}

TEST_CASE("iteration toward the fixed point") {
    auto seq = iterate_to_fixpoint(UnaryAffine(Q("1/3"), Q("1/3")), Q("0"), 3);
    REQUIRE(seq.size() == 4);
    CHECK(seq[0] == Q("0"));
    CHECK(seq[1] == Q("1/3"));
    CHECK(seq[2] == Q("4/9"));
    CHECK(seq[3] == Q("13/27"));

    auto seq2 = iterate_to_fixpoint(UnaryAffine(Q("1/2"), Q("1/2")), Q("0"), 2);
    CHECK(seq2 == std::vector<Rational>{Q("0"), Q("1/2"), Q("3/4")});

    auto seq0 = iterate_to_fixpoint(UnaryAffine(Q("1/2"), Q("1/2")), Q("-5"), 0);
    CHECK(seq0 == std::vector<Rational>{Q("-5")});
}

TEST_CASE("iterates increase strictly and stay below the fixed point") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> sl(1, 15);
    std::uniform_int_distribution<long long> off(-20, 20);
    for (int i = 0; i < 200; ++i) {
        UnaryAffine h(Rational(BigInt(sl(rng)), BigInt(16)), Rational(BigInt(off(rng)), BigInt(5)));
        Rational fix = fixed_point(h);
        Rational x0 = fix - Rational(BigInt(1 + (i % 7)), BigInt(3));
        auto seq = iterate_to_fixpoint(h, x0, 12);
        for (size_t k = 0; k < seq.size(); ++k) {
            CHECK(seq[k] < fix);
            if (k > 0)
                CHECK(seq[k - 1] < seq[k]);
        }
    }
    CHECK_THROWS_AS(iterate_to_fixpoint(UnaryAffine(Q("0"), Q("5")), Q("0"), 2), DomainError);
    CHECK_THROWS_AS(iterate_to_fixpoint(UnaryAffine(Q("1/2"), Q("1/2")), Q("1"), 2), DomainError);
    CHECK_THROWS_AS(iterate_to_fixpoint(UnaryAffine(Q("1/2"), Q("1/2")), Q("2"), 2), DomainError);
}
