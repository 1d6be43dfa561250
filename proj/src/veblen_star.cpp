#include "fusible/veblen_star.hpp"

#include <algorithm>
#include <cctype>

namespace fusible {

StarTerm::StarTerm() {
    static const std::shared_ptr<const Node> zero_node = [] {
        auto n = std::make_shared<Node>();
        n->text = "0";
        return n;
    }();
    node_ = zero_node;
}

StarTerm StarTerm::apply(std::vector<StarTerm> children) {
    if (children.size() < 2)
        throw DomainError("the star constructor needs arity >= 2");
    auto n = std::make_shared<Node>();
    n->size = 1;
    n->depth = 0;
    n->text = "(V";
    for (const auto& c : children) {
        if (!c.is_zero() && c.arity() != children.size())
            throw DomainError("mixed arities in star term");
        n->size += c.size();
        n->depth = std::max(n->depth, c.depth());
        n->text += ' ';
        n->text += c.str();
    }
    n->depth += 1;
    n->text += ')';
    n->children = std::move(children);
    return StarTerm(std::move(n));
}

namespace {

bool star_less_applications(const StarTerm& a, const StarTerm& b) {
    // a <= some argument of b
    for (const auto& c : b.children())
        if (!c.is_zero() && star_compare(a, c) != std::strong_ordering::greater)
            return true;
    // first differing argument descends, later arguments stay below b
    const auto& as = a.children();
    const auto& bs = b.children();
    size_t i = 0;
    while (i < as.size() && as[i] == bs[i])
        ++i;
    if (i == as.size())
        return false;
    if (star_compare(as[i], bs[i]) != std::strong_ordering::less)
        return false;
    for (size_t j = i + 1; j < as.size(); ++j)
        if (star_compare(as[j], b) != std::strong_ordering::less)
            return false;
    return true;
}

} // namespace

std::strong_ordering star_compare(const StarTerm& a, const StarTerm& b) {
    if (a == b)
        return std::strong_ordering::equal;
    if (a.is_zero())
        return std::strong_ordering::less;
    if (b.is_zero())
        return std::strong_ordering::greater;
    if (a.arity() != b.arity())
        throw DomainError("star terms of different arity are incomparable");
    return star_less_applications(a, b) ? std::strong_ordering::less
                                        : std::strong_ordering::greater;
}

namespace {

// Appends the layer of terms with exactly layers.size() applications,
// sorted by text.
void append_star_layer(std::vector<std::vector<StarTerm>>& layers, unsigned n) {
    const unsigned s = static_cast<unsigned>(layers.size());
    std::vector<StarTerm> layer;
    std::vector<StarTerm> tuple;
    auto pick = [&](auto&& self, size_t pos, unsigned remaining) -> void {
        if (pos + 1 == n) {
            if (remaining < layers.size())
                for (const auto& t : layers[remaining]) {
                    tuple.push_back(t);
                    layer.push_back(StarTerm::apply(tuple));
                    tuple.pop_back();
                }
            return;
        }
        for (unsigned take = 0; take <= remaining && take < layers.size(); ++take)
            for (const auto& t : layers[take]) {
                tuple.push_back(t);
                self(self, pos + 1, remaining - take);
                tuple.pop_back();
            }
    };
    pick(pick, 0, s - 1);
    std::sort(layer.begin(), layer.end(),
              [](const StarTerm& a, const StarTerm& b) { return a.str() < b.str(); });
    layers.push_back(std::move(layer));
}

} // namespace

std::vector<StarTerm> star_enumerate(unsigned n, unsigned size_bound) {
    if (n < 2)
        throw DomainError("star enumeration needs arity >= 2");
    std::vector<std::vector<StarTerm>> layers;
    layers.push_back({StarTerm::zero()});
    while (layers.size() <= size_bound)
        append_star_layer(layers, n);
    std::vector<StarTerm> all;
    for (auto& layer : layers)
        for (auto& t : layer)
            all.push_back(std::move(t));
    std::sort(all.begin(), all.end(), star_less);
    return all;
}

std::vector<StarTerm> star_enumerate_by_size(unsigned n, size_t term_count) {
    if (n < 2)
        throw DomainError("star enumeration needs arity >= 2");
    std::vector<std::vector<StarTerm>> layers;
    layers.push_back({StarTerm::zero()});
    std::vector<StarTerm> out;
    for (size_t s = 0; out.size() < term_count; ++s) {
        while (layers.size() <= s)
            append_star_layer(layers, n);
        for (const auto& t : layers[s]) {
            out.push_back(t);
            if (out.size() == term_count)
                break;
        }
    }
    return out;
}

namespace {

struct StarParser {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError(why + " at offset " + std::to_string(pos) + " in star term '" +
                         std::string(text) + "'");
    }

    StarTerm term() {
        skip_ws();
        if (pos >= text.size())
            fail("unexpected end of input");
        if (text[pos] == '0') {
            ++pos;
            return StarTerm::zero();
        }
        if (text[pos] != '(')
            fail("expected '0' or '('");
        ++pos;
        skip_ws();
        if (pos >= text.size() || text[pos] != 'V')
            fail("expected 'V'");
        ++pos;
        std::vector<StarTerm> children;
        while (true) {
            skip_ws();
            if (pos >= text.size())
                fail("missing ')'");
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            children.push_back(term());
        }
        return StarTerm::apply(std::move(children));
    }

    StarTerm run() {
        StarTerm t = term();
        skip_ws();
        if (pos != text.size())
            fail("trailing input");
        return t;
    }
};

} // namespace

StarTerm StarTerm::parse(std::string_view text) {
    StarParser p{text};
    return p.run();
}

} // namespace fusible
