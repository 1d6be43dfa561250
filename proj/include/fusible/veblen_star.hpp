#pragma once

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fusible/errors.hpp"

namespace fusible {

// Closed term over the constant 0 and one n-ary constructor V, ordered by
// the structural comparison criterion of the gap-free Veblen variant: terms
// are syntactically distinct iff they denote distinct positions, and
// V(t_1..t_n) is strictly above each t_i.  Arity is fixed per term tree.
//
// Text syntax: "0" and "(V t1 ... tn)".
class StarTerm {
public:
    StarTerm(); // the constant 0

    static StarTerm zero() { return StarTerm(); }
    static StarTerm apply(std::vector<StarTerm> children);

    static StarTerm parse(std::string_view text);

    bool is_zero() const { return node_->children.empty(); }
    size_t arity() const { return node_->children.size(); }
    const std::vector<StarTerm>& children() const { return node_->children; }

    // Number of constructor applications in the tree.
    size_t size() const { return node_->size; }

    // Longest chain of nested applications.
    size_t depth() const { return node_->depth; }

    const std::string& str() const { return node_->text; }

    friend bool operator==(const StarTerm& a, const StarTerm& b) {
        return a.node_ == b.node_ || a.node_->text == b.node_->text;
    }
    friend bool operator!=(const StarTerm& a, const StarTerm& b) { return !(a == b); }

private:
    struct Node {
        std::vector<StarTerm> children;
        std::string text;
        size_t size = 0;
        size_t depth = 0;
    };

    explicit StarTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

// Strict total order on same-arity terms (DomainError on arity mismatch).
std::strong_ordering star_compare(const StarTerm& a, const StarTerm& b);

inline bool star_less(const StarTerm& a, const StarTerm& b) {
    return star_compare(a, b) < 0;
}

// Every term with at most `size_bound` applications of the n-ary
// constructor, sorted ascending by star_compare.
std::vector<StarTerm> star_enumerate(unsigned n, unsigned size_bound);

// The same terms in enumeration order for the rational embedding: by size,
// ties broken by serialization; position 0 is the constant 0.
std::vector<StarTerm> star_enumerate_by_size(unsigned n, size_t term_count);

} // namespace fusible
