#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusible/rational.hpp"
#include "fusible/veblen_star.hpp"

namespace fusible {

// Order-preserving embedding of an initial fragment of the star-term order
// into the rationals.  Terms are enumerated by size then serialization with
// position 0 the constant 0; images follow the recurrence
//   e(a_0) = 0,   e(a_{i+1}) = e(a_k) + 3^{-k} + 3^{-i}
// with a_k the largest already-enumerated term below a_{i+1}.
class Embedding {
public:
    unsigned n = 0;
    std::vector<StarTerm> terms;   // enumeration order
    std::vector<Rational> images;  // parallel

    std::optional<size_t> index_of(const StarTerm& t) const;
    const Rational& image_of(const StarTerm& t) const;
    std::optional<size_t> index_of_image(const Rational& v) const;

    std::string to_json() const;

private:
    friend Embedding build_embedding(unsigned n, size_t term_count);
    std::map<std::string, size_t> by_text_;
    std::map<Rational, size_t> by_image_;
};

// Builds the embedding and re-verifies order preservation, the neighbor-gap
// inequality for every prefix, and the 3^{-i} isolation property; any
// violation is an internal error.
Embedding build_embedding(unsigned n, size_t term_count);

// Nondecreasing function tabulated on tuples over a finite sorted grid.
// The table need not cover the full grid power; values off the table are
// completed monotonically as the least tabulated value on a tuple
// dominating the query coordinatewise (supremum of the table if none).
class GridFunction {
public:
    GridFunction(unsigned n, std::vector<Rational> grid,
                 std::map<std::vector<Rational>, Rational> table);

    unsigned arity() const { return n_; }
    const std::vector<Rational>& grid() const { return grid_; }
    const std::map<std::vector<Rational>, Rational>& table() const { return table_; }

    bool is_tabulated(const std::vector<Rational>& tuple) const { return table_.count(tuple); }

    // Exact table value; throws DomainError when absent.
    const Rational& at(const std::vector<Rational>& tuple) const;

    // Monotone completion to arbitrary points inside the hull.
    Rational completed(std::span<const Rational> point) const;

private:
    unsigned n_;
    std::vector<Rational> grid_;
    std::map<std::vector<Rational>, Rational> table_;
    Rational table_max_;
};

// Tabulates g0(e(t_1),...,e(t_n)) = e(V(t_1,...,t_n)) on every application
// present in the embedding's enumeration.
GridFunction star_function_on_grid(const Embedding& emb);

// Piecewise-multilinear extension: exact on tabulated grid tuples,
// nondecreasing in each coordinate, defined on the grid hull.
Rational extend_eval(const GridFunction& f, std::span<const Rational> point);

struct GridDemoReport {
    unsigned n = 0;
    size_t term_count = 0;
    unsigned budget = 0;
    size_t generated = 0;
    bool subset_of_images = false;
    bool order_isomorphic = false;
    std::vector<std::string> missing; // enumerated terms not generated (coverage gap)
    bool budget_complete = false;     // every term buildable within the budget was reached
    size_t skipped_applications = 0;  // applications leading outside the enumerated fragment

    std::string to_json() const;
};

// End-to-end check that generation from the grid function restricted to the
// embedded fragment reproduces the star-term order: builds the embedding and
// grid function, generates F({g0},{0}) with the given round budget, and
// verifies image-subset and order-isomorphism.  Missing coverage is
// reported, not an error.
GridDemoReport grid_generation_demo(unsigned n, size_t term_count, unsigned budget);

} // namespace fusible
