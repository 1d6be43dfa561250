#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fusible/generator.hpp"
#include "fusible/linear.hpp"
#include "fusible/work.hpp"

namespace fusible {

// A unary section of g: the arguments with indices in `diagonal` (1-based)
// are all set to the variable, the rest are fixed to `params` in index
// order.  The result is the affine map x |-> (sum of diagonal coefficients) x
// + (sum a_j p_j over fixed positions) + b.
UnaryAffine diagonal_section(const LinearFunction& g, const std::set<size_t>& diagonal,
                             std::span<const Rational> params);

// One derived member of cl(g): g_u(params) = fix(diagonal section at params).
// Arity n - |u|; may be 0 when u covers every argument position (only kept
// when the full diagonal slope is below 1).
struct DerivedFunction {
    std::set<size_t> diagonal;  // the subset u, 1-based indices
    LinearFunction fn;          // explicit linear form of g_u
};

// cl(g) with its constant pool: the base function plus every fixed-point
// section with slope < 1, deduplicated as functions.
class ClosureSystem {
public:
    ClosureSystem(LinearFunction base, std::vector<Rational> constants,
                  std::vector<DerivedFunction> derived);

    const LinearFunction& base() const { return base_; }
    const std::vector<Rational>& constants() const { return constants_; }
    const Rational& min_constant() const { return constants_.front(); }
    const std::vector<DerivedFunction>& derived() const { return derived_; }

    // u-sets that produced the derived function at `index` (after dedup).
    const std::vector<std::set<size_t>>& diagonals_of(size_t index) const;

    // The full family cl(g) as a generator system (base first).
    GeneratorSystem enumeration_system() const;

    std::string to_json() const;

private:
    LinearFunction base_;
    std::vector<Rational> constants_;
    std::vector<DerivedFunction> derived_;
    std::vector<std::vector<std::set<size_t>>> diagonal_groups_;
};

// Builds cl(g).  Requires every coefficient of g strictly positive (collapse
// zero coefficients with LinearFunction::collapse_zero_coefficients first),
// a finite nonempty P, and some p in P with g(p,..,p) > p.
ClosureSystem build_closure(const LinearFunction& g, std::vector<Rational> constants);

// The four mutually recursive procedures deciding membership in the closure
// of F({g}, P), plus their shared enumeration of closure elements.
//
// An engine instance is single-threaded: the memo tables and the enumeration
// cursor are mutable state.  Distinct instances are independent.
class SuccessorEngine {
public:
    struct Options {
        unsigned long long work_budget = 2'000'000;
        size_t pred_scan_cap = 200'000;
        size_t recursion_limit = 20'000;
    };

    explicit SuccessorEngine(ClosureSystem system);
    SuccessorEngine(ClosureSystem system, Options opt);

    const ClosureSystem& system() const { return sys_; }

    // Smallest element of F({g},P) strictly above r; +inf when none.
    ExtRational succ(const ExtRational& r);

    // Smallest value g(y_1..y_k, x_{k+1..n}) > r with the x_j drawn from
    // F intersect (-inf, r]; +inf when none.  Each y_i must be <= r.
    ExtRational built_succ(const ExtRational& r, std::vector<Rational> prefix);

    // Predecessor of r in the closure; r must be a successor element there
    // (scan_cap bounds the otherwise endless search).  -inf when r <= min P.
    ExtRational pred(const Rational& r);

    // The unique closure element x <= r with succ(x) > r; -inf when r < min P.
    ExtRational weak_pred(const ExtRational& r);

    // r belongs to the closure of F({g},P) iff weak_pred(r) = r.
    bool is_in_closure(const Rational& r);

    // i-th element (0-based) of the deterministic closure enumeration
    // z_1, z_2, ...; nullptr when the closure is finite and exhausted.
    const TermEnumerator::Entry* enumerated(size_t i);

    struct Stats {
        unsigned long long succ_calls = 0;
        unsigned long long built_succ_calls = 0;
        unsigned long long pred_calls = 0;
        unsigned long long weak_pred_calls = 0;
        unsigned long long work = 0;
    };
    const Stats& stats() const { return stats_; }

private:
    ExtRational succ_uncached(const ExtRational& r);
    ExtRational built_succ_uncached(const ExtRational& r, const std::vector<Rational>& prefix);
    ExtRational pred_uncached(const Rational& r);
    ExtRational weak_pred_uncached(const ExtRational& r);
    ExtRational min_constant_above(const ExtRational& r) const;

    struct DepthGuard;

    ClosureSystem sys_;
    Options opt_;
    WorkMeter meter_;
    TermEnumerator enum_;
    Stats stats_;
    size_t depth_ = 0;

    std::map<ExtRational, ExtRational> succ_memo_;
    std::map<std::pair<ExtRational, std::vector<Rational>>, ExtRational> built_memo_;
    std::map<Rational, ExtRational> pred_memo_;
    std::map<ExtRational, ExtRational> weak_memo_;
};

} // namespace fusible
