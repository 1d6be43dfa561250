#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusible/rational.hpp"
#include "fusible/work.hpp"

namespace fusible {

// One evaluation of M_n at x with the intermediate values the recursion
// produces: t_0 = 1, t_i = M_n(x - t_{i-1}), output t_n / n.  For x < 0 the
// trace is the base case (no t values) and the output is -x.
struct MTrace {
    unsigned n;
    Rational x;
    std::vector<Rational> t; // t_0..t_n for x >= 0, empty for x < 0
    Rational output;

    std::string to_json() const;
};

// Evaluator for the recursive function M_n (n >= 2).  Recursion is run on an
// explicit work list, never the host call stack, and results for x >= 0 are
// memoized per engine, so repeated subcalls are evaluated once.  The work
// budget counts memo misses; exceeding it raises ResourceError.
//
// Instances are single-threaded (the memo table is mutable state); distinct
// instances are fully independent and may be used concurrently.
class MEngine {
public:
    explicit MEngine(unsigned n, unsigned long long work_budget = default_work_budget());

    static unsigned long long default_work_budget();

    unsigned n() const { return n_; }

    // M_n(x).
    Rational value(const Rational& x);

    // x + M_n(x); always a member of F_n.
    Rational point(const Rational& x);

    // Full trace at x.
    MTrace trace(const Rational& x);

    // t_i(x) for 0 <= i <= n; requires x >= 0.
    Rational t(unsigned i, const Rational& x);

    // U_i(x) = t_i(x)/i for i > 0; U_0 = +inf.  Requires 0 <= i < n, x >= 0.
    ExtRational big_u(unsigned i, const Rational& x);

    // Half-open interval J_i(x) = [x - t_i(x), x + U_i(x)).
    bool in_j(unsigned i, const Rational& x, const Rational& y);

    // l_i^x(y) = ix/(i+1) + t_i(x)/(i+1) + y/(i+1); requires y in J_i(x).
    Rational lift(unsigned i, const Rational& x, const Rational& y);

    unsigned long long work_spent() const { return meter_.spent; }
    size_t memo_size() const { return memo_.size(); }

private:
    Rational compute(const Rational& x);
    std::optional<Rational> lookup(const Rational& x) const;

    unsigned n_;
    WorkMeter meter_;
    std::map<Rational, Rational> memo_; // x >= 0 only
};

// One checked identity or inequality instance.
struct InvariantCheck {
    std::string rule;    // e.g. "shift-identity", "t-linearity"
    std::string detail;  // instantiated parameters
    bool holds;
};

struct InvariantReport {
    std::vector<InvariantCheck> checks;
    size_t violations = 0;

    std::string to_json() const;
};

struct InvariantSample {
    Rational x;
    Rational d;      // interpreted per rule, scaled into the rule's valid range
    unsigned i = 0;  // index where a rule needs one
};

// Checks the interrelations between M_n, the t_i and the maps l_i^x on the
// given samples with exact arithmetic.  Violations are findings in the
// report, never exceptions.
InvariantReport check_m_invariants(MEngine& engine, const std::vector<InvariantSample>& samples);

// The stock sampling grid: x in steps of 1/16 over [-1, 3/2] for n = 2 and
// [-1, 1] for n >= 3, with d taken as {0, 1/4, 1/2, 3/4} of each rule's bound
// and every index i.
std::vector<InvariantSample> default_invariant_samples(unsigned n);

} // namespace fusible
