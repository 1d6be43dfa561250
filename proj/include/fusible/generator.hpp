#pragma once

#include <functional>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusible/linear.hpp"
#include "fusible/work.hpp"

namespace fusible {

// Type-erased exact function used by the generation cores.  eval may return
// nullopt to signal "value not available" (used by tabulated grid functions);
// such applications are skipped and counted by the caller.  When `linear` is
// set it points at the exact same function and enables bound pruning.
struct ValueFunction {
    size_t arity;
    std::string name;
    std::function<std::optional<Rational>(std::span<const Rational>)> eval;
    const LinearFunction* linear = nullptr;
};

// Views a system's functions as ValueFunctions.  The returned objects point
// into `sys`, which must outlive them.  Single-function systems name their
// function "g", larger ones "g1", "g2", ...
std::vector<ValueFunction> value_functions(const GeneratorSystem& sys);

// Closed application tree over constants and function applications.  Value
// and canonical serialization are cached at construction; nodes are shared
// and immutable.
class MonotoneTerm {
public:
    // Constant leaf.
    static MonotoneTerm constant(const Rational& v);

    // Application node; checks the monotone-term condition (value strictly
    // above every child value) and throws DomainError when violated.
    static MonotoneTerm apply(const GeneratorSystem& sys, size_t fn_index,
                              std::vector<MonotoneTerm> children);

    // Application node without the monotonicity check; eval_term re-validates.
    static MonotoneTerm apply_unvalidated(const GeneratorSystem& sys, size_t fn_index,
                                          std::vector<MonotoneTerm> children);

    bool is_constant() const { return node_->fn < 0; }
    int function_index() const { return node_->fn; }
    const Rational& value() const { return node_->value; }
    const std::vector<MonotoneTerm>& children() const { return node_->children; }
    const std::string& serialization() const { return node_->text; }

    friend class TermBuilder;

private:
    struct Node {
        int fn = -1;
        Rational value;
        std::vector<MonotoneTerm> children;
        std::string text;
    };

    explicit MonotoneTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

// Exact value of the term; re-validates structure against the system and the
// monotone-term condition, reporting the offending node path (e.g. "/2/0")
// on violation.
Rational eval_term(const GeneratorSystem& sys, const MonotoneTerm& t);

struct GenerateOptions {
    // Rounds of construction: budget 0 keeps exactly P; round d applies the
    // functions to everything built in rounds < d.
    unsigned budget = 0;
    // Keep and explore only values <= bound.  Sound because every subterm
    // value of a monotone term lies strictly below the term's value.
    std::optional<Rational> bound;
    // Keep at most this many elements (the smallest ones).
    std::optional<size_t> cap;
    // Safety valve on candidate evaluations.
    unsigned long long work_limit = 50'000'000;
};

struct Fragment {
    std::vector<Rational> values;       // ascending, duplicate-free
    std::vector<MonotoneTerm> witnesses; // parallel to values
    unsigned budget = 0;
    bool truncated = false;
    // When truncated: the fragment is still a complete listing of
    // F intersect (-inf, complete_below) at this budget.
    std::optional<Rational> complete_below;

    bool contains(const Rational& v) const;
    std::optional<size_t> index_of(const Rational& v) const;
};

// Breadth-first generation of F(G, P) by construction rounds with value-keyed
// deduplication; the first witness found is kept, ties within a round broken
// by canonical serialization.  Deterministic.
Fragment generate(const GeneratorSystem& sys, const GenerateOptions& opt);

// Same core over type-erased functions (used by the grid-function demo).
Fragment generate_with(const std::vector<ValueFunction>& fns,
                       const std::vector<Rational>& constants, const GenerateOptions& opt,
                       size_t* skipped_applications = nullptr);

// Factorizes the denominators of reduced values: prime -> largest exponent.
std::map<BigInt, unsigned> denominator_profile(std::span<const Rational> values);

std::string fragment_to_json(const GeneratorSystem& sys, const Fragment& f);

// Lazy enumeration of all monotone-term values over a function family,
// layered by total application count; within a layer entries are ordered by
// canonical witness serialization, and values are deduplicated globally at
// their minimal application count.  The stream is finite exactly when the
// generated set is, and at() reports exhaustion by returning nullptr.
// Returned pointers stay valid as the stream grows.
class TermEnumerator {
public:
    struct Entry {
        Rational value;
        unsigned apps;
        MonotoneTerm witness;
    };

    TermEnumerator(std::vector<ValueFunction> fns, std::vector<Rational> constants);

    // Entry at stream position i (0-based), expanding layers on demand and
    // charging one unit per candidate application evaluated.
    const Entry* at(size_t i, WorkMeter& meter);

    size_t materialized() const { return entries_.size(); }

private:
    bool expand_next_layer(WorkMeter& meter);

    std::vector<ValueFunction> fns_;
    std::deque<Entry> entries_;
    // by_apps_[c] = indices into entries_ with apps == c, sorted by value.
    std::vector<std::vector<size_t>> by_apps_;
    std::map<Rational, size_t> seen_;
    unsigned next_layer_ = 1;
    unsigned last_nonempty_ = 0;
    size_t max_arity_ = 0;
    bool exhausted_ = false;
};

} // namespace fusible
