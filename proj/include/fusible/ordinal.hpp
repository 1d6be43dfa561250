#pragma once

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fusible/errors.hpp"

namespace fusible {

// Ordinal below the small Veblen ordinal in normal form: a finite
// nonincreasing sum of principal terms phi(a_1,...,a_n), n >= 2.  The empty
// sum is 0.  Terms are immutable and always normalized at construction:
// leading zero arguments are stripped to the minimal arity, a final argument
// that is a fixed point of the enclosing Veblen family absorbs the
// application, and sums are kept in Cantor-normal-form order.
//
// Text syntax: "0", decimal numerals, "(phi a b ...)", "(+ p1 p2 ...)".
class OrdinalTerm {
public:
    OrdinalTerm() = default; // zero

    static OrdinalTerm finite(unsigned long long k);
    static OrdinalTerm omega();

    // phi application; reports whether normalization rewrote the term
    // (fixed-point absorption) through `changed`.
    static OrdinalTerm veblen(std::vector<OrdinalTerm> args, bool* changed = nullptr);

    // omega^gamma, i.e. phi(0, gamma).
    static OrdinalTerm omega_power(const OrdinalTerm& gamma, bool* changed = nullptr);

    // Ordinal (non-commutative) sum with CNF absorption of dominated tails.
    static OrdinalTerm ordinal_sum(const std::vector<OrdinalTerm>& parts, bool* changed = nullptr);

    // Normalizing parse.
    static OrdinalTerm parse(std::string_view text);

    // Parse that rejects input not already in normal form.
    static OrdinalTerm parse_exact(std::string_view text);

    bool is_zero() const { return summands_.empty(); }
    size_t summand_count() const { return summands_.size(); }
    bool is_principal() const { return summands_.size() == 1; }

    // The i-th summand as a single-principal term.
    OrdinalTerm summand(size_t i) const;

    // Arguments of the sole principal; requires is_principal().
    const std::vector<OrdinalTerm>& principal_args() const;

    std::string str() const;

    friend std::strong_ordering compare(const OrdinalTerm& a, const OrdinalTerm& b);
    friend bool operator==(const OrdinalTerm& a, const OrdinalTerm& b);
    friend bool operator!=(const OrdinalTerm& a, const OrdinalTerm& b) { return !(a == b); }
    friend bool operator<(const OrdinalTerm& a, const OrdinalTerm& b) {
        return compare(a, b) < 0;
    }

private:
    struct Principal {
        std::vector<OrdinalTerm> args;
        std::string text;
    };
    using PPtr = std::shared_ptr<const Principal>;

    static std::strong_ordering cmp_principal(const PPtr& p, const PPtr& q);
    static OrdinalTerm from_principal(PPtr p);
    static bool absorbed_by_last(const std::vector<OrdinalTerm>& args, size_t j);

    std::vector<PPtr> summands_;
};

// Natural (Hessenberg) sum: exponent lists merged in nonincreasing order.
OrdinalTerm nat_sum(const OrdinalTerm& a, const OrdinalTerm& b);

// Natural product: distributes over nat_sum via omega^(log p + log q).
OrdinalTerm nat_prod(const OrdinalTerm& a, const OrdinalTerm& b);

enum class OrdinalKind { zero, successor, limit };

OrdinalKind classify_limit(const OrdinalTerm& a);

enum class OrderTypeKind { fusible, continuous };

// The order types reported for the generated sets: phi_{n-1}(0) for the
// n-ary mean family, phi(1, 0 x n) for the continuous construction.
OrdinalTerm expected_order_type(OrderTypeKind kind, unsigned n);

std::string order_name(std::strong_ordering o);
std::string ordinal_kind_name(OrdinalKind k);

} // namespace fusible
