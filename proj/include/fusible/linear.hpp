#pragma once

#include <span>
#include <string>
#include <vector>

#include "fusible/rational.hpp"

namespace fusible {

// Monotone linear map x |-> sum a_i x_i + b with coefficients a_i >= 0.
// Arity 0 is allowed (a constant); the generator modules treat such a
// function as a nullary producer of its constant.
class LinearFunction {
public:
    LinearFunction(std::vector<Rational> coefficients, Rational constant);

    // g_n(x_1..x_n) = (x_1 + ... + x_n + 1)/n.
    static LinearFunction mean_plus_one(unsigned n);

    size_t arity() const { return coeffs_.size(); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    const Rational& coefficient(size_t i) const { return coeffs_.at(i); }
    const Rational& constant() const { return constant_; }

    bool all_coefficients_positive() const;

    Rational eval(std::span<const Rational> args) const;

    // Evaluation where single arguments may be infinite; requires the
    // matching coefficient to be strictly positive in that case.
    ExtRational eval_extended(std::span<const ExtRational> args) const;

    // Drops zero-coefficient positions; the generated set F is unchanged
    // because the dropped arguments never constrain the value and any
    // remaining argument can stand in for them in a monotone term.
    LinearFunction collapse_zero_coefficients() const;

    friend bool operator==(const LinearFunction& a, const LinearFunction& b) {
        return a.coeffs_ == b.coeffs_ && a.constant_ == b.constant_;
    }
    friend bool operator<(const LinearFunction& a, const LinearFunction& b);

private:
    std::vector<Rational> coeffs_;
    Rational constant_;
};

// A finite system (G, P): functions plus a nonempty duplicate-free sorted
// pool of starting constants.
class GeneratorSystem {
public:
    GeneratorSystem(std::vector<LinearFunction> functions, std::vector<Rational> constants);

    // F_n = ({g_n}, {0}) and F_{<=n} = ({g_1..g_n}, {0}).
    static GeneratorSystem fusible(unsigned n);
    static GeneratorSystem fusible_up_to(unsigned n);

    const std::vector<LinearFunction>& functions() const { return functions_; }
    const std::vector<Rational>& constants() const { return constants_; }
    const Rational& min_constant() const { return constants_.front(); }

private:
    std::vector<LinearFunction> functions_;
    std::vector<Rational> constants_;
};

} // namespace fusible
