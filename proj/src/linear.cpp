#include "fusible/linear.hpp"

#include <algorithm>

namespace fusible {

LinearFunction::LinearFunction(std::vector<Rational> coefficients, Rational constant)
    : coeffs_(std::move(coefficients)), constant_(std::move(constant)) {
    for (const Rational& a : coeffs_)
        if (a.is_negative())
            throw DomainError("linear function with negative coefficient is not monotone");
}

LinearFunction LinearFunction::mean_plus_one(unsigned n) {
    if (n == 0)
        throw DomainError("g_n requires n >= 1");
    Rational inv_n(1, BigInt(n));
    return LinearFunction(std::vector<Rational>(n, inv_n), inv_n);
}

bool LinearFunction::all_coefficients_positive() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Rational& a) { return a.is_positive(); });
}

Rational LinearFunction::eval(std::span<const Rational> args) const {
    if (args.size() != coeffs_.size())
        throw DomainError("arity mismatch in linear function evaluation");
    Rational acc = constant_;
    for (size_t i = 0; i < args.size(); ++i)
        acc += coeffs_[i] * args[i];
    return acc;
}

ExtRational LinearFunction::eval_extended(std::span<const ExtRational> args) const {
    if (args.size() != coeffs_.size())
        throw DomainError("arity mismatch in linear function evaluation");
    ExtRational acc{constant_};
    for (size_t i = 0; i < args.size(); ++i)
        acc = acc + coeffs_[i] * args[i];
    return acc;
}

LinearFunction LinearFunction::collapse_zero_coefficients() const {
    std::vector<Rational> kept;
    kept.reserve(coeffs_.size());
    for (const Rational& a : coeffs_)
        if (!a.is_zero())
            kept.push_back(a);
    return LinearFunction(std::move(kept), constant_);
}

bool operator<(const LinearFunction& a, const LinearFunction& b) {
    if (a.coeffs_ != b.coeffs_)
        return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(),
                                            b.coeffs_.begin(), b.coeffs_.end());
    return a.constant_ < b.constant_;
}

GeneratorSystem::GeneratorSystem(std::vector<LinearFunction> functions,
                                 std::vector<Rational> constants)
    : functions_(std::move(functions)), constants_(std::move(constants)) {
    if (constants_.empty())
        throw DomainError("constant pool P must be nonempty");
    std::sort(constants_.begin(), constants_.end());
    constants_.erase(std::unique(constants_.begin(), constants_.end()), constants_.end());
}

GeneratorSystem GeneratorSystem::fusible(unsigned n) {
    return GeneratorSystem({LinearFunction::mean_plus_one(n)}, {Rational(0)});
}

GeneratorSystem GeneratorSystem::fusible_up_to(unsigned n) {
    std::vector<LinearFunction> fns;
    for (unsigned k = 1; k <= n; ++k)
        fns.push_back(LinearFunction::mean_plus_one(k));
    return GeneratorSystem(std::move(fns), {Rational(0)});
}

} // namespace fusible
