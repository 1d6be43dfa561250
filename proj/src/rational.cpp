#include "fusible/rational.hpp"

#include <cctype>
#include <ostream>

namespace fusible {

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den.is_zero())
        throw DomainError("rational with zero denominator");
    if (den < 0)
        v_ = Rep(-num, -den);
    else
        v_ = Rep(num, den);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero())
        throw DomainError("division by zero");
    return Rational(Rational::Rep(a.v_ / b.v_));
}

namespace {

bool valid_integer_token(std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num_part = text.substr(0, slash);
    if (!valid_integer_token(num_part))
        throw ParseError("bad rational literal: '" + std::string(text) + "'");
    BigInt num{std::string(num_part)};
    if (slash == std::string_view::npos)
        return Rational(num, 1);
    std::string_view den_part = text.substr(slash + 1);
    if (!valid_integer_token(den_part) || den_part.front() == '+' || den_part.front() == '-')
        throw ParseError("bad rational literal: '" + std::string(text) + "'");
    BigInt den{std::string(den_part)};
    if (den.is_zero())
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

Rational abs(const Rational& r) {
    return r.is_negative() ? -r : r;
}

const Rational& min(const Rational& a, const Rational& b) {
    return b < a ? b : a;
}

const Rational& max(const Rational& a, const Rational& b) {
    return a < b ? b : a;
}

Rational rational_pow(long long base, long long exp) {
    if (base == 0 && exp < 0)
        throw DomainError("zero base with negative exponent");
    BigInt p = 1;
    long long k = exp < 0 ? -exp : exp;
    for (long long i = 0; i < k; ++i)
        p *= base;
    return exp < 0 ? Rational(1, p) : Rational(p, 1);
}

const Rational& ExtRational::finite_value() const {
    if (!is_finite())
        throw DomainError("infinite value where a finite rational is required");
    return v_;
}

ExtRational ExtRational::parse(std::string_view text) {
    if (text == "inf" || text == "+inf")
        return plus_inf();
    if (text == "-inf")
        return minus_inf();
    return ExtRational(Rational::parse(text));
}

std::string ExtRational::str() const {
    switch (kind_) {
    case Kind::minus_inf: return "-inf";
    case Kind::plus_inf: return "inf";
    default: return v_.str();
    }
}

bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_)
        return false;
    return a.kind_ != ExtRational::Kind::finite || a.v_ == b.v_;
}

bool operator<(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ == b.kind_)
        return a.kind_ == ExtRational::Kind::finite && a.v_ < b.v_;
    return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
}

ExtRational ExtRational::operator-() const {
    switch (kind_) {
    case Kind::minus_inf: return plus_inf();
    case Kind::plus_inf: return minus_inf();
    default: return ExtRational(-v_);
    }
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.is_finite() && b.is_finite())
        return ExtRational(a.v_ + b.v_);
    if (a.is_finite())
        return b;
    if (b.is_finite())
        return a;
    if (a.kind_ != b.kind_)
        throw DomainError("inf + -inf is undefined");
    return a;
}

ExtRational operator*(const Rational& a, const ExtRational& x) {
    if (x.is_finite())
        return ExtRational(a * x.v_);
    if (!a.is_positive())
        throw DomainError("scaling an infinity by a nonpositive factor is undefined");
    return x;
}

ExtRational operator/(const ExtRational& x, const Rational& a) {
    if (x.is_finite())
        return ExtRational(x.v_ / a);
    if (!a.is_positive())
        throw DomainError("scaling an infinity by a nonpositive factor is undefined");
    return x;
}

std::ostream& operator<<(std::ostream& os, const ExtRational& r) {
    return os << r.str();
}

const ExtRational& min(const ExtRational& a, const ExtRational& b) {
    return b < a ? b : a;
}

UnaryAffine::UnaryAffine(Rational a, Rational b) : slope(std::move(a)), offset(std::move(b)) {
    if (slope.is_negative())
        throw DomainError("affine map with negative slope is not monotone");
}

Rational fixed_point(const UnaryAffine& h) {
    if (h.slope >= Rational(1))
        throw DomainError("no contracting fixed point: slope >= 1");
    return h.offset / (Rational(1) - h.slope);
}

std::vector<Rational> iterate_to_fixpoint(const UnaryAffine& h, const Rational& x0,
                                          unsigned steps) {
    if (h.slope.is_zero() || h.slope >= Rational(1))
        throw DomainError("iteration requires 0 < slope < 1");
    if (x0 >= fixed_point(h))
        throw DomainError("iteration start must lie below the fixed point");
    std::vector<Rational> out;
    out.reserve(steps + 1);
    out.push_back(x0);
    for (unsigned i = 0; i < steps; ++i)
        out.push_back(h(out.back()));
    return out;
}

} // namespace fusible
