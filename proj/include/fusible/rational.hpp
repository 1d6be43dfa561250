#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fusible/errors.hpp"

namespace fusible {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always stored reduced with positive
// denominator.  Canonical text form is "p/q" (q > 0, optional sign on p);
// integers are written without "/q".  Immutable value type, safe to share
// across threads.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long v) : v_(v) {}
    Rational(const BigInt& num, const BigInt& den);

    static Rational parse(std::string_view text);

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_negative() const { return v_ < 0; }
    bool is_positive() const { return v_ > 0; }
    bool is_integer() const { return den() == 1; }

    int sign() const { return v_.sign(); }

    std::string str() const { return v_.str(); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b);

    Rational operator-() const { return Rational(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    using Rep = boost::multiprecision::cpp_rational;
    explicit Rational(Rep v) : v_(std::move(v)) {}

    Rep v_;
};

Rational abs(const Rational& r);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

// base^exp for integer base, exponent may be negative (base != 0 then).
Rational rational_pow(long long base, long long exp);

// Element of the rationals extended with two infinities.  Ordering is total
// (-inf < finite < +inf); arithmetic is deliberately partial and throws
// DomainError on any combination the closure procedures never need
// (inf + -inf, multiplication of an infinity by a nonpositive scalar, ...).
class ExtRational {
public:
    ExtRational() : kind_(Kind::finite) {}
    ExtRational(Rational v) : kind_(Kind::finite), v_(std::move(v)) {}
    ExtRational(long long v) : kind_(Kind::finite), v_(v) {}

    static ExtRational plus_inf() { return ExtRational(Kind::plus_inf); }
    static ExtRational minus_inf() { return ExtRational(Kind::minus_inf); }

    static ExtRational parse(std::string_view text);

    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_plus_inf() const { return kind_ == Kind::plus_inf; }
    bool is_minus_inf() const { return kind_ == Kind::minus_inf; }

    // Throws DomainError when infinite.
    const Rational& finite_value() const;

    std::string str() const;

    friend bool operator==(const ExtRational& a, const ExtRational& b);
    friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
    friend bool operator<(const ExtRational& a, const ExtRational& b);
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

    ExtRational operator-() const;

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
    friend ExtRational operator-(const ExtRational& a, const ExtRational& b) { return a + (-b); }

    // Scaling by a strictly positive finite rational.
    friend ExtRational operator*(const Rational& a, const ExtRational& x);
    friend ExtRational operator/(const ExtRational& x, const Rational& a);

    friend std::ostream& operator<<(std::ostream& os, const ExtRational& r);

private:
    enum class Kind { minus_inf, finite, plus_inf };
    explicit ExtRational(Kind k) : kind_(k) {}

    Kind kind_;
    Rational v_;
};

const ExtRational& min(const ExtRational& a, const ExtRational& b);

// h(x) = slope * x + offset with slope >= 0.
struct UnaryAffine {
    Rational slope;
    Rational offset;

    UnaryAffine(Rational a, Rational b);

    Rational operator()(const Rational& x) const { return slope * x + offset; }
};

// The unique fixed point offset/(1 - slope); requires slope < 1.
Rational fixed_point(const UnaryAffine& h);

// x0, h(x0), ..., h^steps(x0).  Requires 0 < slope < 1 and x0 < fix(h), so
// the sequence is strictly increasing and stays below the fixed point.
std::vector<Rational> iterate_to_fixpoint(const UnaryAffine& h, const Rational& x0,
                                          unsigned steps);

} // namespace fusible
