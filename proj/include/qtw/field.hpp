#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtw {

using Int = mpz_class;
using Rat = mpq_class;

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A number in (1/2)Z, stored as twice its value.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(long n) : t_(2 * n) {}
    static constexpr HalfInt from_twice(long t) { HalfInt h; h.t_ = t; return h; }
    static HalfInt parse(const std::string& s);

    constexpr long twice() const { return t_; }
    constexpr bool is_integer() const { return t_ % 2 == 0; }
    long as_integer() const;

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.t_ + b.t_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.t_ - b.t_); }
    friend constexpr HalfInt operator-(HalfInt a) { return from_twice(-a.t_); }
    friend constexpr HalfInt operator*(long k, HalfInt a) { return from_twice(k * a.t_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
    std::string str() const;

private:
    long t_ = 0;
};

// Element a + b*z of Q(z), z a primitive cube root of unity (z^2 + z + 1 = 0).
// Q(zeta_1) = Q(zeta_2) = Q sit inside as b = 0, and zeta_6 = 1 + z.
class CycloNum {
public:
    CycloNum() = default;
    CycloNum(long v) : a_(v) {}
    CycloNum(const Int& v) : a_(v) {}
    CycloNum(Rat a, Rat b = 0);

    static CycloNum zeta() { return CycloNum(0, 1); }
    // zeta_L^m for L dividing 6.
    static CycloNum root_of_unity(long m, int L);

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_one() const { return a_ == 1 && sgn(b_) == 0; }
    bool is_rational() const { return sgn(b_) == 0; }

    CycloNum conj() const { return CycloNum(a_ - b_, -b_); }
    Rat norm() const { return a_ * a_ - a_ * b_ + b_ * b_; }
    CycloNum inverse() const;

    CycloNum& operator+=(const CycloNum& o);
    CycloNum& operator-=(const CycloNum& o);
    CycloNum& operator*=(const CycloNum& o);
    CycloNum& operator/=(const CycloNum& o) { return *this *= o.inverse(); }
    friend CycloNum operator+(CycloNum x, const CycloNum& y) { return x += y; }
    friend CycloNum operator-(CycloNum x, const CycloNum& y) { return x -= y; }
    friend CycloNum operator*(CycloNum x, const CycloNum& y) { return x *= y; }
    friend CycloNum operator/(CycloNum x, const CycloNum& y) { return x /= y; }
    friend CycloNum operator-(const CycloNum& x) { return CycloNum(-x.a_, -x.b_); }
    friend bool operator==(const CycloNum& x, const CycloNum& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

    std::string str() const;

private:
    Rat a_ = 0, b_ = 0;
};

// Dense polynomial over Z[z], stored as re + z*im with integer coefficient vectors.
// Trimmed: no trailing zero coefficients; im is empty or has the size of re.
struct ZzPoly {
    std::vector<Int> re, im;

    bool is_zero() const { return re.empty(); }
    bool is_real() const { return im.empty(); }
    long degree() const { return static_cast<long>(re.size()) - 1; }
    void trim();
    bool operator==(const ZzPoly&) const = default;
};

// Polynomial over the field Q(z); used for gcds and other rare slow paths.
using QzPoly = std::vector<CycloNum>;

namespace detail {
struct Factor {
    ZzPoly poly;   // monic, irreducible over Q(z)
    int d;         // it divides the d-th cyclotomic polynomial
    int part;      // 0: the whole cyclotomic polynomial, 1/2: one of its two halves over Q(z)
    std::vector<std::uint64_t> modp;
};
const Factor& factor(int id);
}  // namespace detail

// Element of Q(z)(s), q = s^2, in canonical form
//     c * s^v * p(s) / (D(s) * r(s))
// with p, r primitive in Z[z][s] (positive integer leading coefficient, unit content, nonzero constant term),
// D a product of monic irreducible cyclotomic-type factors, r coprime to all of them, gcd(p, D r) = 1.
class CycloRational {
public:
    using Den = std::vector<std::pair<int, int>>;  // (factor id, exponent), sorted by id

    CycloRational() = default;
    CycloRational(long v) : CycloRational(CycloNum(v)) {}
    CycloRational(const Int& v) : CycloRational(CycloNum(v)) {}
    CycloRational(const Rat& v) : CycloRational(CycloNum(v)) {}
    CycloRational(const CycloNum& c);

    static CycloRational s_pow(long k);
    static CycloRational q_pow(HalfInt e) { return s_pow(e.twice()); }
    static CycloRational zeta() { return CycloRational(CycloNum::zeta()); }
    // Laurent polynomial sum_k coeffs[k] s^(low + k).
    static CycloRational laurent(long low, const std::vector<CycloNum>& coeffs);
    // s^n - u for u a root of unity in Q(z): built with its factorization known.
    static CycloRational binomial(long n, const CycloNum& u);

    bool is_zero() const { return p_.is_zero(); }
    bool is_one() const;
    bool is_laurent_polynomial() const { return den_.empty() && r_.is_zero(); }

    CycloRational inverse() const;
    CycloRational pow(long k) const;
    CycloRational bar() const;  // s -> 1/s

    CycloRational& operator+=(const CycloRational& o);
    CycloRational& operator-=(const CycloRational& o);
    CycloRational& operator*=(const CycloRational& o);
    CycloRational& operator/=(const CycloRational& o) { return *this *= o.inverse(); }
    friend CycloRational operator+(CycloRational x, const CycloRational& y) { return x += y; }
    friend CycloRational operator-(CycloRational x, const CycloRational& y) { return x -= y; }
    friend CycloRational operator*(CycloRational x, const CycloRational& y) { return x *= y; }
    friend CycloRational operator/(CycloRational x, const CycloRational& y) { return x /= y; }
    friend CycloRational operator-(CycloRational x);
    friend bool operator==(const CycloRational& x, const CycloRational& y);

    // Expanded numerator and monic denominator as Laurent polynomials: value = num / den.
    // num is given as (low exponent, coefficients); den has nonzero constant term.
    std::pair<long, std::vector<CycloNum>> numerator() const;
    std::vector<CycloNum> denominator() const;
    // Coefficient data of a Laurent polynomial; throws if not one.
    std::pair<long, std::vector<CycloNum>> laurent_coeffs() const;

    bool is_constant() const { return p_.degree() == 0 && v_ == 0 && den_.empty() && r_.is_zero(); }
    CycloNum constant() const;

    std::string str() const;
    static CycloRational parse(const std::string& text);

private:
    static CycloRational assemble(CycloNum c, long v, ZzPoly p, Den den, ZzPoly r);

    CycloNum c_;
    long v_ = 0;
    ZzPoly p_;
    Den den_;
    ZzPoly r_;
};

CycloRational qnumber(long m, HalfInt d);
// (q^e - q^-e) / (q^d - q^-d) for half-integers e, d (d != 0); qnumber(m, d) = qbracket(m*d, d).
CycloRational qbracket(HalfInt e, HalfInt d);
CycloRational qfactorial(long m, HalfInt d);

// High-precision complex numbers for numeric spot checks.
using Real = boost::multiprecision::mpfr_float;
struct Complex {
    Real re, im;
    Complex() : re(0), im(0) {}
    Complex(Real r, Real i = 0) : re(std::move(r)), im(std::move(i)) {}
    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b);
    Real abs() const;
};
Complex complex_sqrt(const Complex& z);
Complex complex_pow(const Complex& z, long k);
Complex complex_root_of_unity(long m, long L);
Complex to_complex(const CycloNum& c);

// Sets the working precision of Real in bits (default 200).
void set_precision_bits(unsigned bits);

// Evaluates x at q = q0 with z -> exp(2 pi i / 3), s -> principal sqrt(q0). Throws FieldError at a pole.
Complex eval_numeric(const CycloRational& x, const Complex& q0);

// Expression evaluation over Q(z)(s): + - * / ^ ( ) { }, integers, the symbols s, z, q = s^2,
// and qint(m, d) = [m]_{q^d}. q may be raised to half-integer powers.
// Unknown names are looked up through `var`; division by products inverts factor by factor.
struct ExprEnv {
    std::function<bool(const std::string&, CycloRational&)> var;
};
CycloRational parse_expression(const std::string& text, const ExprEnv& env = {});

}  // namespace qtw
