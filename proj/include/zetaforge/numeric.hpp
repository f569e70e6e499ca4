// Arbitrary-precision scalar types shared by every zetaforge module.
//
// BigReal is a variable-precision MPFR float. Its working precision is
// controlled through ScopedPrecision; all temporaries created while a guard
// is alive carry the guard's precision.
#ifndef ZETAFORGE_NUMERIC_HPP
#define ZETAFORGE_NUMERIC_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <mutex>
#include <string>

namespace zetaforge {

using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Binary digits <-> decimal digits.
unsigned bits_to_digits10(unsigned bits);
unsigned digits10_to_bits(unsigned digits10);

/// Current default working precision, in bits.
unsigned current_precision_bits();

/// Sets the default BigReal precision for the lifetime of the guard.
///
/// The default precision is process-wide, so the outermost guard on a thread
/// also holds a process-wide lock: evaluations started from different
/// threads are safe but run one at a time.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned saved_digits10_;
};

BigReal make_real(const Rational& q);
BigReal make_real(long long v);
/// Parses a decimal literal at the current precision.
BigReal make_real(const std::string& decimal);

/// Copy of x rounded to the current default precision. Copies and in-place
/// operators keep the precision of their source, so routines that work above
/// the caller's precision must promote their arguments first.
BigReal promote(const BigReal& x);

BigReal const_pi();
BigReal const_euler();
BigReal const_log2();

BigReal pow2(long e);  // exact 2^e

/// Fixed-notation or scientific decimal rendering with `digits` significant digits.
std::string to_decimal(const BigReal& x, unsigned digits);

/// log2 |x|, or a very negative number for x == 0.
double log2_abs(const BigReal& x);

// ---------------------------------------------------------------------------

template <class T>
struct Complex {
    T re;
    T im;

    Complex() : re(0), im(0) {}
    Complex(const T& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(const T& r, const T& i) : re(r), im(i) {}
    Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o)
    {
        T r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o)
    {
        T den = o.re * o.re + o.im * o.im;
        T r = (re * o.re + im * o.im) / den;
        im = (im * o.re - re * o.im) / den;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const T& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const T& s) { re /= s; im /= s; return *this; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator*(Complex a, const T& s) { return a *= s; }
    friend Complex operator*(const T& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const T& s) { return a /= s; }
    friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
Complex<T> conj(const Complex<T>& z)
{
    return {z.re, -z.im};
}

template <class T>
T norm(const Complex<T>& z)
{
    return z.re * z.re + z.im * z.im;
}

template <class T>
T abs(const Complex<T>& z)
{
    return sqrt(norm(z));
}

template <class T>
T arg(const Complex<T>& z)
{
    return atan2(z.im, z.re);
}

template <class T>
Complex<T> polar(const T& r, const T& theta)
{
    return {r * cos(theta), r * sin(theta)};
}

template <class T>
Complex<T> exp(const Complex<T>& z)
{
    return polar(T(exp(z.re)), z.im);
}

/// Principal branch, arg in (-pi, pi].
template <class T>
Complex<T> log(const Complex<T>& z)
{
    return {T(log(abs(z))), arg(z)};
}

/// Principal square root.
template <class T>
Complex<T> sqrt(const Complex<T>& z)
{
    if (z.re == 0 && z.im == 0)
        return {};
    T r = abs(z);
    T a = sqrt((r + abs(z.re)) / 2);
    if (z.re >= 0)
        return {a, z.im / (2 * a)};
    T b = z.im < 0 ? T(-a) : a;
    return {abs(z.im) / (2 * a), b};
}

/// Principal power z^w = exp(w log z).
template <class T>
Complex<T> pow(const Complex<T>& z, const Complex<T>& w)
{
    return exp(w * log(z));
}

template <class T>
Complex<T> pow(Complex<T> z, long long n)
{
    if (n < 0)
        return Complex<T>(T(1)) / pow(z, -n);
    Complex<T> r(T(1));
    while (n) {
        if (n & 1)
            r *= z;
        n >>= 1;
        if (n)
            z *= z;
    }
    return r;
}

template <class T>
Complex<T> sin(const Complex<T>& z)
{
    return {T(sin(z.re) * cosh(z.im)), T(cos(z.re) * sinh(z.im))};
}

template <class T>
Complex<T> cos(const Complex<T>& z)
{
    return {T(cos(z.re) * cosh(z.im)), T(-sin(z.re) * sinh(z.im))};
}

using BigComplex = Complex<BigReal>;

inline BigComplex imag_unit() { return {BigReal(0), BigReal(1)}; }

std::string to_decimal(const BigComplex& z, unsigned digits);

inline BigComplex promote(const BigComplex& z) { return {promote(z.re), promote(z.im)}; }

// ---------------------------------------------------------------------------

/// Continued-fraction reconstruction of a small-denominator rational.
struct RationalFit {
    Rational value;
    BigReal error;  // |x - value|
    bool found = false;
};

/// Best convergent of x with denominator <= max_den whose distance to x is
/// within tol; found == false if none qualifies.
RationalFit reconstruct_rational(const BigReal& x, const BigInt& max_den, const BigReal& tol);

}  // namespace zetaforge

#endif  // ZETAFORGE_NUMERIC_HPP
