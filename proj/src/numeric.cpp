#include "zetaforge/numeric.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace zetaforge {

unsigned bits_to_digits10(unsigned bits)
{
    return boost::multiprecision::detail::digits2_2_10(bits);
}

unsigned digits10_to_bits(unsigned digits10)
{
    return boost::multiprecision::detail::digits10_2_2(digits10);
}

unsigned current_precision_bits()
{
    return digits10_to_bits(BigReal::default_precision());
}

namespace {
std::recursive_mutex precision_mutex;
}

ScopedPrecision::ScopedPrecision(unsigned bits)
    : lock_(precision_mutex), saved_digits10_(BigReal::default_precision())
{
    BigReal::default_precision(bits_to_digits10(bits) + 1);
}

ScopedPrecision::~ScopedPrecision() { BigReal::default_precision(saved_digits10_); }

BigReal make_real(const Rational& q)
{
    BigReal r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

BigReal make_real(long long v)
{
    BigReal r;
    mpfr_set_sj(r.backend().data(), v, MPFR_RNDN);
    return r;
}

BigReal make_real(const std::string& decimal)
{
    BigReal r;
    mpfr_set_str(r.backend().data(), decimal.c_str(), 10, MPFR_RNDN);
    return r;
}

BigReal promote(const BigReal& x)
{
    BigReal r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

BigReal const_pi()
{
    BigReal r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

BigReal const_euler()
{
    BigReal r;
    mpfr_const_euler(r.backend().data(), MPFR_RNDN);
    return r;
}

BigReal const_log2()
{
    BigReal r;
    mpfr_const_log2(r.backend().data(), MPFR_RNDN);
    return r;
}

BigReal pow2(long e)
{
    BigReal r;
    mpfr_set_ui_2exp(r.backend().data(), 1, e, MPFR_RNDN);
    return r;
}

std::string to_decimal(const BigReal& x, unsigned digits)
{
    if (digits == 0)
        digits = 1;
    std::ostringstream os;
    os << std::setprecision(static_cast<int>(digits) - 1) << std::scientific << x;
    return os.str();
}

std::string to_decimal(const BigComplex& z, unsigned digits)
{
    std::string s = to_decimal(z.re, digits);
    std::string t = to_decimal(z.im, digits);
    if (t.front() != '-')
        t = "+" + t;
    return s + t + "i";
}

double log2_abs(const BigReal& x)
{
    if (x == 0)
        return -1e18;
    long e = 0;
    double m = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
    return static_cast<double>(e) + std::log2(std::fabs(m));
}

RationalFit reconstruct_rational(const BigReal& x, const BigInt& max_den, const BigReal& tol)
{
    RationalFit best;
    // Convergents p_k/q_k of the continued fraction of x.
    BigInt p_prev = 0, q_prev = 1;
    BigInt p = 1, q = 0;
    BigReal rem = x;
    for (int k = 0; k < 400; ++k) {
        BigReal fl = floor(rem);
        BigInt a;
        mpfr_get_z(a.backend().data(), fl.backend().data(), MPFR_RNDD);
        BigInt p_next = a * p + p_prev;
        BigInt q_next = a * q + q_prev;
        if (k > 0 && q_next > max_den)
            break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        Rational cand(p, q);
        BigReal err = abs(x - make_real(cand));
        if (err <= tol) {
            best.value = cand;
            best.error = err;
            best.found = true;
            break;
        }
        BigReal frac = rem - fl;
        if (frac == 0)
            break;
        rem = 1 / frac;
    }
    return best;
}

}  // namespace zetaforge
