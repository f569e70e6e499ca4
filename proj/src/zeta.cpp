#include "zetaforge/zeta.hpp"

#include "zetaforge/errors.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace zetaforge {

namespace {

std::mutex bernoulli_mutex;
std::vector<Rational>& bernoulli_table()
{
    static std::vector<Rational> table{Rational(1)};
    return table;
}

BigInt binomial(unsigned n, unsigned k)
{
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigReal factorial(unsigned n)
{
    BigReal r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// Real Euler-Maclaurin weights B_{2j} / (2j)! for j = 1..count, per precision.
std::shared_ptr<const std::vector<BigReal>> em_weights(unsigned count, unsigned bits)
{
    static std::mutex mutex;
    static std::map<unsigned, std::shared_ptr<const std::vector<BigReal>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[bits];
    if (slot && slot->size() > count)
        return slot;
    unsigned want = std::max(count, slot ? 2 * static_cast<unsigned>(slot->size()) : 64u);
    auto b = bernoulli_reals(2 * want, bits);
    auto w = std::make_shared<std::vector<BigReal>>();
    ScopedPrecision guard(bits);
    w->reserve(want + 1);
    w->push_back(BigReal(0));
    BigReal fact = 1;
    for (unsigned j = 1; j <= want; ++j) {
        fact *= (2 * j - 1);
        fact *= (2 * j);
        w->push_back((*b)[2 * j] / fact);
    }
    slot = w;
    return slot;
}

BigComplex pow_real_base(const BigReal& log_base, const BigComplex& exponent)
{
    // base^exponent with base > 0 given log(base).
    return polar(BigReal(exp(exponent.re * log_base)), BigReal(exponent.im * log_base));
}

/// Adaptive Euler-Maclaurin; returns false if the correction terms stop
/// decreasing before reaching eps (caller retries with a larger N).
bool hurwitz_em(const BigComplex& s, const BigReal& a, std::int64_t n_direct, const BigReal& eps, unsigned bits,
                BigComplex& out)
{
    BigComplex sum;
    BigComplex minus_s = -s;
    for (std::int64_t k = 0; k < n_direct; ++k) {
        BigReal lb = log(a + BigReal(k));
        sum += pow_real_base(lb, minus_s);
    }
    BigReal x = a + BigReal(n_direct);
    BigReal lx = log(x);
    BigComplex x_minus_s = pow_real_base(lx, minus_s);
    BigComplex s_minus_1 = s - BigComplex(BigReal(1));
    sum += x_minus_s * x / s_minus_1;
    sum += x_minus_s / BigReal(2);

    // term_j = B_{2j}/(2j)! * (s)_{2j-1} * x^{-s-2j+1}
    BigReal inv_x2 = 1 / (x * x);
    BigComplex rising = s;           // (s)_{2j-1}
    BigComplex xpow = x_minus_s / x;  // x^{-s-2j+1} at j = 1
    unsigned max_j = static_cast<unsigned>(bits);
    auto weights = em_weights(64, bits);
    BigReal prev_mag = -1;
    BigReal scale = abs(sum);
    if (scale < 1)
        scale = 1;
    for (unsigned j = 1; j <= max_j; ++j) {
        if (j >= weights->size())
            weights = em_weights(2 * j, bits);
        BigComplex term = rising * xpow * (*weights)[j];
        BigReal mag = abs(term);
        if (prev_mag >= 0 && mag > prev_mag && mag > eps * scale)
            return false;
        sum += term;
        if (mag <= eps * scale) {
            out = sum;
            return true;
        }
        prev_mag = mag;
        rising *= (s + BigComplex(BigReal(2 * j - 1)));
        rising *= (s + BigComplex(BigReal(2 * j)));
        xpow *= inv_x2;
    }
    return false;
}

}  // namespace

Rational bernoulli(unsigned n)
{
    std::lock_guard lock(bernoulli_mutex);
    auto& table = bernoulli_table();
    while (table.size() <= n) {
        unsigned m = static_cast<unsigned>(table.size());
        if (m >= 3 && m % 2 == 1) {
            table.emplace_back(0);
            continue;
        }
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        Rational acc = 0;
        for (unsigned k = 0; k < m; ++k) {
            if (table[k] != 0)
                acc += Rational(binomial(m + 1, k)) * table[k];
        }
        table.push_back(-acc / Rational(m + 1));
    }
    return table[n];
}

std::shared_ptr<const std::vector<BigReal>> bernoulli_reals(unsigned count, unsigned bits)
{
    static std::mutex mutex;
    static std::map<unsigned, std::shared_ptr<const std::vector<BigReal>>> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(bits);
        if (it != cache.end() && it->second->size() > count)
            return it->second;
    }
    unsigned want = std::max(count + 1, 64u);
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(bits);
        if (it != cache.end())
            want = std::max<unsigned>(want, 2 * static_cast<unsigned>(it->second->size()));
    }
    bernoulli(want);
    auto v = std::make_shared<std::vector<BigReal>>();
    {
        ScopedPrecision guard(bits);
        v->reserve(want + 1);
        for (unsigned i = 0; i <= want; ++i)
            v->push_back(make_real(bernoulli(i)));
    }
    std::lock_guard lock(mutex);
    auto& slot = cache[bits];
    if (!slot || slot->size() < v->size())
        slot = v;
    return slot;
}

BigReal riemann_zeta_even(unsigned m, const PrecisionContext& ctx)
{
    if (m == 0)
        throw DomainError("riemann_zeta_even: m must be >= 1");
    ScopedPrecision guard(ctx.working_bits());
    BigReal two_pi = 2 * const_pi();
    BigReal v = pow(two_pi, static_cast<int>(2 * m)) * make_real(bernoulli(2 * m)) / (2 * factorial(2 * m));
    return m % 2 == 1 ? v : BigReal(-v);
}

BigComplex hurwitz_zeta(const BigComplex& s, const BigReal& a, const PrecisionContext& ctx)
{
    if (!(a > 0) || a > 1)
        throw DomainError("hurwitz_zeta: parameter a must lie in (0, 1]");
    if (s.re == 1 && s.im == 0)
        throw PoleError("hurwitz_zeta: pole at s = 1");
    unsigned bits = ctx.working_bits() + 16;
    ScopedPrecision guard(bits);
    BigReal eps = pow2(-static_cast<long>(bits));
    double mag = std::hypot(static_cast<double>(s.re), static_cast<double>(s.im));
    auto n = static_cast<std::int64_t>(std::ceil(0.12 * bits + 0.3 * mag)) + 4;
    if (s.re < 0)
        n += static_cast<std::int64_t>(std::ceil(-static_cast<double>(s.re)));
    BigComplex out;
    BigComplex sp = promote(s);
    BigReal ap = promote(a);
    for (int attempt = 0; attempt < 8; ++attempt) {
        if (hurwitz_em(sp, ap, n, eps, bits, out))
            return out;
        n *= 2;
    }
    throw ConvergenceError("hurwitz_zeta: Euler-Maclaurin did not converge", 0.0);
}

BigComplex riemann_zeta(const BigComplex& s, const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    return hurwitz_zeta(s, BigReal(1), ctx);
}

ZetaPair zeta_and_l(std::int64_t disc, const BigComplex& s, const PrecisionContext& ctx)
{
    std::int64_t q = disc < 0 ? -disc : disc;
    ScopedPrecision guard(ctx.working_bits() + 16);
    ZetaPair out;
    if (q == 1) {
        out.zeta = hurwitz_zeta(s, BigReal(1), ctx);
        out.l_value = out.zeta;
        return out;
    }
    // L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q); only residues prime to q contribute.
    BigComplex l;
    BigReal qr = make_real(q);
    for (std::int64_t r = 1; r < q; ++r) {
        int chi = kronecker_symbol(disc, r);
        if (chi == 0)
            continue;
        BigComplex h = hurwitz_zeta(s, make_real(r) / qr, ctx);
        if (chi == 1)
            l += h;
        else
            l -= h;
    }
    BigComplex q_minus_s = pow_real_base(log(qr), -s);
    out.zeta = hurwitz_zeta(s, BigReal(1), ctx);
    out.l_value = l * q_minus_s;
    return out;
}

double dirichlet_truncation(double sigma, double coefficient_bound, double log_eps, double delta)
{
    double excess = sigma - 1.0 - delta;
    if (excess <= 0)
        return std::numeric_limits<double>::infinity();
    // C N^{-excess} / excess <= eps
    double log_n = (std::log(coefficient_bound / excess) - log_eps) / excess;
    return std::ceil(std::exp(std::max(0.0, log_n)));
}

DirichletSum dedekind_zeta_direct(const IdealCounts& counts, const BigComplex& s, const PrecisionContext& ctx,
                                  std::int64_t terms)
{
    constexpr double delta = 0.1;
    ScopedPrecision guard(ctx.working_bits() + 16);
    auto sigma = static_cast<double>(s.re);
    double log_eps = std::log(2.0) * log2_abs(ctx.series_tail_eps());
    DirichletSum out;
    if (terms <= 0) {
        // Coefficient constant from partial-sum monitoring on an initial block,
        // then N from the tail bound; doubled until two estimates agree.
        std::int64_t probe = 256;
        double n_est = 0;
        for (int round = 0; round < 40; ++round) {
            std::vector<std::int64_t> v;
            try {
                v = counts.prefix(probe);
            } catch (const TableRangeError& e) {
                v = counts.prefix(static_cast<std::int64_t>(e.max_index()));
            }
            double c = 1.0;
            for (std::size_t n = 1; n < v.size(); ++n)
                c = std::max(c, static_cast<double>(v[n]) / std::pow(static_cast<double>(n), delta));
            double next = dirichlet_truncation(sigma, c, log_eps, delta);
            if (next <= static_cast<double>(probe) || next == n_est) {
                n_est = next;
                break;
            }
            n_est = next;
            if (next > 5e7 || static_cast<std::int64_t>(v.size()) - 1 < probe)
                break;
            probe *= 2;
        }
        if (!std::isfinite(n_est) || n_est > 5e7)
            throw TruncationError("dedekind_zeta: Re(s) = " + std::to_string(sigma) +
                                      " is too close to 1; the Dirichlet series needs about " +
                                      std::to_string(n_est) + " terms",
                                  n_est);
        terms = static_cast<std::int64_t>(n_est);
    }
    std::vector<std::int64_t> v;
    try {
        v = counts.prefix(terms);
    } catch (const TableRangeError& e) {
        throw TruncationError("dedekind_zeta: need " + std::to_string(terms) + " coefficients but table " +
                                  counts.field().label() + " stops at " + std::to_string(e.max_index()),
                              static_cast<double>(terms));
    }
    BigComplex minus_s = -s;
    for (std::int64_t n = 1; n <= terms; ++n) {
        if (v[static_cast<std::size_t>(n)] == 0)
            continue;
        out.value += pow_real_base(log(make_real(n)), minus_s) * make_real(v[static_cast<std::size_t>(n)]);
    }
    double c = 1.0;
    for (std::size_t n = 1; n < v.size(); ++n)
        c = std::max(c, static_cast<double>(v[n]) / std::pow(static_cast<double>(n), delta));
    double excess = sigma - 1.0 - delta;
    out.tail_bound = excess > 0 ? BigReal(c / excess) * pow(make_real(terms), BigReal(-excess)) : BigReal(1e300);
    out.terms = terms;
    return out;
}

BigComplex dedekind_zeta(const FieldDescriptor& field, const BigComplex& s, const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    if (s.re < 1 + ctx.dirichlet_margin())
        throw TruncationError("dedekind_zeta: Re(s) must be >= 1 + " + to_decimal(ctx.dirichlet_margin(), 4) +
                                  "; the Dirichlet series tail bound blows up near s = 1",
                              std::numeric_limits<double>::infinity());
    if (field.is_rational())
        return riemann_zeta(s, ctx);
    if (field.is_quadratic()) {
        ZetaPair zl = zeta_and_l(field.disc_signed(), s, ctx);
        return zl.zeta * zl.l_value;
    }
    IdealCounts counts(field);
    return dedekind_zeta_direct(counts, s, ctx).value;
}

BigReal dedekind_zeta_nonpositive(const FieldDescriptor& field, int n, const PrecisionContext& ctx)
{
    if (n > 0)
        throw DomainError("dedekind_zeta_nonpositive: n must be <= 0");
    ScopedPrecision guard(ctx.working_bits());
    const unsigned r1 = field.r1(), r2 = field.r2(), d = field.degree();
    BigReal pi = const_pi();
    if (n == 0) {
        // 1/Gamma(s)^{r2} ~ s^{r2}, sin(pi s/2)^{r1} ~ (pi s/2)^{r1}, zeta_K(1-s) ~ -H/s.
        if (r1 + r2 >= 2)
            return BigReal(0);
        BigReal h = residue_H(field, ctx);
        BigReal v = -h * sqrt(make_real(field.disc_abs())) * pow2(-static_cast<long>(r2)) /
                    pow(pi, static_cast<int>(r1 + r2)) * pow(pi / 2, static_cast<int>(r1));
        return v;
    }
    if (r2 > 0)
        return BigReal(0);  // 1/Gamma(n)^{r2} = 0
    if (n % 2 == 0)
        return BigReal(0);  // sin(pi n/2)^{r1} = 0
    // n odd, totally real: sin(pi n/2) = +-1, Gamma(1-n) = (-n)!
    BigReal z = dedekind_zeta(field, BigComplex(make_real(1 - n)), ctx).re;
    BigReal dd = make_real(field.disc_abs());
    int dn = static_cast<int>(d) * n;
    int sign = ((-n) % 4 == 1) ? -1 : 1;  // sin(pi n/2) for odd n
    if (r1 % 2 == 0)
        sign = 1;
    BigReal v = pow(dd, BigReal(0.5) - BigReal(n)) * pow2(dn) * pow(pi, dn - static_cast<int>(r1)) *
                pow(factorial(static_cast<unsigned>(-n)), static_cast<int>(r1)) * z;
    return sign < 0 ? BigReal(-v) : v;
}

BigReal zeta_even_positive(const FieldDescriptor& field, unsigned j, const PrecisionContext& ctx)
{
    if (j == 0)
        return dedekind_zeta_nonpositive(field, 0, ctx);
    ScopedPrecision guard(ctx.working_bits());
    return dedekind_zeta(field, BigComplex(make_real(2 * static_cast<long long>(j))), ctx).re;
}

BigReal functional_equation_forward(const FieldDescriptor& field, int s, const BigReal& zeta_at_one_minus_s,
                                    const PrecisionContext& ctx)
{
    if (s < 2)
        throw DomainError("functional_equation_forward: s must be >= 2");
    if (field.r2() > 0)
        throw DomainError("functional_equation_forward: zeta_K(1-s) is a trivial zero for r2 > 0");
    ScopedPrecision guard(ctx.working_bits());
    const int r1 = static_cast<int>(field.r1());
    const int d = static_cast<int>(field.degree());
    BigReal pi = const_pi();
    BigReal dd = make_real(field.disc_abs());
    // Gamma(1-s) sin(pi s/2) = pi / (2 Gamma(s) cos(pi s/2)) at integer s.
    BigReal gamma_s = factorial(static_cast<unsigned>(s - 1));
    BigReal cos_half = (s % 2 == 1) ? BigReal(0) : BigReal(((s / 2) % 2 == 0) ? 1 : -1);
    if (cos_half == 0)
        throw DomainError("functional_equation_forward: odd s not supported (zeta_K(1-s) is a trivial zero)");
    BigReal factor = pi / (2 * gamma_s * cos_half);
    return pow(dd, BigReal(0.5) - BigReal(s)) * pow2(d * s) * pow(pi, d * s - r1) * pow(factor, r1) *
           zeta_at_one_minus_s;
}

}  // namespace zetaforge
