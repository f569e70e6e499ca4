#include "zetaforge/special.hpp"

#include "zetaforge/errors.hpp"
#include "zetaforge/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zetaforge {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;

double to_double(const BigReal& x) { return static_cast<double>(x); }

double magnitude(const BigComplex& z) { return std::hypot(to_double(z.re), to_double(z.im)); }

/// Bits needed to resolve an absolute error eps.
unsigned bits_for(const BigReal& eps)
{
    double b = -log2_abs(eps);
    return static_cast<unsigned>(std::max(b, 16.0));
}

/// B_{2k} / (2k (2k-1)) for the Stirling series, k >= 1, per precision.
std::shared_ptr<const std::vector<BigReal>> stirling_coefficients(unsigned count, unsigned bits)
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
    auto b = bernoulli_reals(2 * want, bits);
    auto v = std::make_shared<std::vector<BigReal>>();
    {
        ScopedPrecision guard(bits);
        v->push_back(BigReal(0));
        for (unsigned k = 1; k <= want; ++k)
            v->push_back((*b)[2 * k] / (BigReal(2 * k) * (2 * k - 1)));
    }
    std::lock_guard lock(mutex);
    auto& slot = cache[bits];
    if (!slot || slot->size() < v->size())
        slot = v;
    return slot;
}

/// log Gamma(z) for Re(z) >= 1/2, up to a multiple of 2 pi i.
BigComplex log_gamma_right(BigComplex z, unsigned bits)
{
    BigReal eps = pow2(-static_cast<long>(bits));
    // The Stirling remainder for |arg z| <= pi/2 is at most 2^{k+1} times the
    // first omitted term, whose minimum over k is about e^{-2 pi |z|}.
    double radius = 0.16 * bits + 4;
    BigComplex shift_product(BigReal(1));
    bool shifted = false;
    while (magnitude(z) < radius) {
        shift_product *= z;
        z += BigComplex(BigReal(1));
        shifted = true;
    }
    BigComplex lz = log(z);
    BigComplex result = (z - BigComplex(BigReal(0.5))) * lz - z;
    result += BigComplex(BigReal(log(2 * const_pi()) / 2));
    BigComplex inv = BigComplex(BigReal(1)) / z;
    BigComplex inv2 = inv * inv;
    BigComplex power = inv;
    auto coeff = stirling_coefficients(64, bits);
    BigReal prev = -1;
    for (unsigned k = 1;; ++k) {
        if (k >= coeff->size())
            coeff = stirling_coefficients(2 * k, bits);
        BigComplex term = power * (*coeff)[k];
        BigReal mag = abs(term);
        if (prev >= 0 && mag > prev)
            break;  // cannot happen once |z| >= radius; guards against misuse
        result += term;
        if (mag * pow2(static_cast<long>(k) + 1) < eps)
            break;
        prev = mag;
        power *= inv2;
    }
    if (shifted)
        result -= log(shift_product);
    return result;
}

bool is_nonpositive_integer(const BigComplex& s)
{
    return s.im == 0 && s.re <= 0 && s.re == floor(s.re);
}

}  // namespace

// ---------------------------------------------------------------------------
// Gamma

BigComplex complex_gamma(const BigComplex& s, unsigned bits)
{
    if (is_nonpositive_integer(s))
        throw PoleError("complex_gamma: pole at s = " + to_decimal(s.re, 6));
    double size = magnitude(s) + 2;
    unsigned work = bits + 24 + static_cast<unsigned>(std::ceil(std::log2(size * std::log(size) + 2)));
    ScopedPrecision guard(work);
    BigComplex z = promote(s);
    if (z.re < BigReal(0.5)) {
        // Gamma(s) = pi / (sin(pi s) Gamma(1 - s))
        BigReal pi = const_pi();
        BigComplex one_minus = BigComplex(BigReal(1)) - z;
        BigComplex g = exp(log_gamma_right(one_minus, work));
        BigComplex sn = sin(z * pi);
        return BigComplex(pi) / (sn * g);
    }
    return exp(log_gamma_right(z, work));
}

BigComplex complex_gamma(const BigComplex& s, const PrecisionContext& ctx)
{
    return complex_gamma(s, ctx.working_bits());
}

// ---------------------------------------------------------------------------
// Bessel K

double bessel_K0_bound(double re_z)
{
    return std::sqrt(kPi / (2 * re_z)) * std::exp(-re_z);
}

namespace detail {

BesselApprox bessel_K0_series(const BigComplex& z_in, const BigReal& eps)
{
    double r = magnitude(z_in);
    // Terms peak near e^{|z|}; keep that many extra bits so the cancellation
    // down to e^{-Re z} costs nothing.
    unsigned work = bits_for(eps) + static_cast<unsigned>(std::ceil(r / kLn2)) + 40;
    ScopedPrecision guard(work);
    BigComplex z = promote(z_in);
    BigComplex w = z * z / BigReal(4);
    BigComplex lead = log(z / BigReal(2)) + BigComplex(const_euler());
    BigReal lead_abs = abs(lead);
    BigComplex u(BigReal(1));
    BigComplex sum_i(BigReal(1));
    BigComplex sum_h;
    BigReal harmonic = 0;
    BigReal w_abs = abs(w);
    BigReal largest = 1;
    BesselApprox out;
    for (unsigned k = 1;; ++k) {
        BigReal kk = k;
        u *= w / (kk * kk);
        harmonic += 1 / kk;
        sum_i += u;
        sum_h += u * harmonic;
        BigReal u_abs = abs(u);
        largest = std::max(largest, u_abs);
        if (k >= r + 1) {
            // Remaining terms shrink at least geometrically by q < 1/4; H_n
            // grows by at most 1/(k+1) per step.
            BigReal q = w_abs / ((kk + 1) * (kk + 1));
            BigReal tail = u_abs * q / (1 - q) * (harmonic + 1 + lead_abs);
            if (tail < eps / 8 || k > 100000) {
                out.value = sum_h - lead * sum_i;
                BigReal rounding = largest * (lead_abs + harmonic + 1) * kk * pow2(-static_cast<long>(work) + 4);
                out.error_bound = tail + rounding;
                out.ok = out.error_bound <= eps;
                return out;
            }
        }
    }
}

BesselApprox bessel_K0_asymptotic(const BigComplex& z_in, const BigReal& eps)
{
    unsigned work = bits_for(eps) + 32;
    ScopedPrecision guard(work);
    BigComplex z = promote(z_in);
    BigReal pi = const_pi();
    BigComplex prefactor = sqrt(BigComplex(pi) / (BigReal(2) * z)) * exp(-z);
    BigReal pre_abs = abs(prefactor);
    BigReal z_abs = abs(z);
    // Remainder after l terms, |arg z| <= pi/2:
    // |R_l| <= 2 chi(l) exp(1/(4|z|)) |a_l / z^l|, chi(l) <= sqrt(pi (l/2 + 1)).
    BigReal growth = 2 * exp(1 / (4 * z_abs));
    BigComplex inv = BigComplex(BigReal(1)) / z;
    BigComplex sum(BigReal(1));
    BigComplex power(BigReal(1));
    BigReal a = 1;
    BigReal prev_term = 1;
    BesselApprox out;
    unsigned cap = static_cast<unsigned>(4 * to_double(z_abs)) + 10;
    for (unsigned k = 1; k <= cap; ++k) {
        a *= BigReal(2 * k - 1) * (2 * k - 1) / (8 * BigReal(k));
        power *= inv;
        BigReal term_abs = a * pow(z_abs, -static_cast<int>(k));
        BigReal bound = growth * sqrt(pi * (BigReal(k) / 2 + 1)) * term_abs * pre_abs;
        if (bound <= eps) {
            out.value = prefactor * sum;
            out.error_bound = bound;
            out.ok = true;
            return out;
        }
        if (term_abs > prev_term) {
            out.value = prefactor * sum;
            out.error_bound = bound;
            out.ok = false;
            return out;
        }
        BigComplex term = power * a;
        if (k % 2 == 1)
            sum -= term;
        else
            sum += term;
        prev_term = term_abs;
    }
    out.value = prefactor * sum;
    out.error_bound = growth * prev_term * pre_abs * 10;
    out.ok = false;
    return out;
}

}  // namespace detail

BigComplex bessel_K0(const BigComplex& z, const BigReal& eps)
{
    if (!(z.re > 0))
        throw DomainError("bessel_K: requires Re(z) > 0");
    if (magnitude(z) >= 9) {
        detail::BesselApprox a = detail::bessel_K0_asymptotic(z, eps);
        if (a.ok)
            return a.value;
    }
    detail::BesselApprox s = detail::bessel_K0_series(z, eps);
    if (!s.ok)
        throw ConvergenceError("bessel_K: series did not reach the requested accuracy",
                               log2_abs(s.error_bound) * std::log10(2.0));
    return s.value;
}

BigComplex bessel_K(const BigReal& nu, const BigComplex& z, const PrecisionContext& ctx)
{
    if (!(z.re > 0))
        throw DomainError("bessel_K: requires Re(z) > 0");
    ScopedPrecision guard(ctx.working_bits());
    if (nu == 0)
        return bessel_K0(z, ctx.series_tail_eps());
    if (abs(nu) == BigReal(0.5)) {
        BigComplex pre = sqrt(BigComplex(const_pi()) / (BigReal(2) * z));
        return pre * exp(-z);
    }
    throw DomainError("bessel_K: only orders 0 and 1/2 are supported");
}

// ---------------------------------------------------------------------------
// Contours

ContourSpec ContourSpec::from_context(const PrecisionContext& ctx)
{
    ContourSpec c;
    c.abscissa_c = ctx.quad_line_c();
    c.height_T = ctx.quad_height_T();
    c.nodes = ctx.quad_nodes();
    return c;
}

void ContourSpec::validate() const
{
    if (!(abscissa_c > 1))
        throw DomainError("contour: abscissa c must exceed 1");
    if (std::abs(std::cos(kPi * to_double(abscissa_c) / 2)) <= 0.05)
        throw DomainError("contour: abscissa c too close to an odd integer");
    if (height_T && !(*height_T > 0))
        throw DomainError("contour: height T must be positive");
    if (nodes < 64)
        throw DomainError("contour: at least 64 nodes are required");
}

namespace {

/// Gauss-Legendre nodes and weights on [-1, 1], cached per (points, bits).
struct GaussRule {
    std::vector<BigReal> x;
    std::vector<BigReal> w;
};

std::shared_ptr<const GaussRule> gauss_rule(unsigned m, unsigned bits)
{
    static std::mutex mutex;
    static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const GaussRule>> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find({m, bits});
        if (it != cache.end())
            return it->second;
    }
    auto rule = std::make_shared<GaussRule>();
    {
        ScopedPrecision guard(bits + 32);
        BigReal pi = const_pi();
        BigReal tol = pow2(-static_cast<long>(bits) - 8);
        for (unsigned i = 1; i <= m; ++i) {
            BigReal x = cos(pi * (BigReal(i) - BigReal(0.25)) / (BigReal(m) + BigReal(0.5)));
            BigReal dp;
            for (int iter = 0; iter < 100; ++iter) {
                BigReal p0 = 1, p1 = x;
                for (unsigned n = 2; n <= m; ++n) {
                    BigReal p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1);
                BigReal dx = p1 / dp;
                x -= dx;
                if (abs(dx) < tol)
                    break;
            }
            rule->x.push_back(x);
            rule->w.push_back(2 / ((1 - x * x) * dp * dp));
        }
    }
    std::lock_guard lock(mutex);
    auto& slot = cache[{m, bits}];
    if (!slot)
        slot = rule;
    return slot;
}

/// Nodes t = k h_base 2^level, written so that the same node always gets
/// bit-identical coordinates whatever level it is reached from.
BigReal grid_point(const BigReal& h_base, long long k, int level)
{
    if (k == 0)
        return BigReal(0);
    while (k % 2 == 0) {
        k /= 2;
        ++level;
    }
    return h_base * BigReal(k) * pow2(level);
}

}  // namespace

LineIntegrator::LineIntegrator(Function f, bool f_conjugate_symmetric, ContourSpec contour, unsigned bits)
    : f_(std::move(f)), f_symmetric_(f_conjugate_symmetric), contour_(std::move(contour)), bits_(bits)
{
    contour_.validate();
}

std::size_t LineIntegrator::cached_samples() const
{
    std::lock_guard lock(mutex_);
    return memo_.size();
}

BigComplex LineIntegrator::sample_f(const BigReal& t) const
{
    if (f_symmetric_ && t < 0)
        return conj(sample_f(-t));
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(t);
        if (it != memo_.end())
            return it->second;
    }
    BigComplex v = f_(BigComplex(contour_.abscissa_c, t));
    std::lock_guard lock(mutex_);
    memo_.emplace(t, v);
    return v;
}

LineIntegral LineIntegrator::integrate(const Function& g, bool g_conjugate_symmetric, const DecayModel& decay,
                                       const BigReal& tol) const
{
    ScopedPrecision guard(bits_);
    bool symmetric = f_symmetric_ && g_conjugate_symmetric;
    if (contour_.rule == QuadratureRule::GaussLegendrePanels)
        return gauss_legendre(g, symmetric, decay, tol);
    return trapezoid(g, symmetric, decay, tol);
}

BigReal LineIntegrator::choose_height(const Function& g, bool symmetric, const DecayModel& decay,
                                      const BigReal& tol, const BigReal& step) const
{
    const BigReal& c = contour_.abscissa_c;
    auto magnitude_at = [&](const BigReal& t) {
        BigReal m = abs(sample_f(t) * g(BigComplex(c, t)));
        if (!symmetric) {
            BigReal m2 = abs(sample_f(-t) * g(BigComplex(c, BigReal(-t))));
            if (m2 > m)
                m = m2;
        }
        return m;
    };
    auto accepted = [&](const BigReal& t) {
        // Integrand at +-T (and a little beyond) below tol / (2T).
        BigReal limit = tol / (2 * t) / 4;
        return magnitude_at(t) <= limit && magnitude_at(t * BigReal(1.1)) <= limit;
    };
    if (contour_.height_T) {
        BigReal t = *contour_.height_T;
        if (!accepted(t))
            throw ConvergenceError("line integral: integrand not negligible at the requested height T",
                                   log2_abs(magnitude_at(t)) * std::log10(2.0));
        return t;
    }
    double rate = std::max(decay.rate, 0.05);
    double scale = std::max(-1e6, log2_abs(abs(sample_f(BigReal(0)) * g(BigComplex(c))))) * kLn2;
    double target = log2_abs(tol) * kLn2;
    // Smallest T with scale + power log(1 + T) - rate T <= log(tol / (2T)).
    double t = 1;
    for (int i = 0; i < 200; ++i) {
        double lhs = scale + decay.power * std::log1p(t) - rate * t;
        if (lhs <= target - std::log(2 * t) - 2)
            break;
        t *= 1.1;
    }
    double h = to_double(step);
    t = std::max(t, 4 * h);
    for (int i = 0; i < 60; ++i) {
        BigReal tt = BigReal(std::ceil(t / h)) * step;
        if (accepted(tt))
            return tt;
        t *= 1.2;
    }
    throw ConvergenceError("line integral: integrand does not decay along the contour", 0.0);
}

LineIntegral LineIntegrator::trapezoid(const Function& g, bool symmetric, const DecayModel& decay,
                                       const BigReal& tol) const
{
    const BigReal& c = contour_.abscissa_c;
    BigReal pi = const_pi();
    double strip = std::max(decay.strip, 0.05) * 0.9;
    // Canonical base step for this precision; every grid used is a dyadic
    // multiple of it, so memoized samples are reused across calls.
    BigReal h_base = 2 * pi * BigReal(strip) / BigReal(bits_ * kLn2 + 12);
    double scale = std::max(-1e6, log2_abs(abs(sample_f(BigReal(0)) * g(BigComplex(c))))) * kLn2;
    double ln_ratio = std::max(scale - log2_abs(tol) * kLn2, 8.0) + 8;
    double h_want = 2 * kPi * strip / ln_ratio;
    int level = static_cast<int>(std::floor(std::log2(h_want / to_double(h_base))));
    level = std::max(level, -4);

    BigReal step = h_base * pow2(level);
    BigReal height = choose_height(g, symmetric, decay, tol, step);
    while (2 * height / step < contour_.nodes) {
        --level;
        step = h_base * pow2(level);
    }

    auto integrand = [&](long long k, int lev) {
        BigReal t = grid_point(h_base, k, lev);
        return sample_f(t) * g(BigComplex(c, t));
    };

    LineIntegral out;
    out.height = height;
    for (int refinement = 0; refinement < 6; ++refinement, --level) {
        step = h_base * pow2(level);
        auto kmax = static_cast<long long>(to_double(ceil(height / step)));
        BigComplex fine, coarse;
        BigReal l1 = 0;
        std::size_t evals = 0;
        if (symmetric) {
            for (long long k = 0; k <= kmax; ++k) {
                BigComplex v = integrand(k, level);
                BigReal wgt = k == 0 ? BigReal(1) : BigReal(2);
                fine.re += wgt * v.re;
                if (k % 2 == 0)
                    coarse.re += wgt * v.re;
                l1 += wgt * abs(v);
                ++evals;
            }
        } else {
            for (long long k = -kmax; k <= kmax; ++k) {
                BigComplex v = integrand(k, level);
                fine += v;
                if (k % 2 == 0)
                    coarse += v;
                l1 += abs(v);
                ++evals;
            }
        }
        BigReal unit = step / (2 * pi);
        fine *= unit;
        coarse *= 2 * unit;
        l1 *= unit;
        BigReal diff = abs(fine - coarse);
        BigReal edge = abs(integrand(kmax, level));
        if (!symmetric) {
            BigReal e2 = abs(integrand(-kmax, level));
            if (e2 > edge)
                edge = e2;
        }
        BigReal truncation = 2 * edge / (2 * pi * BigReal(std::max(decay.rate, 0.05)));
        BigReal rounding = l1 * BigReal(static_cast<double>(evals)) * pow2(-static_cast<long>(bits_) + 4);
        out.value = fine;
        out.step = step;
        out.evaluations = evals;
        // In the exponentially convergent regime the error at step h is about
        // the square of the error at 2h relative to the integrand's size.
        bool asymptotic = l1 == 0 || diff <= l1 * BigReal(1e-3);
        BigReal discretization = l1 == 0 ? BigReal(0) : BigReal(10 * diff * diff / l1);
        out.error_estimate = discretization + truncation + rounding;
        if (asymptotic && out.error_estimate <= tol)
            return out;
    }
    throw ConvergenceError("line integral: trapezoid refinements disagree",
                           log2_abs(out.error_estimate) * std::log10(2.0));
}

LineIntegral LineIntegrator::gauss_legendre(const Function& g, bool symmetric, const DecayModel& decay,
                                            const BigReal& tol) const
{
    const BigReal& c = contour_.abscissa_c;
    BigReal pi = const_pi();
    double strip = std::max(decay.strip, 0.05) * 0.9;
    double scale = std::max(-1e6, log2_abs(abs(sample_f(BigReal(0)) * g(BigComplex(c))))) * kLn2;
    double ln_ratio = std::max(scale - log2_abs(tol) * kLn2, 8.0) + 8;
    double width = std::min(1.0, 2 * strip);
    BigReal height = choose_height(g, symmetric, decay, tol, BigReal(width));
    double rho = 2 * strip / width + std::sqrt(4 * strip * strip / (width * width) + 1);
    auto m = static_cast<unsigned>(std::ceil(ln_ratio / (2 * std::log(rho)))) + 2;
    auto rule = gauss_rule(m, bits_);

    auto panels_sum = [&](long long panels, BigReal& l1, std::size_t& evals) {
        BigReal lo = symmetric ? BigReal(0) : BigReal(-height);
        BigReal w = (height - lo) / BigReal(panels);
        BigComplex total;
        l1 = 0;
        for (long long p = 0; p < panels; ++p) {
            BigReal mid = lo + w * (BigReal(p) + BigReal(0.5));
            for (unsigned i = 0; i < m; ++i) {
                BigReal t = mid + w / 2 * rule->x[i];
                BigComplex v = sample_f(t) * g(BigComplex(c, t)) * (rule->w[i] * w / 2);
                l1 += abs(v);
                ++evals;
                if (symmetric)
                    total.re += 2 * v.re;
                else
                    total += v;
            }
        }
        if (symmetric)
            l1 *= 2;
        return total / (2 * pi);
    };

    auto panels = static_cast<long long>(std::ceil(to_double(height) / width));
    panels = std::max<long long>(panels, (contour_.nodes + m - 1) / m / (symmetric ? 2 : 1));
    LineIntegral out;
    out.height = height;
    std::size_t evals = 0;
    BigReal l1;
    BigComplex previous = panels_sum(panels, l1, evals);
    for (int refinement = 0; refinement < 5; ++refinement) {
        panels *= 2;
        BigComplex current = panels_sum(panels, l1, evals);
        BigReal diff = abs(current - previous);
        BigReal rounding = l1 * BigReal(static_cast<double>(evals)) * pow2(-static_cast<long>(bits_) + 4);
        out.value = current;
        out.step = height / BigReal(panels);
        out.evaluations = evals;
        out.error_estimate = diff + rounding;
        if (out.error_estimate <= tol)
            return out;
        previous = current;
    }
    throw ConvergenceError("line integral: Gauss-Legendre refinements disagree",
                           log2_abs(out.error_estimate) * std::log10(2.0));
}

// ---------------------------------------------------------------------------
// Mellin-Barnes representations

BigComplex mellin_barnes_K(const BigComplex& order, const BigComplex& x, const ContourSpec& contour,
                           const PrecisionContext& ctx)
{
    contour.validate();
    if (!(contour.abscissa_c > abs(order.re)))
        throw DomainError("mellin_barnes_K: contour must lie right of |Re(order)|");
    if (!(x.re > 0))
        throw DomainError("mellin_barnes_K: requires Re(x) > 0");
    unsigned bits = ctx.working_bits() + 16;
    ScopedPrecision guard(bits);
    BigComplex nu = order;
    auto f = [nu, bits](const BigComplex& s) {
        BigComplex half(BigReal(0.5));
        BigComplex a = complex_gamma((s - nu) * half, bits);
        BigComplex b = complex_gamma((s + nu) * half, bits);
        BigComplex two_pow = exp((s - BigComplex(BigReal(2))) * BigComplex(const_log2()));
        return a * b * two_pow;
    };
    BigComplex log_x = log(x);
    auto g = [log_x](const BigComplex& s) { return exp(-s * log_x); };
    bool order_real = order.im == 0;
    bool x_real = x.im == 0;
    LineIntegrator integrator(f, order_real, contour, bits);
    DecayModel decay;
    decay.rate = kPi / 2 - std::abs(to_double(arg(x)));
    decay.power = to_double(contour.abscissa_c) - 1;
    decay.strip = to_double(contour.abscissa_c - abs(order.re));
    if (!(decay.rate > 0))
        throw DomainError("mellin_barnes_K: |arg x| must be below pi/2");
    return integrator.integrate(g, x_real, decay, ctx.series_tail_eps()).value;
}

BigComplex reduced_gamma_factor(unsigned r1, unsigned r2, const BigComplex& s, unsigned bits)
{
    ScopedPrecision guard(bits);
    unsigned d = r1 + 2 * r2;
    BigReal pi = const_pi();
    BigComplex gamma = complex_gamma(s, bits);
    BigComplex v = pow(gamma, static_cast<long long>(d));
    BigComplex half_angle = s * (pi / 2);
    if (r2 > 0)
        v *= pow(sin(half_angle) * (2 / pi), static_cast<long long>(r2));
    if (r1 + r2 > 1)
        v *= pow(cos(half_angle), static_cast<long long>(r1 + r2 - 1));
    return v;
}

DecayModel reduced_gamma_decay(unsigned r1, unsigned r2, const BigReal& c, const BigComplex& x)
{
    // |Gamma(c+it)|^d ~ |t|^{d(c-1/2)} e^{-d pi |t|/2}; the d-1 trigonometric
    // factors give back e^{(d-1) pi |t|/2}; |x^{-s}| carries e^{t arg x}.
    unsigned d = r1 + 2 * r2;
    DecayModel m;
    m.rate = kPi / 2 - std::abs(to_double(arg(x)));
    m.power = d * (to_double(c) - 0.5);
    m.strip = to_double(c);
    return m;
}

BigReal meijer_G_term(const FieldDescriptor& field, const BigReal& x, std::int64_t j, const ContourSpec& contour,
                      const PrecisionContext& ctx)
{
    if (!(x > 0))
        throw DomainError("meijer_G_term: requires x > 0");
    if (j < 1)
        throw DomainError("meijer_G_term: requires j >= 1");
    contour.validate();
    unsigned r1 = field.r1(), r2 = field.r2();
    unsigned bits = ctx.working_bits() + 16;

    // One integrator (and its memoized gamma samples) per signature, line and precision.
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<LineIntegrator>> cache;
    std::shared_ptr<LineIntegrator> integrator;
    {
        std::ostringstream key;
        key << r1 << ',' << r2 << ',' << to_decimal(contour.abscissa_c, 30) << ','
            << (contour.height_T ? to_decimal(*contour.height_T, 30) : std::string("auto")) << ','
            << contour.nodes << ',' << static_cast<int>(contour.rule) << ',' << bits;
        std::lock_guard lock(mutex);
        auto& slot = cache[key.str()];
        if (!slot) {
            auto f = [r1, r2, bits](const BigComplex& s) { return reduced_gamma_factor(r1, r2, s, bits); };
            slot = std::make_shared<LineIntegrator>(f, true, contour, bits);
        }
        integrator = slot;
    }
    ScopedPrecision guard(bits);
    BigReal y = x * BigReal(j);
    BigReal log_y = log(y);
    auto g = [log_y](const BigComplex& s) { return exp(-s * log_y); };
    BigReal prefactor = pow2(static_cast<long>(r1 + r2) - 1) * pow(const_pi(), 1 - BigReal(r1) / 2);
    DecayModel decay = reduced_gamma_decay(r1, r2, contour.abscissa_c, BigComplex(y));
    BigReal tol = ctx.series_tail_eps() / prefactor;
    LineIntegral r = integrator->integrate(g, true, decay, tol);
    return prefactor * r.value.re;
}

}  // namespace zetaforge
