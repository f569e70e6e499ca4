#include "zetaforge/kernel.hpp"

#include "zetaforge/errors.hpp"
#include "zetaforge/zeta.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace zetaforge {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

double to_double(const BigReal& x) { return static_cast<double>(x); }

double log_of(const BigReal& x) { return log2_abs(x) * kLn2; }

void require_right_half_plane(const BigComplex& x, const char* who)
{
    if (!(x.re > 0))
        throw DomainError(std::string(who) + ": requires Re(argument) > 0");
}

KernelMethod resolve_method(const FieldDescriptor& field, std::optional<KernelMethod> force)
{
    KernelMethod natural = default_method(field);
    if (!force)
        return natural;
    if (*force == KernelMethod::MellinBarnes || *force == natural)
        return *force;
    throw DomainError("kernel: method " + method_name(*force) + " does not apply to " + field.label());
}

std::string field_key(const FieldDescriptor& f)
{
    std::ostringstream k;
    k << f.label() << '|' << f.r1() << ',' << f.r2() << '|' << f.disc_signed() << '|' << f.disc_abs();
    if (const auto* t = std::get_if<ExternalTable>(&f.coefficient_source()))
        k << '|' << t->path << '@' << static_cast<const void*>(t->coefficients.get());
    return k.str();
}

// ---------------------------------------------------------------------------
// Quadratic fields: K_0 sums
//
// k(u) = K0(2 eps sqrt u) + K0(2 conj(eps) sqrt u)          (real quadratic)
// k(u) = (2i/pi) [K0(2 eps sqrt u) - K0(2 conj(eps) sqrt u)] (imaginary quadratic)
// with eps = e^{i pi/4}, and
// sum_N coef(N) k(N u0) for coefficients with |coef(N)| <= A N^p.

struct BesselSum {
    BigComplex value;
    BigReal error_bound;
    std::int64_t terms = 0;
};

class QuadraticKernelSum {
public:
    QuadraticKernelSum(bool imaginary, const BigComplex& u0, const PrecisionContext& ctx)
        : imaginary_(imaginary), ctx_(ctx)
    {
        BigReal r = sqrt(BigReal(2)) / 2;
        BigComplex eps(r, r);
        BigComplex root = sqrt(u0);
        w1_ = eps * root * BigReal(2);
        w2_ = conj(eps) * root * BigReal(2);
        real_axis_ = u0.im == 0;
        rho_ = to_double(w1_.re < w2_.re ? w1_.re : w2_.re);
        prefactor_ = imaginary ? 2 / kPi : 1.0;
    }

    /// Smallest M whose tail bound is below `target` (natural log).
    std::int64_t truncation(double amplitude, double power, double log_target) const
    {
        double q = 2 * power + 0.5;
        double lead = std::log(4 * amplitude * prefactor_ * std::sqrt(kPi / (2 * rho_)));
        double v = std::max(1.0, (q + 1) / rho_);
        while (lead + log_tail_integral(q, rho_, v) > log_target)
            v *= 1.05;
        return static_cast<std::int64_t>(std::ceil(v * v));
    }

    double log_tail(double amplitude, double power, std::int64_t m) const
    {
        double q = 2 * power + 0.5;
        double lead = std::log(4 * amplitude * prefactor_ * std::sqrt(kPi / (2 * rho_)));
        return lead + log_tail_integral(q, rho_, std::sqrt(static_cast<double>(m)));
    }

    /// coef(N) for N = 1..M must be supplied; zero coefficients are skipped.
    BesselSum sum(const std::vector<BigReal>& coef, double amplitude, double power) const
    {
        BigReal tail_eps = ctx_.series_tail_eps();
        std::int64_t m = static_cast<std::int64_t>(coef.size()) - 1;
        BigReal coef_total = 0;
        for (std::int64_t n = 1; n <= m; ++n)
            coef_total += abs(coef[static_cast<std::size_t>(n)]);
        BigReal term_eps = tail_eps / (4 * (coef_total + 1));
        BigComplex acc;
        for (std::int64_t n = 1; n <= m; ++n) {
            const BigReal& cn = coef[static_cast<std::size_t>(n)];
            if (cn == 0)
                continue;
            acc += evaluate(BigReal(n), term_eps) * cn;
        }
        BesselSum out;
        out.value = acc;
        double lt = log_tail(amplitude, power, m);
        BigReal tail = lt < -1e6 ? BigReal(0) : BigReal(exp(BigReal(lt)));
        out.error_bound = tail + 2 * BigReal(prefactor_) * term_eps * coef_total;
        out.terms = m;
        return out;
    }

    BigComplex evaluate(const BigReal& n, const BigReal& eps) const
    {
        BigReal root_n = sqrt(n);
        BigComplex a = bessel_K0(w1_ * root_n, eps);
        BigComplex b = real_axis_ ? conj(a) : bessel_K0(w2_ * root_n, eps);
        if (!imaginary_)
            return a + b;
        return imag_unit() * (a - b) * (2 / const_pi());
    }

    double rho() const { return rho_; }

private:
    bool imaginary_;
    const PrecisionContext& ctx_;
    BigComplex w1_, w2_;
    bool real_axis_ = false;
    double rho_ = 0;
    double prefactor_ = 1;
};

KernelSeriesResult omega_bessel(const FieldDescriptor& field, const BigComplex& x, const PrecisionContext& ctx)
{
    bool imaginary = field.r2() == 1;
    QuadraticKernelSum kernel(imaginary, x, ctx);
    // V(j) <= tau(j) <= 2 sqrt(j)
    const double amplitude = 2, power = 0.5;
    double log_target = log_of(ctx.series_tail_eps()) - std::log(2.0);
    std::int64_t m = kernel.truncation(amplitude, power, log_target);
    IdealCounts counts(field);
    auto v = counts.prefix(m);
    std::vector<BigReal> coef(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        coef[j] = BigReal(v[j]);
    BesselSum s = kernel.sum(coef, amplitude, power);
    KernelSeriesResult r;
    r.value = s.value;
    r.truncation_error_bound = s.error_bound;
    r.terms_used = s.terms;
    r.method = imaginary ? KernelMethod::BesselImagQuad : KernelMethod::BesselRealQuad;
    return r;
}

/// c(N) = sum_{n | N} V(n) n^a V(N/n) for N <= m.
std::vector<BigReal> convolved_coefficients(const FieldDescriptor& field, long a, std::int64_t m)
{
    IdealCounts counts(field);
    auto v = counts.prefix(m);
    std::vector<BigReal> c(static_cast<std::size_t>(m) + 1, BigReal(0));
    for (std::int64_t n = 1; n <= m; ++n) {
        if (v[static_cast<std::size_t>(n)] == 0)
            continue;
        BigReal weight = BigReal(v[static_cast<std::size_t>(n)]) * pow(BigReal(n), a);
        for (std::int64_t j = 1; n * j <= m; ++j) {
            auto vj = v[static_cast<std::size_t>(j)];
            if (vj != 0)
                c[static_cast<std::size_t>(n * j)] += weight * vj;
        }
    }
    return c;
}

KernelSeriesResult lambert_bessel(const FieldDescriptor& field, long a, const BigComplex& y,
                                  const PrecisionContext& ctx)
{
    bool imaginary = field.r2() == 1;
    BigComplex u0 = y / BigReal(field.disc_abs());
    QuadraticKernelSum kernel(imaginary, u0, ctx);
    // |c(N)| <= sum_{n|N} 2 sqrt(n) n^a 2 sqrt(N/n) <= 4 sqrt(N) tau(N) N^{max(a,0)} <= 8 N^{1 + max(a,0)}
    const double amplitude = 8;
    const double power = 1.0 + std::max(0L, a);
    double log_target = log_of(ctx.series_tail_eps()) - std::log(2.0);
    std::int64_t m = kernel.truncation(amplitude, power, log_target);
    auto coef = convolved_coefficients(field, a, m);
    BesselSum s = kernel.sum(coef, amplitude, power);
    KernelSeriesResult r;
    r.value = s.value;
    r.truncation_error_bound = s.error_bound;
    r.terms_used = s.terms;
    r.method = imaginary ? KernelMethod::BesselImagQuad : KernelMethod::BesselRealQuad;
    return r;
}

// ---------------------------------------------------------------------------
// Q: 1/(e^x - 1)

BigComplex omega_rational(const BigComplex& x)
{
    return BigComplex(BigReal(1)) / (exp(x) - BigComplex(BigReal(1)));
}

KernelSeriesResult lambert_rational(long a, const BigComplex& y, const PrecisionContext& ctx)
{
    // |1/(e^w - 1)| <= e^{-rho}/(1 - e^{-rho}) with rho = Re w. For n > M the
    // majorant n^a e^{-n rho} falls at least by r = (1 + 1/(M+1))^{max(a,0)} e^{-rho}.
    double rho = to_double(y.re);
    double log_target = log_of(ctx.series_tail_eps());
    double ap = static_cast<double>(std::max(0L, a));
    std::int64_t m = 1;
    double log_bound = 0;
    for (;; ++m) {
        double n1 = static_cast<double>(m + 1);
        double r = std::exp(ap * std::log1p(1 / n1) - rho);
        if (r < 1) {
            log_bound = a * std::log(n1) - n1 * rho - std::log1p(-std::exp(-rho * n1)) - std::log1p(-r);
            if (log_bound <= log_target)
                break;
        }
        if (m > 100000000)
            throw ConvergenceError("lambert_series: Re(y) too small for the term budget", log_bound / std::log(10.0));
    }
    BigComplex acc;
    for (std::int64_t n = 1; n <= m; ++n) {
        BigReal nn(n);
        acc += omega_rational(y * nn) * pow(nn, a);
    }
    KernelSeriesResult res;
    res.value = acc;
    res.truncation_error_bound = exp(BigReal(log_bound));
    res.terms_used = m;
    res.method = KernelMethod::ClosedFormQ;
    return res;
}

// ---------------------------------------------------------------------------
// Any field: sum V(n) n^a Omega(n y / D) with Omega from the Mellin-Barnes line.
// No a-priori tail bound is available here, so stopping is empirical: three
// consecutive nonzero terms below tail_eps/4, then a recheck over [M, 2M].

KernelSeriesResult lambert_mellin_barnes(const FieldDescriptor& field, long a, const BigComplex& y,
                                         const PrecisionContext& ctx)
{
    auto kernel = MellinBarnesKernel::shared(field, ctx);
    IdealCounts counts(field);
    BigReal quarter = ctx.series_tail_eps() / 4;
    BigComplex u0 = y / BigReal(field.disc_abs());
    BigComplex acc;
    BigReal quad_error = 0;
    int quiet = 0;
    std::int64_t n = 1;
    auto term = [&](std::int64_t k) {
        std::int64_t v = counts(k);
        if (v == 0)
            return std::optional<BigComplex>();
        BigReal weight = BigReal(v) * pow(BigReal(k), a);
        KernelSeriesResult om = kernel->omega(u0 * BigReal(k));
        quad_error += abs(weight) * om.truncation_error_bound;
        return std::optional<BigComplex>(om.value * weight);
    };
    for (;; ++n) {
        auto t = term(n);
        if (!t)
            continue;
        acc += *t;
        quiet = abs(*t) < quarter ? quiet + 1 : 0;
        if (quiet >= 3)
            break;
        if (n > 1000000)
            throw ConvergenceError("lambert_series: Mellin-Barnes series did not settle",
                                   log2_abs(abs(*t)) * std::log10(2.0));
    }
    BigComplex extra;
    for (std::int64_t k = n + 1; k <= 2 * n; ++k) {
        if (auto t = term(k))
            extra += *t;
    }
    KernelSeriesResult r;
    r.value = acc + extra;
    r.truncation_error_bound = 2 * abs(extra) + quad_error;
    r.terms_used = 2 * n;
    r.method = KernelMethod::MellinBarnes;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string method_name(KernelMethod m)
{
    switch (m) {
    case KernelMethod::ClosedFormQ:
        return "closed-form-q";
    case KernelMethod::BesselRealQuad:
        return "bessel-real-quadratic";
    case KernelMethod::BesselImagQuad:
        return "bessel-imaginary-quadratic";
    case KernelMethod::MellinBarnes:
        return "mellin-barnes";
    }
    return "unknown";
}

std::optional<KernelMethod> parse_method(const std::string& name)
{
    for (KernelMethod m : {KernelMethod::ClosedFormQ, KernelMethod::BesselRealQuad, KernelMethod::BesselImagQuad,
                           KernelMethod::MellinBarnes}) {
        if (name == method_name(m))
            return m;
    }
    return std::nullopt;
}

KernelMethod default_method(const FieldDescriptor& field)
{
    if (field.is_rational())
        return KernelMethod::ClosedFormQ;
    if (field.is_quadratic())
        return field.r2() == 0 ? KernelMethod::BesselRealQuad : KernelMethod::BesselImagQuad;
    return KernelMethod::MellinBarnes;
}

double log_tail_integral(double q, double rho, double v)
{
    if (!(rho * v > q))
        return std::numeric_limits<double>::infinity();
    return q * std::log(v) - rho * v - std::log(rho - q / v);
}

KernelSeriesResult omega(const FieldDescriptor& field, const BigComplex& x, const PrecisionContext& ctx,
                         std::optional<KernelMethod> force)
{
    require_right_half_plane(x, "omega");
    KernelMethod method = resolve_method(field, force);
    if (method == KernelMethod::MellinBarnes)
        return MellinBarnesKernel::shared(field, ctx)->omega(x);
    if (method == KernelMethod::ClosedFormQ) {
        // e^x - 1 loses about log2(1/|x|) bits for small x.
        double small = std::max(0.0, -log2_abs(abs(x)));
        ScopedPrecision guard(ctx.working_bits() + static_cast<unsigned>(small) + 8);
        KernelSeriesResult r;
        r.value = omega_rational(x);
        r.truncation_error_bound = 0;
        r.terms_used = 1;
        r.method = method;
        return r;
    }
    ScopedPrecision guard(ctx.working_bits());
    return omega_bessel(field, x, ctx);
}

KernelSeriesResult lambert_series(const FieldDescriptor& field, long a, const BigComplex& y,
                                  const PrecisionContext& ctx, std::optional<KernelMethod> force)
{
    require_right_half_plane(y, "lambert_series");
    KernelMethod method = resolve_method(field, force);
    if (method == KernelMethod::MellinBarnes)
        return lambert_mellin_barnes(field, a, y, ctx);
    ScopedPrecision guard(ctx.working_bits());
    if (method == KernelMethod::ClosedFormQ)
        return lambert_rational(a, y, ctx);
    return lambert_bessel(field, a, y, ctx);
}

// ---------------------------------------------------------------------------

MellinBarnesKernel::MellinBarnesKernel(const FieldDescriptor& field, const PrecisionContext& ctx)
    : field_(field), ctx_(ctx)
{
    field.validate();
    ctx.validate();
    if (field.degree() > ctx.max_general_degree())
        throw DomainError("omega: degree " + std::to_string(field.degree()) +
                          " exceeds the Mellin-Barnes cap of " + std::to_string(ctx.max_general_degree()) +
                          " (raise max_general_degree to allow it)");
    unsigned bits = ctx.working_bits() + 16;
    unsigned r1 = field.r1(), r2 = field.r2();
    FieldDescriptor f = field;
    PrecisionContext zc = ctx;
    auto sample = [f, zc, r1, r2, bits](const BigComplex& s) {
        BigComplex z = dedekind_zeta(f, s, zc);
        return z * reduced_gamma_factor(r1, r2, s, bits);
    };
    integrator_ = std::make_unique<LineIntegrator>(sample, true, ContourSpec::from_context(ctx), bits);
}

KernelSeriesResult MellinBarnesKernel::omega(const BigComplex& x) const
{
    require_right_half_plane(x, "omega");
    ScopedPrecision guard(integrator_->bits());
    const BigReal& c = integrator_->contour().abscissa_c;
    DecayModel decay = reduced_gamma_decay(field_.r1(), field_.r2(), c, x);
    // zeta_K has its pole at s = 1, cancelled by cos(pi s/2) once r1 + r2 >= 2.
    decay.strip = to_double(field_.r1() + field_.r2() >= 2 ? c : BigReal(c - 1));
    BigComplex log_x = log(x);
    auto g = [log_x](const BigComplex& s) { return exp(-s * log_x); };
    LineIntegral li = integrator_->integrate(g, x.im == 0, decay, ctx_.series_tail_eps());
    KernelSeriesResult r;
    r.value = li.value;
    r.truncation_error_bound = li.error_estimate;
    r.terms_used = static_cast<std::int64_t>(li.evaluations);
    r.method = KernelMethod::MellinBarnes;
    return r;
}

std::shared_ptr<const MellinBarnesKernel> MellinBarnesKernel::shared(const FieldDescriptor& field,
                                                                     const PrecisionContext& ctx)
{
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const MellinBarnesKernel>> cache;
    std::ostringstream key;
    key << field_key(field) << '#' << ctx.working_bits() << '#' << ctx.target_digits() << '#'
        << to_decimal(ctx.quad_line_c(), 30) << '#'
        << (ctx.quad_height_T() ? to_decimal(*ctx.quad_height_T(), 30) : std::string("auto")) << '#'
        << ctx.quad_nodes() << '#' << ctx.max_general_degree() << '#' << to_decimal(ctx.series_tail_eps(), 10);
    std::lock_guard lock(mutex);
    auto& slot = cache[key.str()];
    if (!slot)
        slot = std::make_shared<const MellinBarnesKernel>(field, ctx);
    return slot;
}

}  // namespace zetaforge
