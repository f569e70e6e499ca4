#include "zetaforge/identities.hpp"

#include "zetaforge/errors.hpp"
#include "zetaforge/zeta.hpp"

#include <algorithm>
#include <cmath>

namespace zetaforge {

namespace {

struct NamedIdentity {
    IdentityId id;
    const char* name;
};

constexpr NamedIdentity kIdentityNames[] = {
    {IdentityId::RamanujanNF, "ramanujan-nf"},
    {IdentityId::RamanujanClassical, "ramanujan-classical"},
    {IdentityId::LerchClassical, "lerch-classical"},
    {IdentityId::LerchNF, "lerch-nf"},
    {IdentityId::EisensteinSymm, "eisenstein-symm"},
    {IdentityId::SeriesEvaluation, "series-evaluation"},
    {IdentityId::QuasiModular, "quasimodular"},
    {IdentityId::EtaLog, "eta-log"},
    {IdentityId::EisensteinTransform, "eisenstein-transform"},
};

unsigned echo_digits(const PrecisionContext& ctx) { return ctx.target_digits() + 5; }

std::string echo(const BigReal& x, const PrecisionContext& ctx) { return to_decimal(x, echo_digits(ctx)); }
std::string echo(const BigComplex& z, const PrecisionContext& ctx)
{
    if (z.im == 0)
        return echo(z.re, ctx);
    return to_decimal(z, echo_digits(ctx));
}

BigComplex real(const BigReal& x) { return BigComplex(x); }

// Collects the error budget of the series that enter one report.
class Budget {
public:
    void add(const std::string& label, const KernelSeriesResult& r, const BigReal& weight)
    {
        report_.push_back({label, method_name(r.method), r.terms_used, r.truncation_error_bound});
        floor_ += weight * r.truncation_error_bound;
    }
    void add_raw(const std::string& label, const std::string& method, std::int64_t terms, const BigReal& bound,
                 const BigReal& weight)
    {
        report_.push_back({label, method, terms, bound});
        floor_ += weight * bound;
    }
    const BigReal& floor() const { return floor_; }
    std::vector<SeriesDiagnostic>& report() { return report_; }

private:
    BigReal floor_ = 0;
    std::vector<SeriesDiagnostic> report_;
};

VerificationReport start(IdentityId id, const std::string& label)
{
    VerificationReport r;
    r.identity = id;
    r.field_label = label;
    return r;
}

void finish(VerificationReport& r, Budget& budget, const PrecisionContext& ctx)
{
    BigReal mag = abs(r.lhs);
    r.abs_residual = abs(r.lhs - r.rhs);
    r.rel_residual = mag > 0 ? BigReal(r.abs_residual / mag) : r.abs_residual;
    r.tolerance = std::max(BigReal(1000 * ctx.target_eps()), budget.floor());
    r.passed = (mag > 1 ? r.rel_residual : r.abs_residual) <= r.tolerance;
    r.terms_report = std::move(budget.report());
}

// zeta_K(n) for any integer n != 1.
BigReal zeta_at(const FieldDescriptor& field, long n, const PrecisionContext& ctx)
{
    if (n == 1)
        throw DomainError("zeta_K has a pole at s = 1");
    if (n <= 0)
        return dedekind_zeta_nonpositive(field, static_cast<int>(n), ctx);
    if (n % 2 == 0)
        return zeta_even_positive(field, static_cast<unsigned>(n / 2), ctx);
    return dedekind_zeta(field, real(make_real(n)), ctx).re;
}

// Riemann zeta(n) from Bernoulli numbers where possible.
BigReal classical_zeta(long n, const PrecisionContext& ctx)
{
    if (n == 1)
        throw DomainError("zeta has a pole at s = 1");
    if (n == 0)
        return BigReal(-1) / 2;
    if (n < 0)
        return make_real(Rational(-bernoulli(static_cast<unsigned>(1 - n)) / (1 - n)));
    if (n % 2 == 0)
        return riemann_zeta_even(static_cast<unsigned>(n / 2), ctx);
    return riemann_zeta(real(make_real(n)), ctx).re;
}

// sum_{n>=1} n^a / (e^{n x} - 1), Re x > 0, with a geometric tail bound.
KernelSeriesResult exponential_lambert(long a, const BigComplex& x, const PrecisionContext& ctx)
{
    if (x.re <= 0)
        throw DomainError("exponential Lambert series needs Re(x) > 0");
    double rho = static_cast<double>(x.re);
    double log_eps = std::log(static_cast<double>(ctx.series_tail_eps()));
    double ap = static_cast<double>(std::max(a, 0L));
    KernelSeriesResult out;
    out.method = KernelMethod::ClosedFormQ;
    BigComplex one(BigReal(1));
    for (std::int64_t n = 1;; ++n) {
        BigComplex q = exp(-x * make_real(n));
        out.value += q / (one - q) * pow(make_real(n), a);
        // Tail from n + 1 on: |term| <= k^a e^{-k rho} / (1 - e^{-k rho}), ratio <= ((k+1)/k)^{max(a,0)} e^{-rho}.
        double k = static_cast<double>(n + 1);
        double log_ratio = ap * std::log1p(1.0 / k) - rho;
        if (log_ratio >= 0)
            continue;
        double log_tail = static_cast<double>(a) * std::log(k) - k * rho - std::log1p(-std::exp(log_ratio)) -
                          std::log1p(-std::exp(-k * rho));
        if (log_tail <= log_eps || n > 10000000) {
            out.terms_used = n;
            out.truncation_error_bound = exp(BigReal(log_tail));
            return out;
        }
    }
}

// Omega-series S(x) = sum V(n) n^a Omega(2^d n x / D).
KernelSeriesResult omega_series(const FieldDescriptor& field, long a, const BigComplex& x, const PrecisionContext& ctx)
{
    return lambert_series(field, a, x * pow2(field.degree()), ctx);
}

BigReal pi_power(long e) { return pow(const_pi(), e); }

}  // namespace

std::string identity_name(IdentityId id)
{
    for (const auto& n : kIdentityNames)
        if (n.id == id)
            return n.name;
    return "unknown";
}

std::optional<IdentityId> parse_identity(const std::string& name)
{
    for (const auto& n : kIdentityNames)
        if (name == n.name)
            return n.id;
    return std::nullopt;
}

const std::vector<IdentityId>& all_identities()
{
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const auto& n : kIdentityNames)
            v.push_back(n.id);
        return v;
    }();
    return ids;
}

bool VerificationReport::operator==(const VerificationReport& o) const
{
    return identity == o.identity && field_label == o.field_label && params == o.params && lhs == o.lhs &&
           rhs == o.rhs && abs_residual == o.abs_residual && rel_residual == o.rel_residual &&
           tolerance == o.tolerance && passed == o.passed && terms_report == o.terms_report &&
           diagnostics == o.diagnostics;
}

BigComplex dual_parameter(const FieldDescriptor& field, const BigComplex& alpha)
{
    if (alpha.re <= 0)
        throw DomainError("alpha must have positive real part");
    BigComplex beta = real(pi_power(2 * static_cast<long>(field.degree()))) / alpha;
    if (beta.re <= 0)
        throw DomainError("beta = pi^{2d}/alpha must have positive real part");
    return beta;
}

// ---------------------------------------------------------------------------

VerificationReport verify_ramanujan_nf(const FieldDescriptor& field, long m, const BigComplex& alpha,
                                       const PrecisionContext& ctx)
{
    if (m == 0)
        throw DomainError("ramanujan-nf is stated for m != 0 (use eta-log for the m = 0 analogue)");
    ScopedPrecision guard(ctx.working_bits());
    BigComplex beta = dual_parameter(field, alpha);
    long d = field.degree();
    BigReal H = residue_H(field, ctx);
    BigReal C = constant_C(field, ctx);
    BigReal zodd = zeta_at(field, 2 * m + 1, ctx);

    auto sa = omega_series(field, -2 * m - 1, alpha, ctx);
    auto sb = omega_series(field, -2 * m - 1, beta, ctx);
    BigComplex wa = pow(alpha, -m);
    BigComplex wb = pow(-beta, -m);

    // Empty for m <= -2.
    BigComplex finite;
    for (long j = 0; j <= m + 1; ++j) {
        BigReal zz = zeta_at(field, 2 * j, ctx) * zeta_at(field, 2 * m - 2 * j + 2, ctx);
        BigComplex t = pow(alpha, m + 1 - j) * pow(beta, j) * zz;
        finite += (m + j) % 2 == 0 ? t : -t;
    }
    finite /= pi_power((2 * m + 1) * d + 1);

    VerificationReport r = start(IdentityId::RamanujanNF, field.label());
    r.params = {{"m", std::to_string(m)}, {"alpha", echo(alpha, ctx)}, {"beta", echo(beta, ctx)}};
    BigComplex half_zeta(H * zodd / 2);
    r.lhs = wa * (half_zeta + sa.value * C);
    r.rhs = wb * (half_zeta + sb.value * C) + finite;
    r.diagnostics = {{"zeta_odd", echo(zodd, ctx)},
                     {"alpha_series", echo(sa.value, ctx)},
                     {"beta_series", echo(sb.value, ctx)},
                     {"finite_sum", echo(finite, ctx)}};
    Budget b;
    b.add("alpha", sa, abs(wa) * C);
    b.add("beta", sb, abs(wb) * C);
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_ramanujan_classical(long m, const BigComplex& alpha, const PrecisionContext& ctx)
{
    if (m == 0)
        throw DomainError("ramanujan-classical is stated for m != 0");
    ScopedPrecision guard(ctx.working_bits());
    FieldDescriptor q = FieldDescriptor::rationals();
    BigComplex beta = dual_parameter(q, alpha);
    BigReal zodd = classical_zeta(2 * m + 1, ctx);
    auto sa = exponential_lambert(-2 * m - 1, alpha * BigReal(2), ctx);
    auto sb = exponential_lambert(-2 * m - 1, beta * BigReal(2), ctx);
    BigComplex wa = pow(alpha, -m);
    BigComplex wb = pow(-beta, -m);

    BigComplex finite;
    for (long j = 0; j <= m + 1; ++j) {
        BigReal zz = classical_zeta(2 * j, ctx) * classical_zeta(2 * m - 2 * j + 2, ctx);
        BigComplex t = pow(alpha, m + 1 - j) * pow(beta, j) * zz;
        finite += (m + j) % 2 == 0 ? t : -t;
    }
    finite /= pi_power(2 * m + 2);

    VerificationReport r = start(IdentityId::RamanujanClassical, q.label());
    r.params = {{"m", std::to_string(m)}, {"alpha", echo(alpha, ctx)}, {"beta", echo(beta, ctx)}};
    BigComplex half_zeta(zodd / 2);
    r.lhs = wa * (half_zeta + sa.value);
    r.rhs = wb * (half_zeta + sb.value) + finite;
    r.diagnostics = {{"zeta_odd", echo(zodd, ctx)},
                     {"alpha_series", echo(sa.value, ctx)},
                     {"beta_series", echo(sb.value, ctx)},
                     {"finite_sum", echo(finite, ctx)}};
    Budget b;
    b.add("alpha", sa, abs(wa));
    b.add("beta", sb, abs(wb));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_lerch_classical(long m, const PrecisionContext& ctx)
{
    if (m < 0)
        throw DomainError("lerch-classical is stated for m >= 0");
    ScopedPrecision guard(ctx.working_bits());
    long top = 4 * m + 4;
    Rational sum = 0;
    auto factorial = [](long n) {
        BigInt f = 1;
        for (long i = 2; i <= n; ++i)
            f *= i;
        return f;
    };
    for (long j = 0; j <= 2 * m + 2; ++j) {
        Rational t = bernoulli(static_cast<unsigned>(2 * j)) * bernoulli(static_cast<unsigned>(top - 2 * j)) /
                     Rational(factorial(2 * j) * factorial(top - 2 * j));
        sum += j % 2 == 1 ? t : Rational(-t);
    }
    BigReal pi = const_pi();
    auto s = exponential_lambert(-4 * m - 3, real(2 * pi), ctx);

    VerificationReport r = start(IdentityId::LerchClassical, "Q");
    r.params = {{"m", std::to_string(m)}};
    r.lhs = real(riemann_zeta(real(make_real(4 * m + 3)), ctx).re);
    r.rhs = real(pow2(4 * m + 2) * pow(pi, 4 * m + 3) * make_real(sum)) - s.value * BigReal(2);
    r.diagnostics = {{"bernoulli_sum", sum.str()}, {"series", echo(s.value, ctx)}};
    Budget b;
    b.add("series", s, BigReal(2));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_lerch_nf(const FieldDescriptor& field, long m, const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    long d = field.degree();
    BigReal pi = const_pi();
    BigReal H = residue_H(field, ctx);
    BigReal finite = 0;
    for (long j = 0; j <= 2 * m + 2; ++j) {
        BigReal zz = zeta_at(field, 2 * j, ctx) * zeta_at(field, 4 * m - 2 * j + 4, ctx);
        finite += j % 2 == 1 ? zz : BigReal(-zz);
    }
    finite /= pi * H;
    auto s = lambert_series(field, -4 * m - 3, real(pow(2 * pi, d)), ctx);
    BigReal weight = 2 * constant_C(field, ctx) / H;

    VerificationReport r = start(IdentityId::LerchNF, field.label());
    r.params = {{"m", std::to_string(m)}};
    r.lhs = real(zeta_at(field, 4 * m + 3, ctx));
    r.rhs = real(finite) - s.value * weight;
    r.diagnostics = {{"finite_sum", echo(finite, ctx)}, {"series", echo(s.value, ctx)}};
    Budget b;
    b.add("series", s, weight);
    finish(r, b, ctx);
    return r;
}

// ---------------------------------------------------------------------------

KernelSeriesResult eisenstein_G(const FieldDescriptor& field, long k, const BigComplex& z, const PrecisionContext& ctx)
{
    if (k < 2 || k % 2 != 0)
        throw DomainError("Eisenstein weight must be an even integer >= 2, got " + std::to_string(k));
    if (z.im <= 0)
        throw DomainError("Eisenstein series needs Im(z) > 0");
    ScopedPrecision guard(ctx.working_bits());
    // -(2 pi)^d i z
    BigComplex y = BigComplex(z.im, -z.re) * pow(2 * const_pi(), field.degree());
    KernelSeriesResult s = lambert_series(field, k - 1, y, ctx);
    BigReal z1k = zeta_at(field, 1 - k, ctx);
    if (z1k != 0)
        s.value += real(residue_H(field, ctx) * z1k / (2 * constant_C(field, ctx)));
    return s;
}

VerificationReport verify_eisenstein_transform(const FieldDescriptor& field, long k, const BigComplex& z,
                                               const PrecisionContext& ctx)
{
    if (k < 4)
        throw DomainError("eisenstein-transform needs k >= 4 (k = 2 is the quasimodular case)");
    ScopedPrecision guard(ctx.working_bits());
    BigComplex w = -BigComplex(BigReal(1)) / z;
    auto gw = eisenstein_G(field, k, w, ctx);
    auto gz = eisenstein_G(field, k, z, ctx);
    BigComplex zk = pow(z, k);

    VerificationReport r = start(IdentityId::EisensteinTransform, field.label());
    r.params = {{"k", std::to_string(k)}, {"z", echo(z, ctx)}};
    r.lhs = gw.value;
    r.rhs = zk * gz.value;
    Budget b;
    b.add("G(-1/z)", gw, BigReal(1));
    b.add("G(z)", gz, abs(zk));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_eisenstein_symm(const FieldDescriptor& field, long m, const BigComplex& alpha,
                                          const PrecisionContext& ctx)
{
    if (m <= 1)
        throw DomainError("eisenstein-symm needs m > 1");
    ScopedPrecision guard(ctx.working_bits());
    BigComplex beta = dual_parameter(field, alpha);
    auto sa = omega_series(field, 2 * m - 1, alpha, ctx);
    auto sb = omega_series(field, 2 * m - 1, beta, ctx);
    BigComplex wa = pow(alpha, m);
    BigComplex wb = pow(-beta, m);
    BigReal zv = zeta_at(field, 1 - 2 * m, ctx);

    VerificationReport r = start(IdentityId::EisensteinSymm, field.label());
    r.params = {{"m", std::to_string(m)}, {"alpha", echo(alpha, ctx)}, {"beta", echo(beta, ctx)}};
    r.lhs = wa * sa.value - wb * sb.value;
    r.rhs = (wa - wb) * BigReal(-residue_H(field, ctx) * zv / (2 * constant_C(field, ctx)));
    r.diagnostics = {{"zeta_value", echo(zv, ctx)}};
    Budget b;
    b.add("alpha", sa, abs(wa));
    b.add("beta", sb, abs(wb));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_series_evaluation(const FieldDescriptor& field, long m, const PrecisionContext& ctx)
{
    if (m <= 1 || m % 2 == 0)
        throw DomainError("series-evaluation needs an odd m > 1");
    ScopedPrecision guard(ctx.working_bits());
    auto s = lambert_series(field, 2 * m - 1, real(pow(2 * const_pi(), field.degree())), ctx);
    BigReal zv = zeta_at(field, 1 - 2 * m, ctx);

    VerificationReport r = start(IdentityId::SeriesEvaluation, field.label());
    r.params = {{"m", std::to_string(m)}};
    r.lhs = s.value;
    r.rhs = real(-residue_H(field, ctx) * zv / (2 * constant_C(field, ctx)));
    r.diagnostics = {{"zeta_value", echo(zv, ctx)}};
    if (zv != 0) {
        BigInt max_den = pow(BigInt(10), std::max(6u, ctx.target_digits() / 3));
        auto fit = reconstruct_rational(zv, max_den, 1000 * ctx.target_eps() * std::max(BigReal(1), BigReal(abs(zv))));
        r.diagnostics["zeta_rational"] = fit.found ? fit.value.str() : "none";
    }
    Budget b;
    b.add("series", s, BigReal(1));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_quasimodular(const FieldDescriptor& field, const BigComplex& alpha,
                                       const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    BigComplex beta = dual_parameter(field, alpha);
    long d = field.degree();
    auto sa = omega_series(field, 1, alpha, ctx);
    auto sb = omega_series(field, 1, beta, ctx);
    BigReal H = residue_H(field, ctx);
    BigReal C = constant_C(field, ctx);
    BigReal z0 = zeta_at(field, 0, ctx);
    BigReal zm1 = zeta_at(field, -1, ctx);
    BigReal anomaly = z0 * z0 / pi_power(1 - d);

    VerificationReport r = start(IdentityId::QuasiModular, field.label());
    r.params = {{"alpha", echo(alpha, ctx)}, {"beta", echo(beta, ctx)}};
    r.lhs = alpha * sa.value + beta * sb.value;
    BigComplex linear = (alpha + beta) * BigReal(-H * zm1 / (2 * C));
    r.rhs = linear - real(anomaly / C);
    BigComplex uncorrected = linear - real(anomaly);
    r.diagnostics = {{"uncorrected_rhs", echo(uncorrected, ctx)},
                     {"uncorrected_residual", echo(abs(r.lhs - uncorrected), ctx)}};
    Budget b;
    b.add("alpha", sa, abs(alpha));
    b.add("beta", sb, abs(beta));
    finish(r, b, ctx);
    return r;
}

VerificationReport verify_eta_log(const FieldDescriptor& field, const BigComplex& alpha, const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    BigComplex beta = dual_parameter(field, alpha);
    long d = field.degree();
    auto sa = omega_series(field, -1, alpha, ctx);
    auto sb = alpha == beta ? sa : omega_series(field, -1, beta, ctx);
    BigReal H = residue_H(field, ctx);
    BigReal C = constant_C(field, ctx);
    BigReal z0 = zeta_at(field, 0, ctx);

    VerificationReport r = start(IdentityId::EtaLog, field.label());
    r.params = {{"alpha", echo(alpha, ctx)}, {"beta", echo(beta, ctx)}};
    r.lhs = sa.value - sb.value;
    r.rhs = log(alpha / beta) * BigReal(H * H / (4 * C));
    if (z0 != 0)
        r.rhs += (alpha - beta) * BigReal(z0 * zeta_at(field, 2, ctx) / (pi_power(d + 1) * C));
    Budget b;
    b.add("alpha", sa, BigReal(1));
    b.add("beta", sb, BigReal(1));
    finish(r, b, ctx);
    return r;
}

}  // namespace zetaforge
