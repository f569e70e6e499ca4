// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [criterion numbers...]
#include "zetaforge/errors.hpp"
#include "zetaforge/fields.hpp"
#include "zetaforge/identities.hpp"
#include "zetaforge/kernel.hpp"
#include "zetaforge/special.hpp"
#include "zetaforge/zeta.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace zetaforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    Verdict() { detail << std::fixed << std::setprecision(2); }

    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

BigReal tenpow(int e) { return pow(BigReal(10), e); }
BigComplex real(const BigReal& x) { return BigComplex(x); }
FieldDescriptor field(const char* sel) { return *find_builtin_field(sel); }
std::string sci(const BigReal& x) { return to_decimal(x, 3); }

/// The residual the pass rule looks at: relative for large sides, absolute otherwise.
BigReal residual(const VerificationReport& r) { return abs(r.lhs) > 1 ? r.rel_residual : r.abs_residual; }

// --- independent oracles ----------------------------------------------------

/// Bernoulli numbers by the Akiyama-Tanigawa algorithm (B_1 = +1/2, unused here).
std::vector<Rational> bernoulli_table(unsigned n)
{
    std::vector<Rational> b(n + 1), a(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        a[m] = Rational(1, m + 1);
        for (unsigned j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
        b[m] = a[0];
    }
    return b;
}

/// sum_{n<N} n^-3 plus the Euler-Maclaurin tail at N.
BigReal zeta3_direct()
{
    const int N = 200;
    BigReal s = 0;
    for (int n = 1; n < N; ++n) s += 1 / pow(BigReal(n), 3);
    // tail = N^-2/2 + N^-3/2 + sum_k B_2k/(2k)! * (2k+1)!/2 * N^{-2k-2}
    auto b = bernoulli_table(40);
    BigReal n = N;
    s += 1 / (2 * n * n) + 1 / (2 * n * n * n);
    for (unsigned k = 1; k <= 20; ++k) s += make_real(b[2 * k]) * (2 * k + 1) / 2 / pow(n, 2 * k + 2);
    return s;
}

/// 1 + c sum_{n<=N} sigma_{k-1}(n) q^n, q = e^{2 pi i z}, sigma by trial division.
BigComplex eisenstein_q_series(int k, long c, const BigComplex& z, int n_max)
{
    BigComplex q = exp(BigComplex(BigReal(0), 2 * const_pi()) * z);
    BigComplex s(BigReal(1)), qn(BigReal(1));
    for (int n = 1; n <= n_max; ++n) {
        qn *= q;
        BigInt sigma = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) sigma += boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(k - 1));
        s += qn * (BigReal(sigma) * BigReal(c));
    }
    return s;
}

/// log eta(tau) from the q-product.
BigComplex log_eta(const BigComplex& tau)
{
    BigComplex two_pi_i(BigReal(0), 2 * const_pi());
    BigComplex q = exp(two_pi_i * tau);
    BigComplex s = two_pi_i * tau / BigReal(24), qn(BigReal(1));
    for (int n = 1; n <= 200; ++n) {
        qn *= q;
        s += log(BigComplex(BigReal(1)) - qn);
    }
    return s;
}

/// L(1-n, chi_D) = -f^{n-1}/n sum_a chi(a) B_n(a/f).
Rational l_value_nonpositive(std::int64_t disc, unsigned n)
{
    auto b = bernoulli_table(n);
    b[1] = Rational(-1, 2);
    std::int64_t f = disc < 0 ? -disc : disc;
    Rational s = 0;
    for (std::int64_t a = 1; a <= f; ++a) {
        int chi = kronecker_symbol(disc, a);
        if (chi == 0) continue;
        Rational x(a, f), poly = 0;
        BigInt binom = 1;
        for (unsigned k = 0; k <= n; ++k) {
            Rational xp = 1;
            for (unsigned i = 0; i < n - k; ++i) xp *= x;
            poly += Rational(binom) * b[k] * xp;
            binom = binom * (n - k) / (k + 1);
        }
        s += chi * poly;
    }
    for (unsigned i = 0; i + 1 < n; ++i) s *= f;
    return -s / n;
}

// --- criteria ---------------------------------------------------------------

void classical_ramanujan(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(60);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi(), worst = 0;
    double slowest = 0;
    int cases = 0;
    for (long m : {1L, 2L, 3L, -2L})
        for (const BigReal& alpha : {pi, pi / 3, 2 * pi}) {
            auto t0 = Clock::now();
            auto r = verify_ramanujan_classical(m, real(alpha), ctx);
            double t = seconds_since(t0);
            slowest = std::max(slowest, t);
            worst = std::max(worst, residual(r));
            ++cases;
            v.require(residual(r) <= tenpow(-40), "m=" + std::to_string(m) + " residual " + sci(residual(r)));
            v.require(t < 5, "m=" + std::to_string(m) + " took " + std::to_string(t) + " s");
        }
    v.detail << cases << " cases at 60 digits, worst residual " << sci(worst) << " (<= 1e-40), slowest "
             << slowest << " s (< 5 s)";
}

void lerch(Verdict& v)
{
    auto t0 = Clock::now();
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    auto r = verify_lerch_classical(0, ctx);
    BigReal direct = zeta3_direct();
    BigReal err = abs(r.rhs.re - direct) / direct;
    double matching = err == 0 ? 50.0 : -static_cast<double>(log10(err));
    double t = seconds_since(t0);
    v.require(matching >= 35, "only " + std::to_string(matching) + " digits");
    v.require(t < 5, "took " + std::to_string(t) + " s");
    v.detail << "zeta(3) from the Lerch side matches the direct sum to " << static_cast<int>(matching)
             << " digits (>= 35) in " << t << " s";
}

void kernel_reduction(Verdict& v)
{
    auto t0 = Clock::now();
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    FieldDescriptor q = FieldDescriptor::rationals();
    BigReal worst = 0;
    for (const BigReal& x : {BigReal(1) / 2, BigReal(1), BigReal(3)}) {
        auto mb = omega(q, real(x), ctx, KernelMethod::MellinBarnes);
        BigReal err = abs(mb.value - real(1 / (exp(x) - 1)));
        worst = std::max(worst, err);
        v.require(err <= tenpow(-30), "x=" + sci(x) + " differs by " + sci(err));
    }
    double t = seconds_since(t0);
    v.require(t < 30, "took " + std::to_string(t) + " s");
    v.detail << "Mellin-Barnes vs 1/(e^x-1) at x in {1/2,1,3}, worst " << sci(worst) << " (<= 1e-30), " << t
             << " s (< 30 s)";
}

void quadratic_dual(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal worst = 0, worst_im = 0;
    for (const char* sel : {"Qsqrt5", "Qi"}) {
        FieldDescriptor f = field(sel);
        for (const BigReal& x : {BigReal(1) / 2, BigReal(1), BigReal(2), BigReal(5)}) {
            auto bessel = omega(f, real(x), ctx);
            auto mb = omega(f, real(x), ctx, KernelMethod::MellinBarnes);
            BigReal err = abs(bessel.value - mb.value);
            worst = std::max(worst, err);
            v.require(bessel.method != KernelMethod::MellinBarnes, std::string(sel) + " default is not a Bessel form");
            v.require(err <= tenpow(-30), std::string(sel) + " x=" + sci(x) + " methods differ by " + sci(err));
            if (!f.totally_real()) {
                BigReal im = std::max(abs(bessel.value.im), abs(mb.value.im));
                worst_im = std::max(worst_im, im);
                v.require(im <= tenpow(-35), std::string(sel) + " x=" + sci(x) + " imaginary part " + sci(im));
            }
        }
    }
    v.detail << "Bessel vs Mellin-Barnes for Q(sqrt5), Q(i) at x in {1/2,1,2,5}, worst " << sci(worst)
             << " (<= 1e-30), Q(i) imaginary part " << sci(worst_im) << " (<= 1e-35)";
}

void ramanujan_nf(Verdict& v)
{
    auto t0 = Clock::now();
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal limit = 1000 * ctx.target_eps(), worst = 0;
    int cases = 0;
    for (const char* sel : {"Q", "Qsqrt5", "Qi"}) {
        FieldDescriptor f = field(sel);
        BigReal pd = pow(const_pi(), f.degree());
        for (long m : {-3L, -1L, 1L, 2L})
            for (const BigReal& alpha : {pd, 2 * pd}) {
                auto r = verify_ramanujan_nf(f, m, real(alpha), ctx);
                worst = std::max(worst, residual(r));
                ++cases;
                v.require(residual(r) <= limit,
                          f.label() + " m=" + std::to_string(m) + " residual " + sci(residual(r)));
            }
    }
    double t = seconds_since(t0);
    v.require(t < 600, "grid took " + std::to_string(t) + " s");
    v.detail << cases << " cases at 50 digits, worst residual " << sci(worst) << " (<= 1e-47), " << t
             << " s (< 600 s)";
}

void lerch_nf(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal worst = 0;
    for (const char* sel : {"Q", "Qsqrt5", "Qi"}) {
        auto r = verify_lerch_nf(field(sel), 0, ctx);
        worst = std::max(worst, residual(r));
        v.require(residual(r) <= 1000 * ctx.target_eps(), r.field_label + " residual " + sci(residual(r)));
    }
    v.detail << "m=0 for Q, Q(sqrt5), Q(i) at 50 digits, worst residual " << sci(worst) << " (<= 1e-47)";
}

void series_evaluation(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    auto q = verify_series_evaluation(FieldDescriptor::rationals(), 3, ctx);
    BigReal rel = abs(q.lhs - real(BigReal(1) / 504)) * 504;
    v.require(rel <= tenpow(-30), "Q series differs from 1/504 by " + sci(rel));

    auto qi = verify_series_evaluation(field("Qi"), 3, ctx);
    v.require(abs(qi.lhs) <= tenpow(-30), "Q(i) series is " + sci(abs(qi.lhs)));

    auto q5 = verify_series_evaluation(field("Qsqrt5"), 3, ctx);
    v.require(residual(q5) <= 1000 * ctx.target_eps(), "Q(sqrt5) residual " + sci(residual(q5)));
    // zeta_K(-5) = zeta(-5) L(-5, chi_5), zeta(-5) = -1/252.
    Rational expected = Rational(-1, 252) * l_value_nonpositive(5, 6);
    auto it = q5.diagnostics.find("zeta_rational");
    bool reconstructed = it != q5.diagnostics.end() && it->second == expected.str();
    v.require(reconstructed, "zeta_K(-5) did not reconstruct to " + expected.str());
    v.detail << "Q: 1/504 to relative " << sci(rel) << "; Q(i): |series| " << sci(abs(qi.lhs))
             << "; Q(sqrt5): residual " << sci(residual(q5)) << ", zeta_K(-5) = "
             << (it == q5.diagnostics.end() ? std::string("?") : it->second);
}

void eisenstein(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal limit = 1000 * ctx.target_eps(), worst = 0;
    BigComplex i = imag_unit();
    std::vector<BigComplex> points = {i, BigComplex(BigReal(1) / 2, BigReal(3) / 2), i * BigReal(2)};
    for (const char* sel : {"Q", "Qsqrt5"})
        for (long k : {4L, 6L})
            for (const auto& z : points) {
                auto r = verify_eisenstein_transform(field(sel), k, z, ctx);
                worst = std::max(worst, residual(r));
                v.require(residual(r) <= limit, r.field_label + " k=" + std::to_string(k) + " residual " +
                                                    sci(residual(r)));
            }
    BigReal worst_quasi = 0;
    for (const char* sel : {"Q", "Qsqrt5", "Qi"}) {
        FieldDescriptor f = field(sel);
        auto r = verify_quasimodular(f, real(2 * pow(const_pi(), f.degree())), ctx);
        worst_quasi = std::max(worst_quasi, residual(r));
        v.require(residual(r) <= limit, f.label() + " quasimodular residual " + sci(residual(r)));
    }

    // Q against the classical q-expansions: E_4 = 240 G_4, E_2 = -24 G_2.
    BigReal worst_q = 0;
    FieldDescriptor q = FieldDescriptor::rationals();
    for (const auto& z : points) {
        BigComplex e4 = eisenstein_q_series(4, 240, z, 120);
        BigComplex e2 = eisenstein_q_series(2, -24, z, 120);
        BigReal d4 = abs(eisenstein_G(q, 4, z, ctx).value * BigReal(240) - e4) / abs(e4);
        BigReal d2 = abs(eisenstein_G(q, 2, z, ctx).value * BigReal(-24) - e2) / abs(e2);
        worst_q = std::max({worst_q, d4, d2});
    }
    v.require(worst_q <= tenpow(-25), "q-series mismatch " + sci(worst_q));
    // alpha = beta = pi: 2 pi (E_2(i) - 1)/(-24) equals the quasimodular left side.
    auto qm = verify_quasimodular(q, real(const_pi()), ctx);
    BigComplex e2i = (eisenstein_q_series(2, -24, i, 120) - BigComplex(BigReal(1))) / BigReal(-24);
    BigReal dq = abs(qm.lhs - e2i * (2 * const_pi())) / abs(qm.lhs);
    v.require(dq <= tenpow(-25), "quasimodular Q side vs E_2 " + sci(dq));
    v.detail << "transformation worst " << sci(worst) << ", quasimodular worst " << sci(worst_quasi)
             << " (<= 1e-47); Q vs E_2/E_4 q-series " << sci(std::max(worst_q, dq)) << " (<= 1e-25)";
}

void eta_log(Verdict& v)
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    BigReal alpha = 2 * pi, beta = pi / 2;
    auto r = verify_eta_log(FieldDescriptor::rationals(), real(alpha), ctx);
    BigComplex i = imag_unit();
    // sum sigma_{-1}(n) e^{-2 n x} = -x/12 - log eta(i x / pi)
    BigComplex expected = BigComplex((beta - alpha) / 12) - log_eta(i * (alpha / pi)) + log_eta(i * (beta / pi));
    BigReal err = abs(r.lhs - expected) / std::max(BigReal(1), BigReal(abs(expected)));
    v.require(err <= tenpow(-25), "log eta mismatch " + sci(err));
    BigReal worst_sym = 0;
    for (const char* sel : {"Q", "Qsqrt5", "Qi"}) {
        FieldDescriptor f = field(sel);
        auto s = verify_eta_log(f, real(pow(pi, f.degree())), ctx);
        worst_sym = std::max({worst_sym, abs(s.lhs), s.abs_residual});
        v.require(s.lhs == BigComplex() && s.abs_residual <= 10 * ctx.target_eps(),
                  f.label() + " symmetric case residual " + sci(s.abs_residual));
    }
    v.detail << "Q vs log eta from the q-product " << sci(err) << " (<= 1e-25); alpha = beta residual "
             << sci(worst_sym) << " for Q, Q(sqrt5), Q(i)";
}

void properties(Verdict& v)
{
    // Multiplicativity and representation counts.
    long checked = 0;
    for (const auto& f : builtin_fields()) {
        if (f.is_rational()) continue;
        for (long a = 1; a <= 120; ++a)
            for (long b = 1; b <= 120; ++b)
                if (std::gcd(a, b) == 1) {
                    ++checked;
                    if (ideal_count(f, a * b) != ideal_count(f, a) * ideal_count(f, b)) {
                        v.require(false, f.label() + " V not multiplicative at " + std::to_string(a) + "," +
                                             std::to_string(b));
                        return;
                    }
                }
    }
    FieldDescriptor qi = field("Qi"), qm3 = field("Qsqrt-3");
    for (long n = 1; n <= 3000; ++n) {
        long sq = 0, hex = 0;
        for (long x = -64; x <= 64; ++x)
            for (long y = -64; y <= 64; ++y) {
                sq += x * x + y * y == n;
                hex += x * x + x * y + y * y == n;
            }
        if (sq != 4 * ideal_count(qi, n) || hex != 6 * ideal_count(qm3, n)) {
            v.require(false, "representation count at n=" + std::to_string(n));
            return;
        }
    }

    // Gamma duplication and reflection.
    BigReal worst_gamma = 0;
    {
        auto ctx = PrecisionContext::from_digits(50);
        ScopedPrecision guard(ctx.working_bits());
        BigReal pi = const_pi();
        BigComplex half(BigReal(1) / 2), one(BigReal(1));
        for (const BigComplex& s : {BigComplex(BigReal("0.3"), BigReal("0.7")), BigComplex(BigReal("2.5"), BigReal("-1.25")),
                                    BigComplex(BigReal("-1.7"), BigReal("3.1")), BigComplex(BigReal(5), BigReal(10))}) {
            BigComplex dup_l = complex_gamma(s, ctx) * complex_gamma(s + half, ctx);
            BigComplex dup_r = exp((one - s * BigReal(2)) * BigComplex(const_log2())) * BigComplex(sqrt(pi)) *
                               complex_gamma(s * BigReal(2), ctx);
            BigComplex ref_l = complex_gamma(s, ctx) * complex_gamma(one - s, ctx);
            BigComplex ref_r = BigComplex(pi) / sin(s * pi);
            BigReal e = std::max(abs(dup_l - dup_r) / abs(dup_r), abs(ref_l - ref_r) / abs(ref_r));
            worst_gamma = std::max(worst_gamma, e);
        }
        v.require(worst_gamma <= tenpow(-45), "gamma identities off by " + sci(worst_gamma));
    }

    // Doubling the digits shrinks every identity residual tenfold.
    auto lo = PrecisionContext::from_digits(20);
    auto hi = PrecisionContext::from_digits(40);
    ScopedPrecision guard(hi.working_bits());
    BigReal pi = const_pi();
    BigComplex z(BigReal(1) / 2, BigReal(3) / 2);
    std::vector<std::function<VerificationReport(const PrecisionContext&)>> cases = {
        [&](const PrecisionContext& c) { return verify_ramanujan_nf(field("Qsqrt5"), 1, real(2 * pi * pi), c); },
        [&](const PrecisionContext& c) { return verify_ramanujan_classical(2, real(pi / 3), c); },
        [&](const PrecisionContext& c) { return verify_lerch_classical(1, c); },
        [&](const PrecisionContext& c) { return verify_lerch_nf(field("Qi"), 0, c); },
        [&](const PrecisionContext& c) { return verify_eisenstein_symm(field("Qsqrt5"), 2, real(pi * pi), c); },
        [&](const PrecisionContext& c) { return verify_series_evaluation(field("Qsqrt5"), 3, c); },
        [&](const PrecisionContext& c) { return verify_quasimodular(field("Qi"), real(2 * pi * pi), c); },
        [&](const PrecisionContext& c) { return verify_eta_log(field("Qsqrt5"), real(2 * pi * pi), c); },
        [&](const PrecisionContext& c) { return verify_eisenstein_transform(field("Qsqrt5"), 4, z, c); },
    };
    BigReal worst_ratio = 0;
    for (auto& run : cases) {
        auto a = run(lo), b = run(hi);
        bool shrinks = b.abs_residual == 0 || b.abs_residual * 10 <= a.abs_residual;
        if (a.abs_residual > 0) worst_ratio = std::max(worst_ratio, BigReal(b.abs_residual / a.abs_residual));
        v.require(a.passed && b.passed && shrinks, identity_name(a.identity) + " " + a.field_label + ": " +
                                                       sci(a.abs_residual) + " -> " + sci(b.abs_residual));
    }
    v.detail << checked << " coprime pairs multiplicative, representation counts to 3000, gamma identities "
             << sci(worst_gamma) << ", 20->40 digits worst residual ratio " << sci(worst_ratio) << " (<= 0.1)";
}

void klingen_siegel(Verdict& v)
{
    std::vector<std::string> found[2];
    int idx = 0;
    for (unsigned digits : {40u, 60u}) {
        auto ctx = PrecisionContext::from_digits(digits);
        ScopedPrecision guard(ctx.working_bits());
        FieldDescriptor f = field("Qsqrt5");
        for (unsigned n : {2u, 4u}) {
            BigReal ratio = zeta_even_positive(f, n / 2, ctx) * sqrt(BigReal(5)) / pow(const_pi(), 2 * n);
            BigInt max_den = boost::multiprecision::pow(BigInt(10), digits / 3);
            auto fit = reconstruct_rational(ratio, max_den, 1000 * ctx.target_eps() * std::max(BigReal(1), ratio));
            std::ostringstream s;
            if (fit.found)
                s << fit.value;
            else
                s << "none";
            found[idx].push_back(s.str());
            v.require(fit.found, "no rational at n=" + std::to_string(n) + ", " + std::to_string(digits) + " digits");
        }
        ++idx;
    }
    v.require(found[0] == found[1], "reconstructions differ between 40 and 60 digits");
    v.detail << "zeta_K(2) sqrt5/pi^4 = " << found[0][0] << ", zeta_K(4) sqrt5/pi^8 = " << found[0][1]
             << " at 40 digits; at 60: " << found[1][0] << ", " << found[1][1];
}

}  // namespace

int main(int argc, char** argv)
{
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Verdict&)> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "classical Ramanujan formula", classical_ramanujan},
        {2, "Lerch formula for zeta(3)", lerch},
        {3, "kernel reduction for Q", kernel_reduction},
        {4, "quadratic kernels, two methods", quadratic_dual},
        {5, "number-field Ramanujan identity", ramanujan_nf},
        {6, "number-field Lerch identity", lerch_nf},
        {7, "series evaluations", series_evaluation},
        {8, "Eisenstein and quasimodular transformations", eisenstein},
        {9, "eta-log identity", eta_log},
        {10, "property suites and precision scaling", properties},
        {11, "Klingen-Siegel rationality", klingen_siegel},
    };
    std::set<int> selected;
    for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Verdict v;
        auto t0 = Clock::now();
        try {
            c.check(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        double t = seconds_since(t0);
        failures += !v.pass;
        std::printf("criterion %2d %s  %s: %s (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.name,
                    v.detail.str().c_str(), t);
        std::fflush(stdout);
    }
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
