#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zetaforge/errors.hpp"
#include "zetaforge/kernel.hpp"

using namespace zetaforge;

namespace {

BigReal tenpow(int e) { return pow(BigReal(10), e); }

FieldDescriptor field(const char* sel) { return *find_builtin_field(sel); }

// zeta(3) by direct summation with an Euler-Maclaurin tail through B_10.
BigReal zeta3_oracle()
{
    const int n_max = 4000;
    BigReal s = 0;
    for (int n = 1; n < n_max; ++n)
        s += 1 / (BigReal(n) * n * n);
    BigReal n = n_max;
    s += 1 / (2 * n * n) + 1 / (2 * n * n * n) + 3 / (12 * pow(n, 4)) - 60 / (720 * pow(n, 6)) +
         2520 / (30240 * pow(n, 8)) - BigReal(3) / (20 * pow(n, 10)) + BigReal(5) / (12 * pow(n, 12));
    return s;
}

// sum_{n <= N} sigma_a(n) e^{-n y} with exact divisor sums.
BigReal sigma_series(long a, const BigReal& y, int n_max)
{
    BigReal s = 0;
    for (int n = 1; n <= n_max; ++n)
        s += make_real(divisor_sigma(a, n)) * exp(-y * n);
    return s;
}

}  // namespace

TEST_CASE("omega closed form for Q")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    auto r = omega(FieldDescriptor::rationals(), BigComplex(const_log2()), ctx);
    CHECK(abs(r.value - BigComplex(BigReal(1))) < tenpow(-39));
    CHECK(r.method == KernelMethod::ClosedFormQ);
    CHECK(r.terms_used == 1);
    CHECK_THROWS_AS(omega(FieldDescriptor::rationals(), BigComplex(BigReal(-1)), ctx), DomainError);
    CHECK_THROWS_AS(omega(FieldDescriptor::rationals(), BigComplex(BigReal(1)), ctx, KernelMethod::BesselRealQuad),
                    DomainError);
    CHECK_THROWS_AS(omega(field("Qi"), BigComplex(BigReal(1)), ctx, KernelMethod::BesselRealQuad), DomainError);
}

TEST_CASE("Mellin-Barnes kernel reduces to 1/(e^x - 1) for Q")
{
    auto ctx = PrecisionContext::from_digits(30);
    ScopedPrecision guard(ctx.working_bits());
    for (const char* xs : {"0.5", "1", "3"}) {
        BigComplex x(make_real(std::string(xs)));
        auto mb = omega(FieldDescriptor::rationals(), x, ctx, KernelMethod::MellinBarnes);
        BigComplex exact = BigComplex(BigReal(1)) / (exp(x) - BigComplex(BigReal(1)));
        INFO("x=", xs);
        CHECK(mb.method == KernelMethod::MellinBarnes);
        CHECK(abs(mb.value - exact) <= 10 * ctx.target_eps());
    }
}

TEST_CASE("Bessel and Mellin-Barnes kernels agree for quadratic fields")
{
    auto ctx = PrecisionContext::from_digits(25);
    ScopedPrecision guard(ctx.working_bits());
    for (const auto& f : builtin_fields()) {
        if (!f.is_quadratic())
            continue;
        for (const char* xs : {"0.5", "1", "2", "5"}) {
            BigComplex x(make_real(std::string(xs)));
            auto bessel = omega(f, x, ctx);
            auto mb = omega(f, x, ctx, KernelMethod::MellinBarnes);
            INFO(f.label(), " x=", xs);
            CHECK(abs(bessel.value - mb.value) <= 10 * ctx.target_eps());
            CHECK(abs(bessel.value.im) <= ctx.target_eps());
            CHECK(bessel.truncation_error_bound <= ctx.series_tail_eps());
        }
    }
}

TEST_CASE("quadratic kernels at complex arguments")
{
    auto ctx = PrecisionContext::from_digits(20);
    ScopedPrecision guard(ctx.working_bits());
    BigComplex x(BigReal(1), BigReal("0.5"));
    for (const char* sel : {"Qsqrt5", "Qi"}) {
        auto bessel = omega(field(sel), x, ctx);
        auto mb = omega(field(sel), x, ctx, KernelMethod::MellinBarnes);
        INFO(sel);
        CHECK(abs(bessel.value - mb.value) <= 10 * ctx.target_eps());
        // Real coefficients: Omega(conj x) = conj Omega(x).
        auto lower = omega(field(sel), conj(x), ctx);
        CHECK(abs(lower.value - conj(bessel.value)) <= 10 * ctx.target_eps());
    }
}

TEST_CASE("lambert_series for Q against Lerch's evaluation of zeta(3)")
{
    auto ctx = PrecisionContext::from_digits(50);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    auto r = lambert_series(FieldDescriptor::rationals(), -3, BigComplex(2 * pi), ctx);
    // zeta(3) = 7 pi^3 / 180 - 2 sum n^{-3} / (e^{2 pi n} - 1)
    BigReal expected = (7 * pow(pi, 3) / 180 - zeta3_oracle()) / 2;
    CHECK(abs(r.value.re - expected) < tenpow(-45));
    // Leading term 1/(e^{2 pi} - 1) = 0.0018709...
    CHECK(abs(r.value.re - make_real(std::string("0.001871372759366027"))) < tenpow(-17));
    CHECK(r.truncation_error_bound <= ctx.series_tail_eps());
}

TEST_CASE("Lambert resummation against divisor sums")
{
    auto ctx = PrecisionContext::from_digits(30);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    for (long a : {-3L, 1L, 3L}) {
        for (const BigReal& y : {BigReal(1), BigReal(2 * pi)}) {
            auto r = lambert_series(FieldDescriptor::rationals(), a, BigComplex(y), ctx);
            BigReal expected = sigma_series(a, y, 200);
            INFO("a=", a, " y=", to_decimal(y, 6));
            CHECK(abs(r.value.re - expected) <= 10 * ctx.target_eps());
        }
    }
    // k = 4, z = 2i: y = -2 pi i z = 4 pi
    auto e4 = lambert_series(FieldDescriptor::rationals(), 3, BigComplex(4 * pi), ctx);
    CHECK(abs(e4.value.re - sigma_series(3, 4 * pi, 60)) <= 10 * ctx.target_eps());
}

TEST_CASE("quadratic Lambert series equals the naive double sum")
{
    auto ctx = PrecisionContext::from_digits(20);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    for (const char* sel : {"Qsqrt5", "Qi", "Qsqrt-3"}) {
        FieldDescriptor f = field(sel);
        IdealCounts v(f);
        for (long a : {-3L, 1L}) {
            BigComplex y(4 * pi * pi);
            auto conv = lambert_series(f, a, y, ctx);
            BigComplex naive;
            for (int n = 1; n <= 400; ++n) {
                if (v(n) == 0)
                    continue;
                auto om = omega(f, y * BigReal(n) / BigReal(f.disc_abs()), ctx);
                naive += om.value * (BigReal(v(n)) * pow(BigReal(n), a));
            }
            INFO(sel, " a=", a);
            CHECK(abs(conv.value - naive) <= 10 * ctx.target_eps());
        }
    }
}

TEST_CASE("tail certificates are honest")
{
    auto loose = PrecisionContext::from_digits(15);
    auto tight = PrecisionContext::from_digits(35);
    ScopedPrecision guard(tight.working_bits());
    BigReal pi = const_pi();
    struct Case {
        const char* field;
        long a;
        BigComplex y;
    };
    std::vector<Case> cases = {{"Q", -3, BigComplex(2 * pi)},
                               {"Q", 5, BigComplex(BigReal("0.7"))},
                               {"Qsqrt5", -1, BigComplex(4 * pi * pi)},
                               {"Qi", 3, BigComplex(BigReal(2), BigReal(1))},
                               {"Qsqrt-3", 1, BigComplex(BigReal(3))}};
    for (const auto& c : cases) {
        FieldDescriptor f = field(c.field);
        auto coarse = lambert_series(f, c.a, c.y, loose);
        auto fine = lambert_series(f, c.a, c.y, tight);
        INFO(c.field, " a=", c.a);
        CHECK(fine.terms_used >= coarse.terms_used);
        CHECK(abs(fine.value - coarse.value) <= coarse.truncation_error_bound + fine.truncation_error_bound);
        CHECK(coarse.truncation_error_bound <= loose.series_tail_eps());
    }
}

TEST_CASE("kernel decays for large arguments")
{
    auto ctx = PrecisionContext::from_digits(20);
    ScopedPrecision guard(ctx.working_bits());
    for (const auto& f : builtin_fields()) {
        BigReal prev = -1;
        for (int y : {50, 100, 200}) {
            auto r = lambert_series(f, 2, BigComplex(BigReal(y)), ctx);
            BigReal mag = abs(r.value);
            // First-term bound: V(1) |Omega(y/D)| <= 4 sqrt(pi/(2 rho)) e^{-rho}, rho = sqrt(2 y/D).
            double rho = std::sqrt(2.0 * y / static_cast<double>(f.disc_abs()));
            double first = f.is_rational() ? 2 * std::exp(-y) : 8 * std::sqrt(3.15 / (2 * rho)) * std::exp(-rho);
            INFO(f.label(), " y=", y);
            CHECK(static_cast<double>(mag) <= first);
            // Quadratic kernels oscillate (2 Re K0(2 eps sqrt u)); only Q decays monotonically.
            if (prev >= 0 && f.is_rational())
                CHECK(mag < prev);
            prev = mag;
        }
    }
}

TEST_CASE("Mellin-Barnes path on a table-backed field")
{
    // Q presented as a coefficient table; c = 5.5 keeps the Dirichlet series short.
    std::vector<std::int64_t> ones(3000, 1);
    auto table = FieldDescriptor::from_table("Qtab", 1, 0, 1,
                                             ExternalTable{"mem", std::make_shared<std::vector<std::int64_t>>(ones)},
                                             1, std::string("1"), 2);
    auto ctx = PrecisionContext::from_digits(12).with_line_c(BigReal("5.5"));
    ScopedPrecision guard(ctx.working_bits());
    auto r = omega(table, BigComplex(BigReal(1)), ctx);
    CHECK(r.method == KernelMethod::MellinBarnes);
    BigReal exact = 1 / (exp(BigReal(1)) - 1);
    CHECK(abs(r.value.re - exact) < tenpow(-10));

    auto l = lambert_series(table, -3, BigComplex(2 * const_pi()), ctx);
    auto ref = lambert_series(FieldDescriptor::rationals(), -3, BigComplex(2 * const_pi()), ctx);
    CHECK(abs(l.value - ref.value) < tenpow(-10));

    std::vector<std::int64_t> quartic(10, 1);
    auto big = FieldDescriptor::from_table("quartic", 4, 0, 725,
                                           ExternalTable{"mem", std::make_shared<std::vector<std::int64_t>>(quartic)},
                                           std::nullopt, std::nullopt, std::nullopt);
    CHECK_THROWS_AS(omega(big, BigComplex(BigReal(1)), ctx), DomainError);
}
