#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zetaforge/errors.hpp"
#include "zetaforge/zeta.hpp"

using namespace zetaforge;

namespace {

FieldDescriptor field(const char* sel) { return *find_builtin_field(sel); }

BigReal tenpow(int e) { return pow(BigReal(10), e); }

// Independent sum_{n<=N} n^{-k} plus the Euler-Maclaurin tail up to B_6.
BigReal power_sum_oracle(int k, int n_max)
{
    BigReal s = 0;
    for (int n = 1; n < n_max; ++n)
        s += pow(BigReal(n), -k);
    BigReal n = n_max;
    BigReal kk = k;
    s += pow(n, 1 - k) / (kk - 1) + pow(n, -k) / 2;
    s += kk * pow(n, -k - 1) / 12;
    s -= kk * (kk + 1) * (kk + 2) * pow(n, -k - 3) / 720;
    s += kk * (kk + 1) * (kk + 2) * (kk + 3) * (kk + 4) * pow(n, -k - 5) / 30240;
    return s;
}

}  // namespace

TEST_CASE("bernoulli examples")
{
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == Rational(-1, 2));
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(12) == Rational(-691, 2730));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(31) == 0);
    // Recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0 holds for every n >= 1.
    for (unsigned n = 1; n <= 40; ++n) {
        Rational acc = 0;
        BigInt c = 1;
        for (unsigned k = 0; k <= n; ++k) {
            acc += Rational(c) * bernoulli(k);
            c = c * (n + 1 - k) / (k + 1);
        }
        REQUIRE(acc == 0);
    }
}

TEST_CASE("riemann_zeta_even")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    CHECK(abs(riemann_zeta_even(1, ctx) - pi * pi / 6) < tenpow(-39));
    CHECK(abs(riemann_zeta_even(2, ctx) - pow(pi, 4) / 90) < tenpow(-39));
    CHECK(abs(riemann_zeta_even(3, ctx) - pow(pi, 6) / 945) < tenpow(-39));
    // Direct series sum n^-4 with an Euler-Maclaurin tail, to 30 digits.
    CHECK(abs(riemann_zeta_even(2, ctx) - power_sum_oracle(4, 2000)) < tenpow(-30));
}

TEST_CASE("riemann_zeta at odd integers against direct sums")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal z3 = riemann_zeta(BigComplex(BigReal(3)), ctx).re;
    CHECK(abs(z3 - make_real("1.2020569031595942853997381615114499907649862923405")) < tenpow(-39));
    CHECK(abs(z3 - power_sum_oracle(3, 4000)) < tenpow(-30));
}

TEST_CASE("riemann_zeta on a vertical line matches the alternating eta series")
{
    // eta(s) = (1 - 2^{1-s}) zeta(s) = sum (-1)^{n+1} n^{-s}; averaged partial sums converge fast enough at 20 digits.
    auto ctx = PrecisionContext::from_digits(25);
    ScopedPrecision guard(ctx.working_bits());
    BigComplex s(BigReal(2), BigReal(7));
    BigComplex z = riemann_zeta(s, ctx);
    // Borwein-style acceleration of eta with binomial weights (Euler transform).
    const int n = 80;
    std::vector<BigComplex> terms;
    for (int k = 1; k <= n + 1; ++k)
        terms.push_back(exp(-s * log(BigComplex(BigReal(k)))));
    BigComplex eta;
    // Euler transform: sum_k (-1)^k Delta^k a_0 / 2^{k+1}
    std::vector<BigComplex> diff = terms;
    for (int k = 0; k <= n; ++k) {
        eta += diff[0] / pow2(k + 1);
        for (std::size_t i = 0; i + 1 < diff.size(); ++i)
            diff[i] = diff[i] - diff[i + 1];
        diff.pop_back();
    }
    BigComplex two_pow = exp((BigComplex(BigReal(1)) - s) * log(BigComplex(BigReal(2))));
    BigComplex expected = eta / (BigComplex(BigReal(1)) - two_pow);
    CHECK(abs(z - expected) < tenpow(-20));
}

TEST_CASE("dedekind_zeta examples")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    BigComplex two(BigReal(2));

    CHECK(abs(dedekind_zeta(FieldDescriptor::rationals(), two, ctx) - BigComplex(pi * pi / 6)) < tenpow(-39));

    // Q(i): zeta * L(2, chi_-4) with L by the alternating sum over odd n (Catalan's constant).
    BigReal catalan = 0;
    {
        // sum_{k>=0} (-1)^k / (2k+1)^2 accelerated by pairing plus a tail estimate is slow; use
        // the rapidly convergent series G = pi/8 log(2+sqrt3) + 3/8 sum 1/((2k+1)^2 C(2k,k)).
        BigReal acc = 0, binom = 1;
        for (int k = 0; k < 200; ++k) {
            if (k > 0)
                binom = binom * (2 * k) * (2 * k - 1) / (BigReal(k) * k);
            acc += 1 / (BigReal(2 * k + 1) * (2 * k + 1) * binom);
        }
        catalan = pi / 8 * log(2 + sqrt(BigReal(3))) + 3 * acc / 8;
    }
    CHECK(abs(catalan - make_real("0.91596559417721901505460351493238411077414937428167")) < tenpow(-39));
    BigComplex zi = dedekind_zeta(field("Qi"), two, ctx);
    CHECK(abs(zi - BigComplex(catalan * pi * pi / 6)) < tenpow(-38));

    // Direct V_K Dirichlet series agrees to its own tail bound.
    auto low = PrecisionContext::from_digits(8);
    IdealCounts counts(field("Qi"));
    DirichletSum direct = dedekind_zeta_direct(counts, BigComplex(BigReal(3)), low);
    BigComplex accurate = dedekind_zeta(field("Qi"), BigComplex(BigReal(3)), ctx);
    CHECK(abs(direct.value - accurate) <= direct.tail_bound);
}

TEST_CASE("zeta_{Q(sqrt5)}(4) has the Klingen-Siegel shape q pi^8 / sqrt5")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    BigReal z4 = dedekind_zeta(field("Qsqrt5"), BigComplex(BigReal(4)), ctx).re;
    BigReal q = z4 * sqrt(BigReal(5)) / pow(pi, 8);
    RationalFit fit = reconstruct_rational(q, BigInt(1000000), tenpow(-25));
    REQUIRE(fit.found);
    CHECK(fit.value == Rational(4, 16875));
}

TEST_CASE("dedekind_zeta rejects Re(s) near 1")
{
    auto ctx = PrecisionContext::from_digits(20);
    CHECK_THROWS_AS(dedekind_zeta(field("Qsqrt5"), BigComplex(BigReal(1.05)), ctx), TruncationError);
    // Table-backed fields report the required number of terms.
    std::vector<std::int64_t> v(1000, 0);
    IdealCounts q(FieldDescriptor::rationals());
    for (std::int64_t n = 1; n <= 1000; ++n)
        v[static_cast<std::size_t>(n - 1)] = q(n);
    auto tf = FieldDescriptor::from_table("Qtable", 1, 0, 1,
                                          ExternalTable{"mem", std::make_shared<std::vector<std::int64_t>>(v)}, 1,
                                          std::string("1"), 2);
    try {
        dedekind_zeta(tf, BigComplex(BigReal(2)), ctx);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.required_terms() > 1000);
    }
    // Far enough right, the table is long enough.
    auto low = PrecisionContext::from_digits(12);
    ScopedPrecision guard(low.working_bits());
    BigComplex z = dedekind_zeta(tf, BigComplex(BigReal(8)), low);
    BigReal expected = riemann_zeta(BigComplex(BigReal(8)), low).re;
    CHECK(abs(z.re - expected) < tenpow(-11));
}

TEST_CASE("dedekind_zeta_nonpositive examples")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal tol = tenpow(-38);
    auto q = FieldDescriptor::rationals();
    CHECK(abs(dedekind_zeta_nonpositive(q, 0, ctx) + BigReal(0.5)) < tol);
    CHECK(abs(dedekind_zeta_nonpositive(q, -1, ctx) + BigReal(1) / 12) < tol);
    CHECK(abs(dedekind_zeta_nonpositive(q, -3, ctx) - BigReal(1) / 120) < tol);
    CHECK(abs(dedekind_zeta_nonpositive(q, -5, ctx) + BigReal(1) / 252) < tol);
    CHECK(dedekind_zeta_nonpositive(q, -2, ctx) == 0);

    BigReal z5 = dedekind_zeta_nonpositive(field("Qsqrt5"), -1, ctx);
    RationalFit fit = reconstruct_rational(z5, BigInt(10000), tenpow(-30));
    REQUIRE(fit.found);
    CHECK(fit.value == Rational(1, 30));

    CHECK(dedekind_zeta_nonpositive(field("Qi"), -1, ctx) == 0);
    CHECK(dedekind_zeta_nonpositive(field("Qi"), -3, ctx) == 0);
    // zeta_K(0) = -h/w for imaginary quadratic fields.
    CHECK(abs(dedekind_zeta_nonpositive(field("Qi"), 0, ctx) + BigReal(1) / 4) < tol);
    CHECK(abs(dedekind_zeta_nonpositive(field("Qsqrt-3"), 0, ctx) + BigReal(1) / 6) < tol);
    CHECK(abs(dedekind_zeta_nonpositive(field("Qsqrt-5"), 0, ctx) + BigReal(1)) < tol);
    CHECK(dedekind_zeta_nonpositive(field("Qsqrt5"), 0, ctx) == 0);
    CHECK(dedekind_zeta_nonpositive(field("Qsqrt2"), 0, ctx) == 0);
}

TEST_CASE("zeta_even_positive")
{
    auto ctx = PrecisionContext::from_digits(30);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    CHECK(abs(zeta_even_positive(FieldDescriptor::rationals(), 0, ctx) + BigReal(0.5)) < tenpow(-29));
    CHECK(zeta_even_positive(field("Qsqrt5"), 0, ctx) == 0);
    CHECK(abs(zeta_even_positive(FieldDescriptor::rationals(), 1, ctx) - pi * pi / 6) < tenpow(-29));
    BigReal z0 = zeta_even_positive(FieldDescriptor::rationals(), 0, ctx);
    CHECK(abs(z0 * z0 - BigReal(0.25)) < tenpow(-29));
}

TEST_CASE("functional-equation round trip for totally real fields")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    for (const char* sel : {"Q", "Qsqrt5", "Qsqrt2"}) {
        FieldDescriptor f = field(sel);
        for (int m = 1; m <= 3; ++m) {
            BigReal back = dedekind_zeta_nonpositive(f, 1 - 2 * m, ctx);
            BigReal forward = functional_equation_forward(f, 2 * m, back, ctx);
            BigReal direct = dedekind_zeta(f, BigComplex(make_real(2 * m)), ctx).re;
            INFO(sel, " m=", m);
            CHECK(abs(forward - direct) <= 10 * ctx.target_eps() * (1 + abs(direct)));
        }
    }
}

TEST_CASE("Klingen-Siegel rationality for totally real built-ins")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    for (const char* sel : {"Q", "Qsqrt5", "Qsqrt2"}) {
        FieldDescriptor f = field(sel);
        for (int m = 1; m <= 2; ++m) {
            BigReal z = dedekind_zeta(f, BigComplex(make_real(2 * m)), ctx).re;
            BigReal q = z * sqrt(make_real(f.disc_abs())) / pow(pi, 2 * m * static_cast<int>(f.degree()));
            RationalFit fit = reconstruct_rational(q, BigInt(1000000), ctx.target_eps() * 100);
            INFO(sel, " m=", m);
            CHECK(fit.found);
        }
    }
}

TEST_CASE("Euler product agrees with the Dirichlet series at s = 2")
{
    auto ctx = PrecisionContext::from_digits(20);
    for (const auto& f : builtin_fields()) {
        if (!f.is_quadratic())
            continue;
        double product = 1;
        for (int p = 2; p <= 10000; ++p) {
            bool prime = true;
            for (int q = 2; q * q <= p && prime; ++q)
                prime = p % q != 0;
            if (!prime)
                continue;
            int chi = kronecker_symbol(f.disc_signed(), p);
            double x = 1.0 / (double(p) * p);
            product /= (1 - x) * (1 - chi * x);
        }
        double exact = static_cast<double>(dedekind_zeta(f, BigComplex(BigReal(2)), ctx).re);
        INFO(f.label());
        CHECK(std::abs(product - exact) < 1e-3);
    }
}

TEST_CASE("rational reconstruction")
{
    ScopedPrecision guard(200);
    BigReal x = BigReal(355) / 113;
    RationalFit fit = reconstruct_rational(x, BigInt(1000), pow(BigReal(10), -40));
    REQUIRE(fit.found);
    CHECK(fit.value == Rational(355, 113));
    RationalFit none = reconstruct_rational(const_pi(), BigInt(1000), pow(BigReal(10), -40));
    CHECK_FALSE(none.found);
}
