#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zetaforge/errors.hpp"
#include "zetaforge/fields.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace zetaforge;

namespace {

FieldDescriptor field(const char* sel) { return *find_builtin_field(sel); }

// Number of (x, y) in Z^2 with x^2 + y^2 = n.
int sum_of_two_squares(int n)
{
    int count = 0;
    for (int x = -100; x <= 100; ++x)
        for (int y = -100; y <= 100; ++y)
            if (x * x + y * y == n)
                ++count;
    return count;
}

std::vector<std::int64_t> small_primes(int limit)
{
    std::vector<std::int64_t> ps;
    for (int p = 2; p <= limit; ++p) {
        bool prime = true;
        for (int q = 2; q * q <= p; ++q)
            prime = prime && p % q != 0;
        if (prime)
            ps.push_back(p);
    }
    return ps;
}

}  // namespace

TEST_CASE("kronecker symbol examples")
{
    CHECK(kronecker_symbol(1, 7) == 1);
    CHECK(kronecker_symbol(-4, 3) == -1);
    CHECK(kronecker_symbol(5, 2) == -1);
    CHECK_THROWS_AS(kronecker_symbol(5, 0), DomainError);
}

TEST_CASE("inert primes have no elements of that norm")
{
    // 3 is inert in Q(i): no solutions to x^2 + y^2 = 3.
    CHECK(sum_of_two_squares(3) == 0);
    // 2 is inert in Q(sqrt5): norm form x^2 + xy - y^2 never hits +-2.
    bool found = false;
    for (int x = -60; x <= 60; ++x)
        for (int y = -60; y <= 60; ++y)
            found = found || std::abs(x * x + x * y - y * y) == 2;
    CHECK_FALSE(found);
}

TEST_CASE("kronecker symbol is completely multiplicative with period |D|")
{
    for (std::int64_t d : {-4, -3, 5, 8, -20, 12, -7, 13}) {
        std::int64_t q = d < 0 ? -d : d;
        for (std::int64_t m = 1; m <= 60; ++m) {
            for (std::int64_t n = 1; n <= 60; ++n)
                REQUIRE(kronecker_symbol(d, m * n) == kronecker_symbol(d, m) * kronecker_symbol(d, n));
            REQUIRE(kronecker_symbol(d, m + q) == kronecker_symbol(d, m));
        }
    }
}

TEST_CASE("ideal_count examples")
{
    CHECK(ideal_count(FieldDescriptor::rationals(), 12) == 1);
    CHECK(ideal_count(field("Qi"), 5) == 2);
    CHECK(sum_of_two_squares(5) / 4 == 2);
    // (1 - 2^-s)^-1 (1 + 2^-s)^-1 = sum_k 4^{-ks}: coefficient of 4^-s is 1, of 2^-s is 0.
    CHECK(ideal_count(field("Qsqrt5"), 4) == 1);
    CHECK(ideal_count(field("Qsqrt5"), 2) == 0);
    CHECK_THROWS_AS(ideal_count(field("Qi"), 0), DomainError);
}

TEST_CASE("divisor_sigma examples")
{
    CHECK(divisor_sigma(1, 6) == 12);
    CHECK(divisor_sigma(0, 12) == 6);
    CHECK(divisor_sigma(3, 4) == 73);
    CHECK(divisor_sigma(-1, 6) == Rational(2));  // 1 + 1/2 + 1/3 + 1/6
    CHECK(divisor_sigma(-3, 2) == Rational(9, 8));
}

TEST_CASE("multiplicativity of V_K over coprime pairs")
{
    for (const auto& f : builtin_fields()) {
        IdealCounts v(f);
        for (std::int64_t m = 1; m <= 10000; ++m) {
            for (std::int64_t n = 1; m * n <= 10000; ++n) {
                if (std::gcd(m, n) != 1)
                    continue;
                REQUIRE(v(m * n) == v(m) * v(n));
            }
        }
    }
}

TEST_CASE("prime-power law for quadratic fields")
{
    for (const auto& f : builtin_fields()) {
        if (!f.is_quadratic())
            continue;
        for (std::int64_t p : small_primes(100)) {
            int chi = kronecker_symbol(f.disc_signed(), p);
            std::int64_t pk = 1;
            for (int k = 1; k <= 6; ++k) {
                pk *= p;
                std::int64_t expected = chi == -1 ? (k % 2 == 0 ? 1 : 0) : chi == 1 ? k + 1 : 1;
                REQUIRE(ideal_count(f, pk) == expected);
            }
        }
    }
}

TEST_CASE("representation oracle for Q(i)")
{
    IdealCounts v(field("Qi"));
    // r_2(n) by enumeration up to 2000.
    std::vector<int> reps(2001, 0);
    for (int x = -45; x <= 45; ++x)
        for (int y = -45; y <= 45; ++y)
            if (x * x + y * y <= 2000 && x * x + y * y > 0)
                ++reps[x * x + y * y];
    for (int n = 1; n <= 2000; ++n)
        REQUIRE(v(n) * 4 == reps[n]);
}

TEST_CASE("sieved and direct V_K agree")
{
    for (const auto& f : builtin_fields()) {
        IdealCounts v(f);
        auto pre = v.prefix(3000);
        for (std::int64_t n = 1; n <= 3000; ++n)
            REQUIRE(pre[static_cast<std::size_t>(n)] == ideal_count(f, n));
    }
}

TEST_CASE("residue_H and constant_C closed forms")
{
    auto ctx = PrecisionContext::from_digits(40);
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    BigReal tol = pow(BigReal(10), -38);
    CHECK(abs(residue_H(FieldDescriptor::rationals(), ctx) - 1) < tol);
    CHECK(abs(residue_H(field("Qi"), ctx) - pi / 4) < tol);
    BigReal phi = (1 + sqrt(BigReal(5))) / 2;
    CHECK(abs(residue_H(field("Qsqrt5"), ctx) - 2 * log(phi) / sqrt(BigReal(5))) < tol);

    CHECK(abs(constant_C(FieldDescriptor::rationals(), ctx) - 1) < tol);
    for (const auto& f : builtin_fields()) {
        if (!f.is_quadratic())
            continue;
        BigReal expected = f.r2() == 0 ? BigReal(2 / sqrt(make_real(f.disc_abs())))
                                       : BigReal(pi / sqrt(make_real(f.disc_abs())));
        CHECK(abs(constant_C(f, ctx) - expected) < tol);
    }
}

// Independent residue oracle: (1/X) sum V(n) e^{-n/X} = H + zeta_K(0)/X + O(X^-2);
// Richardson over X and 2X removes the 1/X term.
TEST_CASE("residue_H matches the smoothed ideal-count mean")
{
    auto ctx = PrecisionContext::from_digits(20);
    for (const auto& f : builtin_fields()) {
        IdealCounts v(f);
        const double x = 4000.0;
        auto pre = v.prefix(static_cast<std::int64_t>(2 * x * 60));
        auto smoothed = [&](double scale) {
            double total = 0;
            for (std::size_t n = 1; n < pre.size() && n <= static_cast<std::size_t>(scale * 60); ++n)
                total += static_cast<double>(pre[n]) * std::exp(-static_cast<double>(n) / scale);
            return total / scale;
        };
        double extrapolated = 2 * smoothed(2 * x) - smoothed(x);
        double h = static_cast<double>(residue_H(f, ctx));
        INFO(f.label());
        CHECK(std::abs(extrapolated - h) < 1e-5);
    }
}

TEST_CASE("descriptor invariants")
{
    for (const auto& f : builtin_fields()) {
        CHECK(f.degree() == f.r1() + 2 * f.r2());
        CHECK_NOTHROW(f.validate());
    }
    CHECK(field("Qi").roots_of_unity() == 4);
    CHECK(field("Qsqrt-3").roots_of_unity() == 6);
    CHECK(field("Qsqrt-5").class_number() == 2);
    CHECK_THROWS_AS(FieldDescriptor::quadratic("bad", 12 * 3, 1, {}), DomainError);
    CHECK_THROWS_AS(FieldDescriptor::quadratic("bad", 3, 1, {}), DomainError);
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(8));
    CHECK(is_fundamental_discriminant(5));
    CHECK_FALSE(is_fundamental_discriminant(-8 * 9));
    CHECK_FALSE(is_fundamental_discriminant(4));
}

TEST_CASE("coefficient table parsing")
{
    SUBCASE("well-formed cubic stub")
    {
        std::istringstream in("# degree=3\n# r1=1\n# r2=1\n# disc=-23\n1\t1\n2\t0\n3\t1\n");
        FieldDescriptor f = parse_coefficient_table(in, "cubic.tsv");
        CHECK(f.degree() == 3);
        CHECK(f.is_table());
        CHECK(ideal_count(f, 3) == 1);
        CHECK_FALSE(f.has_class_data());
        try {
            ideal_count(f, 4);
            FAIL("expected TableRangeError");
        } catch (const TableRangeError& e) {
            CHECK(e.max_index() == 3);
        }
    }
    SUBCASE("degree mismatch names both values")
    {
        std::istringstream in("# degree=4\n# r1=1\n# r2=1\n# disc=-23\n1\t1\n");
        try {
            parse_coefficient_table(in, "bad.tsv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            std::string msg = e.what();
            CHECK(msg.find('4') != std::string::npos);
            CHECK(msg.find('3') != std::string::npos);
        }
    }
    SUBCASE("gap in indices is rejected at the gap")
    {
        std::istringstream in("# degree=3\n# r1=1\n# r2=1\n# disc=-23\n1\t1\n2\t0\n4\t1\n");
        try {
            parse_coefficient_table(in, "gap.tsv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 7);
        }
    }
    SUBCASE("malformed line reports its number")
    {
        std::istringstream in("# degree=1\n# r1=1\n# r2=0\n# disc=1\n1\t1\n2 1\n");
        try {
            parse_coefficient_table(in, "m.tsv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 6);
        }
    }
}
