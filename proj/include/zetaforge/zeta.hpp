// Bernoulli numbers, Riemann/Hurwitz zeta and Dedekind zeta values.
#ifndef ZETAFORGE_ZETA_HPP
#define ZETAFORGE_ZETA_HPP

#include "zetaforge/fields.hpp"
#include "zetaforge/numeric.hpp"
#include "zetaforge/precision.hpp"

#include <memory>
#include <vector>

namespace zetaforge {

/// Exact B_n, with B_1 = -1/2.
Rational bernoulli(unsigned n);

/// B_0..B_count as BigReal at `bits` of precision. The snapshot is shared
/// and immutable.
std::shared_ptr<const std::vector<BigReal>> bernoulli_reals(unsigned count, unsigned bits);

/// zeta(2m) = (-1)^{m+1} (2 pi)^{2m} B_{2m} / (2 (2m)!), m >= 1.
BigReal riemann_zeta_even(unsigned m, const PrecisionContext& ctx);

/// Hurwitz zeta(s, a) for 0 < a <= 1, s != 1, by Euler-Maclaurin summation.
BigComplex hurwitz_zeta(const BigComplex& s, const BigReal& a, const PrecisionContext& ctx);

/// Riemann zeta(s), s != 1.
BigComplex riemann_zeta(const BigComplex& s, const PrecisionContext& ctx);

/// zeta(s) and L(s, chi_D) sharing one set of Hurwitz evaluations.
struct ZetaPair {
    BigComplex zeta;
    BigComplex l_value;
};
ZetaPair zeta_and_l(std::int64_t disc, const BigComplex& s, const PrecisionContext& ctx);

/// zeta_K(s) for Re(s) >= 1 + margin.
///
/// Q and quadratic fields go through zeta(s) L(s, chi_D), which is accurate
/// on any vertical line. Table-backed fields sum the Dirichlet series
/// directly and throw TruncationError when the table (or the budget) is too
/// short for series_tail_eps.
BigComplex dedekind_zeta(const FieldDescriptor& field, const BigComplex& s, const PrecisionContext& ctx);

/// Truncated Dirichlet series sum_{n<=N} V(n) n^{-s} with a tail estimate;
/// the independent route for any field. N is chosen adaptively (see
/// dirichlet_truncation) unless `terms` is given.
struct DirichletSum {
    BigComplex value;
    BigReal tail_bound;
    std::int64_t terms = 0;
};
DirichletSum dedekind_zeta_direct(const IdealCounts& counts, const BigComplex& s, const PrecisionContext& ctx,
                                  std::int64_t terms = 0);

/// Smallest N with C N^{1-sigma+delta} / (sigma-1-delta) <= eps, C = max V(n)/n^delta.
double dirichlet_truncation(double sigma, double coefficient_bound, double log_eps, double delta = 0.1);

/// zeta_K(n) for n <= 0 through the functional equation. Trivial zeros are
/// returned as exact zeros; zeta_K(0) for signatures (1,0) and (0,1) comes
/// from the residue at s = 1.
BigReal dedekind_zeta_nonpositive(const FieldDescriptor& field, int n, const PrecisionContext& ctx);

/// zeta_K(2j), including j = 0.
BigReal zeta_even_positive(const FieldDescriptor& field, unsigned j, const PrecisionContext& ctx);

/// Right-hand side of the functional equation at s:
/// D^{1/2-s} 2^{ds-r2} pi^{ds-r1-r2} Gamma(1-s)^{r1+r2} / Gamma(s)^{r2} sin(pi s/2)^{r1} zeta_K(1-s)
/// for integer s >= 2 given zeta_K(1-s). Used for round-trip checks.
BigReal functional_equation_forward(const FieldDescriptor& field, int s, const BigReal& zeta_at_one_minus_s,
                                    const PrecisionContext& ctx);

}  // namespace zetaforge

#endif  // ZETAFORGE_ZETA_HPP
