#ifndef ZETAFORGE_PRECISION_HPP
#define ZETAFORGE_PRECISION_HPP

#include "zetaforge/numeric.hpp"

#include <optional>

namespace zetaforge {

/// Working precision, truncation thresholds and contour parameters of one
/// computation. Immutable once built; build it through from_digits() and
/// adjust with the with_* helpers.
class PrecisionContext {
public:
    /// target_eps = 10^-digits, working precision = digits plus guard bits.
    static PrecisionContext from_digits(unsigned digits, unsigned guard_bits = 64);

    unsigned working_bits() const { return working_bits_; }
    unsigned target_digits() const { return target_digits_; }
    const BigReal& target_eps() const { return target_eps_; }
    const BigReal& series_tail_eps() const { return series_tail_eps_; }
    const BigReal& quad_line_c() const { return quad_line_c_; }
    const std::optional<BigReal>& quad_height_T() const { return quad_height_T_; }
    unsigned quad_nodes() const { return quad_nodes_; }
    /// Dirichlet series are refused for Re(s) < 1 + margin.
    const BigReal& dirichlet_margin() const { return dirichlet_margin_; }
    /// Largest degree served by the general Mellin-Barnes kernel path.
    unsigned max_general_degree() const { return max_general_degree_; }
    unsigned worker_count() const { return worker_count_; }

    PrecisionContext with_line_c(const BigReal& c) const;
    PrecisionContext with_height(const BigReal& t) const;
    PrecisionContext with_nodes(unsigned n) const;
    PrecisionContext with_series_tail_eps(const BigReal& eps) const;
    PrecisionContext with_max_general_degree(unsigned d) const;
    PrecisionContext with_workers(unsigned n) const;

    /// Throws DomainError when an invariant is violated.
    void validate() const;

private:
    PrecisionContext() = default;

    unsigned working_bits_ = 0;
    unsigned target_digits_ = 0;
    BigReal target_eps_;
    BigReal series_tail_eps_;
    BigReal quad_line_c_;
    std::optional<BigReal> quad_height_T_;
    unsigned quad_nodes_ = 256;
    BigReal dirichlet_margin_;
    unsigned max_general_degree_ = 3;
    unsigned worker_count_ = 1;
};

}  // namespace zetaforge

#endif  // ZETAFORGE_PRECISION_HPP
