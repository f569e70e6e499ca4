// The kernel Omega_K and the Lambert-type series built from it.
//
//   Omega_K(x) = (1/2 pi i) int_{(c)} zeta_K(s) G(s) x^{-s} ds,
//   G(s) = Gamma(s)^d (2/pi)^{r2} sin(pi s/2)^{r2} cos(pi s/2)^{r1+r2-1},
//
// which is 1/(e^x - 1) for Q and a K_0 series for quadratic fields.
#ifndef ZETAFORGE_KERNEL_HPP
#define ZETAFORGE_KERNEL_HPP

#include "zetaforge/fields.hpp"
#include "zetaforge/numeric.hpp"
#include "zetaforge/precision.hpp"
#include "zetaforge/special.hpp"

#include <memory>
#include <optional>
#include <string>

namespace zetaforge {

enum class KernelMethod { ClosedFormQ, BesselRealQuad, BesselImagQuad, MellinBarnes };

std::string method_name(KernelMethod m);
std::optional<KernelMethod> parse_method(const std::string& name);

struct KernelSeriesResult {
    BigComplex value;
    /// Certified bound on the discarded tail plus per-term evaluation error;
    /// an error estimate (not a bound) on the Mellin-Barnes path.
    BigReal truncation_error_bound;
    std::int64_t terms_used = 0;
    KernelMethod method = KernelMethod::ClosedFormQ;
};

/// Method omega() picks for a field.
KernelMethod default_method(const FieldDescriptor& field);

/// Omega_K(x), Re(x) > 0. `force` selects a method explicitly; Bessel forms
/// only apply to quadratic fields of the matching signature.
KernelSeriesResult omega(const FieldDescriptor& field, const BigComplex& x, const PrecisionContext& ctx,
                         std::optional<KernelMethod> force = std::nullopt);

/// sum_{n >= 1} V_K(n) n^a Omega_K(n y / D_K), Re(y) > 0.
KernelSeriesResult lambert_series(const FieldDescriptor& field, long a, const BigComplex& y,
                                  const PrecisionContext& ctx, std::optional<KernelMethod> force = std::nullopt);

/// Omega_K on the Mellin-Barnes line with zeta_K(s) G(s) memoized on the
/// quadrature nodes, so that repeated evaluations cost one x^{-s} per node.
class MellinBarnesKernel {
public:
    MellinBarnesKernel(const FieldDescriptor& field, const PrecisionContext& ctx);

    KernelSeriesResult omega(const BigComplex& x) const;

    /// Process-wide instance for (field, contour, precision).
    static std::shared_ptr<const MellinBarnesKernel> shared(const FieldDescriptor& field,
                                                            const PrecisionContext& ctx);

private:
    FieldDescriptor field_;
    PrecisionContext ctx_;
    std::unique_ptr<LineIntegrator> integrator_;
};

/// log of a bound for int_V^inf v^q e^{-rho v} dv, namely
/// log(V^q e^{-rho V} / (rho - q/V)); requires rho V > q. +inf otherwise.
double log_tail_integral(double q, double rho, double v);

}  // namespace zetaforge

#endif  // ZETAFORGE_KERNEL_HPP
