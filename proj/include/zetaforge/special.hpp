// Complex gamma, modified Bessel K_0 / K_1/2, and vertical-line quadrature
// for Mellin-Barnes integrals.
#ifndef ZETAFORGE_SPECIAL_HPP
#define ZETAFORGE_SPECIAL_HPP

#include "zetaforge/fields.hpp"
#include "zetaforge/numeric.hpp"
#include "zetaforge/precision.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace zetaforge {

/// Gamma(s) with relative error below 2^(16 - working_bits). Throws
/// PoleError at nonpositive integers.
BigComplex complex_gamma(const BigComplex& s, const PrecisionContext& ctx);

/// Same, at an explicit precision in bits.
BigComplex complex_gamma(const BigComplex& s, unsigned bits);

/// K_nu(z) for nu in {0, 1/2} and Re(z) > 0, absolute error below
/// ctx.series_tail_eps().
BigComplex bessel_K(const BigReal& nu, const BigComplex& z, const PrecisionContext& ctx);

/// K_0(z) to an absolute error `eps`.
BigComplex bessel_K0(const BigComplex& z, const BigReal& eps);

/// Upper bound for |K_0(z)|, Re(z) > 0, from |K_0(z)| <= K_0(Re z) <= sqrt(pi/(2 Re z)) e^{-Re z}.
double bessel_K0_bound(double re_z);

namespace detail {

struct BesselApprox {
    BigComplex value;
    BigReal error_bound;  // absolute
    bool ok = false;      // error_bound <= requested eps
};

/// Ascending series -(log(z/2) + gamma) I_0(z) + sum H_k (z^2/4)^k / (k!)^2.
BesselApprox bessel_K0_series(const BigComplex& z, const BigReal& eps);

/// Large-|z| expansion truncated before its smallest term.
BesselApprox bessel_K0_asymptotic(const BigComplex& z, const BigReal& eps);

}  // namespace detail

// ---------------------------------------------------------------------------
// Line integrals (1/2 pi i) int_{c - iT}^{c + iT} F(s) ds.

enum class QuadratureRule { TruncatedTrapezoid, GaussLegendrePanels };

struct ContourSpec {
    BigReal abscissa_c;
    std::optional<BigReal> height_T;  // derived from the integrand's decay when empty
    unsigned nodes = 256;             // lower bound on the number of samples
    QuadratureRule rule = QuadratureRule::TruncatedTrapezoid;

    static ContourSpec from_context(const PrecisionContext& ctx);
    /// c > 1, |cos(pi c/2)| > 0.05, T > 0 when given, nodes >= 64.
    void validate() const;
};

/// Shape of |F(c + it)| used to size the contour: roughly
/// |t|^power e^{-rate |t|}, with F analytic for |Re s - c| < strip.
struct DecayModel {
    double rate = 0;
    double power = 0;
    double strip = 1;
};

struct LineIntegral {
    BigComplex value;
    BigReal error_estimate;  // discretization + truncation
    BigReal height;          // T used
    BigReal step;            // trapezoid step or panel width
    std::size_t evaluations = 0;
};

/// Integrates F = f * g along Re(s) = c, where f is memoized across calls
/// (the expensive, argument-independent factor) and g is cheap.
///
/// When f is conjugate-symmetric (f(conj s) = conj f(s)) only Im(s) >= 0 is
/// sampled for f. Thread-safe.
class LineIntegrator {
public:
    using Function = std::function<BigComplex(const BigComplex&)>;

    LineIntegrator(Function f, bool f_conjugate_symmetric, ContourSpec contour, unsigned bits);

    /// Throws ConvergenceError when successive refinements do not agree to tol.
    LineIntegral integrate(const Function& g, bool g_conjugate_symmetric, const DecayModel& decay,
                           const BigReal& tol) const;

    const ContourSpec& contour() const { return contour_; }
    unsigned bits() const { return bits_; }
    std::size_t cached_samples() const;

private:
    BigComplex sample_f(const BigReal& t) const;
    LineIntegral trapezoid(const Function& g, bool symmetric, const DecayModel& decay, const BigReal& tol) const;
    LineIntegral gauss_legendre(const Function& g, bool symmetric, const DecayModel& decay,
                                const BigReal& tol) const;
    BigReal choose_height(const Function& g, bool symmetric, const DecayModel& decay, const BigReal& tol,
                          const BigReal& step) const;

    Function f_;
    bool f_symmetric_;
    ContourSpec contour_;
    unsigned bits_;
    mutable std::mutex mutex_;
    mutable std::map<BigReal, BigComplex> memo_;
};

/// K_nu(x) = (1/2 pi i) int Gamma((s-nu)/2) Gamma((s+nu)/2) 2^{s-2} x^{-s} ds
/// on Re(s) = c > |Re nu|. An independent check of bessel_K.
BigComplex mellin_barnes_K(const BigComplex& order, const BigComplex& x, const ContourSpec& contour,
                           const PrecisionContext& ctx);

/// The field's gamma factor with its poles cancelled against the
/// trigonometric factors:
/// Gamma(s)^d (2/pi)^{r2} sin(pi s/2)^{r2} cos(pi s/2)^{r1+r2-1}
/// = Gamma(s)^{r1+r2} / Gamma(1-s)^{r2} cos(pi s/2)^{r1-1}.
BigComplex reduced_gamma_factor(unsigned r1, unsigned r2, const BigComplex& s, unsigned bits);

/// Decay of reduced_gamma_factor(s) x^{-s} along Re(s) = c.
DecayModel reduced_gamma_decay(unsigned r1, unsigned r2, const BigReal& c, const BigComplex& x);

/// One term of the Meijer-G series defining the kernel:
/// 2^{r1+r2-1} pi^{1-r1/2} (1/2 pi i) int reduced_gamma_factor(s) (x j)^{-s} ds.
BigReal meijer_G_term(const FieldDescriptor& field, const BigReal& x, std::int64_t j, const ContourSpec& contour,
                      const PrecisionContext& ctx);

}  // namespace zetaforge

#endif  // ZETAFORGE_SPECIAL_HPP
