// Both sides of the zeta / Lambert series transformation identities, and the
// extended Eisenstein series.
//
// Every verify_* function is pure in (arguments, ctx). alpha and beta always
// satisfy alpha beta = pi^{2d}; beta is derived from alpha.
#ifndef ZETAFORGE_IDENTITIES_HPP
#define ZETAFORGE_IDENTITIES_HPP

#include "zetaforge/fields.hpp"
#include "zetaforge/kernel.hpp"
#include "zetaforge/numeric.hpp"
#include "zetaforge/precision.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zetaforge {

enum class IdentityId {
    RamanujanNF,
    RamanujanClassical,
    LerchClassical,
    LerchNF,
    EisensteinSymm,
    SeriesEvaluation,
    QuasiModular,
    EtaLog,
    EisensteinTransform,
};

/// Kebab-case names used on the command line and in reports.
std::string identity_name(IdentityId id);
std::optional<IdentityId> parse_identity(const std::string& name);
const std::vector<IdentityId>& all_identities();

/// One infinite series that entered a report.
struct SeriesDiagnostic {
    std::string label;
    std::string method;
    std::int64_t terms = 0;
    BigReal error_bound;

    bool operator==(const SeriesDiagnostic& o) const
    {
        return label == o.label && method == o.method && terms == o.terms && error_bound == o.error_bound;
    }
};

struct VerificationReport {
    IdentityId identity = IdentityId::RamanujanNF;
    std::string field_label;
    std::map<std::string, std::string> params;
    BigComplex lhs;
    BigComplex rhs;
    BigReal abs_residual;
    BigReal rel_residual;
    BigReal tolerance;
    bool passed = false;
    std::vector<SeriesDiagnostic> terms_report;
    /// Extra named quantities (alternative forms, reconstructed rationals).
    std::map<std::string, std::string> diagnostics;

    bool operator==(const VerificationReport& o) const;
};

/// alpha^{-m} {H/2 zeta_K(2m+1) + C_K S(alpha)} against the beta side plus
/// the finite zeta_K(2j) zeta_K(2m-2j+2) sum, S(x) = sum V(n) n^{-2m-1} Omega(2^d n x / D).
/// m = 0 is rejected.
VerificationReport verify_ramanujan_nf(const FieldDescriptor& field, long m, const BigComplex& alpha,
                                       const PrecisionContext& ctx);

/// The rational-field case summed directly with 1/(e^{2n alpha} - 1) and
/// Bernoulli-number zeta values; shares nothing with the kernel module.
VerificationReport verify_ramanujan_classical(long m, const BigComplex& alpha, const PrecisionContext& ctx);

/// zeta(4m+3) against its Bernoulli-number expression minus
/// 2 sum n^{-4m-3} / (e^{2 pi n} - 1), m >= 0.
VerificationReport verify_lerch_classical(long m, const PrecisionContext& ctx);

/// zeta_K(4m+3) against the zeta_K(2j) sum and the Omega series at (2 pi)^d.
VerificationReport verify_lerch_nf(const FieldDescriptor& field, long m, const PrecisionContext& ctx);

/// G_{k,K}(z) = H/(2 C_K) zeta_K(1-k) + sum V(n) n^{k-1} Omega(-(2 pi)^d i n z / D), Im z > 0.
KernelSeriesResult eisenstein_G(const FieldDescriptor& field, long k, const BigComplex& z,
                                const PrecisionContext& ctx);

/// G(-1/z) against z^k G(z), k even >= 4.
VerificationReport verify_eisenstein_transform(const FieldDescriptor& field, long k, const BigComplex& z,
                                               const PrecisionContext& ctx);

/// alpha^m S(alpha) - (-beta)^m S(beta) against -H/(2 C_K) (alpha^m - (-beta)^m) zeta_K(1-2m),
/// S(x) = sum V(n) n^{2m-1} Omega(2^d n x / D), m > 1.
VerificationReport verify_eisenstein_symm(const FieldDescriptor& field, long m, const BigComplex& alpha,
                                          const PrecisionContext& ctx);

/// sum V(n) n^{2m-1} Omega((2 pi)^d n / D) = -H/(2 C_K) zeta_K(1-2m), m odd > 1.
VerificationReport verify_series_evaluation(const FieldDescriptor& field, long m, const PrecisionContext& ctx);

/// The weight-2 identity
///   alpha S(alpha) + beta S(beta) = -H zeta_K(-1)/(2 C_K) (alpha + beta) - zeta_K(0)^2 / (pi^{1-d} C_K),
/// S(x) = sum n V(n) Omega(2^d n x / D). The form without the final 1/C_K
/// is evaluated too and reported as diagnostics["uncorrected_residual"].
VerificationReport verify_quasimodular(const FieldDescriptor& field, const BigComplex& alpha,
                                       const PrecisionContext& ctx);

/// S(alpha) - S(beta) = H^2/(4 C_K) log(alpha/beta) + zeta_K(0) zeta_K(2)/(pi^{d+1} C_K) (alpha - beta),
/// S(x) = sum V(n) n^{-1} Omega(2^d n x / D).
VerificationReport verify_eta_log(const FieldDescriptor& field, const BigComplex& alpha, const PrecisionContext& ctx);

/// beta = pi^{2d} / alpha.
BigComplex dual_parameter(const FieldDescriptor& field, const BigComplex& alpha);

}  // namespace zetaforge

#endif  // ZETAFORGE_IDENTITIES_HPP
