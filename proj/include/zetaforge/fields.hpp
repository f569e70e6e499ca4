// Number fields and their ideal-counting coefficients V_K(n).
#ifndef ZETAFORGE_FIELDS_HPP
#define ZETAFORGE_FIELDS_HPP

#include "zetaforge/numeric.hpp"
#include "zetaforge/precision.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace zetaforge {

struct RationalField {};
struct QuadraticCharacter {};
struct ExternalTable {
    std::string path;
    std::shared_ptr<const std::vector<std::int64_t>> coefficients;  // V(1), V(2), ...
};
using CoefficientSource = std::variant<RationalField, QuadraticCharacter, ExternalTable>;

/// Regulator in a form that can be evaluated at any working precision.
struct Regulator {
    enum class Kind { One, LogUnit, Decimal };
    Kind kind = Kind::One;
    // LogUnit: R = log((u + v sqrt(disc)) / 2).
    std::int64_t u = 0;
    std::int64_t v = 0;
    std::string decimal;

    BigReal value(std::int64_t disc) const;
};

class FieldDescriptor {
public:
    static FieldDescriptor rationals();
    /// Quadratic field of fundamental discriminant `disc`. Real fields need
    /// the fundamental unit (u + v sqrt(disc)) / 2.
    static FieldDescriptor quadratic(std::string label, std::int64_t disc, std::int64_t class_number,
                                     Regulator regulator);
    static FieldDescriptor from_table(std::string label, unsigned r1, unsigned r2, std::int64_t disc,
                                      ExternalTable table, std::optional<std::int64_t> class_number,
                                      std::optional<std::string> regulator,
                                      std::optional<std::int64_t> roots_of_unity);

    const std::string& label() const { return label_; }
    unsigned degree() const { return r1_ + 2 * r2_; }
    unsigned r1() const { return r1_; }
    unsigned r2() const { return r2_; }
    std::int64_t disc_abs() const { return disc_abs_; }
    std::int64_t disc_signed() const { return disc_signed_; }
    std::int64_t class_number() const { return class_number_; }
    const Regulator& regulator() const { return regulator_; }
    std::int64_t roots_of_unity() const { return roots_of_unity_; }
    const CoefficientSource& coefficient_source() const { return source_; }

    bool is_rational() const { return std::holds_alternative<RationalField>(source_); }
    bool is_quadratic() const { return std::holds_alternative<QuadraticCharacter>(source_); }
    bool is_table() const { return std::holds_alternative<ExternalTable>(source_); }
    bool totally_real() const { return r2_ == 0; }
    /// False for tables that did not ship h, R and w.
    bool has_class_data() const { return class_data_; }

    /// Throws DomainError if an invariant is violated.
    void validate() const;

private:
    std::string label_;
    unsigned r1_ = 1;
    unsigned r2_ = 0;
    std::int64_t disc_abs_ = 1;
    std::int64_t disc_signed_ = 1;
    std::int64_t class_number_ = 1;
    Regulator regulator_;
    std::int64_t roots_of_unity_ = 2;
    CoefficientSource source_ = RationalField{};
    bool class_data_ = true;
};

/// Q, Q(i), Q(sqrt-3), Q(sqrt5), Q(sqrt2), Q(sqrt-5).
const std::vector<FieldDescriptor>& builtin_fields();

/// Looks up a built-in by label or short alias ("Q", "Qi", "Qsqrt5",
/// "Qsqrt-3", "Qsqrtm3", ...). Returns nullopt if unknown.
std::optional<FieldDescriptor> find_builtin_field(const std::string& selector);

bool is_fundamental_discriminant(std::int64_t d);

/// Kronecker symbol (D/n) for n >= 1.
int kronecker_symbol(std::int64_t d, std::int64_t n);

/// V_K(n), the number of integral ideals of norm n.
std::int64_t ideal_count(const FieldDescriptor& field, std::int64_t n);

/// sigma_a(n) = sum_{d|n} d^a, exact.
Rational divisor_sigma(int a, std::int64_t n);

/// Residue of zeta_K at s = 1 (analytic class number formula).
BigReal residue_H(const FieldDescriptor& field, const PrecisionContext& ctx);

/// C_K = 2^{r1-1} (2 pi)^{r2} / sqrt(D_K).
BigReal constant_C(const FieldDescriptor& field, const PrecisionContext& ctx);

/// Memoized V_K(1..N) for one evaluation session. Thread-safe.
class IdealCounts {
public:
    explicit IdealCounts(FieldDescriptor field);

    const FieldDescriptor& field() const { return field_; }
    std::int64_t operator()(std::int64_t n) const;
    /// Snapshot of V(1..n); index 0 is unused and holds 0.
    std::vector<std::int64_t> prefix(std::int64_t n) const;

private:
    void extend(std::int64_t n) const;

    FieldDescriptor field_;
    mutable std::mutex mutex_;
    mutable std::vector<std::int64_t> values_;  // values_[n] = V(n)
};

/// Parses the tab-separated coefficient table format:
///   # degree=3
///   # r1=1
///   # r2=1
///   # disc=-23
///   1<TAB>1
///   2<TAB>0
/// Optional header keys: label, class_number, regulator, roots_of_unity.
FieldDescriptor parse_coefficient_table(std::istream& in, const std::string& path);

}  // namespace zetaforge

#endif  // ZETAFORGE_FIELDS_HPP
