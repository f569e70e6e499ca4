#include "zetaforge/fields.hpp"

#include "zetaforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <sstream>

namespace zetaforge {

namespace {

bool squarefree(std::int64_t m)
{
    m = m < 0 ? -m : m;
    if (m == 0)
        return false;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0)
            return false;
    }
    return true;
}

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::string trim(const std::string& s)
{
    auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return b < e ? std::string(b, e) : std::string();
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::int64_t parse_int(const std::string& text, std::size_t line, const std::string& what)
{
    std::int64_t v = 0;
    std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ParseError("line " + std::to_string(line) + ": cannot parse " + what + " from '" + t + "'", line);
    return v;
}

}  // namespace

BigReal Regulator::value(std::int64_t disc) const
{
    switch (kind) {
    case Kind::One:
        return BigReal(1);
    case Kind::LogUnit: {
        BigReal unit = (make_real(u) + make_real(v) * sqrt(make_real(disc))) / 2;
        return log(unit);
    }
    case Kind::Decimal:
        return make_real(decimal);
    }
    return BigReal(1);
}

bool is_fundamental_discriminant(std::int64_t d)
{
    if (d == 1 || d == 0)
        return false;
    if (mod(d, 4) == 1)
        return squarefree(d);
    if (mod(d, 4) == 0) {
        std::int64_t m = d / 4;
        return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(m);
    }
    return false;
}

int kronecker_symbol(std::int64_t d, std::int64_t n)
{
    if (n <= 0)
        throw DomainError("kronecker_symbol: n must be a positive integer, got " + std::to_string(n));
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (d % 2 == 0)
            return 0;
        std::int64_t r = mod(d, 8);
        if (r == 3 || r == 5)
            result = -result;
    }
    // Jacobi symbol (d/n), n odd.
    std::int64_t a = mod(d, n);
    std::int64_t m = n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t r = m % 8;
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3)
            result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

// ---------------------------------------------------------------------------

FieldDescriptor FieldDescriptor::rationals()
{
    FieldDescriptor f;
    f.label_ = "Q";
    return f;
}

FieldDescriptor FieldDescriptor::quadratic(std::string label, std::int64_t disc, std::int64_t class_number,
                                           Regulator regulator)
{
    FieldDescriptor f;
    f.label_ = std::move(label);
    f.disc_signed_ = disc;
    f.disc_abs_ = disc < 0 ? -disc : disc;
    f.class_number_ = class_number;
    f.source_ = QuadraticCharacter{};
    if (disc > 0) {
        f.r1_ = 2;
        f.r2_ = 0;
        f.roots_of_unity_ = 2;
        f.regulator_ = std::move(regulator);
    } else {
        f.r1_ = 0;
        f.r2_ = 1;
        f.roots_of_unity_ = disc == -4 ? 4 : disc == -3 ? 6 : 2;
        f.regulator_ = Regulator{};
    }
    f.validate();
    return f;
}

FieldDescriptor FieldDescriptor::from_table(std::string label, unsigned r1, unsigned r2, std::int64_t disc,
                                            ExternalTable table, std::optional<std::int64_t> class_number,
                                            std::optional<std::string> regulator,
                                            std::optional<std::int64_t> roots_of_unity)
{
    FieldDescriptor f;
    f.label_ = std::move(label);
    f.r1_ = r1;
    f.r2_ = r2;
    f.disc_signed_ = disc;
    f.disc_abs_ = disc < 0 ? -disc : disc;
    f.class_data_ = class_number && regulator && roots_of_unity;
    f.class_number_ = class_number.value_or(1);
    if (regulator) {
        f.regulator_.kind = Regulator::Kind::Decimal;
        f.regulator_.decimal = *regulator;
    }
    f.roots_of_unity_ = roots_of_unity.value_or(2);
    f.source_ = std::move(table);
    f.validate();
    return f;
}

void FieldDescriptor::validate() const
{
    if (r1_ + r2_ == 0)
        throw DomainError("field " + label_ + ": signature (0,0) is not a number field");
    if (disc_abs_ < 1)
        throw DomainError("field " + label_ + ": |discriminant| must be positive");
    if (class_number_ < 1)
        throw DomainError("field " + label_ + ": class number must be positive");
    if (roots_of_unity_ < 2 || roots_of_unity_ % 2 != 0)
        throw DomainError("field " + label_ + ": number of roots of unity must be even and >= 2");
    if (is_rational() && (r1_ != 1 || r2_ != 0 || disc_abs_ != 1))
        throw DomainError("Q must have signature (1,0) and discriminant 1");
    if (is_quadratic()) {
        if (!is_fundamental_discriminant(disc_signed_))
            throw DomainError("field " + label_ + ": " + std::to_string(disc_signed_) +
                              " is not a fundamental discriminant");
        if (disc_signed_ > 0 && (r1_ != 2 || r2_ != 0))
            throw DomainError("real quadratic field must have signature (2,0)");
        if (disc_signed_ < 0 && (r1_ != 0 || r2_ != 1))
            throw DomainError("imaginary quadratic field must have signature (0,1)");
        std::int64_t expected_w = disc_signed_ == -4 ? 4 : disc_signed_ == -3 ? 6 : 2;
        if (roots_of_unity_ != expected_w)
            throw DomainError("field " + label_ + ": wrong number of roots of unity");
        if (disc_signed_ > 0 && regulator_.kind != Regulator::Kind::LogUnit &&
            regulator_.kind != Regulator::Kind::Decimal)
            throw DomainError("real quadratic field " + label_ + " needs a regulator");
    }
    if (const auto* t = std::get_if<ExternalTable>(&source_)) {
        if (!t->coefficients || t->coefficients->empty())
            throw DomainError("field " + label_ + ": empty coefficient table");
        if ((*t->coefficients)[0] != 1)
            throw DomainError("field " + label_ + ": V(1) must be 1");
    }
}

const std::vector<FieldDescriptor>& builtin_fields()
{
    static const std::vector<FieldDescriptor> fields = [] {
        Regulator golden{Regulator::Kind::LogUnit, 1, 1, {}};
        Regulator silver{Regulator::Kind::LogUnit, 2, 1, {}};
        return std::vector<FieldDescriptor>{
            FieldDescriptor::rationals(),
            FieldDescriptor::quadratic("Q(i)", -4, 1, {}),
            FieldDescriptor::quadratic("Q(sqrt-3)", -3, 1, {}),
            FieldDescriptor::quadratic("Q(sqrt5)", 5, 1, golden),
            FieldDescriptor::quadratic("Q(sqrt2)", 8, 1, silver),
            FieldDescriptor::quadratic("Q(sqrt-5)", -20, 2, {}),
        };
    }();
    return fields;
}

std::optional<FieldDescriptor> find_builtin_field(const std::string& selector)
{
    static const std::map<std::string, std::string> aliases = {
        {"q", "Q"},
        {"qi", "Q(i)"},
        {"q(i)", "Q(i)"},
        {"qsqrt-1", "Q(i)"},
        {"qsqrtm1", "Q(i)"},
        {"qsqrt-3", "Q(sqrt-3)"},
        {"qsqrtm3", "Q(sqrt-3)"},
        {"q(sqrt-3)", "Q(sqrt-3)"},
        {"qsqrt5", "Q(sqrt5)"},
        {"q(sqrt5)", "Q(sqrt5)"},
        {"qsqrt2", "Q(sqrt2)"},
        {"q(sqrt2)", "Q(sqrt2)"},
        {"qsqrt-5", "Q(sqrt-5)"},
        {"qsqrtm5", "Q(sqrt-5)"},
        {"q(sqrt-5)", "Q(sqrt-5)"},
    };
    auto it = aliases.find(lower(selector));
    if (it == aliases.end())
        return std::nullopt;
    for (const auto& f : builtin_fields()) {
        if (f.label() == it->second)
            return f;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::int64_t ideal_count(const FieldDescriptor& field, std::int64_t n)
{
    if (n < 1)
        throw DomainError("ideal_count: n must be >= 1");
    return std::visit(
        [&](const auto& src) -> std::int64_t {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, RationalField>) {
                return 1;
            } else if constexpr (std::is_same_v<T, QuadraticCharacter>) {
                std::int64_t total = 0;
                for (std::int64_t d = 1; d * d <= n; ++d) {
                    if (n % d != 0)
                        continue;
                    total += kronecker_symbol(field.disc_signed(), d);
                    if (d * d != n)
                        total += kronecker_symbol(field.disc_signed(), n / d);
                }
                return total;
            } else {
                const auto& c = *src.coefficients;
                if (static_cast<std::size_t>(n) > c.size())
                    throw TableRangeError("ideal_count: index " + std::to_string(n) + " beyond table '" +
                                              src.path + "' (max index " + std::to_string(c.size()) + ")",
                                          c.size());
                return c[static_cast<std::size_t>(n - 1)];
            }
        },
        field.coefficient_source());
}

Rational divisor_sigma(int a, std::int64_t n)
{
    if (n < 1)
        throw DomainError("divisor_sigma: n must be >= 1");
    Rational total = 0;
    auto power = [a](std::int64_t d) {
        BigInt p = 1;
        for (int i = 0; i < (a < 0 ? -a : a); ++i)
            p *= d;
        return a < 0 ? Rational(BigInt(1), p) : Rational(p);
    };
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        total += power(d);
        if (d * d != n)
            total += power(n / d);
    }
    return total;
}

BigReal residue_H(const FieldDescriptor& field, const PrecisionContext& ctx)
{
    if (!field.has_class_data())
        throw DomainError("field " + field.label() + ": class number data (h, R, w) not available");
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    BigReal h = pow2(field.r1()) * pow(2 * pi, static_cast<int>(field.r2())) * make_real(field.class_number()) *
                field.regulator().value(field.disc_signed());
    return h / (make_real(field.roots_of_unity()) * sqrt(make_real(field.disc_abs())));
}

BigReal constant_C(const FieldDescriptor& field, const PrecisionContext& ctx)
{
    ScopedPrecision guard(ctx.working_bits());
    BigReal pi = const_pi();
    return pow2(static_cast<long>(field.r1()) - 1) * pow(2 * pi, static_cast<int>(field.r2())) /
           sqrt(make_real(field.disc_abs()));
}

// ---------------------------------------------------------------------------

IdealCounts::IdealCounts(FieldDescriptor field) : field_(std::move(field)), values_(1, 0) {}

void IdealCounts::extend(std::int64_t n) const
{
    auto have = static_cast<std::int64_t>(values_.size()) - 1;
    if (n <= have)
        return;
    std::int64_t target = std::max(n, 2 * have);
    std::visit(
        [&](const auto& src) {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, RationalField>) {
                values_.assign(static_cast<std::size_t>(target) + 1, 1);
                values_[0] = 0;
            } else if constexpr (std::is_same_v<T, QuadraticCharacter>) {
                std::vector<std::int64_t> v(static_cast<std::size_t>(target) + 1, 0);
                for (std::int64_t d = 1; d <= target; ++d) {
                    int chi = kronecker_symbol(field_.disc_signed(), d);
                    if (chi == 0)
                        continue;
                    for (std::int64_t m = d; m <= target; m += d)
                        v[static_cast<std::size_t>(m)] += chi;
                }
                values_ = std::move(v);
            } else {
                const auto& c = *src.coefficients;
                if (static_cast<std::size_t>(n) > c.size())
                    throw TableRangeError("coefficient " + std::to_string(n) + " beyond table '" + src.path +
                                              "' (max index " + std::to_string(c.size()) + ")",
                                          c.size());
                target = std::min<std::int64_t>(target, static_cast<std::int64_t>(c.size()));
                values_.assign(1, 0);
                values_.insert(values_.end(), c.begin(), c.begin() + target);
            }
        },
        field_.coefficient_source());
}

std::int64_t IdealCounts::operator()(std::int64_t n) const
{
    if (n < 1)
        throw DomainError("ideal_count: n must be >= 1");
    std::lock_guard lock(mutex_);
    extend(n);
    return values_[static_cast<std::size_t>(n)];
}

std::vector<std::int64_t> IdealCounts::prefix(std::int64_t n) const
{
    std::lock_guard lock(mutex_);
    extend(n);
    return {values_.begin(), values_.begin() + n + 1};
}

// ---------------------------------------------------------------------------

FieldDescriptor parse_coefficient_table(std::istream& in, const std::string& path)
{
    std::map<std::string, std::string> meta;
    std::vector<std::int64_t> coeffs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            auto sep = body.find_first_of("=:");
            if (sep == std::string::npos)
                continue;  // free-form comment
            meta[lower(trim(body.substr(0, sep)))] = trim(body.substr(sep + 1));
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'n<TAB>V(n)'", lineno);
        std::int64_t n = parse_int(line.substr(0, tab), lineno, "index");
        std::int64_t v = parse_int(line.substr(tab + 1), lineno, "coefficient");
        auto expected = static_cast<std::int64_t>(coeffs.size()) + 1;
        if (n != expected)
            throw ParseError(path + ":" + std::to_string(lineno) + ": index gap, expected " +
                                 std::to_string(expected) + " but found " + std::to_string(n),
                             lineno);
        if (v < 0)
            throw ParseError(path + ":" + std::to_string(lineno) + ": negative ideal count", lineno);
        coeffs.push_back(v);
    }
    if (coeffs.empty())
        throw ParseError(path + ": table has no coefficients", lineno);

    auto need = [&](const char* key) -> std::int64_t {
        auto it = meta.find(key);
        if (it == meta.end())
            throw ParseError(path + ": missing header field '" + std::string(key) + "'", 0);
        return parse_int(it->second, 0, key);
    };
    auto maybe = [&](const char* key) -> std::optional<std::int64_t> {
        auto it = meta.find(key);
        if (it == meta.end())
            return std::nullopt;
        return parse_int(it->second, 0, key);
    };
    std::int64_t degree = need("degree");
    std::int64_t r1 = need("r1");
    std::int64_t r2 = need("r2");
    std::int64_t disc = need("disc");
    if (r1 < 0 || r2 < 0)
        throw ParseError(path + ": negative signature entry", 0);
    if (degree != r1 + 2 * r2)
        throw ParseError(path + ": header degree " + std::to_string(degree) + " does not match r1 + 2*r2 = " +
                             std::to_string(r1 + 2 * r2),
                         0);
    std::optional<std::string> regulator;
    if (auto it = meta.find("regulator"); it != meta.end())
        regulator = it->second;
    std::string label = meta.count("label") ? meta["label"] : path;
    ExternalTable table{path, std::make_shared<const std::vector<std::int64_t>>(std::move(coeffs))};
    try {
        return FieldDescriptor::from_table(label, static_cast<unsigned>(r1), static_cast<unsigned>(r2), disc,
                                           std::move(table), maybe("class_number"), regulator,
                                           maybe("roots_of_unity"));
    } catch (const DomainError& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

}  // namespace zetaforge
