// Command-line front end: configuration, execution and report persistence.
#ifndef ZETAFORGE_CLI_HPP
#define ZETAFORGE_CLI_HPP

#include "zetaforge/fields.hpp"
#include "zetaforge/identities.hpp"
#include "zetaforge/numeric.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace zetaforge {

/// Invalid command line, config file or parameter combination (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text (exit code 0).
class HelpRequested : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Exact-in-pi scalar as typed by the user: a sum of terms
/// coefficient * decimal * pi^k * (1 or i), e.g. "pi", "pi^2", "2/3*pi",
/// "pi/3", "1.25", "pi^2+pi*i".
class SymbolicNumber {
public:
    static SymbolicNumber parse(const std::string& text);

    /// Value at the current default precision.
    BigComplex evaluate() const;
    /// Normalized spelling, used in report echoes.
    std::string canonical() const;
    /// The integer it denotes, if it is one.
    std::optional<long> as_integer() const;

private:
    struct Term {
        Rational coefficient = 1;
        std::string decimal;  // empty: no decimal factor
        long pi_power = 0;
        bool imaginary = false;
    };
    std::vector<Term> terms_;
};

enum class Command { Verify, Kernel, Zeta, Eisenstein, Sweep, Selftest };
enum class OutputFormat { Json, Csv, Text };

std::string command_name(Command c);

struct ParamGrid {
    std::vector<long> m;
    std::vector<long> k;
    std::vector<SymbolicNumber> alpha;
    std::vector<SymbolicNumber> z;
    std::vector<SymbolicNumber> x;
    std::vector<SymbolicNumber> at;

    bool empty() const { return m.empty() && k.empty() && alpha.empty() && z.empty() && x.empty() && at.empty(); }
};

struct RunConfig {
    Command command = Command::Selftest;
    /// Built-in labels/aliases or coefficient table paths.
    std::vector<std::string> field_selectors;
    unsigned precision_digits = 30;
    std::vector<IdentityId> identity_set;
    ParamGrid param_grid;
    /// "default", a kernel method name, or "both".
    std::string method = "default";
    OutputFormat output_format = OutputFormat::Json;
    std::optional<std::string> output_path;
    unsigned workers = 1;
    /// Leave the timing block out of JSON so repeated runs are byte-identical.
    bool omit_timing = false;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses argv (including the program name). Honors --config FILE
/// (key=value lines, command line wins) and ZETAFORGE_DIGITS.
/// Throws ConfigError; help output is reported as ConfigError too.
RunConfig parse_command_line(const std::vector<std::string>& args);

/// Resolves a selector to a built-in field or, failing that, a table file.
FieldDescriptor resolve_field(const std::string& selector);

/// Reads a coefficient table file. Throws ParseError (with line) or DomainError.
FieldDescriptor ingest_table(const std::string& path);

/// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

/// Exit status of a finished run: any "config" error entry gives 2, then any
/// "nonconvergence" entry gives 3, then any failed report gives 1.
int exit_status(const std::vector<nlohmann::ordered_json>& reports, const nlohmann::ordered_json& errors);

/// Executes the configuration, writes the artifact to `out` (or to
/// output_path) and failure summaries to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

nlohmann::ordered_json report_to_json(const VerificationReport& r, unsigned digits);
/// Decimal strings are read at the current default precision.
VerificationReport report_from_json(const nlohmann::ordered_json& j);

}  // namespace zetaforge

#endif  // ZETAFORGE_CLI_HPP
