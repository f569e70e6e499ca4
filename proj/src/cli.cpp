#include "zetaforge/cli.hpp"

#include "zetaforge/errors.hpp"
#include "zetaforge/kernel.hpp"
#include "zetaforge/zeta.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"

namespace zetaforge {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// SymbolicNumber

namespace {

[[noreturn]] void bad_number(const std::string& text, const std::string& why)
{
    throw ConfigError("cannot parse number '" + text + "': " + why);
}

bool valid_decimal(const std::string& s)
{
    std::size_t i = 0, digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++digits; }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++digits; }
    }
    if (digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++exp_digits; }
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

}  // namespace

SymbolicNumber SymbolicNumber::parse(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (text.empty()) bad_number(raw, "empty");

    // Split into signed terms; a sign after '^' or inside an exponent is not a split point.
    std::vector<std::pair<bool, std::string>> pieces;
    bool negative = false;
    std::size_t start = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        start = 1;
    }
    for (std::size_t i = start; i <= text.size(); ++i) {
        bool split = false;
        if (i == text.size()) {
            split = true;
        } else if ((text[i] == '+' || text[i] == '-') && i > start) {
            char prev = text[i - 1];
            bool exponent = (prev == 'e') && i >= 2 &&
                            (std::isdigit(static_cast<unsigned char>(text[i - 2])) || text[i - 2] == '.');
            split = prev != '^' && !exponent;
        }
        if (split) {
            pieces.emplace_back(negative, text.substr(start, i - start));
            if (i < text.size()) negative = text[i] == '-';
            start = i + 1;
        }
    }

    SymbolicNumber out;
    for (const auto& [neg, body] : pieces) {
        if (body.empty()) bad_number(raw, "empty term");
        Term term;
        bool any = false;
        std::size_t pos = 0;
        while (pos < body.size()) {
            char c = body[pos];
            if (c == '*') {
                ++pos;
            } else if (c == '/') {
                std::size_t end = ++pos;
                while (end < body.size() && std::isdigit(static_cast<unsigned char>(body[end]))) ++end;
                if (end == pos) bad_number(raw, "expected an integer after '/'");
                BigInt q(body.substr(pos, end - pos));
                if (q == 0) bad_number(raw, "division by zero");
                term.coefficient /= Rational(q);
                pos = end;
            } else if (body.compare(pos, 2, "pi") == 0) {
                pos += 2;
                long k = 1;
                if (pos < body.size() && body[pos] == '^') {
                    std::size_t end = ++pos;
                    if (end < body.size() && (body[end] == '-' || body[end] == '+')) ++end;
                    std::size_t digits_at = end;
                    while (end < body.size() && std::isdigit(static_cast<unsigned char>(body[end]))) ++end;
                    if (end == digits_at) bad_number(raw, "expected an integer exponent after 'pi^'");
                    k = std::stol(body.substr(pos, end - pos));
                    pos = end;
                }
                term.pi_power += k;
                any = true;
            } else if (c == 'i') {
                if (term.imaginary) bad_number(raw, "repeated 'i'");
                term.imaginary = true;
                any = true;
                ++pos;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t end = pos;
                while (end < body.size() && (std::isdigit(static_cast<unsigned char>(body[end])) || body[end] == '.')) ++end;
                if (end < body.size() && body[end] == 'e') {
                    std::size_t e = end + 1;
                    if (e < body.size() && (body[e] == '+' || body[e] == '-')) ++e;
                    if (e < body.size() && std::isdigit(static_cast<unsigned char>(body[e]))) {
                        end = e;
                        while (end < body.size() && std::isdigit(static_cast<unsigned char>(body[end]))) ++end;
                    }
                }
                std::string token = body.substr(pos, end - pos);
                if (!valid_decimal(token)) bad_number(raw, "malformed literal '" + token + "'");
                if (token.find_first_of(".e") != std::string::npos) {
                    if (!term.decimal.empty()) bad_number(raw, "two decimal factors in one term");
                    term.decimal = token;
                } else {
                    term.coefficient *= Rational(BigInt(token));
                }
                any = true;
                pos = end;
            } else {
                bad_number(raw, std::string("unexpected character '") + c + "'");
            }
        }
        if (!any) bad_number(raw, "term without a value");
        if (neg) term.coefficient = -term.coefficient;
        out.terms_.push_back(term);
    }
    return out;
}

BigComplex SymbolicNumber::evaluate() const
{
    BigComplex z{BigReal(0), BigReal(0)};
    for (const auto& t : terms_) {
        BigReal v = make_real(t.coefficient);
        if (!t.decimal.empty()) v *= make_real(t.decimal);
        if (t.pi_power != 0) v *= boost::multiprecision::pow(const_pi(), t.pi_power);
        if (t.imaginary)
            z.im += v;
        else
            z.re += v;
    }
    return z;
}

std::string SymbolicNumber::canonical() const
{
    std::string out;
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        const Term& t = terms_[n];
        bool negative = t.coefficient < 0;
        if (negative)
            out += "-";
        else if (n > 0)
            out += "+";
        BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(t.coefficient));
        BigInt den = boost::multiprecision::denominator(t.coefficient);
        std::vector<std::string> factors;
        if (num != 1) factors.push_back(num.str());
        if (!t.decimal.empty()) factors.push_back(t.decimal);
        if (t.pi_power == 1)
            factors.push_back("pi");
        else if (t.pi_power != 0)
            factors.push_back("pi^" + std::to_string(t.pi_power));
        if (t.imaginary) factors.push_back("i");
        if (factors.empty()) factors.push_back("1");
        for (std::size_t f = 0; f < factors.size(); ++f) out += (f ? "*" : "") + factors[f];
        if (den != 1) out += "/" + den.str();
    }
    return out;
}

std::optional<long> SymbolicNumber::as_integer() const
{
    if (terms_.size() != 1) return std::nullopt;
    const Term& t = terms_[0];
    if (!t.decimal.empty() || t.pi_power != 0 || t.imaginary) return std::nullopt;
    if (boost::multiprecision::denominator(t.coefficient) != 1) return std::nullopt;
    BigInt n = boost::multiprecision::numerator(t.coefficient);
    if (boost::multiprecision::abs(n) > BigInt(1000000000L)) return std::nullopt;
    return n.convert_to<long>();
}

// ---------------------------------------------------------------------------
// Configuration

std::string command_name(Command c)
{
    switch (c) {
    case Command::Verify: return "verify";
    case Command::Kernel: return "kernel";
    case Command::Zeta: return "zeta";
    case Command::Eisenstein: return "eisenstein";
    case Command::Sweep: return "sweep";
    case Command::Selftest: return "selftest";
    }
    return "?";
}

namespace {

std::string format_name(OutputFormat f)
{
    switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Text: return "text";
    }
    return "?";
}

bool needs_m(IdentityId id)
{
    return id != IdentityId::QuasiModular && id != IdentityId::EtaLog && id != IdentityId::EisensteinTransform;
}

bool needs_alpha(IdentityId id)
{
    switch (id) {
    case IdentityId::RamanujanNF:
    case IdentityId::RamanujanClassical:
    case IdentityId::EisensteinSymm:
    case IdentityId::QuasiModular:
    case IdentityId::EtaLog:
        return true;
    default:
        return false;
    }
}

bool is_classical(IdentityId id)
{
    return id == IdentityId::RamanujanClassical || id == IdentityId::LerchClassical;
}

}  // namespace

void RunConfig::validate() const
{
    if (precision_digits < 15)
        throw ConfigError("precision must be at least 15 digits (got " + std::to_string(precision_digits) + ")");
    if (workers == 0) throw ConfigError("workers must be positive");
    if (method != "default" && method != "both" && !parse_method(method))
        throw ConfigError("unknown kernel method '" + method + "'");
    const auto& g = param_grid;
    bool field_free = !identity_set.empty() &&
                      std::all_of(identity_set.begin(), identity_set.end(), is_classical);
    switch (command) {
    case Command::Selftest:
        return;
    case Command::Kernel:
        if (field_selectors.empty()) throw ConfigError("kernel needs --field");
        if (g.x.empty()) throw ConfigError("kernel needs --x");
        return;
    case Command::Zeta:
        if (field_selectors.empty()) throw ConfigError("zeta needs --field");
        if (g.at.empty()) throw ConfigError("zeta needs --at");
        return;
    case Command::Eisenstein:
        if (field_selectors.empty()) throw ConfigError("eisenstein needs --field");
        if (g.k.empty() || g.z.empty()) throw ConfigError("eisenstein needs --k and --z");
        return;
    case Command::Sweep:
        if (g.empty()) throw ConfigError("sweep needs a non-empty parameter grid");
        [[fallthrough]];
    case Command::Verify:
        if (identity_set.empty()) throw ConfigError(command_name(command) + " needs --identity");
        if (field_selectors.empty() && !field_free) throw ConfigError(command_name(command) + " needs --field");
        for (IdentityId id : identity_set) {
            if (needs_m(id) && g.m.empty()) throw ConfigError(identity_name(id) + " needs --m");
            if (needs_alpha(id) && g.alpha.empty()) throw ConfigError(identity_name(id) + " needs --alpha");
            if (id == IdentityId::EisensteinTransform && (g.k.empty() || g.z.empty()))
                throw ConfigError(identity_name(id) + " needs --k and --z");
        }
        return;
    }
}

namespace {

const std::set<std::string>& config_keys()
{
    static const std::set<std::string> keys = {"field", "identity", "m", "k", "alpha", "z", "x", "at",
                                               "digits", "method", "format", "output", "workers"};
    return keys;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// key=value lines of a config file, in file order.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!config_keys().count(key))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        entries.emplace_back(key, value);
    }
    return entries;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key)
{
    std::string flag = "--" + key;
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

}  // namespace

RunConfig parse_command_line(const std::vector<std::string>& args_in)
{
    std::vector<std::string> args = args_in;
    if (args.empty()) args.push_back("zetaforge");

    // Config-file entries become command-line arguments unless already given there.
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        else
            continue;
        std::vector<std::string> injected;
        for (const auto& [key, value] : read_config_file(path))
            if (!given_on_command_line(args, key)) injected.push_back("--" + key + "=" + value);
        args.insert(args.end(), injected.begin(), injected.end());
        break;
    }

    struct Raw {
        std::vector<std::string> fields, identities, alpha, z, x, at;
        std::vector<long> m, k;
        unsigned digits = 30;
        std::string method = "default", format = "json", output, config;
        unsigned workers = 1;
        bool no_timing = false;
    } raw;

    CLI::App app{"High-precision Dedekind zeta, kernel and identity verification", "zetaforge"};
    app.require_subcommand(1);
    const std::vector<std::pair<Command, std::string>> commands = {
        {Command::Verify, "Verify identities over a parameter grid"},
        {Command::Kernel, "Evaluate the kernel Omega_K(x)"},
        {Command::Zeta, "Evaluate zeta_K(s)"},
        {Command::Eisenstein, "Evaluate the Eisenstein series G_{k,K}(z)"},
        {Command::Sweep, "Verify identities over a grid, in parallel"},
        {Command::Selftest, "Run a fixed battery of identity checks"},
    };
    std::map<CLI::App*, Command> by_app;
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(command_name(cmd), help);
        by_app[sub] = cmd;
        sub->add_option("--field", raw.fields, "Built-in field label or coefficient table path")->delimiter(',');
        sub->add_option("--identity", raw.identities, "Identity names")->delimiter(',');
        sub->add_option("--m", raw.m, "Values of m")->delimiter(',');
        sub->add_option("--k", raw.k, "Weights k")->delimiter(',');
        sub->add_option("--alpha", raw.alpha, "Values of alpha (pi, pi^2, 2/3*pi, decimals)")->delimiter(',');
        sub->add_option("--z", raw.z, "Points of the upper half plane, e.g. 1/2+3/2*i")->delimiter(',');
        sub->add_option("--x", raw.x, "Kernel arguments")->delimiter(',');
        sub->add_option("--at", raw.at, "Zeta arguments")->delimiter(',');
        sub->add_option("--digits", raw.digits, "Target precision in decimal digits")->envname("ZETAFORGE_DIGITS");
        sub->add_option("--method", raw.method, "Kernel method: default, both or a method name");
        sub->add_option("--format", raw.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--output", raw.output, "Write the artifact here instead of stdout");
        sub->add_option("--workers", raw.workers, "Parallel worker processes");
        sub->add_option("--config", raw.config, "key=value file with default options");
        sub->add_flag("--no-timing", raw.no_timing, "Omit wall-clock timing from JSON");
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        int code = app.exit(e, out, err);
        if (code == 0) throw HelpRequested(out.str());
        throw ConfigError(trim(err.str()));
    }

    RunConfig cfg;
    for (const auto& [sub, cmd] : by_app)
        if (sub->parsed()) cfg.command = cmd;
    cfg.field_selectors = raw.fields;
    cfg.precision_digits = raw.digits;
    std::set<IdentityId> ids;
    for (const auto& name : raw.identities) {
        auto id = parse_identity(name);
        if (!id) throw ConfigError("unknown identity '" + name + "'");
        ids.insert(*id);
    }
    cfg.identity_set.assign(ids.begin(), ids.end());
    cfg.param_grid.m = raw.m;
    cfg.param_grid.k = raw.k;
    for (const auto& s : raw.alpha) cfg.param_grid.alpha.push_back(SymbolicNumber::parse(s));
    for (const auto& s : raw.z) cfg.param_grid.z.push_back(SymbolicNumber::parse(s));
    for (const auto& s : raw.x) cfg.param_grid.x.push_back(SymbolicNumber::parse(s));
    for (const auto& s : raw.at) cfg.param_grid.at.push_back(SymbolicNumber::parse(s));
    cfg.method = raw.method;
    cfg.output_format = raw.format == "csv" ? OutputFormat::Csv : raw.format == "text" ? OutputFormat::Text
                                                                                       : OutputFormat::Json;
    if (!raw.output.empty()) cfg.output_path = raw.output;
    cfg.workers = raw.workers;
    cfg.omit_timing = raw.no_timing;
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Fields

FieldDescriptor ingest_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read coefficient table '" + path + "'");
    return parse_coefficient_table(in, path);
}

FieldDescriptor resolve_field(const std::string& selector)
{
    if (auto f = find_builtin_field(selector)) return *f;
    std::ifstream probe(selector);
    if (!probe) throw ConfigError("unknown field '" + selector + "' (neither a built-in label nor a readable table)");
    return ingest_table(selector);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json complex_json(const BigComplex& z, unsigned width)
{
    return {{"re", to_decimal(z.re, width)}, {"im", to_decimal(z.im, width)}};
}

BigComplex complex_from_json(const ordered_json& j)
{
    return {make_real(j.at("re").get<std::string>()), make_real(j.at("im").get<std::string>())};
}

}  // namespace

ordered_json report_to_json(const VerificationReport& r, unsigned digits)
{
    const unsigned width = digits + 5;
    ordered_json j;
    j["identity"] = identity_name(r.identity);
    j["field"] = r.field_label;
    j["params"] = ordered_json::object();
    for (const auto& [k, v] : r.params) j["params"][k] = v;
    j["lhs"] = complex_json(r.lhs, width);
    j["rhs"] = complex_json(r.rhs, width);
    j["abs_residual"] = to_decimal(r.abs_residual, width);
    j["rel_residual"] = to_decimal(r.rel_residual, width);
    j["tolerance"] = to_decimal(r.tolerance, width);
    j["passed"] = r.passed;
    j["terms_report"] = ordered_json::array();
    for (const auto& t : r.terms_report)
        j["terms_report"].push_back({{"label", t.label},
                                     {"method", t.method},
                                     {"terms", t.terms},
                                     {"error_bound", to_decimal(t.error_bound, width)}});
    j["diagnostics"] = ordered_json::object();
    for (const auto& [k, v] : r.diagnostics) j["diagnostics"][k] = v;
    return j;
}

VerificationReport report_from_json(const ordered_json& j)
{
    try {
        VerificationReport r;
        auto id = parse_identity(j.at("identity").get<std::string>());
        if (!id) throw ParseError("unknown identity in report", 0);
        r.identity = *id;
        r.field_label = j.at("field").get<std::string>();
        for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
        r.lhs = complex_from_json(j.at("lhs"));
        r.rhs = complex_from_json(j.at("rhs"));
        r.abs_residual = make_real(j.at("abs_residual").get<std::string>());
        r.rel_residual = make_real(j.at("rel_residual").get<std::string>());
        r.tolerance = make_real(j.at("tolerance").get<std::string>());
        r.passed = j.at("passed").get<bool>();
        for (const auto& t : j.at("terms_report"))
            r.terms_report.push_back({t.at("label").get<std::string>(), t.at("method").get<std::string>(),
                                      t.at("terms").get<std::int64_t>(),
                                      make_real(t.at("error_bound").get<std::string>())});
        for (const auto& [k, v] : j.at("diagnostics").items()) r.diagnostics[k] = v.get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
}

// ---------------------------------------------------------------------------
// Execution

namespace {

enum class TaskKind { Verify, Kernel, Zeta, Eisenstein };

struct Task {
    TaskKind kind = TaskKind::Verify;
    IdentityId identity = IdentityId::RamanujanNF;
    std::size_t field = 0;  // index into the resolved field list
    long m = 0;
    long k = 0;
    std::optional<SymbolicNumber> alpha, z, x, at;
};

std::string rational_string(const Rational& q)
{
    std::ostringstream s;
    s << q;
    return s.str();
}

BigInt reconstruction_denominator(unsigned digits)
{
    return boost::multiprecision::pow(BigInt(10), std::max(6u, digits / 3));
}

std::optional<std::string> reconstruct(const BigReal& v, const PrecisionContext& ctx)
{
    BigReal tol = 1000 * ctx.target_eps() * std::max(BigReal(1), BigReal(abs(v)));
    auto fit = reconstruct_rational(v, reconstruction_denominator(ctx.target_digits()), tol);
    if (!fit.found) return std::nullopt;
    return rational_string(fit.value);
}

ordered_json kernel_record(const FieldDescriptor& field, const Task& t, const std::string& method,
                           const PrecisionContext& ctx, unsigned width)
{
    BigComplex x = t.x->evaluate();
    std::vector<std::optional<KernelMethod>> methods;
    if (method == "both") {
        KernelMethod d = default_method(field);
        methods.push_back(d);
        if (d != KernelMethod::MellinBarnes) methods.push_back(KernelMethod::MellinBarnes);
    } else if (method == "default") {
        methods.push_back(std::nullopt);
    } else {
        methods.push_back(parse_method(method));
    }
    ordered_json rec{{"kind", "kernel"}, {"field", field.label()}, {"params", {{"x", t.x->canonical()}}}};
    rec["results"] = ordered_json::array();
    std::vector<BigComplex> values;
    for (const auto& m : methods) {
        KernelSeriesResult r = omega(field, x, ctx, m);
        values.push_back(r.value);
        rec["results"].push_back({{"method", method_name(r.method)},
                                  {"value", complex_json(r.value, width)},
                                  {"error_bound", to_decimal(r.truncation_error_bound, width)},
                                  {"terms", r.terms_used}});
    }
    if (values.size() == 2) rec["agreement"] = to_decimal(BigReal(abs(values[0] - values[1])), width);
    return rec;
}

ordered_json zeta_record(const FieldDescriptor& field, const Task& t, const PrecisionContext& ctx, unsigned width)
{
    ordered_json rec{{"kind", "zeta"}, {"field", field.label()}, {"params", {{"s", t.at->canonical()}}}};
    auto n = t.at->as_integer();
    if (n && *n == 1) throw DomainError("zeta_K has a pole at s = 1");
    if (n && *n <= 0) {
        BigReal v = dedekind_zeta_nonpositive(field, static_cast<int>(*n), ctx);
        rec["value"] = complex_json({v, BigReal(0)}, width);
        if (auto q = reconstruct(v, ctx)) rec["rational"] = *q;
        return rec;
    }
    if (n && *n % 2 == 0) {
        BigReal v = zeta_even_positive(field, static_cast<unsigned>(*n / 2), ctx);
        rec["value"] = complex_json({v, BigReal(0)}, width);
        if (field.totally_real()) {
            // zeta_K(n) sqrt(D) / pi^{nd} is rational for totally real K.
            BigReal ratio = v * sqrt(make_real(field.disc_abs())) /
                            boost::multiprecision::pow(const_pi(), static_cast<long>(*n * field.degree()));
            ordered_json ks{{"value", to_decimal(ratio, width)}};
            if (auto q = reconstruct(ratio, ctx)) ks["rational"] = *q;
            rec["pi_normalized"] = ks;
        }
        return rec;
    }
    rec["value"] = complex_json(dedekind_zeta(field, t.at->evaluate(), ctx), width);
    return rec;
}

ordered_json eisenstein_record(const FieldDescriptor& field, const Task& t, const PrecisionContext& ctx,
                               unsigned width)
{
    BigComplex z = t.z->evaluate();
    KernelSeriesResult g = eisenstein_G(field, t.k, z, ctx);
    return {{"kind", "eisenstein"},
            {"field", field.label()},
            {"params", {{"k", std::to_string(t.k)}, {"z", t.z->canonical()}}},
            {"value", complex_json(g.value, width)},
            {"error_bound", to_decimal(g.truncation_error_bound, width)},
            {"terms", g.terms_used},
            {"method", method_name(g.method)}};
}

VerificationReport verify_task(const FieldDescriptor& field, const Task& t, const PrecisionContext& ctx)
{
    BigComplex alpha, z;
    if (t.alpha) alpha = t.alpha->evaluate();
    if (t.z) z = t.z->evaluate();
    VerificationReport r;
    switch (t.identity) {
    case IdentityId::RamanujanNF: r = verify_ramanujan_nf(field, t.m, alpha, ctx); break;
    case IdentityId::RamanujanClassical: r = verify_ramanujan_classical(t.m, alpha, ctx); break;
    case IdentityId::LerchClassical: r = verify_lerch_classical(t.m, ctx); break;
    case IdentityId::LerchNF: r = verify_lerch_nf(field, t.m, ctx); break;
    case IdentityId::EisensteinSymm: r = verify_eisenstein_symm(field, t.m, alpha, ctx); break;
    case IdentityId::SeriesEvaluation: r = verify_series_evaluation(field, t.m, ctx); break;
    case IdentityId::QuasiModular: r = verify_quasimodular(field, alpha, ctx); break;
    case IdentityId::EtaLog: r = verify_eta_log(field, alpha, ctx); break;
    case IdentityId::EisensteinTransform: r = verify_eisenstein_transform(field, t.k, z, ctx); break;
    }
    if (t.alpha) r.params["alpha_exact"] = t.alpha->canonical();
    if (t.z) r.params["z_exact"] = t.z->canonical();
    return r;
}

/// {"index", "status": ok | config | nonconvergence, "message", "record"}.
ordered_json execute(std::size_t index, const Task& t, const std::vector<FieldDescriptor>& fields,
                     const RunConfig& cfg, const PrecisionContext& ctx)
{
    ordered_json out{{"index", index}, {"status", "ok"}};
    const FieldDescriptor& field = fields.at(t.field);
    const unsigned width = cfg.precision_digits + 5;
    try {
        ScopedPrecision guard(ctx.working_bits());
        switch (t.kind) {
        case TaskKind::Verify: out["record"] = report_to_json(verify_task(field, t, ctx), cfg.precision_digits); break;
        case TaskKind::Kernel: out["record"] = kernel_record(field, t, cfg.method, ctx, width); break;
        case TaskKind::Zeta: out["record"] = zeta_record(field, t, ctx, width); break;
        case TaskKind::Eisenstein: out["record"] = eisenstein_record(field, t, ctx, width); break;
        }
    } catch (const TruncationError& e) {
        out["status"] = "nonconvergence";
        out["message"] = e.what();
    } catch (const ConvergenceError& e) {
        out["status"] = "nonconvergence";
        out["message"] = e.what();
    } catch (const TableRangeError& e) {
        out["status"] = "nonconvergence";
        out["message"] = e.what();
    } catch (const DomainError& e) {
        out["status"] = "config";
        out["message"] = e.what();
    } catch (const std::exception& e) {
        out["status"] = "nonconvergence";
        out["message"] = e.what();
    }
    return out;
}

std::string describe_task(const Task& t, const std::vector<FieldDescriptor>& fields)
{
    std::ostringstream s;
    switch (t.kind) {
    case TaskKind::Verify: s << identity_name(t.identity); break;
    case TaskKind::Kernel: s << "kernel"; break;
    case TaskKind::Zeta: s << "zeta"; break;
    case TaskKind::Eisenstein: s << "eisenstein"; break;
    }
    s << " " << fields.at(t.field).label();
    bool uses_m = t.kind == TaskKind::Verify && needs_m(t.identity);
    bool uses_k = t.kind == TaskKind::Eisenstein ||
                  (t.kind == TaskKind::Verify && t.identity == IdentityId::EisensteinTransform);
    if (uses_m) s << " m=" << t.m;
    if (uses_k) s << " k=" << t.k;
    if (t.alpha) s << " alpha=" << t.alpha->canonical();
    if (t.z) s << " z=" << t.z->canonical();
    if (t.x) s << " x=" << t.x->canonical();
    if (t.at) s << " s=" << t.at->canonical();
    return s.str();
}

std::vector<Task> verification_tasks(const RunConfig& cfg, std::size_t field_count)
{
    std::vector<Task> tasks;
    const auto& g = cfg.param_grid;
    for (IdentityId id : cfg.identity_set) {
        std::size_t nfields = is_classical(id) ? 1 : field_count;
        for (std::size_t f = 0; f < nfields; ++f) {
            Task base;
            base.identity = id;
            base.field = is_classical(id) ? field_count : f;  // slot field_count holds Q
            std::vector<Task> level{base};
            auto expand = [&](auto setter, std::size_t n) {
                std::vector<Task> next;
                for (const Task& t : level)
                    for (std::size_t i = 0; i < n; ++i) {
                        Task u = t;
                        setter(u, i);
                        next.push_back(u);
                    }
                level = std::move(next);
            };
            if (needs_m(id)) expand([&](Task& t, std::size_t i) { t.m = g.m[i]; }, g.m.size());
            if (id == IdentityId::EisensteinTransform) {
                expand([&](Task& t, std::size_t i) { t.k = g.k[i]; }, g.k.size());
                expand([&](Task& t, std::size_t i) { t.z = g.z[i]; }, g.z.size());
            }
            if (needs_alpha(id)) expand([&](Task& t, std::size_t i) { t.alpha = g.alpha[i]; }, g.alpha.size());
            tasks.insert(tasks.end(), level.begin(), level.end());
        }
    }
    return tasks;
}

std::vector<Task> selftest_tasks(std::size_t q, std::size_t sqrt5, std::size_t qi)
{
    auto sym = [](const char* s) { return SymbolicNumber::parse(s); };
    std::vector<Task> tasks;
    auto add = [&](IdentityId id, std::size_t field, long m, std::optional<SymbolicNumber> alpha, long k = 0,
                   std::optional<SymbolicNumber> z = std::nullopt) {
        Task t;
        t.identity = id;
        t.field = field;
        t.m = m;
        t.alpha = alpha;
        t.k = k;
        t.z = z;
        tasks.push_back(t);
    };
    add(IdentityId::RamanujanNF, q, 1, sym("pi"));
    add(IdentityId::RamanujanNF, sqrt5, -1, sym("2*pi^2"));
    add(IdentityId::RamanujanNF, qi, 2, sym("pi^2"));
    add(IdentityId::RamanujanClassical, q, 1, sym("pi/3"));
    add(IdentityId::LerchClassical, q, 0, std::nullopt);
    add(IdentityId::LerchNF, sqrt5, 0, std::nullopt);
    add(IdentityId::EisensteinSymm, qi, 2, sym("pi^2"));
    add(IdentityId::SeriesEvaluation, q, 3, std::nullopt);
    add(IdentityId::QuasiModular, sqrt5, 0, sym("pi^2"));
    add(IdentityId::EtaLog, q, 0, sym("2*pi"));
    add(IdentityId::EisensteinTransform, sqrt5, 0, std::nullopt, 4, sym("1/2+3/2*i"));
    std::stable_sort(tasks.begin(), tasks.end(),
                     [](const Task& a, const Task& b) { return a.identity < b.identity; });
    return tasks;
}

std::string read_all(int fd)
{
    std::string data;
    char buf[65536];
    for (;;) {
        ssize_t n = ::read(fd, buf, sizeof buf);
        if (n > 0)
            data.append(buf, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EINTR)
            break;
    }
    return data;
}

void write_all(int fd, const std::string& s)
{
    std::size_t done = 0;
    while (done < s.size()) {
        ssize_t n = ::write(fd, s.data() + done, s.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            return;
        }
        done += static_cast<std::size_t>(n);
    }
}

/// Runs every task; outcome i belongs to task i whatever the worker count.
std::vector<ordered_json> execute_all(const std::vector<Task>& tasks, const std::vector<FieldDescriptor>& fields,
                                      const RunConfig& cfg, const PrecisionContext& ctx)
{
    std::vector<ordered_json> outcomes(tasks.size());
    unsigned workers = std::min<std::size_t>(cfg.workers, tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) outcomes[i] = execute(i, tasks[i], fields, cfg, ctx);
        return outcomes;
    }

    // The working precision is process-wide, so parallelism means processes.
    std::vector<std::pair<pid_t, int>> children;
    for (unsigned w = 0; w < workers; ++w) {
        int fds[2];
        if (::pipe(fds) != 0) break;
        pid_t pid = ::fork();
        if (pid < 0) {
            ::close(fds[0]);
            ::close(fds[1]);
            break;
        }
        if (pid == 0) {
            ::close(fds[0]);
            for (std::size_t i = w; i < tasks.size(); i += workers)
                write_all(fds[1], execute(i, tasks[i], fields, cfg, ctx).dump() + "\n");
            ::close(fds[1]);
            ::_exit(0);
        }
        ::close(fds[1]);
        children.emplace_back(pid, fds[0]);
    }

    std::vector<bool> done(tasks.size(), false);
    for (auto& [pid, fd] : children) {
        std::istringstream lines(read_all(fd));
        ::close(fd);
        int status = 0;
        ::waitpid(pid, &status, 0);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            ordered_json o = ordered_json::parse(line, nullptr, false);
            if (o.is_discarded() || !o.contains("index")) continue;
            std::size_t i = o["index"].get<std::size_t>();
            if (i < tasks.size()) {
                outcomes[i] = std::move(o);
                done[i] = true;
            }
        }
    }
    // Tasks whose worker never started or died run here.
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!done[i]) outcomes[i] = execute(i, tasks[i], fields, cfg, ctx);
    return outcomes;
}

ordered_json config_echo(const RunConfig& cfg, const std::vector<FieldDescriptor>& fields, std::size_t user_fields)
{
    ordered_json e;
    e["command"] = command_name(cfg.command);
    e["fields"] = ordered_json::array();
    for (std::size_t f = 0; f < user_fields; ++f) e["fields"].push_back(fields[f].label());
    e["digits"] = cfg.precision_digits;
    e["identities"] = ordered_json::array();
    for (IdentityId id : cfg.identity_set) e["identities"].push_back(identity_name(id));
    ordered_json grid = ordered_json::object();
    const auto& g = cfg.param_grid;
    if (!g.m.empty()) grid["m"] = g.m;
    if (!g.k.empty()) grid["k"] = g.k;
    auto symbols = [](const std::vector<SymbolicNumber>& v) {
        ordered_json a = ordered_json::array();
        for (const auto& s : v) a.push_back(s.canonical());
        return a;
    };
    if (!g.alpha.empty()) grid["alpha"] = symbols(g.alpha);
    if (!g.z.empty()) grid["z"] = symbols(g.z);
    if (!g.x.empty()) grid["x"] = symbols(g.x);
    if (!g.at.empty()) grid["at"] = symbols(g.at);
    e["grid"] = grid;
    e["method"] = cfg.method;
    e["format"] = format_name(cfg.output_format);
    return e;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string params_string(const ordered_json& params, const char* sep)
{
    std::string s;
    for (const auto& [k, v] : params.items()) s += (s.empty() ? "" : sep) + k + "=" + v.get<std::string>();
    return s;
}

std::string short_decimal(const std::string& full)
{
    ScopedPrecision guard(128);
    return to_decimal(make_real(full), 6);
}

void emit_csv(std::ostream& os, const std::vector<ordered_json>& reports, const std::vector<ordered_json>& evals)
{
    if (!reports.empty() || evals.empty()) {
        os << "identity,field,params,abs_residual,rel_residual,tolerance,passed\n";
        for (const auto& r : reports)
            os << r["identity"].get<std::string>() << "," << csv_escape(r["field"].get<std::string>()) << ","
               << csv_escape(params_string(r["params"], ";")) << "," << r["abs_residual"].get<std::string>() << ","
               << r["rel_residual"].get<std::string>() << "," << r["tolerance"].get<std::string>() << ","
               << (r["passed"].get<bool>() ? "true" : "false") << "\n";
    }
    if (!evals.empty()) {
        os << "kind,field,params,method,value_re,value_im,error_bound\n";
        for (const auto& e : evals) {
            auto row = [&](const std::string& method, const ordered_json& value, const std::string& bound) {
                os << e["kind"].get<std::string>() << "," << csv_escape(e["field"].get<std::string>()) << ","
                   << csv_escape(params_string(e["params"], ";")) << "," << method << ","
                   << value["re"].get<std::string>() << "," << value["im"].get<std::string>() << "," << bound
                   << "\n";
            };
            if (e.contains("results")) {
                for (const auto& r : e["results"])
                    row(r["method"].get<std::string>(), r["value"], r["error_bound"].get<std::string>());
            } else {
                row(e.value("method", ""), e["value"], e.value("error_bound", ""));
            }
        }
    }
}

void emit_text(std::ostream& os, const std::vector<ordered_json>& reports, const std::vector<ordered_json>& evals,
               const std::vector<std::string>& errors)
{
    std::size_t passed = 0;
    for (const auto& r : reports) {
        bool ok = r["passed"].get<bool>();
        passed += ok;
        os << (ok ? "PASS " : "FAIL ") << r["identity"].get<std::string>() << " " << r["field"].get<std::string>()
           << " " << params_string(r["params"], " ") << "  residual=" << short_decimal(r["abs_residual"])
           << " rel=" << short_decimal(r["rel_residual"]) << " tol=" << short_decimal(r["tolerance"]) << "\n";
    }
    for (const auto& e : evals) {
        std::string head = e["kind"].get<std::string>() + " " + e["field"].get<std::string>() + " " +
                           params_string(e["params"], " ");
        auto value_text = [](const ordered_json& v) {
            std::string im = v["im"].get<std::string>();
            ScopedPrecision guard(128);
            if (make_real(im) == 0) return v["re"].get<std::string>();
            return v["re"].get<std::string>() + " + " + im + "*i";
        };
        if (e.contains("results")) {
            for (const auto& r : e["results"])
                os << head << " [" << r["method"].get<std::string>() << "] = " << value_text(r["value"]) << "\n";
            if (e.contains("agreement")) os << head << " agreement " << e["agreement"].get<std::string>() << "\n";
        } else {
            os << head << " = " << value_text(e["value"]);
            if (e.contains("rational")) os << " (rational " << e["rational"].get<std::string>() << ")";
            os << "\n";
            if (e.contains("pi_normalized")) {
                const auto& ks = e["pi_normalized"];
                os << head << " sqrt(D)/pi^(s d) * value = " << ks["value"].get<std::string>();
                if (ks.contains("rational")) os << " (rational " << ks["rational"].get<std::string>() << ")";
                os << "\n";
            }
        }
    }
    for (const auto& msg : errors) os << "ERROR " << msg << "\n";
    if (!reports.empty()) os << passed << "/" << reports.size() << " verifications passed\n";
}

}  // namespace

int exit_status(const std::vector<ordered_json>& reports, const ordered_json& errors)
{
    auto has = [&](const char* status) {
        return std::any_of(errors.begin(), errors.end(), [&](const ordered_json& e) { return e.at("status") == status; });
    };
    if (has("config")) return kExitConfig;
    if (has("nonconvergence")) return kExitNonConvergence;
    bool failed = std::any_of(reports.begin(), reports.end(),
                              [](const ordered_json& r) { return !r.at("passed").get<bool>(); });
    return failed ? kExitFailed : kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    auto started = std::chrono::steady_clock::now();
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<FieldDescriptor> fields;
    std::vector<Task> tasks;
    std::size_t user_fields = 0;
    try {
        if (cfg.command == Command::Selftest) {
            for (const char* label : {"Q", "Qsqrt5", "Qi"}) fields.push_back(resolve_field(label));
            tasks = selftest_tasks(0, 1, 2);
            user_fields = fields.size();
        } else {
            for (const auto& sel : cfg.field_selectors) fields.push_back(resolve_field(sel));
            user_fields = fields.size();
            const auto& g = cfg.param_grid;
            switch (cfg.command) {
            case Command::Verify:
            case Command::Sweep:
                tasks = verification_tasks(cfg, fields.size());
                if (std::any_of(cfg.identity_set.begin(), cfg.identity_set.end(), is_classical))
                    fields.push_back(FieldDescriptor::rationals());  // slot used by the classical identities
                break;
            case Command::Kernel:
                for (std::size_t f = 0; f < fields.size(); ++f)
                    for (const auto& x : g.x) {
                        Task t;
                        t.kind = TaskKind::Kernel;
                        t.field = f;
                        t.x = x;
                        tasks.push_back(t);
                    }
                break;
            case Command::Zeta:
                for (std::size_t f = 0; f < fields.size(); ++f)
                    for (const auto& s : g.at) {
                        Task t;
                        t.kind = TaskKind::Zeta;
                        t.field = f;
                        t.at = s;
                        tasks.push_back(t);
                    }
                break;
            case Command::Eisenstein:
                for (std::size_t f = 0; f < fields.size(); ++f)
                    for (long k : g.k)
                        for (const auto& z : g.z) {
                            Task t;
                            t.kind = TaskKind::Eisenstein;
                            t.field = f;
                            t.k = k;
                            t.z = z;
                            tasks.push_back(t);
                        }
                break;
            case Command::Selftest:
                break;
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    PrecisionContext ctx = PrecisionContext::from_digits(cfg.precision_digits);
    std::vector<ordered_json> outcomes = execute_all(tasks, fields, cfg, ctx);

    std::vector<ordered_json> reports, evaluations;
    ordered_json errors = ordered_json::array();
    std::vector<std::string> error_lines;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const ordered_json& o = outcomes[i];
        std::string status = o["status"].get<std::string>();
        std::string what = describe_task(tasks[i], fields);
        if (status != "ok") {
            std::string msg = o.value("message", "");
            errors.push_back({{"task", what}, {"status", status}, {"message", msg}});
            error_lines.push_back(what + ": " + msg);
            err << (status == "config" ? "invalid: " : "no convergence: ") << what << ": " << msg << "\n";
            continue;
        }
        const ordered_json& rec = o["record"];
        if (tasks[i].kind == TaskKind::Verify) {
            if (!rec["passed"].get<bool>()) {
                err << "FAILED: " << what << " abs_residual=" << short_decimal(rec["abs_residual"])
                    << " rel_residual=" << short_decimal(rec["rel_residual"])
                    << " tolerance=" << short_decimal(rec["tolerance"]) << "\n";
            }
            reports.push_back(rec);
        } else {
            evaluations.push_back(rec);
        }
    }

    std::ostringstream artifact;
    switch (cfg.output_format) {
    case OutputFormat::Json: {
        ordered_json doc;
        doc["schema_version"] = 1;
        doc["config_echo"] = config_echo(cfg, fields, user_fields);
        doc["reports"] = reports;
        if (!evaluations.empty()) doc["evaluations"] = evaluations;
        if (!errors.empty()) doc["errors"] = errors;
        if (!cfg.omit_timing) {
            double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            doc["timing"] = {{"wall_seconds", seconds}, {"tasks", tasks.size()}, {"workers", cfg.workers}};
        }
        artifact << doc.dump(2) << "\n";
        break;
    }
    case OutputFormat::Csv: emit_csv(artifact, reports, evaluations); break;
    case OutputFormat::Text: emit_text(artifact, reports, evaluations, error_lines); break;
    }

    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << *cfg.output_path << "'\n";
            return kExitConfig;
        }
        file << artifact.str();
    } else {
        out << artifact.str();
    }

    return exit_status(reports, errors);
}

}  // namespace zetaforge
