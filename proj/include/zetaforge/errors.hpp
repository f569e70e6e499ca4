// Exception types. Every failure carries enough context to act on: the
// required truncation, the achieved error, the offending line, ...
#ifndef ZETAFORGE_ERRORS_HPP
#define ZETAFORGE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zetaforge {

/// Argument outside an operation's domain (Re(x) <= 0, n = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Gamma evaluated at a nonpositive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Dirichlet series asked for at Re(s) too close to 1 for the available
/// (or affordable) number of terms.
class TruncationError : public DomainError {
public:
    TruncationError(const std::string& what, double required_terms)
        : DomainError(what), required_terms_(required_terms)
    {
    }
    double required_terms() const noexcept { return required_terms_; }

private:
    double required_terms_;
};

/// A series or quadrature did not reach the requested accuracy.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_log10_error)
        : std::runtime_error(what), achieved_log10_error_(achieved_log10_error)
    {
    }
    double achieved_log10_error() const noexcept { return achieved_log10_error_; }

private:
    double achieved_log10_error_;
};

/// Coefficient requested past the end of an external table.
class TableRangeError : public std::out_of_range {
public:
    TableRangeError(const std::string& what, std::size_t max_index)
        : std::out_of_range(what), max_index_(max_index)
    {
    }
    std::size_t max_index() const noexcept { return max_index_; }

private:
    std::size_t max_index_;
};

/// Malformed input text (coefficient tables, configs, reports).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace zetaforge

#endif  // ZETAFORGE_ERRORS_HPP
