#ifndef BINET_SYNTAX_HPP
#define BINET_SYNTAX_HPP

#include "binet/core.hpp"
#include "binet/rules.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace binet {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string &message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

struct ParseOptions {
    /// Accept engine-minted `%` labels (e.g. when reloading snapshots).
    bool allow_reserved_labels = false;
};

/// Maps the ASCII and UTF-8 spellings (`->`, `→`, `@`, `ε`, `⊥`) to the
/// canonical symbol names (Abs, App, eps, bot); other names pass through.
std::string canonical_symbol(std::string_view spelling);

/// Parses a `.binet` document. Undeclared symbols take the arity of their
/// first use. Throws ParseError on syntax or arity errors and InvalidBinet
/// when the result breaks a binet invariant.
Binet parse_binet(std::string_view text, const ParseOptions &options = {});

/// Canonical text: a `sig` line, then agents and wires one per line, sorted.
/// Abbreviated forms are used whenever the internal interface and children
/// are empty.
std::string print_binet(const Binet &net);

std::string print_agent(const Agent &agent);

/// Parses a `.rules` document. Throws ParseError on syntax errors, unbound
/// right-hand metavariables and metavariable conflicts.
RuleSet parse_rules(std::string_view text);

std::string print_rule(const Rule &rule);

} // namespace binet

#endif
