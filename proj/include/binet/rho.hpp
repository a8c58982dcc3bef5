#ifndef BINET_RHO_HPP
#define BINET_RHO_HPP

#include "binet/core.hpp"
#include "binet/rules.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace binet {

/// Terms of the rho-calculus fragment: lower-case identifiers are variables,
/// upper-case ones constructors; `P -> T` abstracts over pattern P and
/// juxtaposition applies.
struct RhoTerm {
    enum class Kind { Variable, Constructor, Application, Abstraction };
    Kind kind = Kind::Constructor;
    std::string name; // Variable / Constructor
    /// Application: function, argument. Abstraction: pattern, body.
    std::shared_ptr<const RhoTerm> left;
    std::shared_ptr<const RhoTerm> right;

    static RhoTerm variable(std::string name);
    static RhoTerm constructor(std::string name);
    static RhoTerm application(RhoTerm function, RhoTerm argument);
    static RhoTerm abstraction(RhoTerm pattern, RhoTerm body);

    bool operator==(const RhoTerm &other) const;
};

/// Application binds tighter than `->` and associates to the left; `->`
/// associates to the right. Throws ParseError.
RhoTerm parse_rho(std::string_view text);
std::string print_rho(const RhoTerm &term);

class RhoCompileError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CompiledRho {
    Binet net;
    /// The single free port: where the term's value leaves the net.
    Label output;
};

/// Translates a term into a binet with one free port. Abstractions become
/// Abs agents (pattern net nested inside, body outside), applications App
/// agents, constructors nullary agents; an unused pattern variable gets an
/// eps agent. Throws RhoCompileError for free or repeated variables and for
/// patterns other than a variable or a nullary constructor.
CompiledRho compile_rho(const RhoTerm &term);

enum class EpsilonVariant {
    /// eps meets M: erase X in one step through its unique labels.
    Optimized,
    /// eps meets M: re-emit X and erase it port by port.
    Naive,
};

/// The bundled rule library for compiled terms.
RuleSet rho_rules(EpsilonVariant variant = EpsilonVariant::Optimized);
std::string_view rho_rules_source(EpsilonVariant variant = EpsilonVariant::Optimized);

} // namespace binet

#endif
