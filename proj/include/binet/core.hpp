#ifndef BINET_CORE_HPP
#define BINET_CORE_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace binet {

/// Port labels are plain identifier tokens. Labels minted by the engine carry
/// the reserved `%` prefix.
using Label = std::string;

inline constexpr char kReservedLabelPrefix = '%';

inline bool is_reserved_label(const Label &l) {
    return !l.empty() && l.front() == kReservedLabelPrefix;
}

/// (internal, external) port counts of an agent symbol.
struct Arity {
    std::size_t internal = 0;
    std::size_t external = 0;

    auto operator<=>(const Arity &) const = default;
};

using Signature = std::map<std::string, Arity>;

/// A^l<E | I | N>: symbol, principal label, external and internal port lists
/// (order is significant) and the agents nested inside.
struct Agent {
    std::string symbol;
    Label principal;
    std::vector<Label> external;
    std::vector<Label> internal;
    std::vector<Agent> children;

    Arity arity() const { return {internal.size(), external.size()}; }
    bool operator==(const Agent &) const = default;
};

struct Wire {
    Label a;
    Label b;

    bool operator==(const Wire &) const = default;
};

/// A set of top-level agents and wires over a signature. Sibling order carries
/// no meaning; use iso() to compare binets.
struct Binet {
    std::vector<Agent> agents;
    std::vector<Wire> wires;
    Signature signature;

    bool empty() const { return agents.empty() && wires.empty(); }
};

/// Index path from the top level down to an agent: agents[p0].children[p1]...
using Path = std::vector<std::size_t>;

std::string to_string(const Path &path);

const Agent &agent_at(const Binet &net, const Path &path);

/// Calls fn(agent, path) for every agent in pre-order.
template <typename Fn>
void for_each_agent(const Binet &net, Fn &&fn);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    LabelOveruse,
    ArityMismatch,
    UndeclaredSymbol,
    DegenerateWire,
    EmptyLabel,
};

struct Violation {
    ViolationKind kind;
    std::string subject;  // label or symbol concerned
    std::string location; // agent path ("/0/1") or wire ("wire #2")
    std::string message;
};

using ValidationReport = std::vector<Violation>;

std::string to_string(ViolationKind kind);

ValidationReport validate(const Binet &net);

/// Thrown by operations whose precondition is a valid binet.
class InvalidBinet : public std::runtime_error {
  public:
    explicit InvalidBinet(ValidationReport report);
    const ValidationReport &report() const { return report_; }

  private:
    ValidationReport report_;
};

// ---------------------------------------------------------------------------
// Occurrences, interface, place/link views

enum class PortKind { Principal, External, Internal, WireEnd };

/// One occurrence of a label: a port of the agent at `path`, or an end of
/// wire number `index` when kind == WireEnd (path is then empty).
struct PortRef {
    PortKind kind;
    Path path;
    std::size_t index = 0;

    auto operator<=>(const PortRef &) const = default;
};

using LinkView = std::map<Label, std::vector<PortRef>>;

/// Every label occurrence, in pre-order over agents followed by wires.
LinkView link_view(const Binet &net);

std::map<Label, std::size_t> occurrence_counts(const Binet &net);

/// Labels occurring exactly once. Throws InvalidBinet on an invalid binet.
std::set<Label> interface(const Binet &net);

/// Labels occurring exactly once, without validating first.
std::set<Label> free_labels(const Binet &net);

struct PlaceNode {
    std::string symbol;
    Path path;
    std::vector<PlaceNode> children;
};

/// The nesting forest: one root per top-level agent.
std::vector<PlaceNode> place_view(const Binet &net);

/// Rebuilds a binet from its place and link views (wires come from the
/// WireEnd entries). Signature is carried over separately by the caller.
Binet reconstruct(const std::vector<PlaceNode> &places, const LinkView &links);

// ---------------------------------------------------------------------------
// Structural isomorphism

using Renaming = std::map<Label, Label>;

/// A label bijection (left -> right) witnessing left ~ right, if any.
/// Sibling order is free; port order, principal assignment, symbols and
/// nesting must agree.
std::optional<Renaming> find_isomorphism(const Binet &left, const Binet &right);

inline bool iso(const Binet &left, const Binet &right) {
    return find_isomorphism(left, right).has_value();
}

/// Applies a label substitution everywhere (agents at every depth and wires).
Binet rename_labels(const Binet &net, const Renaming &renaming);

// ---------------------------------------------------------------------------

template <typename Fn>
void for_each_agent_impl(const std::vector<Agent> &agents, Path &path, Fn &fn) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
        path.push_back(i);
        fn(agents[i], static_cast<const Path &>(path));
        for_each_agent_impl(agents[i].children, path, fn);
        path.pop_back();
    }
}

template <typename Fn>
void for_each_agent(const Binet &net, Fn &&fn) {
    Path path;
    for_each_agent_impl(net.agents, path, fn);
}

} // namespace binet

#endif
