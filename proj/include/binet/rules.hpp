#ifndef BINET_RULES_HPP
#define BINET_RULES_HPP

#include "binet/core.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace binet {

// ---------------------------------------------------------------------------
// Rule representation. Left- and right-hand sides share the agent shape:
// a symbol (concrete, a symbol metavariable, or a derived name built from
// one), a principal label variable, external/internal slot lists and a
// children slot.

struct SymbolPattern {
    enum class Kind { Concrete, Variable, Derived };
    Kind kind = Kind::Concrete;
    std::string name;   // the symbol, or the metavariable name
    std::string suffix; // Derived only: symbol = binding + "_" + suffix

    bool operator==(const SymbolPattern &) const = default;
};

/// A port slot: a single label variable (`b`) or a label-vector
/// metavariable (`Y`) that absorbs any number of consecutive ports.
struct Slot {
    enum class Kind { Label, Vector };
    Kind kind = Kind::Label;
    std::string name;

    bool operator==(const Slot &) const = default;
};

struct AgentPattern;

struct ChildrenPattern {
    enum class Kind { Empty, Subnet, Explicit };
    Kind kind = Kind::Empty;
    std::string subnet;               // Subnet: binds the whole children list
    std::vector<AgentPattern> agents; // Explicit: exactly these children

    bool operator==(const ChildrenPattern &) const;
};

struct AgentPattern {
    SymbolPattern symbol;
    std::string principal;
    std::vector<Slot> external;
    std::vector<Slot> internal;
    ChildrenPattern children;

    bool operator==(const AgentPattern &) const = default;
};

struct WireTemplate {
    std::string a;
    std::string b;

    bool operator==(const WireTemplate &) const = default;
};

/// `foreach x in I(X): ...` expands once per interface label of X and may use
/// `x'`, a fresh label that replaces x inside a re-emitted X.
/// `foreach x unique-in L(X): ...` ranges over the labels occurring exactly
/// once in X; X itself is dropped unless re-emitted.
struct Generator {
    enum class Kind { Interface, Unique };
    Kind kind = Kind::Interface;
    std::string var;
    std::string subnet;
    std::vector<AgentPattern> agents;
    std::vector<WireTemplate> wires;

    bool operator==(const Generator &) const = default;
};

struct Template {
    std::vector<AgentPattern> agents;
    std::vector<WireTemplate> wires;
    std::vector<std::string> subnets; // subnets re-emitted at the top of the host
    std::vector<Generator> generators;

    bool operator==(const Template &) const = default;
};

enum class RuleKind { Active, Inactive };

struct Rule {
    std::string id;
    RuleKind kind = RuleKind::Active;
    std::vector<AgentPattern> lhs;
    Template rhs;
    int priority = 0;
    /// Label variable shared by the two principal ports of an active pair;
    /// for inactive rules the principal variable of the first agent.
    std::string anchor;
    /// True when the rule relocates, drops or rewrites a bound subnet. Such a
    /// rewrite may not share a pass with any rewrite inside that subnet.
    bool moves_subnet = false;
};

/// Fills in kind-dependent fields (anchor, moves_subnet) from lhs/rhs.
/// Throws std::invalid_argument if an active rule lacks a unique principal
/// pair.
void finalize_rule(Rule &rule);

/// Higher wins when several active rules match the same pair.
int specificity(const Rule &rule);

class RuleSet {
  public:
    RuleSet() = default;

    void add(Rule rule);
    void replace(const std::string &id, Rule rule);

    const std::vector<Rule> &rules() const { return rules_; }
    const Rule &operator[](std::size_t i) const { return rules_[i]; }
    std::size_t size() const { return rules_.size(); }
    const Rule *find(const std::string &id) const;

    const std::vector<std::size_t> &active() const { return active_; }
    const std::vector<std::size_t> &inactive() const { return inactive_; }

    /// Symbols declared by the rule file; merged into reduced binets.
    Signature signature;

  private:
    std::vector<Rule> rules_;
    std::vector<std::size_t> active_;
    std::vector<std::size_t> inactive_;

    void reindex();
};

/// Canonical key of an active rule's principal pair (plus any host context);
/// two active rules with equal keys are ambiguous.
std::string pair_key(const Rule &rule);

enum class RuleViolationKind {
    InterfaceViolation,
    UnboundMetavariable,
    MetavariableConflict,
    DuplicatePairRule,
    MalformedRule,
};

struct RuleViolation {
    RuleViolationKind kind;
    std::string rule;
    std::string message;
};

using RuleReport = std::vector<RuleViolation>;

std::string to_string(RuleViolationKind kind);

RuleReport check_rule(const Rule &rule);
RuleReport check_ruleset(const RuleSet &rules);

// ---------------------------------------------------------------------------
// Matching

struct Match {
    /// Binet agent matched by each pattern agent, pattern agents in pre-order.
    std::vector<Path> agents;
    std::map<std::string, Label> labels;
    std::map<std::string, std::vector<Label>> vectors;
    std::map<std::string, std::string> symbols;
    /// Subnet metavariable -> path of the agent whose children it binds.
    std::map<std::string, Path> subnets;
    /// Where right-hand-side agents go: the parent of the first matched agent.
    Path host;
    Label anchor;

    /// Matched agents without a matched ancestor (what a rewrite removes).
    std::vector<Path> roots() const;
};

/// All matches of `rule` in `net`. Active rules are anchored at labels that
/// occur twice as a principal port; inactive rules at the principal port of
/// their first agent. Matches may sit at any depth.
std::vector<Match> match_pattern(const Rule &rule, const Binet &net);

// ---------------------------------------------------------------------------
// Instantiation

/// Mints labels in the reserved namespace. Safe to call from several threads.
class LabelAllocator {
  public:
    explicit LabelAllocator(std::uint64_t start = 0, std::string prefix = "%")
        : prefix_(std::move(prefix)), next_(start) {}
    LabelAllocator(LabelAllocator &&other) noexcept
        : prefix_(std::move(other.prefix_)), next_(other.next_.load()) {}

    /// Starts past every `%n` label already present in `net`.
    static LabelAllocator after(const Binet &net);

    Label next();

    /// A sub-allocator whose labels can never collide with this one's.
    LabelAllocator branch();

  private:
    std::string prefix_;
    std::atomic<std::uint64_t> next_;
};

/// Agents to remove (whole subtrees, by path into the matched binet) and
/// agents/wires to add.
struct Delta {
    std::vector<Path> removed;
    std::vector<std::pair<Path, Agent>> added; // (host path, agent)
    std::vector<Wire> wires;
};

Delta instantiate(const Rule &rule, const Match &match, const Binet &net, LabelAllocator &fresh);

class ConflictDetected : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Applies deltas computed against the same binet simultaneously. Throws
/// ConflictDetected if two of them touch the same agent.
Binet apply_deltas(const Binet &net, std::span<const Delta> deltas);

inline Binet apply_delta(const Binet &net, const Delta &delta) {
    return apply_deltas(net, std::span<const Delta>(&delta, 1));
}

/// Labels occurring exactly once within `agents` (the I(X) / unique-in-L(X)
/// domain), in order of first occurrence.
std::vector<Label> subnet_interface(const std::vector<Agent> &agents);

} // namespace binet

#endif
