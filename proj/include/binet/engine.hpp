#ifndef BINET_ENGINE_HPP
#define BINET_ENGINE_HPP

#include "binet/core.hpp"
#include "binet/rules.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace binet {

/// One applicable rewrite: a rule (index into the RuleSet) and where it
/// matched.
struct Candidate {
    std::size_t rule = 0;
    Match match;
    RuleKind kind = RuleKind::Active;

    /// Lexicographically smallest matched agent path.
    Path location() const;
    /// Depth of the deepest matched agent (top level = 1).
    std::size_t depth() const;
};

struct Candidates {
    /// Labels occurring twice as a principal port with an applicable rule.
    std::vector<Label> active;
    /// Labels occurring twice as a principal port that no rule matches.
    std::vector<Label> stuck;
    /// The chosen match for each active label, then every inactive match.
    std::vector<Candidate> redexes;

    std::size_t inactive_count() const;
    bool empty() const { return redexes.empty(); }
};

Candidates collect(const Binet &net, const RuleSet &rules);

/// Agents a rewrite may touch: its matched agents, plus everything beneath
/// them when the rule moves a subnet.
std::vector<Path> region(const Candidate &c, const Binet &net, const RuleSet &rules);
bool conflicts(const Candidate &a, const Candidate &b, const RuleSet &rules);

enum class StrategyKind { Deterministic, Weighted, Stochastic };

std::string to_string(StrategyKind kind);
/// Throws std::invalid_argument on an unknown name.
StrategyKind parse_strategy_kind(const std::string &name);

struct Strategy {
    StrategyKind kind = StrategyKind::Deterministic;
    std::uint64_t seed = 0;
    /// Greedy-maximal safe sets; false fires a single redex per pass.
    bool maximal = true;
    /// Per-rule priority overrides for the weighted strategy.
    std::map<std::string, int> priorities;
};

struct SafeSet {
    std::vector<Candidate> chosen;
    /// region(chosen[i]); pairwise free of prefix relations.
    std::vector<std::vector<Path>> regions;

    bool empty() const { return chosen.empty(); }
    std::size_t size() const { return chosen.size(); }
};

/// The stable order: innermost matches first, inactive before active at equal
/// depth, then by location path and rule index.
bool deterministic_before(const Candidate &a, const Candidate &b);

/// Orders candidates and greedily builds safe sets. Keeps its random state
/// across passes, so one Scheduler should drive one reduction.
class Scheduler {
  public:
    explicit Scheduler(Strategy strategy);

    SafeSet select(const Candidates &candidates, const Binet &net, const RuleSet &rules);
    const Strategy &strategy() const { return strategy_; }

  private:
    Strategy strategy_;
    std::mt19937_64 rng_;
};

/// One-shot selection (a fresh Scheduler).
SafeSet prioritise(const Candidates &candidates, const Binet &net, const RuleSet &rules,
                   const Strategy &strategy);

/// Instantiates every member against `net` (on up to `threads` threads) and
/// applies the deltas simultaneously. Throws ConflictDetected if two members
/// overlap.
Binet rewrite_pass(const Binet &net, const SafeSet &safe, const RuleSet &rules,
                   LabelAllocator &fresh, unsigned threads = 1);

/// Removes wires by label substitution: chains collapse, agent ports joined by
/// a chain share one label, a port reaching a free end takes the free label,
/// chains between two free ends become one wire and closed loops vanish.
Binet tidy(const Binet &net);

struct Limits {
    std::size_t max_passes = 10000;
    std::size_t max_steps = 1000000;
};

enum class Termination { NormalForm, StepLimit };

std::string to_string(Termination t);

struct Firing {
    std::string rule;
    RuleKind kind = RuleKind::Active;
    Path location;
};

struct PassRecord {
    std::vector<Firing> fired;
    std::size_t active = 0;
    std::size_t inactive = 0;
    /// Interactions (rule firings) up to and including this pass.
    std::size_t interactions = 0;
};

struct ReductionTrace {
    /// snapshots[0] is the input; snapshots[i] follows pass i.
    std::vector<Binet> snapshots;
    std::vector<PassRecord> passes;
    Termination termination = Termination::NormalForm;
    std::size_t interactions = 0;
    /// Active pairs without a rule left in the final binet.
    std::vector<Label> stuck;

    const Binet &final_binet() const { return snapshots.back(); }
};

struct ReduceOptions {
    Limits limits;
    unsigned threads = 1;
    /// When false only the input and the final binet are kept.
    bool keep_snapshots = true;
};

/// Collect, prioritise, rewrite and tidy until no candidates remain or a limit
/// is reached.
ReductionTrace reduce(const Binet &net, const RuleSet &rules, const Strategy &strategy,
                      const ReduceOptions &options = {});

/// Tab-separated log, one line per firing: pass, rule id, location path,
/// interactions so far.
void write_trace_log(std::ostream &out, const ReductionTrace &trace);

} // namespace binet

#endif
