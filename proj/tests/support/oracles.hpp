#ifndef BINET_TEST_ORACLES_HPP
#define BINET_TEST_ORACLES_HPP

// Slow, obviously-correct reference implementations used to cross-check the
// library. Nothing here shares code with src/ beyond the data types.

#include "binet/core.hpp"
#include "binet/rules.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// Minimum over every sibling ordering, wire ordering and wire orientation of
/// the text obtained after renaming labels in order of first appearance.
/// Exponential; meant for nets of at most ~6 agents and 3 wires.
std::string canonical_form(const binet::Binet &net);

bool isomorphic(const binet::Binet &a, const binet::Binet &b);

/// Labels that occur exactly twice as a principal port, by direct scan.
std::set<binet::Label> principal_pairs(const binet::Binet &net);

/// Labels occurring exactly once anywhere (agents at any depth, wire ends).
std::set<binet::Label> free_ports(const binet::Binet &net);

/// Every match of `rule`, found by trying all injective assignments of
/// pattern agents to binet agents. Each match is reported as the sorted list
/// of matched agent paths (one entry per distinct set).
std::set<std::vector<binet::Path>> brute_force_matches(const binet::Rule &rule,
                                                       const binet::Binet &net);

/// Checks that `m` is a consistent match of `rule` in `net` (every pattern
/// agent agrees with its binet agent under m's bindings).
bool match_is_consistent(const binet::Rule &rule, const binet::Binet &net, const binet::Match &m);

std::size_t agent_count(const binet::Binet &net);

/// A rewrite to replay: rule index and the agents it matched, identified by
/// their printed form so they can be found again after other rewrites.
struct Replay {
    std::size_t rule = 0;
    std::vector<std::string> agents; // sorted
};

/// Replays `steps` one at a time in the given order, re-matching each rule
/// after the previous rewrites and picking the match on the same agents. No
/// wires are tidied between steps. Returns nullopt if a step cannot be found
/// again.
std::optional<binet::Binet> apply_serially(const binet::Binet &net, const binet::RuleSet &rules,
                                           const std::vector<Replay> &steps);

Replay replay_of(std::size_t rule, const binet::Match &match, const binet::Binet &net);

} // namespace oracle

#endif
