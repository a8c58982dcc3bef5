#include "binet/engine.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace binet {

namespace {

bool is_prefix(const Path &prefix, const Path &path) {
    return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

void descendants(const Agent &a, Path &path, std::vector<Path> &out) {
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        path.push_back(i);
        out.push_back(path);
        descendants(a.children[i], path, out);
        path.pop_back();
    }
}

} // namespace

Path Candidate::location() const {
    return match.agents.empty() ? Path{}
                                : *std::min_element(match.agents.begin(), match.agents.end());
}

std::size_t Candidate::depth() const {
    std::size_t d = 0;
    for (const auto &p : match.agents)
        d = std::max(d, p.size());
    return d;
}

std::size_t Candidates::inactive_count() const {
    return static_cast<std::size_t>(std::count_if(
        redexes.begin(), redexes.end(), [](const Candidate &c) { return c.kind == RuleKind::Inactive; }));
}

Candidates collect(const Binet &net, const RuleSet &rules) {
    Candidates out;
    std::map<Label, int> principal_counts;
    for_each_agent(net, [&](const Agent &a, const Path &) { ++principal_counts[a.principal]; });

    // Per active label, the most specific rule wins; ties go to the earlier rule.
    std::map<Label, std::pair<int, Candidate>> best;
    for (std::size_t r : rules.active()) {
        int score = specificity(rules[r]);
        for (auto &m : match_pattern(rules[r], net)) {
            Label anchor = m.anchor;
            auto it = best.find(anchor);
            if (it != best.end() && it->second.first >= score)
                continue;
            Candidate c{r, std::move(m), RuleKind::Active};
            best.insert_or_assign(anchor, std::make_pair(score, std::move(c)));
        }
    }
    std::vector<Candidate> active;
    for (auto &[label, entry] : best)
        active.push_back(std::move(entry.second));
    std::sort(active.begin(), active.end(), [](const Candidate &a, const Candidate &b) {
        return a.location() < b.location();
    });
    for (auto &c : active) {
        out.active.push_back(c.match.anchor);
        out.redexes.push_back(std::move(c));
    }
    for (const auto &[label, n] : principal_counts)
        if (n == 2 && !best.count(label))
            out.stuck.push_back(label);
    for (std::size_t r : rules.inactive())
        for (auto &m : match_pattern(rules[r], net))
            out.redexes.push_back({r, std::move(m), RuleKind::Inactive});
    return out;
}

std::vector<Path> region(const Candidate &c, const Binet &net, const RuleSet &rules) {
    std::vector<Path> out = c.match.agents;
    if (rules[c.rule].moves_subnet)
        for (const auto &p : c.match.agents) {
            Path path = p;
            descendants(agent_at(net, p), path, out);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool conflicts(const Candidate &a, const Candidate &b, const RuleSet &rules) {
    (void)rules;
    // A non-moving rule matches every agent below its matched agents (empty or
    // explicit children), and a moving rule owns the whole subtree; either way
    // two rewrites overlap exactly when one touches an agent at or below an
    // agent the other touches.
    for (const auto &p : a.match.agents)
        for (const auto &q : b.match.agents)
            if (is_prefix(p, q) || is_prefix(q, p))
                return true;
    return false;
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Deterministic:
        return "deterministic";
    case StrategyKind::Weighted:
        return "weighted";
    case StrategyKind::Stochastic:
        return "stochastic";
    }
    return "?";
}

StrategyKind parse_strategy_kind(const std::string &name) {
    for (auto k : {StrategyKind::Deterministic, StrategyKind::Weighted, StrategyKind::Stochastic})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

bool deterministic_before(const Candidate &a, const Candidate &b) {
    if (a.depth() != b.depth())
        return a.depth() > b.depth();
    if (a.kind != b.kind)
        return a.kind == RuleKind::Inactive;
    auto la = a.location(), lb = b.location();
    if (la != lb)
        return la < lb;
    if (a.rule != b.rule)
        return a.rule < b.rule;
    return a.match.agents < b.match.agents;
}

Scheduler::Scheduler(Strategy strategy) : strategy_(std::move(strategy)), rng_(strategy_.seed) {}

SafeSet Scheduler::select(const Candidates &candidates, const Binet &net, const RuleSet &rules) {
    const auto &cs = candidates.redexes;
    std::vector<std::size_t> order(cs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return deterministic_before(cs[i], cs[j]); });
    switch (strategy_.kind) {
    case StrategyKind::Deterministic:
        break;
    case StrategyKind::Weighted: {
        auto priority = [&](std::size_t i) {
            const Rule &r = rules[cs[i].rule];
            auto it = strategy_.priorities.find(r.id);
            return it != strategy_.priorities.end() ? it->second : r.priority;
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return priority(i) > priority(j); });
        break;
    }
    case StrategyKind::Stochastic:
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng_() % i]);
        break;
    }
    SafeSet out;
    for (std::size_t i : order) {
        bool clash = false;
        for (const auto &c : out.chosen)
            if (conflicts(c, cs[i], rules)) {
                clash = true;
                break;
            }
        if (clash)
            continue;
        out.chosen.push_back(cs[i]);
        out.regions.push_back(region(cs[i], net, rules));
        if (!strategy_.maximal)
            break;
    }
    return out;
}

SafeSet prioritise(const Candidates &candidates, const Binet &net, const RuleSet &rules,
                   const Strategy &strategy) {
    return Scheduler(strategy).select(candidates, net, rules);
}

Binet rewrite_pass(const Binet &net, const SafeSet &safe, const RuleSet &rules,
                   LabelAllocator &fresh, unsigned threads) {
    if (safe.empty())
        return net;
    std::vector<Delta> deltas(safe.size());
    if (threads <= 1 || safe.size() == 1) {
        for (std::size_t i = 0; i < safe.size(); ++i)
            deltas[i] = instantiate(rules[safe.chosen[i].rule], safe.chosen[i].match, net, fresh);
    } else {
        // Branches are created up front, in member order, so the labels do not
        // depend on thread timing.
        std::vector<LabelAllocator> branches;
        branches.reserve(safe.size());
        for (std::size_t i = 0; i < safe.size(); ++i)
            branches.push_back(fresh.branch());
        std::vector<std::thread> pool;
        unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(safe.size()));
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < safe.size(); i += n)
                    deltas[i] = instantiate(rules[safe.chosen[i].rule], safe.chosen[i].match, net,
                                            branches[i]);
            });
        for (auto &th : pool)
            th.join();
    }
    return apply_deltas(net, deltas);
}

Binet tidy(const Binet &net) {
    std::map<Label, std::size_t> on_agents;
    for_each_agent(net, [&](const Agent &a, const Path &) {
        ++on_agents[a.principal];
        for (const auto &l : a.external)
            ++on_agents[l];
        for (const auto &l : a.internal)
            ++on_agents[l];
    });
    std::map<Label, std::vector<Label>> adjacent;
    for (const auto &w : net.wires) {
        adjacent[w.a].push_back(w.b);
        adjacent[w.b].push_back(w.a);
    }
    auto rank = [](const Label &l) { return std::make_pair(is_reserved_label(l), l); };

    Renaming renaming;
    std::vector<Wire> kept;
    std::set<Label> seen;
    for (const auto &[start, _] : adjacent) {
        if (seen.count(start))
            continue;
        std::vector<Label> component{start};
        seen.insert(start);
        for (std::size_t i = 0; i < component.size(); ++i)
            for (const auto &n : adjacent[component[i]])
                if (seen.insert(n).second)
                    component.push_back(n);
        std::vector<Label> ends;
        for (const auto &l : component)
            if (adjacent[l].size() == 1)
                ends.push_back(l);
        if (ends.size() != 2)
            continue; // a closed loop of wires
        const Label &x = ends[0], &y = ends[1];
        bool xa = on_agents.count(x) != 0, ya = on_agents.count(y) != 0;
        if (xa && ya) {
            const Label &keep = rank(x) <= rank(y) ? x : y;
            const Label &drop = &keep == &x ? y : x;
            renaming[drop] = keep;
        } else if (xa) {
            renaming[x] = y;
        } else if (ya) {
            renaming[y] = x;
        } else {
            kept.push_back({std::min(x, y), std::max(x, y)});
        }
    }
    Binet bare;
    bare.agents = net.agents;
    bare.signature = net.signature;
    Binet out = renaming.empty() ? std::move(bare) : rename_labels(bare, renaming);
    out.wires = std::move(kept);
    return out;
}

std::string to_string(Termination t) {
    return t == Termination::NormalForm ? "normal-form" : "step-limit";
}

ReductionTrace reduce(const Binet &net, const RuleSet &rules, const Strategy &strategy,
                      const ReduceOptions &options) {
    ReductionTrace trace;
    trace.snapshots.push_back(net);
    Binet current = tidy(net);
    for (const auto &[symbol, arity] : rules.signature)
        current.signature.emplace(symbol, arity);
    LabelAllocator fresh = LabelAllocator::after(current);
    Scheduler scheduler(strategy);
    while (true) {
        Candidates cands = collect(current, rules);
        if (cands.empty()) {
            trace.termination = Termination::NormalForm;
            trace.stuck = cands.stuck;
            break;
        }
        if (trace.passes.size() >= options.limits.max_passes ||
            trace.interactions >= options.limits.max_steps) {
            trace.termination = Termination::StepLimit;
            trace.stuck = cands.stuck;
            break;
        }
        SafeSet safe = scheduler.select(cands, current, rules);
        std::size_t budget = options.limits.max_steps - trace.interactions;
        if (safe.size() > budget) {
            safe.chosen.resize(budget);
            safe.regions.resize(budget);
        }
        current = tidy(rewrite_pass(current, safe, rules, fresh, options.threads));

        PassRecord rec;
        for (const auto &c : safe.chosen) {
            rec.fired.push_back({rules[c.rule].id, c.kind, c.location()});
            ++(c.kind == RuleKind::Active ? rec.active : rec.inactive);
        }
        trace.interactions += safe.size();
        rec.interactions = trace.interactions;
        trace.passes.push_back(std::move(rec));
        if (options.keep_snapshots)
            trace.snapshots.push_back(current);
    }
    if (!options.keep_snapshots && !trace.passes.empty())
        trace.snapshots.push_back(std::move(current));
    return trace;
}

void write_trace_log(std::ostream &out, const ReductionTrace &trace) {
    std::size_t so_far = 0;
    for (std::size_t i = 0; i < trace.passes.size(); ++i)
        for (const auto &f : trace.passes[i].fired)
            out << (i + 1) << '\t' << f.rule << '\t' << to_string(f.location) << '\t' << ++so_far
                << '\n';
}

} // namespace binet
