#include "binet/rules.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace binet {

bool ChildrenPattern::operator==(const ChildrenPattern &) const = default;

namespace {

void walk(const std::vector<AgentPattern> &agents,
          const std::function<void(const AgentPattern &, const AgentPattern *)> &fn,
          const AgentPattern *parent = nullptr) {
    for (const auto &a : agents) {
        fn(a, parent);
        if (a.children.kind == ChildrenPattern::Kind::Explicit)
            walk(a.children.agents, fn, &a);
    }
}

struct Usage {
    std::map<std::string, int> labels;
    std::map<std::string, int> vectors;
    std::map<std::string, int> subnets;
    std::map<std::string, int> symbols;

    void agent(const AgentPattern &a) {
        if (a.symbol.kind != SymbolPattern::Kind::Concrete)
            ++symbols[a.symbol.name];
        ++labels[a.principal];
        for (const auto *slots : {&a.external, &a.internal})
            for (const auto &s : *slots)
                ++(s.kind == Slot::Kind::Label ? labels : vectors)[s.name];
        if (a.children.kind == ChildrenPattern::Kind::Subnet)
            ++subnets[a.children.subnet];
    }

    void agents(const std::vector<AgentPattern> &list) {
        walk(list, [&](const AgentPattern &a, const AgentPattern *) { agent(a); });
    }

    void wires(const std::vector<WireTemplate> &list) {
        for (const auto &w : list) {
            ++labels[w.a];
            ++labels[w.b];
        }
    }
};

std::string symbol_key(const SymbolPattern &s, std::map<std::string, int> &vars) {
    if (s.kind == SymbolPattern::Kind::Concrete)
        return s.name;
    auto [it, _] = vars.emplace(s.name, static_cast<int>(vars.size()) + 1);
    std::string key = "?" + std::to_string(it->second);
    if (s.kind == SymbolPattern::Kind::Derived)
        key += "_" + s.suffix;
    return key;
}

} // namespace

void finalize_rule(Rule &rule) {
    if (rule.lhs.empty())
        throw std::invalid_argument("rule " + rule.id + ": empty left-hand side");
    rule.moves_subnet = false;
    walk(rule.lhs, [&](const AgentPattern &a, const AgentPattern *) {
        if (a.children.kind == ChildrenPattern::Kind::Subnet)
            rule.moves_subnet = true;
    });
    if (rule.kind == RuleKind::Inactive) {
        rule.anchor = rule.lhs.front().principal;
        return;
    }
    std::map<std::string, int> principal_uses;
    walk(rule.lhs,
         [&](const AgentPattern &a, const AgentPattern *) { ++principal_uses[a.principal]; });
    std::vector<std::string> shared;
    for (const auto &[name, n] : principal_uses)
        if (n == 2)
            shared.push_back(name);
    if (shared.size() != 1)
        throw std::invalid_argument("rule " + rule.id +
                                    ": an active rule needs exactly one label shared by two "
                                    "principal ports");
    rule.anchor = shared.front();
}

int specificity(const Rule &rule) {
    int score = 0;
    std::map<std::string, int> symbol_uses;
    walk(rule.lhs, [&](const AgentPattern &a, const AgentPattern *) {
        score += 1;
        switch (a.symbol.kind) {
        case SymbolPattern::Kind::Concrete:
            score += 2;
            break;
        case SymbolPattern::Kind::Derived:
            score += 1;
            ++symbol_uses[a.symbol.name];
            break;
        case SymbolPattern::Kind::Variable:
            ++symbol_uses[a.symbol.name];
            break;
        }
    });
    for (const auto &[_, n] : symbol_uses)
        score += n - 1; // equality constraints
    return score;
}

std::string pair_key(const Rule &rule) {
    // Locate the two anchor agents and their pattern ancestry.
    std::vector<std::vector<const AgentPattern *>> chains;
    std::vector<const AgentPattern *> stack;
    std::function<void(const std::vector<AgentPattern> &)> rec =
        [&](const std::vector<AgentPattern> &list) {
            for (const auto &a : list) {
                stack.push_back(&a);
                if (a.principal == rule.anchor)
                    chains.push_back(stack);
                if (a.children.kind == ChildrenPattern::Kind::Explicit)
                    rec(a.children.agents);
                stack.pop_back();
            }
        };
    rec(rule.lhs);
    if (chains.size() != 2)
        return {};
    auto render = [&](int first) {
        std::map<std::string, int> vars;
        std::string out;
        for (int k = 0; k < 2; ++k) {
            const auto &chain = chains[(first + k) % 2];
            if (k)
                out += " >< ";
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (i)
                    out += "/";
                out += symbol_key(chain[i]->symbol, vars);
            }
        }
        return out;
    };
    return std::min(render(0), render(1));
}

void RuleSet::add(Rule rule) {
    rules_.push_back(std::move(rule));
    reindex();
}

void RuleSet::replace(const std::string &id, Rule rule) {
    for (auto &r : rules_) {
        if (r.id == id) {
            r = std::move(rule);
            reindex();
            return;
        }
    }
    throw std::out_of_range("no rule with id " + id);
}

const Rule *RuleSet::find(const std::string &id) const {
    for (const auto &r : rules_)
        if (r.id == id)
            return &r;
    return nullptr;
}

void RuleSet::reindex() {
    active_.clear();
    inactive_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i)
        (rules_[i].kind == RuleKind::Active ? active_ : inactive_).push_back(i);
}

std::string to_string(RuleViolationKind kind) {
    switch (kind) {
    case RuleViolationKind::InterfaceViolation:
        return "InterfaceViolation";
    case RuleViolationKind::UnboundMetavariable:
        return "UnboundMetavariable";
    case RuleViolationKind::MetavariableConflict:
        return "MetavariableConflict";
    case RuleViolationKind::DuplicatePairRule:
        return "DuplicatePairRule";
    case RuleViolationKind::MalformedRule:
        return "MalformedRule";
    }
    return "?";
}

RuleReport check_rule(const Rule &rule) {
    RuleReport report;
    auto flag = [&](RuleViolationKind kind, std::string msg) {
        report.push_back({kind, rule.id, std::move(msg)});
    };

    if (rule.lhs.empty()) {
        flag(RuleViolationKind::MalformedRule, "empty left-hand side");
        return report;
    }

    Usage lhs;
    lhs.agents(rule.lhs);

    // Kinds must not overlap and only symbol metavariables may repeat.
    std::map<std::string, std::string> kind_of;
    auto claim = [&](const std::map<std::string, int> &uses, const char *kind) {
        for (const auto &[name, _] : uses) {
            auto [it, fresh] = kind_of.emplace(name, kind);
            if (!fresh && it->second != kind)
                flag(RuleViolationKind::MetavariableConflict,
                     "'" + name + "' used both as " + it->second + " and " + kind);
        }
    };
    claim(lhs.labels, "label");
    claim(lhs.vectors, "vector");
    claim(lhs.subnets, "subnet");
    for (const auto &[name, n] : lhs.labels)
        if (n > 2)
            flag(RuleViolationKind::MetavariableConflict,
                 "label '" + name + "' occurs " + std::to_string(n) + " times on the left");
    for (const auto *uses : {&lhs.vectors, &lhs.subnets})
        for (const auto &[name, n] : *uses)
            if (n > 1)
                flag(RuleViolationKind::MetavariableConflict,
                     "'" + name + "' binds more than once on the left");

    if (rule.kind == RuleKind::Active) {
        std::map<std::string, int> principal_uses;
        walk(rule.lhs,
             [&](const AgentPattern &a, const AgentPattern *) { ++principal_uses[a.principal]; });
        int shared = 0;
        for (const auto &[_, n] : principal_uses)
            shared += n == 2;
        if (shared != 1)
            flag(RuleViolationKind::MalformedRule,
                 "active rule needs exactly one label shared by two principal ports");
    }

    // Right-hand side outside generators.
    Usage rhs;
    rhs.agents(rule.rhs.agents);
    rhs.wires(rule.rhs.wires);
    for (const auto &x : rule.rhs.subnets)
        ++rhs.subnets[x];

    for (const auto &[name, _] : rhs.symbols)
        if (!lhs.symbols.count(name))
            flag(RuleViolationKind::UnboundMetavariable,
                 "symbol metavariable ?" + name + " is not bound on the left");
    for (const auto &[name, _] : rhs.vectors)
        if (!lhs.vectors.count(name))
            flag(RuleViolationKind::UnboundMetavariable, "vector " + name + " is not bound on the left");
    for (const auto &[name, _] : rhs.subnets)
        if (!lhs.subnets.count(name))
            flag(RuleViolationKind::UnboundMetavariable, "subnet " + name + " is not bound on the left");

    // Generators.
    std::map<std::string, int> placed = rhs.subnets;
    std::map<std::string, int> orig_uses;   // per subnet: generator uses of x
    std::map<std::string, int> primed_uses; // per subnet: generator uses of x'
    for (const auto &g : rule.rhs.generators) {
        if (!lhs.subnets.count(g.subnet)) {
            flag(RuleViolationKind::UnboundMetavariable,
                 "generator ranges over unbound subnet " + g.subnet);
            continue;
        }
        Usage body;
        body.agents(g.agents);
        body.wires(g.wires);
        for (const auto &[name, _] : body.symbols)
            if (!lhs.symbols.count(name))
                flag(RuleViolationKind::UnboundMetavariable,
                     "symbol metavariable ?" + name + " is not bound on the left");
        if (!body.vectors.empty() || !body.subnets.empty())
            flag(RuleViolationKind::MalformedRule, "generator bodies may only use labels");
        std::string primed = g.var + "'";
        for (const auto &[name, n] : body.labels) {
            if (name == g.var) {
                orig_uses[g.subnet] += n;
            } else if (name == primed) {
                if (g.kind != Generator::Kind::Interface)
                    flag(RuleViolationKind::MalformedRule,
                         "fresh " + primed + " is only available in 'foreach ... in I(X)'");
                primed_uses[g.subnet] += n;
            } else {
                flag(RuleViolationKind::InterfaceViolation,
                     "label '" + name + "' inside a generator body would repeat per iteration");
            }
        }
    }

    // Free label variables must survive exactly once; internal ones vanish or
    // stay internal; right-only labels are fresh intermediaries used twice.
    for (const auto &[name, n] : lhs.labels) {
        int m = rhs.labels.count(name) ? rhs.labels.at(name) : 0;
        if (n == 1 && m != 1)
            flag(RuleViolationKind::InterfaceViolation,
                 "free port '" + name + "' occurs " + std::to_string(m) +
                     " times on the right (expected 1)");
        if (n == 2 && m != 0 && m != 2)
            flag(RuleViolationKind::InterfaceViolation,
                 "internal label '" + name + "' occurs " + std::to_string(m) + " times on the right");
    }
    for (const auto &[name, m] : rhs.labels) {
        if (lhs.labels.count(name))
            continue;
        if (kind_of.count(name) && kind_of[name] != "label")
            flag(RuleViolationKind::MetavariableConflict, "'" + name + "' used as a label on the right");
        else if (m != 2)
            flag(RuleViolationKind::InterfaceViolation,
                 "fresh label '" + name + "' occurs " + std::to_string(m) +
                     " times on the right (expected 2)");
    }
    for (const auto &[name, _] : lhs.vectors) {
        int m = rhs.vectors.count(name) ? rhs.vectors.at(name) : 0;
        if (m != 1)
            flag(RuleViolationKind::InterfaceViolation,
                 "vector " + name + " occurs " + std::to_string(m) + " times on the right (expected 1)");
    }
    for (const auto &[name, _] : lhs.subnets) {
        int p = placed.count(name) ? placed.at(name) : 0;
        int orig = orig_uses.count(name) ? orig_uses.at(name) : 0;
        int primed = primed_uses.count(name) ? primed_uses.at(name) : 0;
        if (p > 1) {
            flag(RuleViolationKind::InterfaceViolation, "subnet " + name + " is duplicated");
            continue;
        }
        bool renamed = p == 1 && primed > 0;
        int interface_uses = (p == 1 && !renamed ? 1 : 0) + orig;
        if (interface_uses != 1)
            flag(RuleViolationKind::InterfaceViolation,
                 "interface of subnet " + name + " is covered " + std::to_string(interface_uses) +
                     " times (expected 1)");
        int fresh_uses = (renamed ? 1 : 0) + primed;
        if (fresh_uses != 0 && fresh_uses != 2)
            flag(RuleViolationKind::InterfaceViolation,
                 "fresh labels of subnet " + name + " occur " + std::to_string(fresh_uses) +
                     " times (expected 2)");
    }
    return report;
}

RuleReport check_ruleset(const RuleSet &rules) {
    RuleReport report;
    std::map<std::string, std::string> seen_ids;
    std::map<std::string, std::string> seen_keys;
    for (const auto &rule : rules.rules()) {
        auto r = check_rule(rule);
        report.insert(report.end(), r.begin(), r.end());
        if (!seen_ids.emplace(rule.id, rule.id).second)
            report.push_back({RuleViolationKind::MalformedRule, rule.id, "duplicate rule id"});
        if (rule.kind != RuleKind::Active)
            continue;
        auto key = pair_key(rule);
        if (key.empty())
            continue;
        auto [it, fresh] = seen_keys.emplace(key, rule.id);
        if (!fresh)
            report.push_back({RuleViolationKind::DuplicatePairRule, rule.id,
                              "pair " + key + " already handled by rule " + it->second});
    }
    return report;
}

} // namespace binet
