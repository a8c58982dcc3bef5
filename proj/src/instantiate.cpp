#include "binet/rules.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace binet {

LabelAllocator LabelAllocator::after(const Binet &net) {
    std::uint64_t next = 0;
    for (const auto &[label, _] : occurrence_counts(net)) {
        if (!is_reserved_label(label))
            continue;
        std::uint64_t n = 0;
        std::size_t i = 1;
        for (; i < label.size() && label[i] >= '0' && label[i] <= '9'; ++i)
            n = n * 10 + static_cast<std::uint64_t>(label[i] - '0');
        if (i > 1)
            next = std::max(next, n + 1);
    }
    return LabelAllocator(next);
}

Label LabelAllocator::next() {
    return prefix_ + std::to_string(next_.fetch_add(1, std::memory_order_relaxed));
}

LabelAllocator LabelAllocator::branch() { return LabelAllocator(0, next() + "."); }

std::vector<Label> subnet_interface(const std::vector<Agent> &agents) {
    std::vector<Label> order;
    std::map<Label, int> counts;
    auto note = [&](const Label &l) {
        if (counts[l]++ == 0)
            order.push_back(l);
    };
    std::vector<const Agent *> stack;
    for (auto it = agents.rbegin(); it != agents.rend(); ++it)
        stack.push_back(&*it);
    while (!stack.empty()) {
        const Agent *a = stack.back();
        stack.pop_back();
        note(a->principal);
        for (const auto &l : a->external)
            note(l);
        for (const auto &l : a->internal)
            note(l);
        for (auto it = a->children.rbegin(); it != a->children.rend(); ++it)
            stack.push_back(&*it);
    }
    std::vector<Label> out;
    for (const auto &l : order)
        if (counts[l] == 1)
            out.push_back(l);
    return out;
}

namespace {

void rename_in(std::vector<Agent> &agents, const Renaming &r) {
    auto sub = [&](Label &l) {
        if (auto it = r.find(l); it != r.end())
            l = it->second;
    };
    for (auto &a : agents) {
        sub(a.principal);
        for (auto &l : a.external)
            sub(l);
        for (auto &l : a.internal)
            sub(l);
        rename_in(a.children, r);
    }
}

class Instantiator {
  public:
    Instantiator(const Rule &rule, const Match &match, const Binet &net, LabelAllocator &fresh)
        : rule_(rule), match_(match), net_(net), fresh_(fresh) {}

    Delta run() {
        Delta delta;
        delta.removed = match_.roots();

        // Subnet content, with interface labels renamed to x' where an
        // interface generator asks for fresh copies.
        for (const auto &[name, path] : match_.subnets)
            subnets_[name] = agent_at(net_, path).children;
        std::vector<std::pair<std::map<std::string, Label>, const Generator *>> iterations;
        for (const auto &g : rule_.rhs.generators) {
            const auto &content = subnets_.at(g.subnet);
            bool wants_prime = uses_label(g, g.var + "'");
            for (const auto &x : subnet_interface(content)) {
                std::map<std::string, Label> env{{g.var, x}};
                if (wants_prime) {
                    Label fresh = fresh_.next();
                    env[g.var + "'"] = fresh;
                    renames_[g.subnet][x] = fresh;
                }
                iterations.emplace_back(std::move(env), &g);
            }
        }
        for (auto &[name, content] : subnets_)
            if (auto it = renames_.find(name); it != renames_.end())
                rename_in(content, it->second);

        for (const auto &t : rule_.rhs.agents)
            delta.added.emplace_back(match_.host, build(t, {}));
        for (const auto &x : rule_.rhs.subnets)
            for (const auto &a : subnets_.at(x))
                delta.added.emplace_back(match_.host, a);
        for (const auto &w : rule_.rhs.wires)
            push_wire(delta, w, {});
        for (const auto &[env, g] : iterations) {
            for (const auto &t : g->agents)
                delta.added.emplace_back(match_.host, build(t, env));
            for (const auto &w : g->wires)
                push_wire(delta, w, env);
        }
        return delta;
    }

  private:
    const Rule &rule_;
    const Match &match_;
    const Binet &net_;
    LabelAllocator &fresh_;
    std::map<std::string, std::vector<Agent>> subnets_;
    std::map<std::string, Renaming> renames_;
    std::map<std::string, Label> intermediaries_;

    static bool uses_label(const Generator &g, const std::string &name) {
        bool found = false;
        std::function<void(const std::vector<AgentPattern> &)> scan =
            [&](const std::vector<AgentPattern> &list) {
                for (const auto &a : list) {
                    found = found || a.principal == name;
                    for (const auto *slots : {&a.external, &a.internal})
                        for (const auto &s : *slots)
                            found = found || s.name == name;
                    if (a.children.kind == ChildrenPattern::Kind::Explicit)
                        scan(a.children.agents);
                }
            };
        scan(g.agents);
        for (const auto &w : g.wires)
            found = found || w.a == name || w.b == name;
        return found;
    }

    Label label(const std::string &var, const std::map<std::string, Label> &env) {
        if (auto it = env.find(var); it != env.end())
            return it->second;
        if (auto it = match_.labels.find(var); it != match_.labels.end())
            return it->second;
        auto [it, fresh] = intermediaries_.try_emplace(var);
        if (fresh)
            it->second = fresh_.next();
        return it->second;
    }

    std::string symbol(const SymbolPattern &s) const {
        switch (s.kind) {
        case SymbolPattern::Kind::Concrete:
            return s.name;
        case SymbolPattern::Kind::Variable:
            return match_.symbols.at(s.name);
        case SymbolPattern::Kind::Derived:
            return match_.symbols.at(s.name) + "_" + s.suffix;
        }
        return {};
    }

    void slots(const std::vector<Slot> &in, std::vector<Label> &out,
               const std::map<std::string, Label> &env) {
        for (const auto &s : in) {
            if (s.kind == Slot::Kind::Vector) {
                const auto &v = match_.vectors.at(s.name);
                out.insert(out.end(), v.begin(), v.end());
            } else {
                out.push_back(label(s.name, env));
            }
        }
    }

    Agent build(const AgentPattern &t, const std::map<std::string, Label> &env) {
        Agent a;
        a.symbol = symbol(t.symbol);
        a.principal = label(t.principal, env);
        slots(t.external, a.external, env);
        slots(t.internal, a.internal, env);
        switch (t.children.kind) {
        case ChildrenPattern::Kind::Empty:
            break;
        case ChildrenPattern::Kind::Subnet:
            a.children = subnets_.at(t.children.subnet);
            break;
        case ChildrenPattern::Kind::Explicit:
            for (const auto &c : t.children.agents)
                a.children.push_back(build(c, env));
            break;
        }
        return a;
    }

    void push_wire(Delta &delta, const WireTemplate &w, const std::map<std::string, Label> &env) {
        Label a = label(w.a, env);
        Label b = label(w.b, env);
        // A wire joining a label to itself is a closed loop: nothing remains.
        if (a != b)
            delta.wires.push_back({std::move(a), std::move(b)});
    }
};

bool is_prefix(const Path &prefix, const Path &path) {
    return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

void declare(Signature &sig, const Agent &a) {
    sig.emplace(a.symbol, a.arity());
    for (const auto &c : a.children)
        declare(sig, c);
}

struct Rebuild {
    const std::vector<Path> &removed;
    const std::map<Path, std::vector<const Agent *>> &additions;

    std::vector<Agent> level(const std::vector<Agent> &agents, Path &path) const {
        std::vector<Agent> out;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            path.push_back(i);
            if (std::find(removed.begin(), removed.end(), path) == removed.end()) {
                Agent copy;
                copy.symbol = agents[i].symbol;
                copy.principal = agents[i].principal;
                copy.external = agents[i].external;
                copy.internal = agents[i].internal;
                copy.children = level(agents[i].children, path);
                out.push_back(std::move(copy));
            }
            path.pop_back();
        }
        if (auto it = additions.find(path); it != additions.end())
            for (const Agent *a : it->second)
                out.push_back(*a);
        return out;
    }
};

} // namespace

Delta instantiate(const Rule &rule, const Match &match, const Binet &net, LabelAllocator &fresh) {
    return Instantiator(rule, match, net, fresh).run();
}

Binet apply_deltas(const Binet &net, std::span<const Delta> deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            if (i == j)
                continue;
            for (const auto &p : deltas[i].removed) {
                for (const auto &q : deltas[j].removed)
                    if (i < j && (is_prefix(p, q) || is_prefix(q, p)))
                        throw ConflictDetected("rewrites overlap at agent " + to_string(p));
                for (const auto &[host, _] : deltas[j].added)
                    if (is_prefix(p, host))
                        throw ConflictDetected("rewrite places agents inside removed agent " +
                                               to_string(p));
            }
        }
    }
    std::vector<Path> removed;
    std::map<Path, std::vector<const Agent *>> additions;
    for (const auto &d : deltas) {
        removed.insert(removed.end(), d.removed.begin(), d.removed.end());
        for (const auto &[host, agent] : d.added)
            additions[host].push_back(&agent);
    }
    Binet out;
    Path path;
    out.agents = Rebuild{removed, additions}.level(net.agents, path);
    out.wires = net.wires;
    out.signature = net.signature;
    for (const auto &d : deltas) {
        out.wires.insert(out.wires.end(), d.wires.begin(), d.wires.end());
        for (const auto &[_, agent] : d.added)
            declare(out.signature, agent);
    }
    return out;
}

} // namespace binet
