#include "binet/rules.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace binet {

std::vector<Path> Match::roots() const {
    std::vector<Path> out;
    for (const auto &p : agents) {
        bool covered = false;
        for (const auto &q : agents)
            if (q.size() < p.size() && std::equal(q.begin(), q.end(), p.begin()))
                covered = true;
        if (!covered && std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    }
    return out;
}

namespace {

struct BinetIndex {
    struct Node {
        const Agent *agent;
        Path path;
        int parent;
    };
    std::vector<Node> nodes;
    std::unordered_map<Label, std::vector<int>> carriers;
    std::unordered_map<Label, std::vector<int>> principals;

    explicit BinetIndex(const Binet &net) {
        Path path;
        for (std::size_t i = 0; i < net.agents.size(); ++i) {
            path.push_back(i);
            add(net.agents[i], path, -1);
            path.pop_back();
        }
    }

    bool is_descendant(int u, int ancestor) const {
        for (int p = nodes[u].parent; p >= 0; p = nodes[p].parent)
            if (p == ancestor)
                return true;
        return false;
    }

  private:
    void add(const Agent &a, Path &path, int parent) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back({&a, path, parent});
        principals[a.principal].push_back(id);
        auto note = [&](const Label &l) {
            auto &c = carriers[l];
            if (c.empty() || c.back() != id)
                c.push_back(id);
        };
        note(a.principal);
        for (const auto &l : a.external)
            note(l);
        for (const auto &l : a.internal)
            note(l);
        for (std::size_t i = 0; i < a.children.size(); ++i) {
            path.push_back(i);
            add(a.children[i], path, id);
            path.pop_back();
        }
    }
};

struct PatternIndex {
    struct Node {
        const AgentPattern *pattern;
        int parent;
        std::vector<int> children;
    };
    std::vector<Node> nodes;

    explicit PatternIndex(const std::vector<AgentPattern> &lhs) { add_all(lhs, -1); }

    bool is_pattern_descendant(int q, int p) const {
        for (int a = nodes[q].parent; a >= 0; a = nodes[a].parent)
            if (a == p)
                return true;
        return false;
    }

  private:
    void add_all(const std::vector<AgentPattern> &list, int parent) {
        for (const auto &a : list) {
            int id = static_cast<int>(nodes.size());
            nodes.push_back({&a, parent, {}});
            if (parent >= 0)
                nodes[parent].children.push_back(id);
            if (a.children.kind == ChildrenPattern::Kind::Explicit)
                add_all(a.children.agents, id);
        }
    }
};

struct State {
    std::vector<int> assign;
    std::vector<bool> used;
    std::map<std::string, Label> labels;
    std::map<std::string, std::vector<Label>> vectors;
    std::map<std::string, std::string> symbols;
};

class Matcher {
  public:
    Matcher(const Rule &rule, const Binet &net) : rule_(rule), B_(net), P_(rule.lhs) {}

    std::vector<Match> run() {
        State s;
        s.assign.assign(P_.nodes.size(), -1);
        s.used.assign(B_.nodes.size(), false);
        if (rule_.kind == RuleKind::Active) {
            std::vector<int> anchors;
            for (std::size_t i = 0; i < P_.nodes.size(); ++i)
                if (P_.nodes[i].pattern->principal == rule_.anchor)
                    anchors.push_back(static_cast<int>(i));
            if (anchors.size() != 2)
                return {};
            // Deterministic label order: by first carrier in pre-order.
            std::vector<std::pair<int, Label>> pairs;
            for (const auto &[label, ps] : B_.principals)
                if (ps.size() == 2)
                    pairs.emplace_back(ps.front(), label);
            std::sort(pairs.begin(), pairs.end());
            for (const auto &[_, label] : pairs) {
                const auto &ps = B_.principals.at(label);
                for (int flip = 0; flip < 2; ++flip) {
                    State t = s;
                    if (try_assign(anchors[0], ps[flip], t) && try_assign(anchors[1], ps[1 - flip], t))
                        extend(t);
                }
            }
        } else {
            for (std::size_t u = 0; u < B_.nodes.size(); ++u) {
                State t = s;
                if (try_assign(0, static_cast<int>(u), t))
                    extend(t);
            }
        }
        return std::move(out_);
    }

  private:
    const Rule &rule_;
    BinetIndex B_;
    PatternIndex P_;
    std::vector<Match> out_;
    std::set<std::vector<int>> seen_;

    bool bind_label(const std::string &var, const Label &l, State &s) const {
        auto [it, fresh] = s.labels.emplace(var, l);
        return fresh || it->second == l;
    }

    bool match_slots(const std::vector<Slot> &slots, const std::vector<Label> &labels,
                     State &s) const {
        std::size_t vec = slots.size();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].kind == Slot::Kind::Vector) {
                if (vec != slots.size())
                    return false; // at most one vector per list
                vec = i;
            }
        }
        if (vec == slots.size()) {
            if (slots.size() != labels.size())
                return false;
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (!bind_label(slots[i].name, labels[i], s))
                    return false;
            return true;
        }
        std::size_t fixed = slots.size() - 1;
        if (labels.size() < fixed)
            return false;
        std::size_t tail = slots.size() - vec - 1;
        for (std::size_t i = 0; i < vec; ++i)
            if (!bind_label(slots[i].name, labels[i], s))
                return false;
        for (std::size_t i = 0; i < tail; ++i)
            if (!bind_label(slots[vec + 1 + i].name, labels[labels.size() - tail + i], s))
                return false;
        std::vector<Label> middle(labels.begin() + static_cast<std::ptrdiff_t>(vec),
                                  labels.end() - static_cast<std::ptrdiff_t>(tail));
        auto [it, fresh] = s.vectors.emplace(slots[vec].name, middle);
        return fresh || it->second == middle;
    }

    bool match_symbol(const SymbolPattern &sp, const std::string &symbol, State &s) const {
        switch (sp.kind) {
        case SymbolPattern::Kind::Concrete:
            return sp.name == symbol;
        case SymbolPattern::Kind::Variable: {
            auto [it, fresh] = s.symbols.emplace(sp.name, symbol);
            return fresh || it->second == symbol;
        }
        case SymbolPattern::Kind::Derived: {
            std::string tail = "_" + sp.suffix;
            if (symbol.size() <= tail.size() ||
                symbol.compare(symbol.size() - tail.size(), tail.size(), tail) != 0)
                return false;
            std::string base = symbol.substr(0, symbol.size() - tail.size());
            auto [it, fresh] = s.symbols.emplace(sp.name, base);
            return fresh || it->second == base;
        }
        }
        return false;
    }

    bool try_assign(int p, int u, State &s) const {
        if (s.used[u])
            return false;
        const auto &pn = P_.nodes[p];
        const AgentPattern &pat = *pn.pattern;
        const auto &bn = B_.nodes[u];
        const Agent &a = *bn.agent;
        switch (pat.children.kind) {
        case ChildrenPattern::Kind::Empty:
            if (!a.children.empty())
                return false;
            break;
        case ChildrenPattern::Kind::Explicit:
            if (a.children.size() != pat.children.agents.size())
                return false;
            break;
        case ChildrenPattern::Kind::Subnet:
            break;
        }
        if (pn.parent >= 0 && s.assign[pn.parent] >= 0 && bn.parent != s.assign[pn.parent])
            return false;
        for (int c : pn.children)
            if (s.assign[c] >= 0 && B_.nodes[s.assign[c]].parent != u)
                return false;
        if (!match_symbol(pat.symbol, a.symbol, s))
            return false;
        if (!bind_label(pat.principal, a.principal, s))
            return false;
        if (!match_slots(pat.external, a.external, s) || !match_slots(pat.internal, a.internal, s))
            return false;
        s.assign[p] = u;
        s.used[u] = true;
        return true;
    }

    std::vector<int> candidates(int p, const State &s) const {
        const auto &pn = P_.nodes[p];
        if (pn.parent >= 0 && s.assign[pn.parent] >= 0) {
            std::vector<int> out;
            int host = s.assign[pn.parent];
            for (std::size_t u = 0; u < B_.nodes.size(); ++u)
                if (B_.nodes[u].parent == host)
                    out.push_back(static_cast<int>(u));
            return out;
        }
        for (int c : pn.children)
            if (s.assign[c] >= 0) {
                int up = B_.nodes[s.assign[c]].parent;
                return up >= 0 ? std::vector<int>{up} : std::vector<int>{};
            }
        const AgentPattern &pat = *pn.pattern;
        auto via = [&](const std::string &var) -> const std::vector<int> * {
            auto it = s.labels.find(var);
            if (it == s.labels.end())
                return nullptr;
            auto c = B_.carriers.find(it->second);
            static const std::vector<int> none;
            return c == B_.carriers.end() ? &none : &c->second;
        };
        if (auto *c = via(pat.principal))
            return *c;
        for (const auto *slots : {&pat.external, &pat.internal})
            for (const auto &slot : *slots)
                if (slot.kind == Slot::Kind::Label)
                    if (auto *c = via(slot.name))
                        return *c;
        std::vector<int> all(B_.nodes.size());
        for (std::size_t u = 0; u < all.size(); ++u)
            all[u] = static_cast<int>(u);
        return all;
    }

    int next_pattern_node(const State &s) const {
        int fallback = -1;
        for (std::size_t p = 0; p < P_.nodes.size(); ++p) {
            if (s.assign[p] >= 0)
                continue;
            const auto &pn = P_.nodes[p];
            if (pn.parent >= 0 && s.assign[pn.parent] >= 0)
                return static_cast<int>(p);
            for (int c : pn.children)
                if (s.assign[c] >= 0)
                    return static_cast<int>(p);
            if (s.labels.count(pn.pattern->principal))
                return static_cast<int>(p);
            if (fallback < 0)
                fallback = static_cast<int>(p);
        }
        return fallback;
    }

    void extend(State &s) {
        int p = next_pattern_node(s);
        if (p < 0) {
            finish(s);
            return;
        }
        for (int u : candidates(p, s)) {
            State t = s;
            if (try_assign(p, u, t))
                extend(t);
        }
    }

    void finish(const State &s) {
        // A matched agent may only sit inside another matched agent when the
        // pattern nests it there explicitly.
        for (std::size_t p = 0; p < P_.nodes.size(); ++p)
            for (std::size_t q = 0; q < P_.nodes.size(); ++q)
                if (p != q && !P_.is_pattern_descendant(static_cast<int>(q), static_cast<int>(p)) &&
                    B_.is_descendant(s.assign[q], s.assign[p]))
                    return;
        std::vector<int> key = s.assign;
        std::sort(key.begin(), key.end());
        if (!seen_.insert(key).second)
            return;
        Match m;
        for (int u : s.assign)
            m.agents.push_back(B_.nodes[u].path);
        m.labels = s.labels;
        m.vectors = s.vectors;
        m.symbols = s.symbols;
        for (std::size_t p = 0; p < P_.nodes.size(); ++p) {
            const auto &pat = *P_.nodes[p].pattern;
            if (pat.children.kind == ChildrenPattern::Kind::Subnet)
                m.subnets[pat.children.subnet] = B_.nodes[s.assign[p]].path;
        }
        m.host = m.agents.front();
        m.host.pop_back();
        m.anchor = s.labels.at(rule_.anchor);
        out_.push_back(std::move(m));
    }
};

} // namespace

std::vector<Match> match_pattern(const Rule &rule, const Binet &net) {
    if (rule.lhs.empty())
        return {};
    return Matcher(rule, net).run();
}

} // namespace binet
