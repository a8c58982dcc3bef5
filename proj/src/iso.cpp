#include "binet/core.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace binet {

namespace {

struct Flat {
    std::vector<const Agent *> nodes;
    std::vector<int> parent;
    std::vector<std::vector<int>> children;
    std::vector<std::size_t> depth;
    std::vector<std::size_t> shape; // label-blind structural hash
    std::unordered_map<Label, std::vector<int>> carriers;

    explicit Flat(const Binet &net) {
        for (const auto &a : net.agents)
            add(a, -1, 0);
        shape.assign(nodes.size(), 0);
        for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i)
            shape[i] = hash_of(i);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Agent &a = *nodes[i];
            auto note = [&](const Label &l) {
                auto &c = carriers[l];
                if (c.empty() || c.back() != static_cast<int>(i))
                    c.push_back(static_cast<int>(i));
            };
            note(a.principal);
            for (const auto &l : a.external)
                note(l);
            for (const auto &l : a.internal)
                note(l);
        }
    }

  private:
    int add(const Agent &a, int up, std::size_t d) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back(&a);
        parent.push_back(up);
        children.emplace_back();
        depth.push_back(d);
        for (const auto &c : a.children) {
            int cid = add(c, id, d + 1);
            children[id].push_back(cid);
        }
        return id;
    }

    // Children always have larger ids than their parent, so computing in
    // reverse order sees every child hash first.
    std::size_t hash_of(int i) const {
        const Agent &a = *nodes[i];
        std::size_t h = std::hash<std::string>{}(a.symbol);
        auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(a.external.size());
        mix(a.internal.size() * 31);
        std::vector<std::size_t> cs;
        for (int c : children[i])
            cs.push_back(shape[c]);
        std::sort(cs.begin(), cs.end());
        for (auto c : cs)
            mix(c);
        return h;
    }
};

class IsoSearch {
  public:
    IsoSearch(const Binet &l, const Binet &r) : left_(l), right_(r), L_(l), R_(r) {}

    std::optional<Renaming> run() {
        if (L_.nodes.size() != R_.nodes.size() || left_.wires.size() != right_.wires.size())
            return std::nullopt;
        {
            auto a = L_.shape, b = R_.shape;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b)
                return std::nullopt;
        }
        plan_order();
        node_map_.assign(L_.nodes.size(), -1);
        used_.assign(R_.nodes.size(), false);
        wire_used_.assign(right_.wires.size(), false);
        if (!match_node(0))
            return std::nullopt;
        return fwd_;
    }

  private:
    const Binet &left_, &right_;
    Flat L_, R_;
    std::vector<int> order_;
    std::vector<int> node_map_;
    std::vector<bool> used_;
    std::vector<bool> wire_used_;
    Renaming fwd_;
    std::map<Label, Label> bwd_;
    std::vector<Label> trail_;

    // Visit connected nodes consecutively so most candidates are forced by an
    // already mapped label.
    void plan_order() {
        std::vector<bool> seen(L_.nodes.size(), false);
        for (std::size_t start = 0; start < L_.nodes.size(); ++start) {
            if (seen[start])
                continue;
            std::vector<int> queue{static_cast<int>(start)};
            seen[start] = true;
            for (std::size_t q = 0; q < queue.size(); ++q) {
                int n = queue[q];
                order_.push_back(n);
                auto visit = [&](int m) {
                    if (m >= 0 && !seen[m]) {
                        seen[m] = true;
                        queue.push_back(m);
                    }
                };
                const Agent &a = *L_.nodes[n];
                auto by_label = [&](const Label &l) {
                    for (int m : L_.carriers.at(l))
                        visit(m);
                };
                by_label(a.principal);
                for (const auto &l : a.external)
                    by_label(l);
                for (const auto &l : a.internal)
                    by_label(l);
                visit(L_.parent[n]);
                for (int c : L_.children[n])
                    visit(c);
            }
        }
    }

    bool bind(const Label &l, const Label &r) {
        auto f = fwd_.find(l);
        if (f != fwd_.end())
            return f->second == r;
        if (bwd_.count(r))
            return false;
        fwd_.emplace(l, r);
        bwd_.emplace(r, l);
        trail_.push_back(l);
        return true;
    }

    void unwind(std::size_t mark) {
        while (trail_.size() > mark) {
            auto it = fwd_.find(trail_.back());
            bwd_.erase(it->second);
            fwd_.erase(it);
            trail_.pop_back();
        }
    }

    bool bind_agent(const Agent &a, const Agent &b) {
        if (!bind(a.principal, b.principal))
            return false;
        for (std::size_t i = 0; i < a.external.size(); ++i)
            if (!bind(a.external[i], b.external[i]))
                return false;
        for (std::size_t i = 0; i < a.internal.size(); ++i)
            if (!bind(a.internal[i], b.internal[i]))
                return false;
        return true;
    }

    std::vector<int> candidates(int n) const {
        const Agent &a = *L_.nodes[n];
        auto mapped_label = [&](const Label &l) -> const Label * {
            auto it = fwd_.find(l);
            return it == fwd_.end() ? nullptr : &it->second;
        };
        const Label *anchor = mapped_label(a.principal);
        for (std::size_t i = 0; !anchor && i < a.external.size(); ++i)
            anchor = mapped_label(a.external[i]);
        for (std::size_t i = 0; !anchor && i < a.internal.size(); ++i)
            anchor = mapped_label(a.internal[i]);
        if (anchor) {
            auto it = R_.carriers.find(*anchor);
            return it == R_.carriers.end() ? std::vector<int>{} : it->second;
        }
        int p = L_.parent[n];
        if (p >= 0 && node_map_[p] >= 0)
            return R_.children[node_map_[p]];
        std::vector<int> all(R_.nodes.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<int>(i);
        return all;
    }

    bool compatible(int n, int m) const {
        if (used_[m] || L_.shape[n] != R_.shape[m] || L_.depth[n] != R_.depth[m])
            return false;
        const Agent &a = *L_.nodes[n];
        const Agent &b = *R_.nodes[m];
        if (a.symbol != b.symbol || a.external.size() != b.external.size() ||
            a.internal.size() != b.internal.size() || a.children.size() != b.children.size())
            return false;
        int p = L_.parent[n];
        if (p < 0) {
            if (R_.parent[m] >= 0)
                return false;
        } else if (node_map_[p] >= 0 && node_map_[p] != R_.parent[m]) {
            return false;
        }
        for (int c : L_.children[n])
            if (node_map_[c] >= 0 && R_.parent[node_map_[c]] != m)
                return false;
        return true;
    }

    bool match_node(std::size_t k) {
        if (k == order_.size())
            return match_wire(0);
        int n = order_[k];
        for (int m : candidates(n)) {
            if (!compatible(n, m))
                continue;
            auto mark = trail_.size();
            if (bind_agent(*L_.nodes[n], *R_.nodes[m])) {
                node_map_[n] = m;
                used_[m] = true;
                if (match_node(k + 1))
                    return true;
                used_[m] = false;
                node_map_[n] = -1;
            }
            unwind(mark);
        }
        return false;
    }

    bool match_wire(std::size_t k) {
        if (k == left_.wires.size())
            return true;
        const Wire &w = left_.wires[k];
        for (std::size_t j = 0; j < right_.wires.size(); ++j) {
            if (wire_used_[j])
                continue;
            const Wire &v = right_.wires[j];
            for (int flip = 0; flip < 2; ++flip) {
                auto mark = trail_.size();
                const Label &x = flip ? v.b : v.a;
                const Label &y = flip ? v.a : v.b;
                if (bind(w.a, x) && bind(w.b, y)) {
                    wire_used_[j] = true;
                    if (match_wire(k + 1))
                        return true;
                    wire_used_[j] = false;
                }
                unwind(mark);
            }
        }
        return false;
    }
};

} // namespace

std::optional<Renaming> find_isomorphism(const Binet &left, const Binet &right) {
    return IsoSearch(left, right).run();
}

} // namespace binet
