#include "binet/dot.hpp"

#include "binet/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace binet {

namespace {

struct End {
    std::string node;
    bool principal = false;
};

std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

class DotWriter {
  public:
    explicit DotWriter(const Binet &net) : net_(net) {}

    std::string run() {
        for (std::size_t i = 0; i < net_.wires.size(); ++i) {
            wires_of_[net_.wires[i].a].push_back(i);
            wires_of_[net_.wires[i].b].push_back(i);
        }
        for (const auto &[label, n] : occurrence_counts(net_))
            counts_[label] = n;
        std::ostringstream body;
        emit_level(body, sorted(net_.agents), 1);
        std::ostringstream os;
        os << "digraph binet {\n";
        if (!net_.empty())
            os << "  node [shape=circle];\n";
        os << body.str();
        emit_edges(os);
        os << "}\n";
        return os.str();
    }

  private:
    const Binet &net_;
    std::map<Label, std::vector<std::size_t>> wires_of_;
    std::map<Label, std::size_t> counts_;
    std::map<Label, std::vector<End>> agent_ends_;
    std::size_t next_node_ = 0;
    std::size_t next_cluster_ = 0;

    static std::vector<const Agent *> sorted(const std::vector<Agent> &agents) {
        std::vector<std::pair<std::string, const Agent *>> keyed;
        for (const auto &a : agents)
            keyed.emplace_back(print_agent(a), &a);
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto &x, const auto &y) { return x.first < y.first; });
        std::vector<const Agent *> out;
        for (const auto &[_, a] : keyed)
            out.push_back(a);
        return out;
    }

    void emit_level(std::ostringstream &os, const std::vector<const Agent *> &agents,
                    std::size_t depth) {
        std::string pad(depth * 2, ' ');
        for (const Agent *a : agents) {
            std::string id = "a" + std::to_string(next_node_++);
            agent_ends_[a->principal].push_back({id, true});
            for (const auto &l : a->external)
                agent_ends_[l].push_back({id, false});
            for (const auto &l : a->internal)
                agent_ends_[l].push_back({id, false});
            bool boxed = !a->internal.empty() || !a->children.empty();
            if (boxed) {
                os << pad << "subgraph cluster_" << next_cluster_++ << " {\n";
                os << pad << "  label=" << quote(a->symbol + "^" + a->principal) << ";\n";
            }
            os << pad << (boxed ? "  " : "") << id << " [label=" << quote(a->symbol) << "];\n";
            if (boxed) {
                emit_level(os, sorted(a->children), depth + 1);
                os << pad << "}\n";
            }
        }
    }

    // Follows the chain of wires leaving `label` and returns the label at the
    // far end (on an agent, or free), recording every label passed.
    Label walk(const Label &label, std::vector<Label> &seen) const {
        Label cur = label;
        std::size_t via = wires_of_.at(cur).front();
        std::vector<bool> used(net_.wires.size(), false);
        while (true) {
            used[via] = true;
            const Wire &w = net_.wires[via];
            cur = w.a == cur ? w.b : w.a;
            seen.push_back(cur);
            if (agent_ends_.count(cur))
                return cur;
            std::size_t next = via;
            for (std::size_t i : wires_of_.at(cur))
                if (!used[i])
                    next = i;
            if (next == via)
                return cur;
            via = next;
        }
    }

    void emit_edges(std::ostringstream &os) {
        std::vector<std::string> edges;
        std::map<Label, bool> done;
        auto edge = [&](const End &x, const End &y, const Label &label) {
            std::ostringstream e;
            e << "  " << x.node << " -> " << y.node << " [label=" << quote(label)
              << ", dir=both, arrowtail=" << (x.principal ? "normal" : "none")
              << ", arrowhead=" << (y.principal ? "normal" : "none") << "];\n";
            edges.push_back(e.str());
        };
        std::vector<std::string> points;
        auto free_end = [&](const Label &l) {
            std::string id = quote("free:" + l);
            points.push_back("  " + id + " [shape=point, xlabel=" + quote(l) + "];\n");
            return End{id, false};
        };
        for (const auto &[label, ends] : agent_ends_) {
            if (done[label])
                continue;
            done[label] = true;
            if (ends.size() == 2) {
                edge(ends[0], ends[1], label);
                continue;
            }
            // One agent end: the label is free, or a wire leads away from it.
            if (!wires_of_.count(label)) {
                edge(ends[0], free_end(label), label);
                continue;
            }
            std::vector<Label> seen{label};
            Label far = walk(label, seen);
            for (const auto &l : seen)
                done[l] = true;
            auto far_ends = agent_ends_.find(far);
            if (far_ends != agent_ends_.end() && far != label)
                edge(ends[0], far_ends->second.front(), label);
            else
                edge(ends[0], free_end(far), label);
        }
        // Wire chains with no agent at either end connect two free ports.
        for (const auto &[label, ws] : wires_of_) {
            if (done[label] || counts_[label] != 1)
                continue;
            std::vector<Label> seen{label};
            Label far = walk(label, seen);
            for (const auto &l : seen)
                done[l] = true;
            if (far != label)
                edge(free_end(label), free_end(far), label);
        }
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        std::sort(edges.begin(), edges.end());
        for (const auto &p : points)
            os << p;
        for (const auto &e : edges)
            os << e;
    }
};

} // namespace

std::string export_dot(const Binet &net) { return DotWriter(net).run(); }

} // namespace binet
