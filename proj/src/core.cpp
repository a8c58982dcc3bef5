#include "binet/core.hpp"

#include <sstream>

namespace binet {

std::string to_string(const Path &path) {
    if (path.empty())
        return "/";
    std::string out;
    for (auto i : path) {
        out += '/';
        out += std::to_string(i);
    }
    return out;
}

const Agent &agent_at(const Binet &net, const Path &path) {
    if (path.empty())
        throw std::out_of_range("agent_at: empty path");
    const std::vector<Agent> *level = &net.agents;
    const Agent *agent = nullptr;
    for (auto i : path) {
        if (i >= level->size())
            throw std::out_of_range("agent_at: no agent at " + to_string(path));
        agent = &(*level)[i];
        level = &agent->children;
    }
    return *agent;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::LabelOveruse:
        return "LabelOveruse";
    case ViolationKind::ArityMismatch:
        return "ArityMismatch";
    case ViolationKind::UndeclaredSymbol:
        return "UndeclaredSymbol";
    case ViolationKind::DegenerateWire:
        return "DegenerateWire";
    case ViolationKind::EmptyLabel:
        return "EmptyLabel";
    }
    return "?";
}

namespace {

std::string describe(const ValidationReport &report) {
    std::ostringstream os;
    os << "invalid binet";
    for (const auto &v : report)
        os << "\n  " << to_string(v.kind) << " " << v.subject << " at " << v.location << ": "
           << v.message;
    return os.str();
}

} // namespace

InvalidBinet::InvalidBinet(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

LinkView link_view(const Binet &net) {
    LinkView links;
    for_each_agent(net, [&](const Agent &a, const Path &path) {
        links[a.principal].push_back({PortKind::Principal, path, 0});
        for (std::size_t i = 0; i < a.external.size(); ++i)
            links[a.external[i]].push_back({PortKind::External, path, i});
        for (std::size_t i = 0; i < a.internal.size(); ++i)
            links[a.internal[i]].push_back({PortKind::Internal, path, i});
    });
    for (std::size_t i = 0; i < net.wires.size(); ++i) {
        links[net.wires[i].a].push_back({PortKind::WireEnd, {}, i});
        links[net.wires[i].b].push_back({PortKind::WireEnd, {}, i});
    }
    return links;
}

std::map<Label, std::size_t> occurrence_counts(const Binet &net) {
    std::map<Label, std::size_t> counts;
    for_each_agent(net, [&](const Agent &a, const Path &) {
        ++counts[a.principal];
        for (const auto &l : a.external)
            ++counts[l];
        for (const auto &l : a.internal)
            ++counts[l];
    });
    for (const auto &w : net.wires) {
        ++counts[w.a];
        ++counts[w.b];
    }
    return counts;
}

ValidationReport validate(const Binet &net) {
    ValidationReport report;
    for_each_agent(net, [&](const Agent &a, const Path &path) {
        auto where = to_string(path);
        auto it = net.signature.find(a.symbol);
        if (it == net.signature.end()) {
            report.push_back({ViolationKind::UndeclaredSymbol, a.symbol, where,
                              "symbol not declared in the signature"});
        } else if (it->second != a.arity()) {
            std::ostringstream msg;
            msg << "arity (" << a.internal.size() << "," << a.external.size()
                << ") but signature declares (" << it->second.internal << ","
                << it->second.external << ")";
            report.push_back({ViolationKind::ArityMismatch, a.symbol, where, msg.str()});
        }
        auto check_label = [&](const Label &l) {
            if (l.empty())
                report.push_back({ViolationKind::EmptyLabel, a.symbol, where, "empty port label"});
        };
        check_label(a.principal);
        for (const auto &l : a.external)
            check_label(l);
        for (const auto &l : a.internal)
            check_label(l);
    });
    for (std::size_t i = 0; i < net.wires.size(); ++i) {
        const auto &w = net.wires[i];
        auto where = "wire #" + std::to_string(i);
        if (w.a.empty() || w.b.empty())
            report.push_back({ViolationKind::EmptyLabel, w.a + "-" + w.b, where, "empty wire end"});
        else if (w.a == w.b)
            report.push_back(
                {ViolationKind::DegenerateWire, w.a, where, "wire joins a label to itself"});
    }
    auto links = link_view(net);
    for (const auto &[label, refs] : links) {
        if (refs.size() <= 2)
            continue;
        std::ostringstream where;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (i)
                where << ", ";
            if (refs[i].kind == PortKind::WireEnd)
                where << "wire #" << refs[i].index;
            else
                where << to_string(refs[i].path);
        }
        report.push_back({ViolationKind::LabelOveruse, label, where.str(),
                          std::to_string(refs.size()) + " occurrences (at most 2 allowed)"});
    }
    return report;
}

std::set<Label> free_labels(const Binet &net) {
    std::set<Label> out;
    for (const auto &[label, n] : occurrence_counts(net))
        if (n == 1)
            out.insert(label);
    return out;
}

std::set<Label> interface(const Binet &net) {
    if (auto report = validate(net); !report.empty())
        throw InvalidBinet(std::move(report));
    return free_labels(net);
}

namespace {

PlaceNode place_of(const Agent &a, Path &path) {
    PlaceNode node{a.symbol, path, {}};
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        path.push_back(i);
        node.children.push_back(place_of(a.children[i], path));
        path.pop_back();
    }
    return node;
}

Agent skeleton(const PlaceNode &node) {
    Agent a;
    a.symbol = node.symbol;
    for (const auto &c : node.children)
        a.children.push_back(skeleton(c));
    return a;
}

Agent &mutable_at(std::vector<Agent> &top, const Path &path) {
    Agent *agent = &top.at(path.front());
    for (std::size_t i = 1; i < path.size(); ++i)
        agent = &agent->children.at(path[i]);
    return *agent;
}

} // namespace

std::vector<PlaceNode> place_view(const Binet &net) {
    std::vector<PlaceNode> forest;
    Path path;
    for (std::size_t i = 0; i < net.agents.size(); ++i) {
        path.push_back(i);
        forest.push_back(place_of(net.agents[i], path));
        path.pop_back();
    }
    return forest;
}

Binet reconstruct(const std::vector<PlaceNode> &places, const LinkView &links) {
    Binet net;
    for (const auto &p : places)
        net.agents.push_back(skeleton(p));
    std::map<std::size_t, Wire> wires;
    for (const auto &[label, refs] : links) {
        for (const auto &ref : refs) {
            if (ref.kind == PortKind::WireEnd) {
                auto &w = wires[ref.index];
                (w.a.empty() ? w.a : w.b) = label;
                continue;
            }
            auto &agent = mutable_at(net.agents, ref.path);
            switch (ref.kind) {
            case PortKind::Principal:
                agent.principal = label;
                break;
            case PortKind::External:
                if (agent.external.size() <= ref.index)
                    agent.external.resize(ref.index + 1);
                agent.external[ref.index] = label;
                break;
            case PortKind::Internal:
                if (agent.internal.size() <= ref.index)
                    agent.internal.resize(ref.index + 1);
                agent.internal[ref.index] = label;
                break;
            case PortKind::WireEnd:
                break;
            }
        }
    }
    for (auto &[_, w] : wires)
        net.wires.push_back(std::move(w));
    return net;
}

namespace {

void rename_agent(Agent &a, const Renaming &r) {
    auto sub = [&](Label &l) {
        if (auto it = r.find(l); it != r.end())
            l = it->second;
    };
    sub(a.principal);
    for (auto &l : a.external)
        sub(l);
    for (auto &l : a.internal)
        sub(l);
    for (auto &c : a.children)
        rename_agent(c, r);
}

} // namespace

Binet rename_labels(const Binet &net, const Renaming &renaming) {
    Binet out = net;
    for (auto &a : out.agents)
        rename_agent(a, renaming);
    for (auto &w : out.wires) {
        if (auto it = renaming.find(w.a); it != renaming.end())
            w.a = it->second;
        if (auto it = renaming.find(w.b); it != renaming.end())
            w.b = it->second;
    }
    return out;
}

} // namespace binet
