#include "support/generators.hpp"

#include "binet/engine.hpp"
#include "binet/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

using namespace binet;

namespace gen {

std::size_t pick(Rng &rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

bool chance(Rng &rng, unsigned percent) { return rng() % 100 < percent; }

SymbolTable plain_symbols() {
    return {{"A", {0, 0}}, {"B", {0, 1}}, {"C", {0, 2}}, {"D", {1, 1}},
            {"Box", {2, 0}}, {"Abs", {1, 1}}, {"App", {0, 2}}};
}

SymbolTable rho_symbols() {
    return {{"Abs", {1, 1}}, {"App", {0, 2}}, {"M", {0, 1}}, {"eps", {0, 0}},
            {"bot", {0, 0}}, {"F", {0, 0}},   {"G", {0, 0}}, {"H", {0, 0}}};
}

SymbolTable nat_symbols() {
    return {{"Z", {0, 0}}, {"S", {0, 1}}, {"Add", {0, 2}}, {"eps", {0, 0}}};
}

namespace {

std::string label_name(Rng &rng, std::size_t i, bool reserved) {
    static const char *stems[] = {"a", "x", "port_", "w", "L"};
    if (reserved && chance(rng, 25))
        return "%" + std::to_string(i);
    return stems[pick(rng, 5)] + std::to_string(i);
}

} // namespace

Binet random_binet(Rng &rng, const NetOptions &o) {
    std::size_t n = 1 + pick(rng, o.max_agents);
    struct Node {
        Agent agent;
        int parent;
    };
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        const auto &[symbol, arity] = o.symbols[pick(rng, o.symbols.size())];
        Node node;
        node.agent.symbol = symbol;
        node.agent.external.resize(arity.external);
        node.agent.internal.resize(arity.internal);
        node.parent = (!nodes.empty() && chance(rng, o.nest_percent))
                          ? static_cast<int>(pick(rng, nodes.size()))
                          : -1;
        nodes.push_back(std::move(node));
    }
    // Port slots: (node, index) with index 0 = principal, then external,
    // then internal; wire ends use node = -1 - wire.
    std::size_t wires = pick(rng, o.max_wires + 1);
    std::vector<std::pair<int, std::size_t>> slots;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::size_t ports = 1 + nodes[i].agent.external.size() + nodes[i].agent.internal.size();
        for (std::size_t k = 0; k < ports; ++k)
            slots.emplace_back(static_cast<int>(i), k);
    }
    for (std::size_t w = 0; w < wires; ++w) {
        slots.emplace_back(-1 - static_cast<int>(w), 0);
        slots.emplace_back(-1 - static_cast<int>(w), 1);
    }
    for (std::size_t i = slots.size(); i > 1; --i)
        std::swap(slots[i - 1], slots[pick(rng, i)]);

    std::vector<Wire> wire_list(wires);
    std::size_t next_label = 0;
    auto assign = [&](const std::pair<int, std::size_t> &s, const Label &l) {
        if (s.first < 0) {
            Wire &w = wire_list[static_cast<std::size_t>(-1 - s.first)];
            (s.second == 0 ? w.a : w.b) = l;
            return;
        }
        Agent &a = nodes[static_cast<std::size_t>(s.first)].agent;
        std::size_t k = s.second;
        if (k == 0)
            a.principal = l;
        else if (k <= a.external.size())
            a.external[k - 1] = l;
        else
            a.internal[k - 1 - a.external.size()] = l;
    };
    for (std::size_t i = 0; i < slots.size();) {
        Label l = label_name(rng, next_label++, o.reserved_labels);
        bool pair = i + 1 < slots.size() && !chance(rng, o.free_percent) &&
                    !(slots[i].first < 0 && slots[i].first == slots[i + 1].first);
        assign(slots[i], l);
        if (pair) {
            assign(slots[i + 1], l);
            i += 2;
        } else {
            i += 1;
        }
    }
    // Assemble the nesting, children after parents.
    std::function<std::vector<Agent>(int)> build = [&](int parent) {
        std::vector<Agent> out;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].parent == parent) {
                Agent a = nodes[i].agent;
                a.children = build(static_cast<int>(i));
                out.push_back(std::move(a));
            }
        return out;
    };
    Binet net;
    net.agents = build(-1);
    net.wires = std::move(wire_list);
    for (const auto &[s, a] : o.symbols)
        net.signature.emplace(s, a);
    return net;
}

RhoTerm random_rho(Rng &rng, std::size_t depth) {
    static const char *constructors[] = {"F", "G", "H", "I", "K"};
    std::vector<std::string> available;
    std::size_t counter = 0;
    std::function<RhoTerm(std::size_t)> go = [&](std::size_t d) -> RhoTerm {
        std::size_t choice = d == 0 ? 0 : pick(rng, 5);
        if (choice == 0 || choice == 1) {
            if (!available.empty() && chance(rng, 60)) {
                std::size_t i = pick(rng, available.size());
                std::string v = available[i];
                available.erase(available.begin() + static_cast<std::ptrdiff_t>(i));
                return RhoTerm::variable(v);
            }
            return RhoTerm::constructor(constructors[pick(rng, 5)]);
        }
        if (choice == 2 || choice == 3) {
            RhoTerm f = go(d - 1);
            return RhoTerm::application(std::move(f), go(d - 1));
        }
        if (chance(rng, 30))
            return RhoTerm::abstraction(RhoTerm::constructor(constructors[pick(rng, 5)]), go(d - 1));
        std::string v = "v" + std::to_string(counter++);
        available.push_back(v);
        RhoTerm body = go(d - 1);
        available.erase(std::remove(available.begin(), available.end(), v), available.end());
        return RhoTerm::abstraction(RhoTerm::variable(v), std::move(body));
    };
    return go(depth);
}

namespace {

void declare(Signature &sig, const std::vector<Agent> &agents) {
    for (const auto &a : agents) {
        sig.emplace(a.symbol, a.arity());
        declare(sig, a.children);
    }
}

} // namespace

Binet random_m_configuration(Rng &rng, std::size_t trees) {
    static const char *constructors[] = {"F", "G", "H", "I"};
    std::size_t counter = 0;
    auto fresh = [&] { return "t" + std::to_string(counter++); };
    std::vector<Agent> inside;
    std::function<Label(std::size_t)> tree = [&](std::size_t d) -> Label {
        Label out = fresh();
        if (d == 0 || chance(rng, 50)) {
            inside.push_back({constructors[pick(rng, 4)], out, {}, {}, {}});
            return out;
        }
        Label f = tree(d - 1);
        Label v = chance(rng, 25) ? fresh() : tree(d - 1);
        inside.push_back({"App", f, {out, v}, {}, {}});
        return out;
    };
    for (std::size_t i = 0; i < trees; ++i)
        tree(2);
    Binet net;
    net.agents.push_back({"eps", "a", {}, {}, {}});
    net.agents.push_back({"M", "a", {"b"}, {}, std::move(inside)});
    declare(net.signature, net.agents);
    return net;
}

Binet prefixed(const Binet &net, const std::string &prefix) {
    Renaming r;
    for (const auto &[label, n] : occurrence_counts(net))
        r[label] = prefix + label;
    return rename_labels(net, r);
}

Binet combine(const std::vector<Binet> &parts) {
    Binet out;
    for (const auto &p : parts) {
        out.agents.insert(out.agents.end(), p.agents.begin(), p.agents.end());
        out.wires.insert(out.wires.end(), p.wires.begin(), p.wires.end());
        for (const auto &[s, a] : p.signature)
            out.signature.emplace(s, a);
    }
    return out;
}

namespace {

Binet unary(std::size_t n, const Label &root, const std::string &prefix) {
    Binet net;
    Label cur = root;
    for (std::size_t i = 0; i < n; ++i) {
        Label next = prefix + std::to_string(i);
        net.agents.push_back({"S", cur, {next}, {}, {}});
        cur = next;
    }
    net.agents.push_back({"Z", cur, {}, {}, {}});
    return net;
}

} // namespace

Binet random_workload(Rng &rng) {
    std::vector<Binet> parts;
    std::size_t count = 2 + pick(rng, 3);
    for (std::size_t k = 0; k < count; ++k) {
        std::string p = "c" + std::to_string(k) + "_";
        Binet part;
        switch (pick(rng, 4)) {
        case 0: {
            part = combine({unary(pick(rng, 3), "a", "u"), unary(pick(rng, 3), "m", "v")});
            part.agents.push_back({"Add", "a", {"out", "m"}, {}, {}});
            break;
        }
        case 1:
            part = compile_rho(random_rho(rng, 1 + pick(rng, 3))).net;
            break;
        case 2: {
            auto c = compile_rho(random_rho(rng, 1 + pick(rng, 3)));
            part = c.net;
            part.agents.push_back({"eps", c.output, {}, {}, {}});
            break;
        }
        default:
            part = random_m_configuration(rng, 1 + pick(rng, 2));
            break;
        }
        parts.push_back(prefixed(part, p));
    }
    Binet net = combine(parts);
    auto free = free_labels(net);
    std::vector<Label> ports(free.begin(), free.end());
    for (std::size_t i = ports.size(); i > 1; --i)
        std::swap(ports[i - 1], ports[pick(rng, i)]);
    for (std::size_t i = 0; i + 1 < ports.size(); i += 2)
        if (chance(rng, 50))
            net.wires.push_back({ports[i], ports[i + 1]});
    declare(net.signature, net.agents);
    return net;
}

Additions random_additions(Rng &rng, std::size_t count) {
    Additions out;
    std::vector<Binet> parts;
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t x = pick(rng, 5), y = pick(rng, 5);
        Binet part = combine({unary(x, "a", "u"), unary(y, "m", "v")});
        part.agents.push_back({"Add", "a", {"out", "m"}, {}, {}});
        std::string p = "s" + std::to_string(k) + "_";
        if (chance(rng, 25))
            part.agents.push_back({"eps", "out", {}, {}, {}});
        else
            out.sums.emplace_back(p + "out", x + y);
        parts.push_back(prefixed(part, p));
    }
    out.net = combine(parts);
    declare(out.net.signature, out.net.agents);
    return out;
}

} // namespace gen

namespace support {

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string source_path(const std::string &relative) {
    return std::string(BINET_SOURCE_DIR) + "/" + relative;
}

Binet load_binet(const std::string &relative) {
    return parse_binet(read_text(source_path(relative)));
}

RuleSet nat_rules() { return parse_rules(read_text(source_path("data/nat.rules"))); }

RuleSet workload_rules() {
    return parse_rules(std::string(rho_rules_source()) + "\n" +
                       read_text(source_path("data/nat.rules")));
}

} // namespace support
