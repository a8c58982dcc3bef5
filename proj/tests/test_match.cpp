#include "binet/rho.hpp"
#include "binet/rules.hpp"
#include "binet/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace binet;

namespace {

std::set<std::vector<Path>> library_matches(const Rule &rule, const Binet &net) {
    std::set<std::vector<Path>> out;
    for (const auto &m : match_pattern(rule, net)) {
        auto paths = m.agents;
        std::sort(paths.begin(), paths.end());
        out.insert(paths);
    }
    return out;
}

void agree_on(const RuleSet &rs, const Binet &net) {
    for (const Rule &r : rs.rules()) {
        CAPTURE(r.id);
        auto found = match_pattern(r, net);
        for (const auto &m : found)
            CHECK(oracle::match_is_consistent(r, net, m));
        CHECK(library_matches(r, net) == oracle::brute_force_matches(r, net));
        // Each agent set is reported once.
        CHECK(library_matches(r, net).size() == found.size());
    }
}

} // namespace

TEST_CASE("matches agree with exhaustive search on small corpus nets") {
    RuleSet rs = support::workload_rules();
    for (const char *file : {"corpus/second.binet", "corpus/third.binet"}) {
        CAPTURE(file);
        agree_on(rs, support::load_binet(file));
    }
}

TEST_CASE("matches agree with exhaustive search on generated nets") {
    gen::Rng rng(41);
    RuleSet rs = support::workload_rules();
    gen::NetOptions rho;
    rho.symbols = gen::rho_symbols();
    rho.nest_percent = 45;
    gen::NetOptions nat;
    nat.symbols = gen::nat_symbols();
    for (int i = 0; i < 150; ++i) {
        agree_on(rs, gen::random_binet(rng, rho));
        agree_on(rs, gen::random_binet(rng, nat));
    }
}

TEST_CASE("beta matches both applications of the first snapshot") {
    Binet net = support::load_binet("corpus/first.binet");
    RuleSet rs = rho_rules();
    const Rule &beta = *rs.find("beta");
    auto ms = match_pattern(beta, net);
    REQUIRE(ms.size() == 2);
    std::set<Label> anchors;
    for (const auto &m : ms)
        anchors.insert(m.anchor);
    CHECK(anchors == std::set<Label>{"x", "y"});
    for (const auto &m : ms)
        if (m.anchor == "y") {
            CHECK(m.labels.at("r") == "d");
            CHECK(m.labels.at("v") == "e");
            CHECK(m.labels.at("p") == "g");
            CHECK(m.subnets.count("X") == 1);
        }
}

TEST_CASE("a label variable may bind a label seen twice in the match") {
    // Identity: the pattern port is also the body output.
    Binet net = parse_binet("Abs^f(p | p |)\nApp^f(r, v)\nH^v()");
    auto ms = match_pattern(*rho_rules().find("beta"), net);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].labels.at("b") == "p");
    CHECK(ms[0].labels.at("p") == "p");
}

TEST_CASE("host context and explicit children") {
    RuleSet rs = rho_rules();
    Binet net = support::load_binet("corpus/second.binet");
    auto fail = match_pattern(*rs.find("match_fail"), net);
    REQUIRE(fail.size() == 1);
    CHECK(fail[0].anchor == "e");
    CHECK(fail[0].symbols.at("alpha") == "F");
    CHECK(fail[0].symbols.at("beta") == "G");
    CHECK(match_pattern(*rs.find("match_ok"), net).empty());
    // M_empty only fits an M without children.
    auto empty = match_pattern(*rs.find("M_empty"), net);
    REQUIRE(empty.size() == 1);
    CHECK(agent_at(net, empty[0].agents[0]).principal == "a");
    // An explicit child list must match exactly.
    Binet two = parse_binet("M^a(b || F^e(), G^q())\nF^e()\nH^q()");
    CHECK(match_pattern(*rs.find("match_ok"), two).empty());
}

TEST_CASE("derived symbols bind their base") {
    RuleSet rs = rho_rules();
    Binet net = parse_binet("H_M^c(|| F^e())\nG^e()");
    CHECK(match_pattern(*rs.find("alphaM_done"), net).empty());
    Binet done = parse_binet("H_M^c()");
    auto ms = match_pattern(*rs.find("alphaM_done"), done);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].symbols.at("alpha") == "H");
}

TEST_CASE("no matches in the empty binet") {
    for (const Rule &r : rho_rules().rules())
        CHECK(match_pattern(r, Binet{}).empty());
}
