#include "binet/rho.hpp"
#include "binet/rules.hpp"
#include "binet/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <set>
#include <thread>

using namespace binet;

namespace {

bool reports(const RuleReport &r, RuleViolationKind k) {
    for (const auto &v : r)
        if (v.kind == k)
            return true;
    return false;
}

Rule one(const char *text) { return parse_rules(text)[0]; }

} // namespace

TEST_CASE("bundled rule sets are well formed") {
    CHECK(check_ruleset(rho_rules()).empty());
    CHECK(check_ruleset(rho_rules(EpsilonVariant::Naive)).empty());
    CHECK(check_ruleset(support::nat_rules()).empty());
    CHECK(check_ruleset(support::workload_rules()).empty());
}

TEST_CASE("interface preservation is checked per rule") {
    // r is a free port of the pair and vanishes.
    CHECK(reports(check_rule(one("Add^x(r, y), Z^x() => eps^y()")), RuleViolationKind::InterfaceViolation));
    // y is duplicated.
    CHECK(reports(check_rule(one("Add^x(r, y), Z^x() => r-y, eps^y()")),
                  RuleViolationKind::InterfaceViolation));
    // A right-only label must be used exactly twice.
    CHECK(reports(check_rule(one("A^x(r), B^x() => C^r(w)")), RuleViolationKind::InterfaceViolation));
    // A subnet must be either kept or erased through its interface.
    CHECK(reports(check_rule(one("eps^a(), M^a(b || X) => eps^b()")),
                  RuleViolationKind::InterfaceViolation));
    CHECK(reports(check_rule(one("eps^a(), M^a(b || X) => eps^b(), X, X")),
                  RuleViolationKind::InterfaceViolation));
    CHECK(check_rule(one("Add^x(r, y), S^x(p) => S^r(w), Add^p(w, y)")).empty());
}

TEST_CASE("two rules for the same pair are ambiguous") {
    RuleSet rs = parse_rules("A^x(r), B^x() => r-r2, C^r2()\n"
                             "B^y(), A^y(s) => D^s()");
    auto report = check_ruleset(rs);
    CHECK(reports(report, RuleViolationKind::DuplicatePairRule));
    RuleSet fine = parse_rules("A^x(r), B^x() => D^r()\nA^x(r), C^x() => D^r()");
    CHECK(check_ruleset(fine).empty());
}

TEST_CASE("more specific rules outrank generic ones") {
    RuleSet rs = rho_rules();
    CHECK(specificity(*rs.find("eps_eps")) > specificity(*rs.find("eps_con")));
    CHECK(specificity(*rs.find("match_ok")) > specificity(*rs.find("match_fail")));
    CHECK(specificity(*rs.find("eps_M")) > specificity(*rs.find("M_alpha")));
    CHECK(pair_key(*rs.find("eps_eps")) != pair_key(*rs.find("eps_con")));
}

TEST_CASE("moves_subnet follows subnet metavariables") {
    RuleSet rs = rho_rules();
    CHECK(rs.find("beta")->moves_subnet);
    CHECK(rs.find("M_alpha")->moves_subnet);
    CHECK(rs.find("eps_M")->moves_subnet);
    CHECK_FALSE(rs.find("match_fail")->moves_subnet);
    CHECK_FALSE(rs.find("M_empty")->moves_subnet);
    CHECK(rs.find("beta")->anchor == "x");
}

TEST_CASE("label allocator") {
    Binet net = parse_binet("H^%4()\nG^%x7()\nI^a()", {true});
    LabelAllocator fresh = LabelAllocator::after(net);
    CHECK(fresh.next() == "%5");
    LabelAllocator b1 = fresh.branch();
    LabelAllocator b2 = fresh.branch();
    std::set<Label> seen;
    std::vector<std::thread> pool;
    std::vector<std::vector<Label>> got(4);
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            for (int i = 0; i < 500; ++i)
                got[t].push_back(t < 2 ? fresh.next() : (t == 2 ? b1 : b2).next());
        });
    for (auto &th : pool)
        th.join();
    for (const auto &g : got)
        seen.insert(g.begin(), g.end());
    // Threads 2 and 3 each own a branch; 0 and 1 share the root allocator.
    CHECK(seen.size() == 2000);
    for (const auto &l : seen)
        CHECK(is_reserved_label(l));
}

TEST_CASE("subnet interface lists labels occurring once, in order") {
    Binet x = parse_binet("App^f(r, v)\nF^f()\nG^q()\nq-w");
    // q occurs twice (agent and wire) but the generator domain only looks at agents.
    CHECK(subnet_interface(x.agents) == std::vector<Label>{"r", "v", "q"});
    CHECK(subnet_interface({}).empty());
}

TEST_CASE("instantiation mints intermediaries and drops closed loops") {
    RuleSet rs = support::nat_rules();
    Binet net = parse_binet("Add^a(out, m)\nS^a(p)\nZ^p()\nZ^m()");
    auto matches = match_pattern(*rs.find("add_s"), net);
    REQUIRE(matches.size() == 1);
    LabelAllocator fresh;
    Delta d = instantiate(*rs.find("add_s"), matches[0], net, fresh);
    CHECK(d.removed.size() == 2);
    REQUIRE(d.added.size() == 2);
    CHECK(d.added[0].second.symbol == "S");
    CHECK(d.added[0].second.principal == "out");
    CHECK(d.added[0].second.external[0] == "%0");
    CHECK(d.added[1].second.principal == "p");
    Binet after = apply_delta(net, d);
    CHECK(validate(after).empty());
    CHECK(oracle::free_ports(after) == std::set<Label>{"out"});

    Rule loop = one("A^x(r), B^x(r2) => r-r2");
    Binet closed = parse_binet("A^x(y)\nB^x(y)");
    auto m = match_pattern(loop, closed);
    REQUIRE(m.size() == 1);
    Delta dl = instantiate(loop, m[0], closed, fresh);
    CHECK(dl.wires.empty());
    CHECK(apply_delta(closed, dl).empty());
}

TEST_CASE("the naive erasure renames the re-emitted subnet") {
    RuleSet rs = rho_rules(EpsilonVariant::Naive);
    Binet net = parse_binet("eps^a()\nM^a(b || F^c(), App^d(e, g))\nI^d()");
    auto m = match_pattern(*rs.find("eps_M"), net);
    REQUIRE(m.size() == 1);
    LabelAllocator fresh;
    Binet after = apply_delta(net, instantiate(*rs.find("eps_M"), m[0], net, fresh));
    CHECK(validate(after).empty());
    CHECK(oracle::free_ports(after) == oracle::free_ports(net));
    // eps^b, F, App, one eps per interface label on each side, and I.
    std::size_t eps = 0;
    for (const auto &a : after.agents)
        eps += a.symbol == "eps";
    CHECK(eps == 1 + 2 * 4);
}

TEST_CASE("overlapping deltas are refused") {
    Binet net = parse_binet("eps^a()\nM^a(b || F^c())\nG^c()");
    RuleSet rs = rho_rules();
    auto outer = match_pattern(*rs.find("eps_M"), net);
    auto inner = match_pattern(*rs.find("match_fail"), net);
    REQUIRE(outer.size() == 1);
    REQUIRE(inner.size() == 1);
    LabelAllocator fresh;
    std::vector<Delta> both{instantiate(*rs.find("eps_M"), outer[0], net, fresh),
                            instantiate(*rs.find("match_fail"), inner[0], net, fresh)};
    CHECK_THROWS_AS(apply_deltas(net, both), ConflictDetected);
    CHECK_NOTHROW(apply_deltas(net, std::span<const Delta>(both.data(), 1)));
}
