#include "binet/engine.hpp"
#include "binet/rho.hpp"
#include "binet/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace binet;

namespace {

using K = RhoTerm::Kind;

RhoTerm V(const char *n) { return RhoTerm::variable(n); }
RhoTerm C(const char *n) { return RhoTerm::constructor(n); }
RhoTerm ap(RhoTerm f, RhoTerm a) { return RhoTerm::application(std::move(f), std::move(a)); }
RhoTerm ab(RhoTerm p, RhoTerm b) { return RhoTerm::abstraction(std::move(p), std::move(b)); }

} // namespace

TEST_CASE("rho terms parse with the usual precedence") {
    CHECK(parse_rho("(x -> H) ((F -> I) G)") == ap(ab(V("x"), C("H")), ap(ab(C("F"), C("I")), C("G"))));
    CHECK(parse_rho("H") == C("H"));
    CHECK(parse_rho("x -> x") == ab(V("x"), V("x")));
    CHECK(parse_rho("f a b") == ap(ap(V("f"), V("a")), V("b")));
    CHECK(parse_rho("x -> y -> x") == ab(V("x"), ab(V("y"), V("x"))));
    CHECK(parse_rho("x → F x") == ab(V("x"), ap(C("F"), V("x"))));
    CHECK(parse_rho("  # a comment\n(x -> x) H") == ap(ab(V("x"), V("x")), C("H")));
}

TEST_CASE("rho printing round-trips") {
    gen::Rng rng(61);
    for (int i = 0; i < 200; ++i) {
        RhoTerm t = gen::random_rho(rng, 4);
        CHECK(parse_rho(print_rho(t)) == t);
    }
    CHECK(print_rho(parse_rho("(x -> H) ((F -> I) G)")) == "(x -> H) ((F -> I) G)");
}

TEST_CASE("rho syntax errors") {
    CHECK_THROWS_AS(parse_rho(""), ParseError);
    CHECK_THROWS_AS(parse_rho("(x -> H"), ParseError);
    CHECK_THROWS_AS(parse_rho("x ->"), ParseError);
    try {
        parse_rho("F\n  G )");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 5);
    }
}

TEST_CASE("the worked example compiles to the first snapshot") {
    auto c = compile_rho(parse_rho("(x -> H) ((F -> I) G)"));
    CHECK(oracle::agent_count(c.net) == 9); // 8 top-level agents and F inside an Abs
    CHECK(c.net.agents.size() == 8);
    CHECK(validate(c.net).empty());
    CHECK(interface(c.net) == std::set<Label>{c.output});
    CHECK(oracle::isomorphic(c.net, support::load_binet("corpus/first.binet")));
}

TEST_CASE("small compilations") {
    auto h = compile_rho(C("H"));
    CHECK(oracle::isomorphic(h.net, parse_binet("H^c()")));
    CHECK(interface(h.net) == std::set<Label>{h.output});
    auto id = compile_rho(ab(V("x"), V("x")));
    CHECK(oracle::isomorphic(id.net, parse_binet("Abs^o(p | p |)")));
    auto k = compile_rho(ab(V("x"), C("H")));
    CHECK(oracle::isomorphic(k.net, parse_binet("Abs^o(h | p |)\nH^h()\neps^p()")));
}

TEST_CASE("compilation errors") {
    CHECK_THROWS_AS(compile_rho(V("x")), RhoCompileError);
    CHECK_THROWS_AS(compile_rho(parse_rho("x -> F x x")), RhoCompileError);
    CHECK_THROWS_AS(compile_rho(parse_rho("(F G) -> H")), RhoCompileError);
    CHECK_THROWS_AS(compile_rho(parse_rho("(x -> x) -> H")), RhoCompileError);
    CHECK_NOTHROW(compile_rho(parse_rho("x -> x -> x")));
}

TEST_CASE("compiled terms are valid with one free port") {
    gen::Rng rng(62);
    for (int i = 0; i < 300; ++i) {
        auto c = compile_rho(gen::random_rho(rng, 4));
        CHECK(validate(c.net).empty());
        CHECK(interface(c.net) == std::set<Label>{c.output});
    }
}

TEST_CASE("the worked example passes through every snapshot") {
    auto c = compile_rho(parse_rho("(x -> H) ((F -> I) G)"));
    auto t = reduce(c.net, rho_rules(), Strategy{});
    REQUIRE(t.snapshots.size() == 4);
    CHECK(oracle::isomorphic(t.snapshots[1], support::load_binet("corpus/second.binet")));
    CHECK(oracle::isomorphic(t.snapshots[2], support::load_binet("corpus/third.binet")));
    CHECK(oracle::isomorphic(t.snapshots[3], parse_binet("H^c()")));
}

TEST_CASE("identity application") {
    auto c = compile_rho(parse_rho("(x -> x) H"));
    for (auto variant : {EpsilonVariant::Optimized, EpsilonVariant::Naive}) {
        auto t = reduce(c.net, rho_rules(variant), Strategy{});
        CHECK(t.termination == Termination::NormalForm);
        CHECK(oracle::isomorphic(t.final_binet(), parse_binet("H^r()")));
    }
}

TEST_CASE("matching constructor patterns") {
    auto ok = reduce(compile_rho(parse_rho("(F -> I) F")).net, rho_rules(), Strategy{});
    CHECK(oracle::isomorphic(ok.final_binet(), parse_binet("I^r()")));
    auto bad = reduce(compile_rho(parse_rho("(F -> I) G")).net, rho_rules(), Strategy{});
    CHECK(oracle::isomorphic(bad.final_binet(), parse_binet("bot^r()")));
}

TEST_CASE("erasure rules") {
    RuleSet rs = rho_rules();
    CHECK(reduce(parse_binet("eps^a()\neps^a()"), rs, Strategy{}).final_binet().empty());
    CHECK(reduce(parse_binet("eps^a()\nbot^a()"), rs, Strategy{}).final_binet().empty());
    auto t = reduce(parse_binet("eps^a()\nApp^a(r, v)"), rs, Strategy{});
    CHECK(oracle::isomorphic(t.final_binet(), parse_binet("eps^r()\neps^v()")));
}

TEST_CASE("erasing a compiled term leaves nothing") {
    gen::Rng rng(63);
    for (int i = 0; i < 200; ++i) {
        RhoTerm term = gen::random_rho(rng, 4);
        CAPTURE(print_rho(term));
        auto c = compile_rho(term);
        c.net.agents.push_back({"eps", c.output, {}, {}, {}});
        c.net.signature.emplace("eps", Arity{});
        for (auto variant : {EpsilonVariant::Optimized, EpsilonVariant::Naive}) {
            ReduceOptions opts;
            opts.limits.max_passes = 500;
            auto t = reduce(c.net, rho_rules(variant), Strategy{}, opts);
            CHECK(t.termination == Termination::NormalForm);
            CHECK(t.final_binet().empty());
        }
    }
}
