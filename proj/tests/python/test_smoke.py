import os
from pathlib import Path

import pytest

import binet

ROOT = Path(os.environ.get("BINET_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def corpus(name):
    return (ROOT / "corpus" / name).read_text()


def test_worked_example_reduces_to_h():
    net, output = binet.compile_rho(corpus("example.rho"))
    assert net.interface() == {output}
    trace = binet.reduce(net, binet.RuleSet.rho())
    assert trace.termination == "normal-form"
    assert len(trace.snapshots) == 4
    assert trace.final.is_isomorphic(binet.Binet.parse("H^c()"))
    assert trace.snapshots[1].is_isomorphic(binet.Binet.parse(corpus("second.binet")))
    assert trace.passes[0] == ["beta", "beta"]


def test_census_on_second_snapshot():
    active, stuck, inactive = binet.active_pairs(binet.Binet.parse(corpus("second.binet")), binet.RuleSet.rho())
    assert len(active) == 3
    assert stuck == []
    assert inactive >= 1


def test_addition_under_every_strategy():
    net = binet.Binet.parse(corpus("add_3_2.binet"))
    rules = binet.RuleSet.parse((ROOT / "data" / "nat.rules").read_text())
    counts = {binet.reduce(net, rules, "deterministic").interactions,
              binet.reduce(net, rules, "weighted").interactions}
    counts |= {binet.reduce(net, rules, "stochastic", seed=s).interactions for s in range(1, 6)}
    assert counts == {4}
    assert len(binet.reduce(net, rules).final) == 6


def test_round_trip_and_dot():
    net = binet.Binet.parse(corpus("first.binet"))
    again = binet.Binet.parse(str(net))
    assert again.is_isomorphic(net)
    assert str(again) == str(net)
    assert net.to_dot().startswith("digraph binet {")


def test_errors():
    with pytest.raises(binet.ParseError):
        binet.Binet.parse("S^a(")
    with pytest.raises(binet.InvalidBinet):
        binet.Binet.parse(corpus("bad.binet"))
    with pytest.raises(binet.RhoCompileError):
        binet.compile_rho("x")
    with pytest.raises(ValueError):
        binet.reduce(binet.Binet(), binet.RuleSet.rho(), "sideways")


def test_step_limit():
    net, _ = binet.compile_rho(corpus("example.rho"))
    trace = binet.reduce(net, binet.RuleSet.rho(), max_passes=1)
    assert trace.termination == "step-limit"
    assert len(trace.passes) == 1
