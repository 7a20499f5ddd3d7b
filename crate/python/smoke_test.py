"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import math

import adasub_py as ad


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    names = ad.bundled_names()
    assert "graph_cut_edge" in names, names

    edge = ad.Instance.bundled("graph_cut_edge")
    assert len(edge) == 2 and edge.items == ["a", "b"]
    assert edge.constraint == "cardinality" and edge.budget == 2

    exact = edge.evaluate("sad")
    assert close(exact.value, 0.8), exact.value
    mc = edge.evaluate("sad", method="mc", samples=100_000, seed=7)
    assert abs(mc.value - 0.8) <= 4 * mc.std_error, (mc.value, mc.std_error)

    ratio = edge.ratio()
    assert ratio.m == 0 and (ratio.policy, ratio.follow_up) == ("a", "b")

    cert = edge.certify("arg")
    assert cert.passed and cert.achieved_ratio == 1.0
    assert close(cert.theoretical_ratio, 1 / math.e, 1e-12)

    (sub, _), (mono, witness) = edge.check()
    assert sub and not mono and witness.startswith("Δ(b|")

    assert close(ad.bound(0.5, "cardinality"), 0.5, 1e-12)
    assert ad.bound(0.0, "knapsack") == 0.1

    value, tree = ad.Instance.bundled("knapsack_cut").optimum()
    assert value == 5 and tree.startswith("b")

    again = ad.Instance.parse(edge.to_text(), "copy")
    assert close(again.evaluate("arg").value, edge.evaluate("arg").value)

    steps, utility = ad.Instance.bundled("modular_4").run("arg", seed=3)
    assert steps and all(a in ("select", "no-op", "dummy") for a, _, _ in steps)
    assert utility >= 0

    try:
        ad.Instance.parse("[items]\na 1\n", "broken")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed instance accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
