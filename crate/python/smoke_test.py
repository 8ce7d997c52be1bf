"""Smoke test for the Python bindings.

Build and install the extension first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/v2v_signal-*.whl
"""

import sys

import v2v_signal_py as v


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    rise_fall = v.ModelSpec(
        v.CurveSpec.affine(0.3, 0.1), v.CurveSpec.linear(0.8), v.CurveSpec.linear(0.1)
    )
    assert rise_fall.validate() == []

    eq = v.solve_equilibrium(rise_fall, v.GameParams(1.0, 0.9, 3.0))
    assert eq.region == "E3", eq
    assert close(eq.p, 0.2954, 1e-4), eq

    rows = v.sweep_beta(rise_fall, 0.9, 3.0, 101)
    assert len(rows) == 101
    assert rows[0]["P"] == 0.25
    bar = v.beta_bar(rise_fall, 0.9, 3.0)
    assert 0.45 <= bar <= 0.55, bar

    reversal = v.ModelSpec.from_json(
        '{"p": {"family": "affine", "slope": 0.8, "intercept": 0.1},'
        ' "t": {"family": "linear", "coefficient": 0.8},'
        ' "f": {"family": "linear", "coefficient": 0.1}}'
    )
    best, value = v.optimize_beta_accident(reversal, 0.9, 20.0)
    assert best == 0.0 and close(value, 0.1, 1e-12)

    game = v.GameParams(0.0, 0.9, 20.0)
    report = v.verify_equilibrium(reversal, game, v.BehaviorProfile(0.1, 0.9, 0.9), 1e-6)
    assert not report["passed"] and "n-reckless" in report["violated"], report

    hits = v.brute_force_equilibria(reversal, v.GameParams(1.0, 0.9, 20.0), 21, 0.1)
    assert hits and all(close(p, 0.1398, 0.05) for _, p, _ in hits)

    bad = v.ModelSpec(v.CurveSpec.affine(0.3, 0.1), v.CurveSpec.linear(0.1), v.CurveSpec.linear(0.2))
    assert any("f ≥ t" in d for d in bad.validate())
    try:
        v.GameParams(0.5, 0.5, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("r = 1 accepted")

    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
