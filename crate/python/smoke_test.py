"""Smoke test for the limitshape_py extension. Run with pytest or as a script."""

import math

import limitshape_py as ls

HEX_ENTROPY = 0.3230659472194505


def test_hex_tension_at_center():
    assert abs(ls.sigma_hex(1 / 3, 1 / 3) + HEX_ENTROPY) < 1e-12
    gx, gy = ls.grad_sigma_hex(1 / 3, 1 / 3)
    assert abs(gx) < 1e-12 and abs(gy) < 1e-12
    (a, b), (c, d) = ls.hess_sigma_hex(0.2, 0.3)
    assert a > 0 and a * d - b * c > 0


def test_ff_hessian_independent_of_u():
    dets = []
    for u in (0.4, 0.7, 1.1):
        (a, b), (c, d) = ls.hess_sigma_ff(0.3, 0.4, u)
        dets.append(a * d - b * c)
    assert max(dets) - min(dets) < 1e-8 * abs(dets[0])


def test_free_energy_matches_entropy():
    assert abs(ls.free_energy(0.0, 0.0) - HEX_ENTROPY) < 1e-10
    assert math.isfinite(ls.free_energy(0.1, -0.2, variant="ff", u=0.6))


def test_torus_partition_unit_weights():
    # 1x1 torus: all four weight-one configurations with even occupation
    assert ls.torus_partition(1, 1, 1.0, 1.0, 1.0) == 4.0


def test_flow_conserves_moments():
    n = 32
    ys = [j / n for j in range(n)]
    t = [1 / 3 + 0.01 * math.sin(2 * math.pi * y) for y in ys]
    p = [0.0] * n
    p1, t1 = ls.burgers_evolve(p, t, 0.25)
    for k in (1, 2, 3):
        before, after = ls.conserved(p, t, k), ls.conserved(p1, t1, k)
        assert abs(after - before) <= 1e-6 * abs(before)


def test_errors():
    try:
        ls.sigma_hex(0.9, 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("slope outside the triangle accepted")
    n = 32
    t = [1 / 3 + 0.05 * math.sin(2 * math.pi * j / n) for j in range(n)]
    try:
        ls.burgers_evolve([0.0] * n, t, 1.0)
    except ls.ShockError:
        pass
    else:
        raise AssertionError("no shock")


def test_run_suite():
    rep = ls.run_suite("commute")
    assert rep["suite"] == "commute" and rep["pass"]
    assert {"name", "measured", "tolerance", "pass", "inputs"} <= set(rep["checks"][0])


if __name__ == "__main__":
    for name, f in list(globals().items()):
        if name.startswith("test_"):
            f()
            print("ok", name)
