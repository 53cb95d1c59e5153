"""Smoke test for the mhmw extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o target/wheels
    pip install --force-reinstall target/wheels/mhmw-*.whl
"""

import math

import mhmw


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    p = mhmw.SystemParams(1.0, 1.0, 2.0, 0.5, ring_radius=1.0)
    varpi, phi, y0 = p.derive(+1)
    assert varpi == p.varpi == 2.0
    assert close(phi / (2 * math.pi), y0, 1e-15)

    assert close(mhmw.landau_energy_asymptotic(0, 1, +1, 2.0, 0.3 * 2 * math.pi), 1.4, 1e-14)
    e = mhmw.landau_energy_exact(0, 0.7, +1, 2.0, 1e-3)
    assert close(e, 1.4121536339757482, 1e-9), e

    rows = mhmw.landau_spectrum(p, n_max=1, l_min=-1, l_max=1)
    assert len(rows) == 12 and {"n", "l", "s", "gamma", "energy"} <= rows[0].keys()

    assert close(mhmw.ring_level(0, +1, 1.0, 2.0, 1.0, 0.0), -0.5, 1e-15)

    closed, near = mhmw.landau_current("0:1:+1", 0.3 * 2 * math.pi, 2.0)
    fd, _ = mhmw.landau_current("0:1:+1", 0.3 * 2 * math.pi, 2.0, method="byers_yang")
    assert not near and close(closed, fd, 1e-6)
    rc, _ = mhmw.ring_current("0:+1;1:-1", 1.9, 1.0, 1.5, 1.2)
    rf, _ = mhmw.ring_current("0:+1;1:-1", 1.9, 1.0, 1.5, 1.2, method="byers_yang")
    assert close(rc, rf, 1e-6)

    try:
        mhmw.landau_current("0:0:+1", 0.0, 2.0, method="byers_yang")
    except mhmw.CrossingError:
        pass
    else:
        raise AssertionError("expected CrossingError")
    try:
        mhmw.SystemParams(-1.0, 1.0, 2.0, 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    assert close(mhmw.tricomi_u(0.5, 1.3, 0.2), 1.8833572489368062, 1e-9)
    assert close(mhmw.kummer_m(2.5, 2.5, 1.0), math.e, 1e-14)
    lg, sign = mhmw.ln_gamma(-0.5)
    assert sign == -1.0 and close(lg, math.lgamma(-0.5), 1e-13)

    outcomes = mhmw.run_verify("quick")
    for _, _, line in outcomes:
        print(line)
    assert len(outcomes) == 9
    print("smoke test ok")


if __name__ == "__main__":
    main()
