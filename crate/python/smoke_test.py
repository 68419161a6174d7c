"""Smoke test for the gcoalg extension module.

Build it first, e.g. with `maturin develop -m crates/py/Cargo.toml`, or copy
`target/release/libgcoalg.so` to `gcoalg.so` somewhere on `PYTHONPATH`.
"""

import cmath
import json

import gcoalg

UNKNOT = "component 0 color=1/3\nrow: cup@0\nrow: cap@0\n"
TREFOIL = "component 0 color=2/3\nrow: cup@0\nrow: cup@1\nrow: x+@0\nrow: x+@0\nrow: x+@0\nrow: cap@1\nrow: cap@0\n"


def test_algebra():
    u = gcoalg.Uq(4)
    assert (u.ell, u.ellp) == (4, 2)
    e, f = u.e("1/3"), u.f("1/3")
    assert (e * e).is_zero()
    assert not (e * f - f * e).is_zero()
    assert u.counit(u.one("0")) == gcoalg.Scalar("1")
    assert u.antipode(u.antipode(e)) == u.pivot("1/3") * e * u.pivot_inv("1/3")
    delta = u.coproduct(u.e("5/6"), "1/3", "1/2")
    assert delta.grades == ["1/3", "1/2"]
    assert gcoalg.Tensor.from_json(delta.to_json()) == delta


def test_integrals():
    u = gcoalg.Uq(4)
    top = u.e("1/3") * u.f("1/3")
    assert u.mu(top) == gcoalg.Scalar("1")
    assert u.mu_mod(u.one("1/3")) == gcoalg.Scalar("2")
    plus, minus = u.deltas()
    assert abs(complex(plus) - complex(minus).conjugate()) < 1e-9


def test_invariants():
    u = gcoalg.Uq(4)
    d = gcoalg.Diagram.parse(TREFOIL)
    assert d.num_components == 1 and d.colors == ["2/3"]
    j = u.universal_invariant(d)
    assert len(j) > 0
    assert json.loads(j.to_json())["grades"] == ["2/3"]
    unknot = gcoalg.Diagram.parse(UNKNOT)
    assert u.hv(unknot).is_zero()
    assert u.hv_mod(unknot, 0) == gcoalg.Scalar("2")
    approx = gcoalg.Uq(6, backend="approx")
    exact = gcoalg.Uq(6)
    assert cmath.isclose(complex(approx.hv_mod(unknot, 0)), complex(exact.hv_mod(unknot, 0)), abs_tol=1e-9)


def test_errors():
    for bad in (lambda: gcoalg.Uq(2), lambda: gcoalg.Uq(4).e("x"), lambda: gcoalg.Diagram.parse("row: nonsense")):
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")
    try:
        gcoalg.Uq(4).hv_mod(gcoalg.Diagram.parse(UNKNOT.replace("1/3", "0")), 0)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("expected ArithmeticError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name} ok")
