import math

import numpy as np
import pytest

from pshardy import factorization as F
from pshardy.factorization import (
    AffinePower,
    BlaschkeProduct,
    InvalidZero,
    NotLogIntegrable,
    OuterFunction,
    Poly,
    Product,
    Quotient,
    UnsupportedExpression,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# expression family
# ---------------------------------------------------------------------------


def test_poly_eval_and_roots():
    f = Poly([1.0, -1.0])  # 1 - z
    zs = np.array([0.0, 0.5j, -0.3 + 0.2j])
    assert np.allclose(f(zs), 1.0 - zs)
    # the root at 1 is a boundary singularity, not an interior zero
    assert f.zeros == ()
    assert len(f.boundary_singularities) == 1
    assert abs(f.boundary_singularities[0] % TWO_PI) < 1e-12

    g = Poly([0.0, 1.0, -1.0])  # z(1 - z)
    assert any(abs(loc) < 1e-12 for loc, _ in g.zeros)
    assert sum(m for _, m in g.zeros) == 1


def test_poly_rejects_zero_function():
    with pytest.raises(UnsupportedExpression):
        Poly([0.0])


def test_derivative_battery():
    rng = np.random.default_rng(11)
    exprs = [
        Poly([1.0, 2.0, -0.5, 0.25j]),
        AffinePower(1.0, 0.5),
        AffinePower(0.5 + 0.1j, -0.3),
        BlaschkeProduct([0.3, -0.2 + 0.4j, 0.3]),
        Product(Poly([0.0, 1.0]), AffinePower(1.0, 1.5)),
        Quotient(Poly([1.0, 1.0]), Poly([2.0, 0.0, 0.5])),
    ]
    h = 1e-6
    for f in exprs:
        fp = f.derivative()
        for _ in range(8):
            z = (rng.uniform(-0.6, 0.6) + 1j * rng.uniform(-0.6, 0.6))
            num = (f(z + h) - f(z - h)) / (2.0 * h)
            exact = fp(z)
            assert abs(num - exact) <= 1e-7 * max(1.0, abs(exact)), f.label


def test_affine_power_values_and_branch_guard():
    f = AffinePower(1.0, 0.5)
    z = 0.3 + 0.1j
    assert abs(f(z) - np.sqrt(1.0 - z)) < 1e-14
    # |f*| on the circle is (2 sin(t/2))^{1/2}
    t = np.array([0.5, 1.0, 2.5])
    tr = np.abs(f.boundary_trace(t))
    assert np.allclose(tr, (2.0 * np.sin(t / 2.0)) ** 0.5, atol=1e-13)
    assert f.boundary_singularities == (0.0,)
    with pytest.raises(UnsupportedExpression):
        AffinePower(-1.0, 0.5)
    with pytest.raises(UnsupportedExpression):
        AffinePower(0.0, 0.5)


def test_blaschke_modulus_and_zeros():
    B = BlaschkeProduct([0.5, 0.5, -0.2 + 0.3j])
    t = np.arange(64) * (TWO_PI / 64)
    on_circle = np.abs(B.boundary_trace(t))
    assert np.max(np.abs(on_circle - 1.0)) < 1e-12
    inside = B(np.array([0.0, 0.3j, -0.4 + 0.2j]))
    assert np.all(np.abs(inside) < 1.0)
    # zeros are grouped with multiplicity
    zd = dict(B.zeros)
    assert zd[0.5 + 0.0j] == 2
    # and the product vanishes there
    assert abs(B(np.array([0.5]))[0]) < 1e-14


def test_blaschke_rejects_boundary_zero():
    with pytest.raises(InvalidZero):
        BlaschkeProduct([1.0])
    with pytest.raises(InvalidZero):
        BlaschkeProduct([0.3, 0.9999999999999])


def test_quotient_needs_zero_free_denominator():
    with pytest.raises(UnsupportedExpression):
        Quotient(Poly([1.0]), Poly([0.0, 1.0]))


def test_modulus_power_density_constant_for_z():
    f = Poly([0.0, 1.0])
    dens = f.modulus_power_density(2.0)
    zs = np.array([0.1, 0.5j, -0.7 + 0.1j])
    assert np.allclose(dens(zs), 2.0 / math.pi, atol=1e-14)
    assert f.density_singularities(2.0) == ()
    assert f.density_singularities(1.0) == ((0.0 + 0.0j),)


# ---------------------------------------------------------------------------
# outer functions
# ---------------------------------------------------------------------------


def test_outer_reconstructs_one_minus_z():
    def log_mod(theta):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(1.0 - np.exp(1j * theta)))

    h = OuterFunction(log_mod, singular_thetas=(0.0,))
    zs = np.array([0.0, 0.5, 0.3 - 0.4j, -0.8j])
    assert np.max(np.abs(h(zs) - (1.0 - zs))) < 1e-10


def test_outer_of_constant():
    h = OuterFunction(lambda t: np.full_like(t, math.log(3.0)))
    assert abs(h(np.array([0.2 + 0.1j]))[0] - 3.0) < 1e-12


def test_outer_rejects_non_integrable_data():
    # an arc of -inf log-modulus (trace vanishing on a set of positive
    # measure) admits no outer function
    def log_mod(theta):
        out = np.zeros_like(theta)
        out[np.abs(theta - math.pi) < 0.5] = -np.inf
        return out

    with pytest.raises(NotLogIntegrable):
        OuterFunction(log_mod)


# ---------------------------------------------------------------------------
# Blaschke division
# ---------------------------------------------------------------------------


def test_divide_by_blaschke_preserves_norm(ulog):
    h, rep = F.divide_by_blaschke(Poly([0.0, 1.0]), 2.0, ulog)
    assert rep["n_zeros"] == 1
    assert rep["preserved"]
    assert rep["relative_gap"] < 1e-6
    assert h.zeros == ()
    # the quotient of z by its Blaschke factor is unimodular times 1
    assert abs(rep["norm_h"] - 1.0) < 1e-9


def test_divide_by_blaschke_mixed_zero(ulog):
    h, rep = F.divide_by_blaschke(Poly([0.0, 1.0, -1.0]), 2.0, ulog)
    assert rep["n_zeros"] == 1
    assert rep["preserved"]
    # under the log exhaustion the weighted norm is the classical one
    assert abs(rep["norm_f"] - math.sqrt(2.0)) < 1e-6


def test_divide_by_blaschke_no_zeros(ulog):
    h, rep = F.divide_by_blaschke(Poly([1.0, 0.5]), 2.0, ulog)
    assert rep["n_zeros"] == 0
    assert rep["preserved"]


# ---------------------------------------------------------------------------
# the unit-norm outer multiplier
# ---------------------------------------------------------------------------


def test_u_inner_log_is_constant_one(ulog):
    cand = F.u_inner(ulog)
    # V = 1, so the multiplier is the constant 1 and flatness is exact
    assert abs(cand.norm_value - 1.0) < 1e-9
    dev = np.abs(cand.flatness[cand.clean_mask] - 1.0)
    assert float(np.max(dev)) < 1e-12


def test_u_inner_um_flattens_the_weight(u075):
    cand = F.u_inner(u075)
    mask = cand.clean_mask
    assert float(np.mean(mask)) > 0.99
    dev = np.abs(cand.flatness[mask] - 1.0)
    assert float(np.nanmax(dev)) <= 1e-3
    assert abs(cand.norm_value - 1.0) <= 5e-3
    assert cand.norm_report.verdict == "MEMBER"


def test_beurling_isometry_log(ulog):
    cand = F.u_inner(ulog)
    chk = F.beurling_isometry_check(cand, ulog)
    assert chk["ok"]
    assert chk["flatness"]["ok"]
    assert abs(chk["flatness"]["dc"] - 1.0) < 1e-9
    assert chk["flatness"]["max_other"] < 1e-9
    for entry in chk["entries"]:
        assert entry["relative_gap"] < 1e-6, entry["label"]
