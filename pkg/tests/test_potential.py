import math

import numpy as np
import pytest

from pshardy import potential as P


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def test_green_function_values():
    assert abs(P.green_function(0.5, 0.0) - math.log(0.5)) < 1e-15
    # |0.5 - 0.25| / |1 - 0.5*0.25| = (1/4) / (7/8) = 2/7
    assert abs(P.green_function(0.5, 0.25) - math.log(2.0 / 7.0)) < 1e-15
    assert P.green_function(1.0 + 0.0j, 0.3) == 0.0  # boundary values vanish


def test_green_function_symmetry_and_sign():
    rng = np.random.default_rng(21)
    for _ in range(40):
        z = complex(*rng.uniform(-0.7, 0.7, 2))
        w = complex(*rng.uniform(-0.7, 0.7, 2))
        if abs(z - w) < 1e-3:
            continue
        a = P.green_function(z, w)
        b = P.green_function(w, z)
        assert abs(a - b) < 1e-13
        assert a < 0.0


def test_green_function_pole_handling():
    with pytest.raises(P.SingularEvaluation):
        P.green_function(0.3 + 0.0j, 0.3)
    vals = P.green_function(np.array([0.3 + 0.0j, 0.5 + 0.0j]), 0.3)
    assert vals[0] == -math.inf
    assert math.isfinite(vals[1])
    with pytest.raises(ValueError):
        P.green_function(0.5, 1.2)


def test_poisson_kernel_values():
    rng = np.random.default_rng(4)
    for _ in range(20):
        zeta = np.exp(1j * rng.uniform(0, 2 * math.pi))
        assert abs(P.poisson_kernel(0.0, zeta) - 1.0) < 1e-14
    assert abs(P.poisson_kernel(0.5, 1.0) - 3.0) < 1e-14
    # broadcasting over boundary arrays
    th = np.linspace(0, 2 * math.pi, 7, endpoint=False)
    vals = P.poisson_kernel(0.2 + 0.1j, np.exp(1j * th))
    assert vals.shape == th.shape
    assert np.all(vals > 0)


def test_poisson_kernel_pole():
    with pytest.raises(P.SingularEvaluation):
        P.poisson_kernel(1.0 + 0.0j, 1.0)
    vals = P.poisson_kernel(np.array([1.0 + 0.0j, 0.0j]), 1.0)
    assert vals[0] == math.inf and vals[1] == 1.0


def test_poisson_kernel_mean_is_one():
    rng = np.random.default_rng(9)
    for _ in range(5):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        got = P.poisson_integral(lambda th: np.ones_like(th), z)
        assert abs(got - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# Poisson integrals
# ---------------------------------------------------------------------------


def test_poisson_integral_reproduces_harmonic_data():
    rng = np.random.default_rng(13)
    for _ in range(6):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        assert abs(P.poisson_integral(np.cos, z) - z.real) < 1e-9
        assert abs(P.poisson_integral(np.sin, z) - z.imag) < 1e-9


def test_poisson_integral_center_mean():
    got = P.poisson_integral(lambda th: np.abs(1.0 - np.exp(1j * th)), 0.0)
    assert abs(got - 4.0 / math.pi) < 1e-9


def test_poisson_integral_singular_data():
    # integrable blowup at both ends of the sine
    got = P.poisson_integral(
        lambda th: np.abs(np.sin(th)) ** -0.6, 0.0, singular_points=[0.0, math.pi]
    )
    assert abs(got - 1.9953742624534898) < 2e-5


def test_poisson_integral_divergent_data_flags_infinity():
    got = P.poisson_integral(
        lambda th: np.abs(np.sin(th)) ** -1.1, 0.0, singular_points=[0.0, math.pi]
    )
    assert got == math.inf


def test_poisson_integral_requires_interior_point():
    with pytest.raises(ValueError):
        P.poisson_integral(np.cos, 1.0 + 0.0j)


# ---------------------------------------------------------------------------
# boundary profiles and spectral extension
# ---------------------------------------------------------------------------


def test_profile_grid_validation():
    n = 512
    t = 2 * math.pi * np.arange(n) / n
    P.BoundaryProfile(t, np.cos(t))  # fine
    with pytest.raises(ValueError):
        P.BoundaryProfile(t[:300], np.cos(t[:300]))  # not a power of two
    with pytest.raises(ValueError):
        P.BoundaryProfile(t[:128], np.cos(t[:128]))  # too small
    with pytest.raises(ValueError):
        P.BoundaryProfile(t + 0.01, np.cos(t))  # shifted grid
    with pytest.raises(ValueError):
        P.BoundaryProfile(t, np.cos(t)[:-1])  # shape mismatch


def test_profile_from_function_fills_singular_nodes():
    prof = P.BoundaryProfile.from_function(
        lambda th: 1.0 / th, n=256, singular_points=[0.0], singular_fill=7.0
    )
    assert prof.values[0] == 7.0
    assert np.all(np.isfinite(prof.values))


def test_profile_mean_and_coefficients():
    prof = P.BoundaryProfile.from_function(lambda th: 2.0 + np.cos(th), n=256)
    assert abs(prof.mean() - 2.0) < 1e-13
    c = prof.fourier_coefficients()
    assert abs(c[0] - 2.0) < 1e-13
    assert abs(c[1] - 0.5) < 1e-13


def test_profile_csv_round_trip(tmp_path):
    rng = np.random.default_rng(31)
    n = 256
    t = 2 * math.pi * np.arange(n) / n
    vals = rng.standard_normal(n)
    prof = P.BoundaryProfile(t, vals, label="noise")
    path = tmp_path / "profile.csv"
    prof.to_csv(path)
    first = path.read_text().splitlines()[0]
    assert first == "theta,value"
    back = P.BoundaryProfile.from_csv(path)
    assert np.array_equal(back.values, vals)
    assert np.array_equal(back.thetas, prof.thetas)


def test_spectral_extension_matches_harmonic_oracle():
    prof = P.BoundaryProfile.from_function(np.cos, n=256)
    h = P.poisson_extension(prof)
    rng = np.random.default_rng(17)
    z = rng.uniform(-0.7, 0.7, 30) + 1j * rng.uniform(-0.7, 0.7, 30)
    z = z[np.abs(z) < 0.95]
    assert np.max(np.abs(h(z) - z.real)) < 1e-13
    # constant data extends to the constant
    one = P.poisson_extension(P.BoundaryProfile.from_function(lambda th: np.ones_like(th), n=256))
    assert np.max(np.abs(one(z) - 1.0)) < 1e-13
    # profile route through poisson_integral dispatch
    assert abs(P.poisson_integral(prof, 0.3 + 0.2j) - 0.3) < 1e-13


def test_spectral_extension_matches_samples_on_boundary():
    prof = P.BoundaryProfile.from_function(lambda th: np.exp(np.cos(th)), n=512)
    h = P.poisson_extension(prof)
    got = h(np.exp(1j * prof.thetas))
    assert np.max(np.abs(got - prof.values)) < 1e-11


def test_periodic_interpolant():
    vals = np.cos(2 * math.pi * np.arange(512) / 512 * 3.0) + 0.25
    f = P.periodic_interpolant(vals)
    th = np.array([0.1, 1.7, 4.0])
    assert np.max(np.abs(f(th) - (np.cos(3 * th) + 0.25))) < 1e-12
    assert abs(f(0.0) - vals[0]) < 1e-12


# ---------------------------------------------------------------------------
# Riesz measures and Green potentials
# ---------------------------------------------------------------------------


def _radial_2r():
    # Delta u = 2r  =>  Lambda-density |z| / pi, u = (2/9)(r^3 - 1)
    return P.RieszMeasure(
        density=lambda z: np.abs(z) / math.pi,
        radial_profile=lambda s: s / math.pi,
        total_mass_hint=2.0 / 3.0,
        label="radial:2r",
    )


def test_measure_total_mass():
    mu = _radial_2r()
    res = mu.total_mass()
    assert res.status == "CONVERGED"
    assert abs(res.value - 2.0 / 3.0) < 1e-10
    atom = P.RieszMeasure(atoms=((0.3 + 0.0j, 1.5),))
    assert atom.total_mass().value == 1.5


def test_measure_pair():
    mu = _radial_2r()
    res = mu.pair(lambda z: np.abs(z) ** 2, tol_abs=1e-10, tol_rel=1e-9)
    # int |z|^2 dLambda u = 2 int_0^1 s^4 ds = 2/5
    assert res.status == "CONVERGED"
    assert abs(res.value - 0.4) < 1e-8
    atom = P.RieszMeasure(atoms=((0.2 + 0.1j, 2.0),))
    res = atom.pair(lambda z: np.real(z) + 1.0)
    assert abs(res.value - 2.0 * 1.2) < 1e-14


def test_measure_pair_complex():
    mu = _radial_2r()
    val, err, status = mu.pair_complex(lambda z: z * z, tol_abs=1e-10)
    # odd angular moments of a radial measure vanish
    assert abs(val) < 1e-8
    assert status == "CONVERGED"


def test_measure_scaling():
    mu = _radial_2r().scaled(2.5)
    assert abs(mu.total_mass().value - 2.5 * 2.0 / 3.0) < 1e-9
    assert mu.total_mass_hint == pytest.approx(2.5 * 2.0 / 3.0)
    with pytest.raises(ValueError):
        _radial_2r().scaled(-1.0)


def test_green_potential_of_atom_is_green_function():
    mu = P.RieszMeasure(atoms=((0.3 + 0.0j, 1.0),), label="green:0.3")
    rng = np.random.default_rng(8)
    for _ in range(10):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        if abs(z - 0.3) < 1e-2:
            continue
        assert abs(P.green_potential(mu, z) - P.green_function(z, 0.3)) < 1e-14
    assert P.green_potential(mu, 0.3) == -math.inf


def test_green_potential_radial_closed_form():
    mu = _radial_2r()
    for z in (0.0, 0.5, 0.3 + 0.4j, 0.99, -0.2 - 0.7j):
        want = (2.0 / 9.0) * (abs(z) ** 3 - 1.0)
        got = P.green_potential(mu, z, tol_abs=1e-12, tol_rel=1e-12)
        assert abs(got - want) < 1e-10
    assert P.green_potential(mu, 1.0 + 0.0j) == 0.0
    with pytest.raises(ValueError):
        P.green_potential(mu, 1.5)


def test_green_potential_infinite_mass_is_minus_infinity():
    mu = P.RieszMeasure(
        density=lambda z: 1.0 / (math.pi * (1.0 - np.abs(z)) ** 2),
        radial_profile=lambda s: 1.0 / (math.pi * (1.0 - s) ** 2),
    )
    assert mu.total_mass().status == "DIVERGENT"
    assert P.green_potential(mu, 0.3) == -math.inf


def test_riesz_density_recovery():
    # build a potential by quadrature from a smooth bump, then probe its
    # Laplacian: the declared density must come back
    bump = lambda z: np.exp(-8.0 * np.abs(z - (0.2 + 0.1j)) ** 2)
    mu = P.RieszMeasure(density=bump, label="bump")

    def u(points):
        return np.array(
            [P.green_potential(mu, p, tol_abs=1e-10, tol_rel=1e-9) for p in np.atleast_1d(points)]
        )

    # step chosen to balance the O(h^2) truncation against the ~1e-9
    # quadrature noise the stencil amplifies by 1/h^2
    for zp in (0.4 + 0.25j, -0.1 + 0.3j):
        got = P.laplacian_probe(u, zp, h=3e-3)
        want = float(bump(np.array([zp]))[0])
        assert abs(got - want) <= 1e-3 * max(1.0, abs(want))


def test_laplacian_probe_polynomial():
    zp = 0.3 - 0.2j
    got = P.laplacian_probe(lambda pts: np.abs(pts) ** 4, zp)
    assert abs(got - 8.0 * abs(zp) ** 2 / math.pi) < 1e-6


# ---------------------------------------------------------------------------
# conformal maps onto star-shaped domains
# ---------------------------------------------------------------------------


def test_map_circle_is_affine():
    m = P.JordanDiskMap(0.2 + 0.1j, lambda th: 0.5 * np.ones_like(th), n=256)
    rng = np.random.default_rng(2)
    z = rng.uniform(-0.7, 0.7, 20) + 1j * rng.uniform(-0.7, 0.7, 20)
    assert np.max(np.abs(m.forward(z) - (0.2 + 0.1j + 0.5 * z))) < 1e-13
    assert abs(m.derivative_at_center - 0.5) < 1e-13
    assert m.univalent


def test_map_offcenter_disk_matches_moebius():
    # unit disk onto disk(c0, r0) fixing 0 with positive derivative:
    # T(z) = c0 + r0 (z + q)/(1 + q z), q = -c0/r0
    c0, r0 = 0.3, 0.6
    q = -c0 / r0

    def oracle(z):
        return c0 + r0 * (z + q) / (1.0 + q * z)

    def radius(th):
        return c0 * np.cos(th) + np.sqrt(c0**2 * np.cos(th) ** 2 + r0**2 - c0**2)

    m = P.JordanDiskMap(0.0, radius, n=512)
    assert m.univalent
    assert m.boundary_residual < 1e-12
    rng = np.random.default_rng(3)
    z = rng.uniform(-1, 1, 200) + 1j * rng.uniform(-1, 1, 200)
    z = z[np.abs(z) < 0.97][:60]
    assert np.max(np.abs(m.forward(z) - oracle(z))) < 1e-12
    want_deriv = r0 * (1 - q * q) / (1.0 + q * z) ** 2
    assert np.max(np.abs(m.derivative(z) - want_deriv)) < 1e-11
    back = m.inverse(m.forward(z))
    assert np.max(np.abs(back - z)) < 1e-11


def test_map_smooth_star_curve_self_consistency():
    m = P.JordanDiskMap(0.0, lambda th: 1.0 + 0.3 * np.cos(th), n=512)
    assert m.univalent
    assert m.boundary_residual < 1e-10
    rng = np.random.default_rng(7)
    z = 0.9 * (rng.uniform(-1, 1, 40) + 1j * rng.uniform(-1, 1, 40))
    z = z[np.abs(z) < 0.9]
    assert np.max(np.abs(m.inverse(m.forward(z)) - z)) < 1e-10
    # image boundary sits on the prescribed curve
    t = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    pts = m.boundary_point(t)
    th = np.angle(pts)
    assert np.max(np.abs(np.abs(pts) - (1.0 + 0.3 * np.cos(th)))) < 1e-10


def test_map_rejects_wild_curves():
    with pytest.raises(ValueError):
        P.JordanDiskMap(0.0, lambda th: 1.0 + 0.45 * np.cos(6 * th), n=512)
    with pytest.raises(ValueError):
        P.JordanDiskMap(0.0, lambda th: np.cos(th), n=256)  # touches zero
    with pytest.raises(ValueError):
        P.JordanDiskMap(0.0, lambda th: np.ones_like(th), n=100)  # bad grid


def test_harmonic_extension_via_map():
    c0, r0 = 0.3, 0.6

    def radius(th):
        return c0 * np.cos(th) + np.sqrt(c0**2 * np.cos(th) ** 2 + r0**2 - c0**2)

    m = P.JordanDiskMap(0.0, radius, n=512)
    h = P.harmonic_extension_via_map(m, lambda w: np.real(w))
    rng = np.random.default_rng(11)
    inner = c0 + 0.8 * r0 * np.exp(1j * rng.uniform(0, 2 * math.pi, 25)) * rng.uniform(0, 1, 25)
    assert np.max(np.abs(h(inner) - np.real(inner))) < 1e-10
    const = P.harmonic_extension_via_map(m, lambda w: np.ones_like(np.real(w)))
    assert np.max(np.abs(const(inner) - 1.0)) < 1e-12
    # a star-shaped but non-circular domain, same harmonic oracle
    m2 = P.JordanDiskMap(0.0, lambda th: 1.0 + 0.25 * np.sin(2 * th), n=512)
    h2 = P.harmonic_extension_via_map(m2, lambda w: np.imag(w))
    pts = m2.forward(0.6 * np.exp(1j * np.linspace(0, 6, 17)))
    assert np.max(np.abs(h2(pts) - np.imag(pts))) < 1e-9
