import json
import math
import os

import numpy as np
import pytest

from pshardy import exhaustion as X
from pshardy import hardy as H
from pshardy.exhaustion import InvalidParameter
from pshardy.factorization import AffinePower, Poly
from pshardy.geometry import MoebiusAutomorphism

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# boundary weights
# ---------------------------------------------------------------------------


def test_weight_log_is_constant_one(ulog):
    w = H.boundary_weight(ulog)
    assert np.max(np.abs(w.values - 1.0)) < 1e-12
    assert w.constancy() < 1e-12
    assert abs(w.mass_of_laplacian - 1.0) == 0.0
    assert w.log_integrable
    assert w.singular_thetas == ()
    assert abs(w.at(1.234) - 1.0) < 1e-12


def test_weight_um_frozen_values(u075):
    w = H.boundary_weight(u075)
    assert abs(w.at(math.pi) - 0.01735290655272462) < 1e-9
    assert abs(w.at(math.pi / 2.0) - 0.033508405528991064) < 1e-9
    assert abs(w.at(0.2) - 0.614814105615494) < 1e-9
    assert abs(w.mass_of_laplacian - 0.20865671041851824) < 1e-12
    assert w.singular_thetas == (0.0,)
    assert math.isinf(w.at(0.0))
    assert math.isinf(w.values[0])
    # the profile view fills the singular node finitely
    assert np.all(np.isfinite(w.profile.values))
    assert w.log_integrable


def test_weight_um_half_diverges_at_one(u05):
    w = H.boundary_weight(u05)
    assert abs(w.at(math.pi) - 0.02963475158897719) < 1e-9
    assert math.isinf(w.mass_of_laplacian)
    assert w.fubini_residual is None
    # V ~ 1/t near the singular angle: log V is still integrable
    assert w.log_integrable


def test_weight_mass_identity(u075):
    # integrating V over the circle recovers the Riesz mass
    w = H.boundary_weight(u075)
    assert w.fubini_residual is not None
    assert w.fubini_residual < 1e-4


def test_weight_radial_density_is_constant():
    u = X.radial_smooth(lambda s: 2.0 * s, "radial-cubic")
    w = H.boundary_weight(u)
    assert np.max(np.abs(w.values - 2.0 / 3.0)) < 1e-6
    assert w.constancy() < 1e-6
    assert w.fubini_residual == 0.0


def test_weight_scaled_and_pullback(ulog):
    w2 = H.boundary_weight(X.scaled_exhaustion(2.0, ulog))
    assert np.max(np.abs(w2.values - 2.0)) < 1e-12
    assert abs(w2.mass_of_laplacian - 2.0) < 1e-12

    mob = MoebiusAutomorphism(a=0.3)
    wp = H.boundary_weight(X.pullback_exhaustion(mob, ulog))
    # the swept mass of the pulled-back atom is the Poisson kernel at the
    # preimage of 0, equivalently |phi'| on the circle
    t = wp.thetas
    expected = np.abs(mob.derivative(np.exp(1j * t)))
    assert np.max(np.abs(wp.values - expected)) < 1e-12
    assert abs(wp.mass_of_laplacian - 1.0) < 1e-12
    assert wp.fubini_residual < 1e-7


def test_weight_arc_mass_additivity(u075):
    w = H.boundary_weight(u075)
    full = w.arc_mass(0.0, TWO_PI)
    assert abs(full - w.mass_of_laplacian) < 1e-4
    left = w.arc_mass(0.0, math.pi)
    right = w.arc_mass(math.pi, TWO_PI)
    assert abs(left + right - full) < 1e-6
    # absolute continuity: arcs away from the spike carry o(1) mass
    tiny = w.arc_mass(2.0, 2.0 + 1e-3)
    assert tiny < 1e-4
    assert tiny > 0.0


def test_weight_cache_and_validation(ulog):
    w1 = H.boundary_weight(ulog, samples=512)
    w2 = H.boundary_weight(ulog, samples=512)
    assert w1 is w2
    with pytest.raises(InvalidParameter):
        H.boundary_weight(ulog, samples=1000)
    with pytest.raises(InvalidParameter):
        H.boundary_weight("um")
    with pytest.raises(InvalidParameter):
        # the glued family carries an undeclared singular mass component
        H.boundary_weight(X.make_example("vm", 0.75))


def test_weight_csv_and_json(u075, tmp_path):
    w = H.boundary_weight(u075)
    path = tmp_path / "weight.csv"
    w.to_csv(path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "theta,V"
    assert len(lines) == w.samples + 1
    blob = w.to_json_dict()
    assert blob["mass_of_laplacian"] == w.mass_of_laplacian
    assert blob["log_integrable"] is True
    assert "paper_refs" in blob
    json.dumps(blob)


# ---------------------------------------------------------------------------
# classical norms
# ---------------------------------------------------------------------------


def test_classical_norms():
    assert abs(H.classical_hardy_norm(Poly([1.0]), 2.0) - 1.0) < 1e-12
    assert abs(H.classical_hardy_norm(Poly([0.0, 1.0]), 2.0) - 1.0) < 1e-10
    # ||1 - z||_2^2 = 2
    assert abs(H.classical_hardy_norm(Poly([1.0, -1.0]), 2.0)
               - math.sqrt(2.0)) < 1e-10
    # (1-z)^{-0.6} leaves H^2: the trace power ~ t^{-1.2} diverges
    assert H.classical_hardy_norm(AffinePower(1.0, -0.6), 2.0) == math.inf
    with pytest.raises(InvalidParameter):
        H.classical_hardy_norm(Poly([1.0]), 0.0)


# ---------------------------------------------------------------------------
# the three routes and verdicts
# ---------------------------------------------------------------------------


def test_constant_under_log_all_routes_one(ulog):
    rep = H.hardy_norm(Poly([1.0]), 2.0, ulog)
    assert rep.verdict == "MEMBER"
    assert abs(rep.value - 1.0) < 1e-9
    for name, val in rep.route_values().items():
        assert abs(val - 1.0) < 1e-9, name
    assert rep.agreement < 1e-9
    assert abs(rep.classical_norm - 1.0) < 1e-9
    assert rep.routes_run == ("level-sup", "bulk", "boundary")


def test_z_under_log_ladder_diagnostics(ulog):
    rep = H.hardy_norm(Poly([0.0, 1.0]), 2.0, ulog)
    assert rep.verdict == "MEMBER"
    assert abs(rep.value - 1.0) < 1e-6
    assert rep.monotone
    assert rep.ladder_uncertainty < 1e-6
    # the rungs are exactly e^{2c}, so the fitted decay exponent is 1
    assert abs(rep.fitted_exponent - 1.0) < 1e-3
    cs, vals = zip(*rep.ladder)
    assert len(vals) >= 15
    # successive rung ratios drop toward 1 as the levels fill the disk
    ratios = np.asarray(vals[1:]) / np.asarray(vals[:-1])
    assert np.all(ratios > 1.0)
    assert np.all(np.diff(ratios) < 0.0)
    assert abs(ratios[-1] - 1.0) < 1e-5


def test_um_triple_route_agreement(u075):
    # the three routes must agree to half a percent on the battery
    for f in (Poly([0.0, 1.0, -1.0]), AffinePower(1.0, 0.5)):
        rep = H.hardy_norm(f, 2.0, u075)
        assert rep.verdict == "MEMBER", f.label
        assert rep.statuses["level-sup"] == "CONVERGED"
        assert rep.agreement is not None
        assert rep.agreement <= 5e-3, (f.label, rep.agreement)


def test_um_frozen_norm_value(u075):
    rep = H.hardy_norm(Poly([0.0, 1.0, -1.0]), 2.0, u075)
    truth = 0.059616203246372616
    assert abs(rep.route_bulk - truth) / truth < 1e-5
    assert abs(rep.route_boundary - truth) / truth < 1e-5
    assert abs(rep.value - math.sqrt(truth)) / math.sqrt(truth) < 5e-3
    # the ladder extrapolation stays inside its own error bar
    assert abs(rep.route_level_sup - truth) <= 3.0 * rep.ladder_uncertainty


def test_membership_infinite_mass(u05):
    rep = H.hardy_norm(Poly([1.0]), 2.0, u05)
    assert rep.verdict == "NOT_MEMBER"
    assert rep.value is None
    assert all(v == math.inf for v in rep.route_values().values())
    assert math.isfinite(rep.classical_norm)

    rep = H.hardy_norm(AffinePower(0.5, 1.0), 2.0, u05)
    assert rep.verdict == "MEMBER"
    assert rep.value is not None
    assert rep.statuses["level-sup"] is None
    assert "infinite Riesz mass" in " ".join(rep.notes)


def test_membership_boundary_power(u075):
    # (1-z)^{-0.3} is classical-H^2 but its square against V ~ t^{-1.1}
    # diverges at the singular angle
    rep = H.hardy_norm(AffinePower(1.0, -0.3), 2.0, u075)
    assert rep.verdict == "NOT_MEMBER"
    assert math.isfinite(rep.classical_norm)
    assert rep.statuses["boundary"] == "DIVERGENT"
    assert rep.statuses["bulk"] == "DIVERGENT"


def test_small_p_skips_level_route(u075):
    rep = H.hardy_norm(Poly([1.0]), 0.7, u075)
    assert "level-sup" not in rep.routes_run
    assert rep.statuses["level-sup"] is None
    assert "level route skipped" in " ".join(rep.notes)
    assert set(rep.routes_run) == {"bulk", "boundary"}


def test_membership_bundle_and_json(ulog):
    mv = H.membership_verdict(Poly([1.0]), 2.0, ulog)
    assert mv["verdict"] == "MEMBER"
    assert abs(mv["norm"] - 1.0) < 1e-9
    assert mv["classical"]["finite"]
    assert set(mv["routes"]) == {"level-sup", "bulk", "boundary"}

    blob = mv["report"].to_json_dict()
    assert blob["verdict"] == "MEMBER"
    assert blob["paper_refs"]
    text = json.dumps(blob)
    assert "Infinity" not in text


def test_hardy_norm_input_validation(ulog):
    with pytest.raises(InvalidParameter):
        H.hardy_norm(Poly([1.0]), -2.0, ulog)
    with pytest.raises(InvalidParameter):
        H.hardy_norm(Poly([1.0]), 2.0, X.make_example("phim", 0.75))


# ---------------------------------------------------------------------------
# harmonic majorants
# ---------------------------------------------------------------------------


def test_majorant_of_one_minus_z():
    maj = H.least_harmonic_majorant(Poly([1.0, -1.0]), 2.0)
    # |1-z|^2 = 1 - 2 Re z + |z|^2 <= 2 - 2 Re z, harmonic, equality a.e.
    assert abs(maj.h0 - 2.0) < 1e-12
    assert abs(maj.value_at(0.3 + 0.4j) - (2.0 - 0.6)) < 1e-9
    zs = 0.8 * np.exp(1j * np.arange(16) * (TWO_PI / 16))
    gap = [maj.value_at(z) - abs(1.0 - z) ** 2 for z in zs]
    assert min(gap) > 0.0


def test_majorant_h0_matches_classical_power():
    f = Poly([0.5, 0.0, 1.0])
    maj = H.least_harmonic_majorant(f, 2.0)
    assert abs(maj.h0 - maj.classical_power) < 1e-10


def test_majorant_refuses_divergent_power():
    with pytest.raises(H.NoMajorant):
        H.least_harmonic_majorant(AffinePower(1.0, -0.6), 2.0)


# ---------------------------------------------------------------------------
# conformal pullback
# ---------------------------------------------------------------------------


def test_pullback_norm_is_invariant(ulog):
    mob = MoebiusAutomorphism(a=0.3)
    direct = H.hardy_norm(Poly([0.0, 1.0]), 2.0, ulog)
    pulled = H.conformal_pullback_norm(Poly([0.0, 1.0]), ulog, mob, 2.0)
    assert pulled.verdict == "MEMBER"
    assert abs(pulled.value - direct.value) / direct.value < 5e-3
    assert pulled.agreement < 5e-3


def test_pullback_rejects_non_automorphism(ulog):
    class Junk:
        forward = staticmethod(lambda z: z * z)

    with pytest.raises(H.InvalidMap):
        H.conformal_pullback_norm(Poly([0.0, 1.0]), ulog, Junk(), 2.0)


# ---------------------------------------------------------------------------
# comparison propositions
# ---------------------------------------------------------------------------


def test_comparison_scaled_log(ulog):
    u2 = X.scaled_exhaustion(2.0, ulog)
    rep = H.comparison_checks(u2, ulog, 2.0)
    assert rep["ok"]
    assert rep["hypothesis"]["status"] == "OK"
    for row in rep["order"]["rows"]:
        assert row["ok"], row["f"]
        assert abs(row["pairing_u"] - 2.0 * row["pairing_v"]) \
            <= 1e-5 * row["pairing_u"]
    # V = 1 for the log weight and P(0, .) = 1, so the sharp constant is 1
    assert abs(rep["point_bound"]["s"] - 1.0) < 1e-12
    assert rep["point_bound"]["ok"]
    assert rep["reverse"]["ok"]
    assert abs(rep["reverse"]["fitted_c"] - 0.5) < 1e-5


def test_comparison_detects_false_hypothesis(ulog):
    # b*v <= u reads 0.5*log <= 2*log, false everywhere inside the disk
    # (both sides are negative), and the order conclusion would be false
    # too: the pairings scale by 2, not by 0.5
    u2 = X.scaled_exhaustion(2.0, ulog)
    rep = H.comparison_checks(u2, ulog, 0.5)
    assert rep["hypothesis"]["status"] == "HYPOTHESIS_FAILED"
    assert rep["hypothesis"]["margin"] < 0.0
    assert rep["order"]["ok"] is None
    assert all(row["ok"] is None for row in rep["order"]["rows"])
    assert not rep["ok"]
