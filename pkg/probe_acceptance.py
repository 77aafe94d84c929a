import math
import sys
import time

import numpy as np

sys.path.insert(0, "src")
from pshardy import exhaustion as X
from pshardy import hardy as H
from pshardy.exhaustion import djl_both_sides
from pshardy.factorization import AffinePower, BlaschkeProduct, Poly, Product
from pshardy.geometry import integrate_boundary_arc
from pshardy.potential import RieszMeasure

u075 = X.make_example("um", 0.75)
u05 = X.make_example("um", 0.5)
ulog = X.radial_log()

print("=== criterion 4: membership matrix, p in {1, 2} ===")
rows = [
    ("u05  [0.5(1-z)]^2   p=1", AffinePower(0.5, 2.0), 1.0, u05, "MEMBER"),
    ("u05  0.5(1-z)       p=2", AffinePower(0.5, 1.0), 2.0, u05, "MEMBER"),
    ("u05  1              p=1", Poly([1.0]), 1.0, u05, "NOT_MEMBER"),
    ("u05  1              p=2", Poly([1.0]), 2.0, u05, "NOT_MEMBER"),
    ("u075 (1-z)          p=1", AffinePower(1.0, 1.0), 1.0, u075, "MEMBER"),
    ("u075 (1-z)^0.5      p=2", AffinePower(1.0, 0.5), 2.0, u075, "MEMBER"),
    ("u075 (1-z)^-0.6     p=1", AffinePower(1.0, -0.6), 1.0, u075, "NOT_MEMBER"),
    ("u075 (1-z)^-0.3     p=2", AffinePower(1.0, -0.3), 2.0, u075, "NOT_MEMBER"),
]
for name, f, p, u, want in rows:
    t0 = time.time()
    rep = H.hardy_norm(f, p, u)
    mark = "OK " if rep.verdict == want else "BAD"
    print(f"{mark} {name}: {rep.verdict} (want {want}) "
          f"statuses={rep.statuses} notes={rep.notes} ({time.time()-t0:.1f}s)")

print("=== criterion 6: Blaschke isometry ===")
B = BlaschkeProduct([0.5, 0.3j])
for u, ulabel in ((ulog, "log"), (u075, "u075")):
    for f in (Poly([1.0]), Poly([1.0, -1.0])):
        t0 = time.time()
        direct = H.hardy_norm(f, 2.0, u)
        prod = H.hardy_norm(Product(B, f), 2.0, u)
        gap = abs(prod.value - direct.value) / direct.value
        print(f"  {ulabel} f={f.label}: |Bf|={prod.value:.8f} "
              f"|f|={direct.value:.8f} gap={gap:.2e} "
          f"verdicts {prod.verdict}/{direct.verdict} ({time.time()-t0:.1f}s)")

print("=== criterion 2: DJL identity ===")
v_sq = lambda z: np.abs(np.asarray(z, dtype=complex)) ** 2
lap_sq = lambda z: np.full(np.asarray(z).shape, 2.0 / math.pi)
for c in (-1.5, -1.0, -0.5, -0.1):
    out = djl_both_sides(ulog, v_sq, lap_sq, c)
    tgt = math.exp(2.0 * c)
    print(f"  log c={c}: lhs={out['lhs']:.10f} rhs={out['rhs']:.10f} "
          f"e^2c={tgt:.10f} |lhs-t|={abs(out['lhs']-tgt):.2e} "
          f"|rhs-t|={abs(out['rhs']-tgt):.2e}")

v_abs = lambda z: np.abs(1.0 - np.asarray(z, dtype=complex))
def lap_abs(z):
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore"):
        return 1.0 / (4.0 * math.pi * np.abs(1.0 - z))
for c in (-0.02, -0.01):
    t0 = time.time()
    out = djl_both_sides(u075, v_abs, lap_abs, c,
                         v_singularities=(1.0 + 0.0j,))
    rel = abs(out["residual"]) / max(abs(out["lhs"]), 1e-300)
    print(f"  u075 c={c}: lhs={out['lhs']:.8f} rhs={out['rhs']:.8f} "
          f"rel={rel:.2e} statuses={out['statuses']} ({time.time()-t0:.1f}s)")

print("=== criterion 8: demailly density integral vs mass ===")
green = X.green_exhaustion(RieszMeasure(atoms=((0.3 + 0.0j, 1.0),)))
for spec, c, label in ((green, -0.5, "green(0.3)"), (u075, -0.2, "u075")):
    t0 = time.time()
    dm = spec.demailly(c, samples=512)
    rel = dm.mass_balance_residual() / dm.total_mass
    print(f"  {label} c={c}: mass={dm.total_mass:.8f} "
          f"curve={dm.mass_from_curve():.8f} rel={rel:.2e} "
          f"({time.time()-t0:.1f}s)")

print("=== criterion 9: scaling exactness on route-bulk ===")
u2 = X.scaled_exhaustion(2.0, ulog)
for f in (Poly([1.0]), Poly([0.0, 1.0]), Poly([1.0, -1.0]),
          Poly([0.25, 0.0, 1.0])):
    a = H._route_bulk(f, 2.0, u2)
    b = H._route_bulk(f, 2.0, ulog)
    print(f"  {f.label}: 2u={a.value!r} u={b.value!r} "
          f"ratio-2={a.value/b.value - 2.0:.3e}")

print("=== criterion 10: weak-* at c=-1e-3 ===")
re_fn = lambda z: np.real(np.asarray(z, dtype=complex))
w075 = H.boundary_weight(u075)
bdry = integrate_boundary_arc(
    lambda t: np.cos(t) * np.asarray(w075.at(t), dtype=float),
    tol_abs=1e-9, tol_rel=1e-6, singular_points=(0.0,))
t0 = time.time()
dm = u075.demailly(-1e-3, samples=512)
lhs = dm.pair_spectral(re_fn)
print(f"  u075: level={lhs:.8f} boundary={bdry.value:.8f} "
      f"abs={abs(lhs-bdry.value):.4f} rel={abs(lhs-bdry.value)/abs(bdry.value):.4f} "
      f"({time.time()-t0:.1f}s)")
# rate evidence: the same gap at the neighboring dyadic levels
for c in (-2.0 ** -8, -2.0 ** -10, -2.0 ** -12):
    dmc = u075.demailly(c, samples=512)
    g = abs(dmc.pair_spectral(re_fn) - bdry.value)
    print(f"    gap at c={c:.6g}: {g:.5f}  gap/|c|^(1/3)={g/abs(c)**(1/3.0):.4f}")
# the radial/green sanity versions at the same level
t0 = time.time()
dmg = green.demailly(-1e-3, samples=512)
lhs_g = dmg.pair_spectral(re_fn)
print(f"  green(0.3): level={lhs_g:.8f} boundary=0.3 "
      f"abs={abs(lhs_g-0.3):.2e} ({time.time()-t0:.1f}s)")
dml = ulog.demailly(-1e-3, samples=512)
print(f"  log: level={dml.pair_spectral(re_fn):.2e} boundary=0")
