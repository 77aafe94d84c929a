import math
import sys
import time

import numpy as np

sys.path.insert(0, "src")
from pshardy import exhaustion as ex
from pshardy import hardy as hd
from pshardy.factorization import Poly
from pshardy.geometry import MoebiusAutomorphism

ulog = ex.radial_log()

# --- least harmonic majorant of |1-z|^2: h = 2 - 2 Re z, h(0) = 2 ---
f = Poly([1.0, -1.0])
maj = hd.least_harmonic_majorant(f, 2.0)
print("majorant h0:", maj.h0, "vs 2")
print("majorant at 0:", maj.value_at(0.0))
print("majorant at .3+.4i:", maj.value_at(0.3 + 0.4j),
      "vs", 2.0 - 2.0 * 0.3)
print("classical_power:", maj.classical_power)
assert abs(maj.h0 - 2.0) < 1e-12
assert abs(maj.value_at(0.3 + 0.4j) - 1.4) < 1e-9

# domination: h >= |f|^2 on a grid
zs = (np.linspace(0.05, 0.95, 7)[:, None]
      * np.exp(1j * np.arange(12) * (2 * math.pi / 12))[None, :]).ravel()
hv = np.array([maj.value_at(z) for z in zs])
fv = np.abs(np.polyval([-1.0, 1.0], zs)) ** 2
print("majorant domination min gap:", float(np.min(hv - fv)))

# NoMajorant for a divergent boundary mean
from pshardy.factorization import AffinePower
try:
    hd.least_harmonic_majorant(AffinePower(1.0, -0.6), 2.0)
    print("NoMajorant MISSED")
except hd.NoMajorant as exc:
    print("NoMajorant raised ok:", str(exc)[:60])

# --- conformal pullback: f=z, u=log, automorphism a=0.3 ---
mob = MoebiusAutomorphism(a=0.3)
t0 = time.time()
direct = hd.hardy_norm(Poly([0.0, 1.0]), 2.0, ulog)
pulled = hd.conformal_pullback_norm(Poly([0.0, 1.0]), ulog, mob, 2.0)
print("pullback:", pulled.verdict, "value", pulled.value,
      "vs direct", direct.value,
      "rel", abs(pulled.value - direct.value) / direct.value,
      f"({time.time()-t0:.1f}s)")
print("  routes:", pulled.route_values(), "statuses", pulled.statuses)
print("  notes:", pulled.notes)

# InvalidMap on a non-automorphism
class Junk:
    forward = staticmethod(lambda z: z ** 2)
try:
    hd.conformal_pullback_norm(Poly([0.0, 1.0]), ulog, Junk(), 2.0)
    print("InvalidMap MISSED")
except hd.InvalidMap as exc:
    print("InvalidMap raised ok:", str(exc)[:50])

# --- comparison checks: u = 2*log vs v = log with b = 2 ---
u2 = ex.scaled_exhaustion(2.0, ulog)
t0 = time.time()
repc = hd.comparison_checks(u2, ulog, 2.0)
print("comparison ok:", repc["ok"], f"({time.time()-t0:.1f}s)")
print("  hypothesis:", repc["hypothesis"])
print("  order rows:", [(r["f"], round(r["pairing_u"], 8),
                         round(r["pairing_v"], 8), r["ok"])
                        for r in repc["order"]["rows"]])
print("  point s:", repc["point_bound"]["s"],
      "ok", repc["point_bound"]["ok"])
print("  reverse c:", repc["reverse"]["fitted_c"],
      "ok", repc["reverse"]["ok"])
