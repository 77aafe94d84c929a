import math
import sys
import time

import numpy as np

sys.path.insert(0, "src")
from pshardy import exhaustion as ex
from pshardy import factorization as fz
from pshardy.factorization import BlaschkeProduct, Poly

ulog = ex.radial_log()
u075 = ex.make_example("um", m=0.75)

# --- u_inner for log: V = 1, phi should be constant 1 ---
t0 = time.time()
cand = fz.u_inner(ulog)
print("u_inner log: norm", cand.norm_value, "flat max dev",
      float(np.nanmax(np.abs(cand.flatness[cand.clean_mask] - 1.0))),
      f"({time.time()-t0:.1f}s)")

# --- u_inner for um(0.75): |phi*|^2 V should flatten to 1 off the spike ---
t0 = time.time()
cand = fz.u_inner(u075)
mask = cand.clean_mask
dev = float(np.nanmax(np.abs(cand.flatness[mask] - 1.0)))
print("u_inner u075: norm", cand.norm_value, "flat max dev", dev,
      "clean frac", float(np.mean(mask)), f"({time.time()-t0:.1f}s)")
print("  report verdict:", cand.norm_report.verdict,
      "agreement", cand.norm_report.agreement)

# --- divide_by_blaschke: f = z = B * 1, norms preserved under log ---
t0 = time.time()
rep = fz.divide_by_blaschke(Poly([0.0, 1.0]), 2.0, ulog)
print("divide z/B log:", {k: rep[k] for k in rep
                          if k in ("blaschke", "n_zeros", "gap")},
      f"({time.time()-t0:.1f}s)")

# --- beurling isometry: multiplier carries H^2 isometrically ---
t0 = time.time()
cand_log = fz.u_inner(ulog)
chk = fz.beurling_isometry_check(cand_log, ulog)
print("beurling log:", [(e["label"], e["relative_gap"]) for e in chk["entries"]],
      "ok", chk["ok"], f"({time.time()-t0:.1f}s)")
