import math
import sys
import time

sys.path.insert(0, "src")
from pshardy import exhaustion as ex
from pshardy import hardy as hd
from pshardy.factorization import AffinePower, Poly

ulog = ex.radial_log()

t0 = time.time()
rep = hd.hardy_norm(Poly([1.0]), 2.0, ulog)
print("f=1 log:", rep.verdict, "value", rep.value,
      "routes", rep.route_values(), "agree", rep.agreement,
      "classical", rep.classical_norm, f"({time.time()-t0:.1f}s)")
assert rep.verdict == "MEMBER"
assert abs(rep.value - 1.0) < 1e-9

t0 = time.time()
rep = hd.hardy_norm(Poly([0.0, 1.0]), 2.0, ulog)
print("f=z log:", rep.verdict, "value", rep.value,
      "routes", rep.route_values(), "agree", rep.agreement,
      f"({time.time()-t0:.1f}s)")
print("  ladder tail:", rep.ladder[-3:], "unc", rep.ladder_uncertainty,
      "gamma", rep.fitted_exponent, "monotone", rep.monotone)

# u05: infinite Riesz mass
u05 = ex.make_example("um", m=0.5)
t0 = time.time()
rep = hd.hardy_norm(Poly([1.0]), 2.0, u05)
print("f=1 u05:", rep.verdict, "routes", rep.route_values(),
      "statuses", rep.statuses, "notes", rep.notes, f"({time.time()-t0:.1f}s)")
assert rep.verdict == "NOT_MEMBER"

t0 = time.time()
rep = hd.hardy_norm(AffinePower(0.5, 1.0), 2.0, u05)
print("0.5(1-z) u05:", rep.verdict, "value", rep.value,
      "routes", rep.route_values(), "agree", rep.agreement,
      "notes", rep.notes, f"({time.time()-t0:.1f}s)")
