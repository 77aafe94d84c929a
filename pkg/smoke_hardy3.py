import json
import math
import sys
import time

sys.path.insert(0, "src")
from pshardy import exhaustion as ex
from pshardy import hardy as hd
from pshardy.factorization import AffinePower, Poly

u075 = ex.make_example("um", m=0.75)

t0 = time.time()
rep = hd.hardy_norm(Poly([1.0]), 2.0, u075)
print("f=1 u075:", rep.verdict, "value", rep.value,
      "routes", rep.route_values(), "agree", rep.agreement,
      f"({time.time()-t0:.1f}s)")
print("  ladder:", [(f"{c:g}", f"{v:.8f}") for c, v in rep.ladder])
print("  unc", rep.ladder_uncertainty, "gamma", rep.fitted_exponent)

t0 = time.time()
fzz = Poly([0.0, 1.0, -1.0])  # z(1-z)
rep2 = hd.hardy_norm(fzz, 2.0, u075)
print("z(1-z) u075:", rep2.verdict, "value", rep2.value,
      "routes", rep2.route_values(), "agree", rep2.agreement,
      f"({time.time()-t0:.1f}s)")
oracle = 0.059616203246372616
for name, v in rep2.route_values().items():
    if v is not None and math.isfinite(v):
        print(f"  {name}: {v:.12f} vs {oracle:.12f} rel {abs(v-oracle)/oracle:.2e}")

t0 = time.time()
fhalf = AffinePower(1.0, 0.5)  # (1-z)^{1/2}
rep3 = hd.hardy_norm(fhalf, 2.0, u075)
print("(1-z)^0.5 u075:", rep3.verdict, "value", rep3.value,
      "routes", rep3.route_values(), "agree", rep3.agreement,
      f"({time.time()-t0:.1f}s)")

t0 = time.time()
fneg = AffinePower(1.0, -0.3)  # (1-z)^{-0.3}: classical member, not u075-member
rep4 = hd.hardy_norm(fneg, 2.0, u075)
print("(1-z)^-0.3 u075:", rep4.verdict, "statuses", rep4.statuses,
      "classical", rep4.classical_norm, "notes", rep4.notes,
      f"({time.time()-t0:.1f}s)")
assert rep4.verdict == "NOT_MEMBER"
assert math.isfinite(rep4.classical_norm)

# p = 1 on a traced family: level route must be skipped
t0 = time.time()
rep5 = hd.hardy_norm(Poly([0.0, 1.0]), 1.0, u075)
print("f=z p=1 u075:", rep5.verdict, "routes_run", rep5.routes_run,
      "value", rep5.value, "agree", rep5.agreement, "notes", rep5.notes,
      f"({time.time()-t0:.1f}s)")

# json round-trip
js = json.dumps(rep2.to_json_dict(), indent=1)
print("json ok:", len(js), "bytes;  verdict field:",
      json.loads(js)["verdict"], " inf encodes as:",
      json.loads(json.dumps(rep4.to_json_dict()))["routes"]["bulk"]["value"])

# membership bundle
mv = hd.membership_verdict(Poly([1.0]), 2.0, u075)
print("bundle:", mv["verdict"], mv["norm"], mv["classical"]["finite"],
      mv["weight"]["label"])
