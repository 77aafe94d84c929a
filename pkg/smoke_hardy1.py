import math
import numpy as np
import sys

sys.path.insert(0, "src")
from pshardy import exhaustion as ex
from pshardy import hardy as hd

# --- V oracles for um(0.75) and um(0.5) ---
u075 = ex.make_example("um", m=0.75)
w = hd.boundary_weight(u075, samples=2048)
print("V075(pi)   ", w.at(math.pi), "vs 0.01735290655272462",
      abs(w.at(math.pi) - 0.01735290655272462))
print("V075(pi/2) ", w.at(math.pi / 2), "vs 0.033508405528991064",
      abs(w.at(math.pi / 2) - 0.033508405528991064))
print("V075(0.2)  ", w.at(0.2), "vs 0.614814105615494",
      abs(w.at(0.2) - 0.614814105615494))
print("mass       ", w.mass_of_laplacian, "vs 0.20865671041851824")
print("fubini     ", w.fubini_residual)
print("log_int    ", w.log_integrable)
print("sing       ", w.singular_thetas)
print("values[0] is inf:", w.values[0])
print("at(0.0)    ", w.at(0.0))
print("constancy  ", w.constancy())

u05 = ex.make_example("um", m=0.5)
w5 = hd.boundary_weight(u05, samples=2048)
print("V05(pi)    ", w5.at(math.pi), "vs 0.02963475158897719",
      abs(w5.at(math.pi) - 0.02963475158897719))
print("mass05     ", w5.mass_of_laplacian)
print("fubini05   ", w5.fubini_residual)
print("logint05   ", w5.log_integrable)

# --- radial log: V identically 1 ---
ulog = ex.radial_log()
wl = hd.boundary_weight(ulog, samples=2048)
print("Vlog const ", wl.values.min(), wl.values.max(), wl.constancy())
print("Vlog fubini", wl.fubini_residual, "logint", wl.log_integrable)

# --- radial smooth (density 2r): V identically 2/3 ---
urad = ex.radial_smooth(lambda s: 2.0 * s, "radial-cubic")
wr = hd.boundary_weight(urad, samples=2048)
print("Vrad       ", wr.values[0], "vs", 2.0 / 3.0, "fubini", wr.fubini_residual)

# --- arc mass sanity: whole circle = mass ---
am = w.arc_mass(0.0, 2 * math.pi)
print("arc full   ", am, "vs mass", abs(am - w.mass_of_laplacian))
half = w.arc_mass(0.0, math.pi) + w.arc_mass(math.pi, 2 * math.pi)
print("arc halves ", half, abs(half - w.mass_of_laplacian))
