"""Domain geometry and adaptive quadrature on the unit disk.

Every quantity in this package (Riesz masses, Green potentials, boundary
weights, Hardy norms) reduces to integrals over the open unit disk or its
boundary circle whose integrands carry a small list of known singular
points.  The engine in this module integrates vectorized densities with
declared singularities, grades dyadically toward each one, extrapolates
geometric tails, and converts non-decaying tail behaviour into an explicit
DIVERGENT verdict instead of a floating-point blowup.

Conventions
-----------
Area integrals are taken against plain Lebesgue measure dA = dx dy.
Boundary integrals are taken against normalized arclength nu with
nu(unit circle) = 1.  Callers that store Laplacians in the normalization
Lambda = (1/2pi) * Delta fold the 1/2pi into their densities.

All integrand callbacks must accept numpy arrays (complex positions for
area densities, angles in radians for boundary densities) and return
float arrays of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CONVERGED",
    "DIVERGENT",
    "INCONCLUSIVE",
    "QuadratureResult",
    "DiskDomain",
    "MoebiusAutomorphism",
    "integrate_interval",
    "integrate_boundary_arc",
    "integrate_disk_area",
]

CONVERGED = "CONVERGED"
DIVERGENT = "DIVERGENT"
INCONCLUSIVE = "INCONCLUSIVE"

# Engine constants.  The divergence verdict is heuristic but reproducible:
# a dyadic tail whose last DIVERGENCE_SHELLS shell-to-shell ratios all stay
# above DIVERGENCE_RATIO fails the Cauchy test (log-divergent integrands
# give ratio -> 1, power divergences give ratio > 1), while any convergent
# algebraic singularity in this package decays with ratio <= 2**-0.1 ~ 0.93.
DEFAULT_TOL_ABS = 1e-6
DEFAULT_TOL_REL = 1e-6
DEFAULT_BUDGET = 2 ** 22
DIVERGENCE_RATIO = 0.96
DIVERGENCE_SHELLS = 6
BLOWUP_FACTOR = 1e9
TAIL_RATIO_MAX = 0.94   # extrapolate a geometric tail only below this ratio
MAX_DYADIC_DEPTH = 60

# Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15 values).
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])
# Full 15-point node vector, ascending.
_NODES15 = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_W15 = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
# Gauss-7 uses nodes 1,3,5,7,9,11,13 of the 15-point vector.
_G7_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
_W7 = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])


class _Divergent(Exception):
    """Raised internally when a dyadic tail fails the Cauchy test."""


class _BudgetExceeded(Exception):
    pass


class _Counter:
    __slots__ = ("n", "budget")

    def __init__(self, budget: int):
        self.n = 0
        self.budget = budget

    def charge(self, k: int) -> None:
        self.n += k
        if self.n > self.budget:
            raise _BudgetExceeded()


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of one adaptive integral.

    value is the best available estimate (a partial sum when status is
    DIVERGENT), error the estimated absolute error (inf when DIVERGENT),
    status one of CONVERGED / DIVERGENT / INCONCLUSIVE, and depth the
    maximal dyadic subdivision depth that was reached.
    """

    value: float
    error: float
    status: str
    depth: int

    def to_json_dict(self) -> dict:
        return {
            "value": self.value if math.isfinite(self.value) else None,
            "error": self.error if math.isfinite(self.error) else None,
            "status": self.status,
            "depth": self.depth,
        }


class DiskDomain:
    """The open unit disk with its boundary circle and sampling helpers."""

    radius = 1.0

    @staticmethod
    def contains(z) -> np.ndarray:
        return np.abs(np.asarray(z)) < 1.0

    @staticmethod
    def interior_grid(n: int, margin: float = 1e-3) -> np.ndarray:
        """Cartesian sample points strictly inside the disk."""
        t = np.linspace(-1.0 + margin, 1.0 - margin, n)
        x, y = np.meshgrid(t, t)
        z = (x + 1j * y).ravel()
        return z[np.abs(z) < 1.0 - margin]

    @staticmethod
    def boundary_grid(n: int) -> np.ndarray:
        """n equally spaced boundary points exp(i theta_j), theta_j = 2 pi j / n."""
        return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class MoebiusAutomorphism:
    """Disk automorphism z -> e^{i rot} (z - a) / (1 - conj(a) z).

    Carries the closed-form inverse and derivative plus bounds for |phi'|^2
    on a closed sub-disk, which is what pullback arguments consume.
    """

    a: complex = 0.0
    rot: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise ValueError("automorphism center must lie in the open disk")

    def forward(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.rot) * (z - self.a) / (1.0 - np.conj(self.a) * z)

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        ew = w * np.exp(-1j * self.rot)
        return (ew + self.a) / (1.0 + np.conj(self.a) * ew)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.rot) * (1.0 - abs(self.a) ** 2) / (1.0 - np.conj(self.a) * z) ** 2

    def jacobian_bounds(self, r: float) -> tuple[float, float]:
        """(m, M) with m <= |phi'|^2 <= M on |z| <= r < 1."""
        if not 0.0 <= r < 1.0:
            raise ValueError("need 0 <= r < 1")
        s = 1.0 - abs(self.a) ** 2
        lo = (s / (1.0 + abs(self.a) * r) ** 2) ** 2
        hi = (s / (1.0 - abs(self.a) * r) ** 2) ** 2
        return lo, hi

    def roundtrip_residual(self, n: int = 64) -> float:
        z = DiskDomain.interior_grid(n)
        return float(np.max(np.abs(self.inverse(self.forward(z)) - z)))


# ---------------------------------------------------------------------------
# 1D adaptive Gauss-Kronrod engine with dyadic singular tails.
# ---------------------------------------------------------------------------


def _gk_batch(f, lows, highs, counter):
    """Gauss-Kronrod 7-15 on a batch of panels.  Returns (values, errors).

    When the integrand carries a truthy ``wants_node_weights`` attribute it
    is handed its exact per-node quadrature weights on ``f._node_weights``
    just before each call, so it can fold its own internal evaluation errors
    into a correctly measured error integral.
    """
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    mid = 0.5 * (lows + highs)
    half = 0.5 * (highs - lows)
    nodes = mid[:, None] + half[:, None] * _NODES15[None, :]
    counter.charge(nodes.size)
    if getattr(f, "wants_node_weights", False):
        f._node_weights = (half[:, None] * _W15[None, :]).ravel()
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        vals = np.where(bad, 0.0, vals)
    k15 = half * (vals @ _W15)
    g7 = half * (vals[:, _G7_IDX] @ _W7)
    err = np.abs(k15 - g7)
    if bad.any():
        err = np.where(bad.any(axis=1), np.inf, err)
    return k15, err


def _geometric_tail(shells) -> tuple[float, float] | None:
    """Best geometric-tail fit (tail, error) for a dyadic shell sequence.

    Returns None when the last shells do not decay cleanly.  The ratio is
    Aitken-extrapolated when four shells are available, since dyadic shells
    of an algebraic singularity have ratios r_j = r (1 + O(2^-j)).
    """
    if len(shells) < 3:
        return None
    last = shells[-1]
    mags = [abs(v) for v in shells[-4:]]
    if mags[-2] < 1e-300:
        return 0.0, abs(last)
    signs = {v > 0 for v in shells[-3:] if v != 0}
    if len(signs) > 1:
        return None
    ratios = [mags[i + 1] / max(mags[i], 1e-300) for i in range(len(mags) - 1)]
    if any(r >= TAIL_RATIO_MAX for r in ratios[-2:]):
        return None
    r_hat = ratios[-1]
    drift = abs(ratios[-1] - ratios[-2])
    if len(ratios) >= 3:
        d1, d2 = ratios[-2] - ratios[-3], ratios[-1] - ratios[-2]
        den = d2 - d1
        if abs(den) > 1e-14:
            r_ext = ratios[-1] - d2 * d2 / den
            if 0.0 < r_ext < TAIL_RATIO_MAX:
                drift = abs(r_ext - r_hat)
                r_hat = r_ext
    tail = last * r_hat / (1.0 - r_hat)
    err = abs(tail) * (3.0 * drift / max(1.0 - r_hat, 1e-6) + 1e-6) + abs(last) * 1e-12
    return tail, err


class _Attractor:
    """Bookkeeping for one singular point being approached dyadically."""

    __slots__ = ("anchor", "shells", "resolved", "tail", "tail_err", "panel_key")

    def __init__(self, anchor: float):
        self.anchor = anchor
        self.shells: list[float] = []
        self.resolved = False
        self.tail = 0.0
        self.tail_err = np.inf
        self.panel_key = None

    @property
    def has_tail(self) -> bool:
        return math.isfinite(self.tail_err)

    def push_shell(self, value: float) -> None:
        self.shells.append(value)

    def check_divergent(self, scale: float) -> bool:
        s = self.shells
        if len(s) < DIVERGENCE_SHELLS + 1:
            return False
        recent = s[-(DIVERGENCE_SHELLS + 1):]
        floor = max(1e-13 * scale, 1e-280)
        if any(abs(v) <= floor for v in recent):
            return False
        signs = {1 if v > 0 else -1 for v in recent}
        if len(signs) > 1:
            return False
        ratios = [abs(recent[i + 1] / recent[i]) for i in range(DIVERGENCE_SHELLS)]
        return all(r >= DIVERGENCE_RATIO for r in ratios)

    def try_tail(self, target: float) -> None:
        fit = _geometric_tail(self.shells)
        if fit is None:
            self.tail, self.tail_err = 0.0, np.inf
            self.resolved = False
            return
        self.tail, self.tail_err = fit
        self.resolved = self.tail_err <= target


def integrate_interval(
    f,
    a: float,
    b: float,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    singular_left: bool = False,
    singular_right: bool = False,
    interior_singularities=(),
    split_points=(),
    budget: int = DEFAULT_BUDGET,
    counter: "_Counter | None" = None,
) -> QuadratureResult:
    """Adaptive integral of a vectorized callable over [a, b].

    Declared singular endpoints and interior singular points are approached
    through dyadic shells whose contributions are monitored: cleanly
    decaying tails are extrapolated geometrically, non-decaying tails
    produce status DIVERGENT.  Undeclared trouble is still handled by plain
    bisection adaptivity but may end INCONCLUSIVE.

    Parameters
    ----------
    f : callable
        Vectorized integrand, f(ndarray) -> ndarray.
    a, b : float
        Endpoints, a < b.
    singular_left, singular_right : bool
        Declare an endpoint singularity.
    interior_singularities : iterable of float
        Interior singular abscissae (each becomes a two-sided attractor).
    split_points : iterable of float
        Non-singular breakpoints (kinks) to seed the initial partition.
    """
    if not b > a:
        raise ValueError("need a < b")
    own_counter = counter is None
    counter = counter or _Counter(budget)
    span = b - a

    interior = sorted({float(s) for s in interior_singularities if a < s < b})
    breaks = {a, b}
    breaks.update(interior)
    breaks.update(float(s) for s in split_points if a < s < b)

    attractors: list[_Attractor] = []
    anchor_set = set()
    if singular_left:
        attractors.append(_Attractor(a))
        anchor_set.add(a)
    if singular_right:
        attractors.append(_Attractor(b))
        anchor_set.add(b)
    for s in interior:
        attractors.append(_Attractor(s))
        attractors.append(_Attractor(s))  # left and right side share the anchor
        anchor_set.add(s)

    pts = sorted(breaks)
    # ensure every panel touches at most one anchor: split panels whose both
    # ends are anchors at their midpoint
    refined = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo in anchor_set and hi in anchor_set:
            refined.append((lo, 0.5 * (lo + hi)))
            refined.append((0.5 * (lo + hi), hi))
        else:
            refined.append((lo, hi))

    # panel records: [lo, hi, value, gk_error, depth, attractor_index]
    panels: list[list] = []

    def _attractor_for(lo: float, hi: float) -> int:
        for idx, att in enumerate(attractors):
            if att.panel_key is not None:
                continue
            if att.anchor == lo or att.anchor == hi:
                att.panel_key = (lo, hi)
                return idx
        return -1

    # assign attractor ownership: each attractor adopts the unique panel it
    # anchors; interior anchors own one panel on each side
    seeds = []
    for lo, hi in refined:
        idx = -1
        for j, att in enumerate(attractors):
            if att.panel_key is None and (att.anchor == lo or att.anchor == hi):
                att.panel_key = (lo, hi)
                idx = j
                break
        seeds.append([lo, hi, 0.0, np.inf, 0, idx])

    try:
        vals, errs = _gk_batch(f, [p[0] for p in seeds], [p[1] for p in seeds], counter)
    except _BudgetExceeded:
        return QuadratureResult(float("nan"), float("inf"), INCONCLUSIVE, 0)
    for p, v, e in zip(seeds, vals, errs):
        p[2], p[3] = float(v), float(e)
    panels = seeds

    first_total = None
    max_depth = 0
    min_width = span * 1e-15

    def _totals():
        # A fitted geometric tail replaces the innermost (dyadic) panel of its
        # attractor, whether or not the fit already meets the local target;
        # dropping a fitted-but-slow tail would silently lose real mass.
        tot = sum(p[2] for p in panels if p[5] == -1 or not attractors[p[5]].has_tail)
        err = sum(p[3] for p in panels if p[5] == -1 or not attractors[p[5]].has_tail)
        for att in attractors:
            if att.has_tail:
                tot += att.tail
                err += att.tail_err
        return tot, err

    for _sweep in range(4096):
        total, err_sum = _totals()
        if first_total is None:
            first_total = abs(total)
        target = max(tol_abs, tol_rel * abs(total))

        scale = abs(total) + tol_abs
        if abs(total) > BLOWUP_FACTOR * max(first_total, tol_abs):
            return QuadratureResult(total, float("inf"), DIVERGENT, max_depth)
        for att in attractors:
            if att.check_divergent(scale):
                return QuadratureResult(total, float("inf"), DIVERGENT, max_depth)
            if not att.resolved:
                att.try_tail(target / (4.0 * max(len(attractors), 1)))
        total, err_sum = _totals()
        target = max(tol_abs, tol_rel * abs(total))
        if err_sum <= target:
            return QuadratureResult(total, err_sum, CONVERGED, max_depth)

        # choose panels to split: every unresolved attractor panel plus the
        # generic panels carrying the dominant error
        gen_errs = [p[3] for p in panels if p[5] == -1]
        thresh = 0.0
        if gen_errs:
            thresh = max(0.1 * max(gen_errs), target / (2.0 * len(panels) + 2.0))
        to_split = []
        for i, p in enumerate(panels):
            lo, hi, _v, e, depth, aidx = p
            if hi - lo <= min_width:
                continue
            if aidx >= 0:
                if not attractors[aidx].resolved and depth < MAX_DYADIC_DEPTH:
                    to_split.append(i)
            elif e > thresh:
                to_split.append(i)
        if not to_split:
            status = CONVERGED if err_sum <= 3.0 * target else INCONCLUSIVE
            return QuadratureResult(total, err_sum, status, max_depth)

        new_panels = []
        kept = [p for i, p in enumerate(panels) if i not in set(to_split)]
        child_bounds = []
        child_meta = []  # (depth, attractor_index_for_child or -1, shell_owner or None)
        for i in to_split:
            lo, hi, _v, _e, depth, aidx = panels[i]
            mid = 0.5 * (lo + hi)
            if aidx >= 0:
                att = attractors[aidx]
                if att.anchor == lo:
                    inner, outer = (lo, mid), (mid, hi)
                else:
                    inner, outer = (mid, hi), (lo, mid)
                child_bounds.append(outer)
                child_meta.append((depth + 1, -1, aidx))
                child_bounds.append(inner)
                child_meta.append((depth + 1, aidx, None))
            else:
                child_bounds.append((lo, mid))
                child_meta.append((depth + 1, -1, None))
                child_bounds.append((mid, hi))
                child_meta.append((depth + 1, -1, None))
        try:
            vals, errs = _gk_batch(
                f, [cb[0] for cb in child_bounds], [cb[1] for cb in child_bounds], counter
            )
        except _BudgetExceeded:
            total, err_sum = _totals()
            return QuadratureResult(total, err_sum, INCONCLUSIVE, max_depth)
        for (lo, hi), (depth, aidx, shell_owner), v, e in zip(
            child_bounds, child_meta, vals, errs
        ):
            max_depth = max(max_depth, depth)
            if shell_owner is not None:
                attractors[shell_owner].push_shell(float(v))
            kept.append([lo, hi, float(v), float(e), depth, aidx])
        panels = kept

    total, err_sum = _totals()
    return QuadratureResult(total, err_sum, INCONCLUSIVE, max_depth)


def integrate_boundary_arc(
    density,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    singular_points=(),
    budget: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """Integral of density(theta) over the circle against normalized arclength.

    density takes angles in radians (ndarray) and returns floats; the result
    is (1/2pi) * int_0^{2pi} density.  singular_points lists angles where the
    density blows up; each gets dyadic treatment from both sides (the circle
    is periodic, so an angle at 0 is graded from both 0+ and 2pi-).
    """
    two_pi = 2.0 * math.pi
    sing = sorted({float(t) % two_pi for t in singular_points})

    def wrapped(th):
        return np.asarray(density(th), dtype=float) / two_pi

    singular_left = singular_right = False
    interior = []
    for t in sing:
        if t < 1e-12 or two_pi - t < 1e-12:
            singular_left = singular_right = True
        else:
            interior.append(t)
    return integrate_interval(
        wrapped,
        0.0,
        two_pi,
        tol_abs=tol_abs,
        tol_rel=tol_rel,
        singular_left=singular_left,
        singular_right=singular_right,
        interior_singularities=interior,
        budget=budget,
    )


# ---------------------------------------------------------------------------
# Area integrals: polar coordinates about a chosen singular center, outer
# adaptivity in the angle, batched dyadic integration along each ray.
# ---------------------------------------------------------------------------


def _ray_lengths(z0: complex, phi: np.ndarray) -> np.ndarray:
    """Distance from z0 to the unit circle along direction exp(i phi)."""
    bcomp = np.real(np.conj(z0) * np.exp(1j * phi))
    disc = bcomp * bcomp + 1.0 - abs(z0) ** 2
    return -bcomp + np.sqrt(np.maximum(disc, 0.0))


def _radial_batch(gfun, n_nodes, singular_origin, tol_node, counter):
    """Integral over t in (0, 1) of gfun(t) for a batch of rays.

    gfun(t_vector) -> matrix (n_nodes, len(t)).  Returns (values, err) per
    node.  With singular_origin, dyadic shells toward t = 0 are accumulated
    with per-node geometric tail extrapolation; a non-decaying tail raises
    _Divergent.
    """
    t15 = 0.5 * (_NODES15 + 1.0)  # GK nodes mapped to (0,1)

    def shell_vals(lo, hi):
        ts = lo + (hi - lo) * t15
        counter.charge(n_nodes * ts.size)
        m = np.asarray(gfun(ts), dtype=float)
        m = np.where(np.isfinite(m), m, 0.0)
        half = 0.5 * (hi - lo)
        k15 = half * (m @ _W15)
        g7 = half * (m[:, _G7_IDX] @ _W7)
        return k15, np.abs(k15 - g7)

    if not singular_origin:
        # composite doubling on (0,1)
        prev = None
        for k in range(3, 11):
            npan = 2 ** k
            edges = np.linspace(0.0, 1.0, npan + 1)
            vals = np.zeros(n_nodes)
            errs = np.zeros(n_nodes)
            for lo, hi in zip(edges[:-1], edges[1:]):
                v, e = shell_vals(lo, hi)
                vals += v
                errs += e
            if prev is not None:
                diff = np.abs(vals - prev)
                eff = np.maximum(tol_node, 1e-9 * np.abs(vals))
                if np.all(np.maximum(diff, errs) <= eff):
                    return vals, np.maximum(diff, errs)
            prev = vals
        return vals, np.maximum(np.abs(vals - prev), errs)

    # dyadic shells toward t = 0
    total = np.zeros(n_nodes)
    err = np.zeros(n_nodes)
    hist = []
    resolved = np.zeros(n_nodes, dtype=bool)
    tails = np.zeros(n_nodes)
    tail_errs = np.full(n_nodes, np.inf)
    hi = 1.0
    for j in range(MAX_DYADIC_DEPTH):
        lo = hi * 0.5
        v, e = shell_vals(lo, hi)
        # refine a shell once if its internal GK error dominates
        if np.any(e > np.maximum(tol_node, 0.01 * np.abs(v) + 1e-300)):
            mid = 0.5 * (lo + hi)
            v1, e1 = shell_vals(lo, mid)
            v2, e2 = shell_vals(mid, hi)
            v, e = v1 + v2, e1 + e2
        total += np.where(resolved, 0.0, v)
        err += np.where(resolved, 0.0, e)
        hist.append(v)
        if len(hist) >= DIVERGENCE_SHELLS + 1:
            recent = np.stack(hist[-(DIVERGENCE_SHELLS + 1):])
            mags = np.abs(recent)
            floor = np.maximum(1e-13 * (np.abs(total) + tol_node), 1e-280)
            sig = np.all(mags > floor[None, :], axis=0)
            same_sign = np.all(recent > 0, axis=0) | np.all(recent < 0, axis=0)
            ratios = mags[1:] / np.maximum(mags[:-1], 1e-300)
            growing = np.all(ratios >= DIVERGENCE_RATIO, axis=0)
            if np.any(sig & same_sign & growing & ~resolved):
                raise _Divergent()
        if len(hist) >= 3:
            mags = np.abs(np.stack(hist[-4:]))  # (3 or 4, n_nodes)
            recent = np.stack(hist[-3:])
            same_sign = np.all(recent >= 0, axis=0) | np.all(recent <= 0, axis=0)
            with np.errstate(divide="ignore", invalid="ignore"):
                rr = mags[1:] / np.maximum(mags[:-1], 1e-300)
            r_hat = rr[-1]
            drift = np.abs(rr[-1] - rr[-2])
            if rr.shape[0] >= 3:
                d1, d2 = rr[-2] - rr[-3], rr[-1] - rr[-2]
                den = d2 - d1
                with np.errstate(divide="ignore", invalid="ignore"):
                    r_ext = np.where(np.abs(den) > 1e-14, rr[-1] - d2 * d2 / den, r_hat)
                use = (r_ext > 0.0) & (r_ext < TAIL_RATIO_MAX) & (np.abs(den) > 1e-14)
                drift = np.where(use, np.abs(r_ext - r_hat), drift)
                r_hat = np.where(use, r_ext, r_hat)
            ok = (rr[-1] < TAIL_RATIO_MAX) & (rr[-2] < TAIL_RATIO_MAX) & same_sign
            t_est = hist[-1] * r_hat / np.maximum(1.0 - r_hat, 1e-6)
            t_err = np.abs(t_est) * (3.0 * drift / np.maximum(1.0 - r_hat, 1e-6) + 1e-6) \
                + mags[-1] * 1e-12
            # fresh fit each sweep for the still-active nodes (the remainder
            # being extrapolated shrinks as shells are accumulated)
            tails = np.where(resolved, tails, np.where(ok, t_est, 0.0))
            tail_errs = np.where(resolved, tail_errs, np.where(ok, t_err, np.inf))
            eff_tol = np.maximum(tol_node, 1e-9 * np.abs(total))
            resolved = resolved | (ok & (t_err <= eff_tol))
            if np.all(resolved):
                break
        hi = lo
    total += tails
    last_mag = np.abs(hist[-1])
    err = err + np.where(
        np.isfinite(tail_errs),
        tail_errs,
        last_mag * TAIL_RATIO_MAX / (1.0 - TAIL_RATIO_MAX),
    )
    return total, err


def integrate_disk_area(
    density,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
    interior_singularities=(),
    boundary_singularities=(),
    radial_cut=None,
    density_polar=None,
    budget: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """Integral of density(z) over the unit disk against Lebesgue area.

    One polar center per integral: the first declared boundary singular
    point wins, else the first interior singular point, else the origin.
    Remaining declared interior singularities in this package are mild
    (logarithmic or weaker) and are handled by seeding the outer angular
    partition with their directions plus plain adaptivity.

    radial_cut, when given, maps an angle array to the fraction (0, 1] of
    each ray that actually supports the density; it lets disk-shaped
    supports (the lens through the chosen boundary center) be integrated
    without a discontinuous mask.

    density_polar, when given, is called as density_polar(center, rho, phi)
    with the distance and angle arrays from the polar center instead of
    density(z).  Densities whose value depends on the displacement from the
    center (for example a power of 1 - Re z around the center 1) lose all
    precision if they must recover rho from z = center + rho*e^{i phi};
    the polar form avoids that cancellation.
    """
    counter = _Counter(budget)
    interior = [complex(w) for w in interior_singularities]
    boundary = [complex(w) / abs(w) for w in boundary_singularities if abs(w) > 0]

    if boundary:
        z0 = boundary[0]
        theta0 = math.atan2(z0.imag, z0.real)
        phi_lo, phi_hi = theta0 + 0.5 * math.pi, theta0 + 1.5 * math.pi
        endpoint_singular = True
        origin_singular = True

        def ray_len(phi):
            return np.maximum(-2.0 * np.cos(phi - theta0), 0.0)

    elif interior:
        z0 = interior[0]
        phi_lo, phi_hi = 0.0, 2.0 * math.pi
        endpoint_singular = False
        origin_singular = True
        ray_len = lambda phi: _ray_lengths(z0, phi)
    else:
        z0 = 0.0 + 0.0j
        phi_lo, phi_hi = 0.0, 2.0 * math.pi
        endpoint_singular = False
        origin_singular = False
        ray_len = lambda phi: np.ones_like(np.asarray(phi, dtype=float))

    splits = []
    for w in interior:
        if w != z0:
            ang = math.atan2((w - z0).imag, (w - z0).real)
            while ang < phi_lo:
                ang += 2.0 * math.pi
            if phi_lo < ang < phi_hi:
                splits.append(ang)

    span = phi_hi - phi_lo
    tol_node = max(tol_abs, 1e-12) / (8.0 * span)
    inner_err_box = [0.0]

    def f_phi(phi):
        phi = np.asarray(phi, dtype=float)
        rr = ray_len(phi)
        if radial_cut is not None:
            rr = rr * np.clip(np.asarray(radial_cut(phi), dtype=float), 0.0, 1.0)
        alive = rr > 1e-300
        out = np.zeros_like(phi)
        if not np.any(alive):
            return out
        phi_a = phi[alive]
        rr_a = rr[alive]
        dirs = np.exp(1j * phi_a)

        def gfun(ts):
            rho = rr_a[:, None] * ts[None, :]
            if density_polar is not None:
                ph = np.broadcast_to(phi_a[:, None], rho.shape)
                f = np.asarray(density_polar(z0, rho, ph), dtype=float)
            else:
                z = z0 + rho * dirs[:, None]
                f = np.asarray(density(z.ravel()), dtype=float).reshape(z.shape)
            return f * rho * rr_a[:, None]

        vals, errs = _radial_batch(gfun, phi_a.size, origin_singular, tol_node, counter)
        # fold the per-node radial errors into the running error integral,
        # weighted by the exact outer quadrature weights (regions that get
        # re-evaluated during refinement are counted again, erring high)
        w = getattr(f_phi, "_node_weights", None)
        if w is not None and w.size == phi.size:
            inner_err_box[0] += float(np.sum(errs * np.abs(w[alive])))
        else:
            inner_err_box[0] += float(np.max(errs, initial=0.0)) * span
        out[alive] = vals
        return out

    f_phi.wants_node_weights = True

    try:
        res = integrate_interval(
            f_phi,
            phi_lo,
            phi_hi,
            tol_abs=tol_abs,
            tol_rel=tol_rel,
            singular_left=endpoint_singular,
            singular_right=endpoint_singular,
            split_points=splits,
            budget=budget,
            counter=counter,
        )
    except _Divergent:
        return QuadratureResult(float("nan"), float("inf"), DIVERGENT, 0)
    if res.status == DIVERGENT:
        return res
    err = res.error + inner_err_box[0] + tol_node * span
    status = res.status
    if status == CONVERGED and err > 10.0 * max(tol_abs, tol_rel * abs(res.value)):
        status = INCONCLUSIVE
    return QuadratureResult(res.value, err, status, res.depth)
