"""Analytic expressions on the disk and their factorizations.

The expression family covers polynomials, principal-branch affine powers
[a(1-z)]^beta, finite Blaschke products, outer functions built from boundary
log-modulus data, and products/quotients of these.  Every expression
evaluates on complex arrays, knows its derivative in closed form, exposes a
boundary trace, and reports the interior zeros that Blaschke division needs.

On top of the family sit the factorization routines: dividing out zeros by
a Blaschke product without changing the weighted norm, reconstructing outer
functions from boundary data, and building the unit-norm outer multiplier
whose boundary modulus squares against the weight to one.
"""

from __future__ import annotations

import math

import numpy as np

from .potential import DIVERGENT, integrate_interval


class InvalidZero(ValueError):
    """A Blaschke zero sits on or outside the unit circle."""


class NotLogIntegrable(ValueError):
    """Boundary log-modulus data fails the integrability requirement."""


class UnsupportedExpression(ValueError):
    """The requested expression leaves the supported closed-form family."""


TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# expression base
# ---------------------------------------------------------------------------


class AnalyticExpr:
    """An analytic function on the unit disk with closed-form pieces.

    Subclasses implement ``_eval`` and ``_deriv_eval``; everything else
    (boundary traces, the derivative object, the modulus-power density used
    by the bulk norm route) derives from those two.
    """

    label = "expr"
    #: interior zeros as ((location, multiplicity), ...)
    zeros = ()
    #: boundary angles where the trace is singular or vanishes
    boundary_singularities = ()

    def _eval(self, z):
        raise NotImplementedError

    def _deriv_eval(self, z):
        raise NotImplementedError

    def __call__(self, z):
        return self._eval(np.asarray(z, dtype=complex))

    def derivative(self):
        return _Derivative(self)

    def boundary_trace(self, theta):
        """Value of the boundary function at e^{i theta} (a.e.)."""
        theta = np.asarray(theta, dtype=float)
        return self._eval(np.exp(1j * theta))

    def modulus_power_density(self, p):
        """Area density of (1/2pi) Laplacian of |f|^p.

        For analytic f this is (p^2/2pi) |f|^{p-2} |f'|^2; for p < 2 it
        blows up at the zeros of f, which the caller must declare to the
        quadrature engine (see ``density_singularities``).
        """
        p = float(p)
        pref = p * p / TWO_PI

        def dens(w):
            w = np.asarray(w, dtype=complex)
            fv = np.abs(self._eval(w))
            dv = np.abs(self._deriv_eval(w))
            with np.errstate(divide="ignore", invalid="ignore"):
                out = pref * fv ** (p - 2.0) * dv * dv
            return np.where(np.isfinite(out), out, 0.0)

        return dens

    def density_singularities(self, p):
        """Interior points where the |f|^p density is singular."""
        if p >= 2.0:
            return ()
        return tuple(loc for loc, _ in self.zeros)

    def __mul__(self, other):
        if isinstance(other, AnalyticExpr):
            return Product(self, other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, AnalyticExpr):
            return Quotient(self, other)
        return NotImplemented

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class _Derivative(AnalyticExpr):
    """Wrapper exposing a parent expression's closed-form derivative."""

    def __init__(self, parent):
        self.parent = parent
        self.label = f"d/dz {parent.label}"

    def _eval(self, z):
        return self.parent._deriv_eval(z)

    def _deriv_eval(self, z):
        raise UnsupportedExpression("second derivatives are not provided")


# ---------------------------------------------------------------------------
# concrete nodes
# ---------------------------------------------------------------------------


class Poly(AnalyticExpr):
    """Polynomial with complex coefficients, low degree first."""

    def __init__(self, coeffs):
        coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        while coeffs.size > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if coeffs.size == 1 and coeffs[0] == 0:
            raise UnsupportedExpression("the zero function is not supported")
        self.coeffs = coeffs
        self.label = "poly(" + ",".join(f"{c:g}" for c in coeffs) + ")"
        self.zeros, self.boundary_singularities = self._classify_roots()

    def _classify_roots(self):
        if self.coeffs.size == 1:
            return (), ()
        roots = np.polynomial.polynomial.polyroots(self.coeffs)
        interior = []
        boundary = []
        for r in roots:
            if abs(r) < 1.0 - 1e-12:
                for entry in interior:
                    if abs(entry[0] - r) < 1e-8:
                        entry[1] += 1
                        break
                else:
                    interior.append([complex(r), 1])
            elif abs(abs(r) - 1.0) < 1e-12:
                boundary.append(float(np.angle(r)))
        return (tuple((loc, mult) for loc, mult in interior), tuple(boundary))

    def _eval(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def _deriv_eval(self, z):
        if self.coeffs.size == 1:
            return np.zeros_like(z)
        dcoef = self.coeffs[1:] * np.arange(1, self.coeffs.size)
        return np.polynomial.polynomial.polyval(z, dcoef)


class AffinePower(AnalyticExpr):
    """[a(1-z)]^beta with the principal branch.

    The image of the disk under a(1-z) is the disk of radius |a| centered
    at a, which avoids the branch cut (-inf, 0] exactly when Re a >= 0;
    other rotations would drag the cut through the domain.
    """

    def __init__(self, a, beta):
        a = complex(a)
        beta = float(beta)
        if a == 0:
            raise UnsupportedExpression("affine power needs a nonzero scale")
        if a.real < 0.0:
            raise UnsupportedExpression(
                "a(1-z) crosses the branch cut when Re a < 0"
            )
        self.a = a
        self.beta = beta
        self.label = f"pow({a:g}*(1-z),{beta:g})"
        # the trace vanishes (beta > 0) or blows up (beta < 0) at z = 1, so
        # its log-modulus is always singular there
        self.boundary_singularities = (0.0,)

    def _base(self, z):
        return self.a * (1.0 - z)

    def _eval(self, z):
        w = self._base(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(self.beta * np.log(w))
        if self.beta > 0:
            out = np.where(w == 0, 0.0, out)
        return out

    def _deriv_eval(self, z):
        # d/dz [a(1-z)]^beta = -a beta [a(1-z)]^{beta-1}
        w = self._base(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -self.a * self.beta * np.exp((self.beta - 1.0) * np.log(w))
        if self.beta > 1:
            out = np.where(w == 0, 0.0, out)
        return out


class BlaschkeProduct(AnalyticExpr):
    """Finite Blaschke product with the standard normalization.

    Each factor is (|a|/a)(a-z)/(1-conj(a)z), degenerating to z for a = 0;
    the product has modulus one on the circle and |B| < 1 inside.
    """

    def __init__(self, zero_list):
        locs = [complex(a) for a in zero_list]
        for a in locs:
            if abs(a) >= 1.0 - 1e-12:
                raise InvalidZero(f"Blaschke zero {a} is not inside the disk")
        self.zero_list = tuple(locs)
        grouped = {}
        for a in locs:
            for key in grouped:
                if abs(key - a) < 1e-14:
                    grouped[key] += 1
                    break
            else:
                grouped[a] = 1
        self.zeros = tuple(grouped.items())
        self.label = "blaschke(" + ",".join(f"{a:g}" for a in locs) + ")"

    def _factor(self, z, a):
        if a == 0:
            return np.asarray(z, dtype=complex)
        return (abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z)

    def _factor_deriv(self, z, a):
        if a == 0:
            return np.ones_like(np.asarray(z, dtype=complex))
        return (abs(a) / a) * (abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2

    def _eval(self, z):
        out = np.ones_like(np.asarray(z, dtype=complex))
        for a in self.zero_list:
            out = out * self._factor(z, a)
        return out

    def _deriv_eval(self, z):
        z = np.asarray(z, dtype=complex)
        factors = [self._factor(z, a) for a in self.zero_list]
        total = np.zeros_like(z)
        for k, a in enumerate(self.zero_list):
            term = self._factor_deriv(z, a)
            for j, f in enumerate(factors):
                if j != k:
                    term = term * f
            total = total + term
        return total


class OuterFunction(AnalyticExpr):
    """Outer function exp( integral (zeta+z)/(zeta-z) logM d nu ).

    The Herglotz kernel expands as 1 + 2 sum_k (z/zeta)^k, so the function
    is exp(c_0 + 2 sum_{k>=1} c_k z^k) with c_k the Fourier coefficients of
    the boundary log-modulus; one FFT of the sampled data yields them all.
    Construction refuses data whose absolute integral diverges.
    """

    def __init__(self, log_modulus, *, n_samples=8192, singular_thetas=()):
        thetas = np.arange(n_samples) * (TWO_PI / n_samples)
        vals = np.asarray(log_modulus(thetas), dtype=float)
        self._init_from_samples(thetas, vals, singular_thetas, log_modulus)

    @classmethod
    def from_samples(cls, thetas, log_values, *, singular_thetas=()):
        obj = cls.__new__(cls)
        obj._init_from_samples(np.asarray(thetas, dtype=float),
                               np.asarray(log_values, dtype=float),
                               singular_thetas, None)
        return obj

    def _init_from_samples(self, thetas, vals, singular_thetas, log_modulus):
        n = thetas.size
        vals = np.asarray(vals, dtype=float).copy()
        bad = ~np.isfinite(vals)
        if bad.any():
            # runs of non-finite samples mean the modulus vanishes (or blows
            # up) on a whole arc, which no outer function can represent
            run = bad & (np.roll(bad, 1) | np.roll(bad, -1))
            if run.any():
                raise NotLogIntegrable(
                    "log-modulus is non-finite on adjacent samples"
                )
        for t0 in singular_thetas:
            res = integrate_interval(
                lambda s: np.abs(log_modulus(s)) if log_modulus else
                np.abs(np.interp(np.mod(s, TWO_PI), thetas, vals, period=TWO_PI)),
                float(t0) + 1e-12, float(t0) + 0.2,
                tol_abs=1e-6, tol_rel=1e-6, singular_left=True,
            )
            if res.status == DIVERGENT:
                raise NotLogIntegrable(
                    f"log-modulus is not integrable near theta={t0:g}"
                )
        # Subtract a fitted multiple of log|2 sin((theta-t0)/2)| at each
        # declared singular angle.  The model's Fourier coefficients are
        # exact (-e^{-ik t0}/2k), so only the smooth remainder goes through
        # the FFT and the log singularity costs no accuracy.
        self._sing_terms = []
        work = vals
        for t0 in singular_thetas:
            t0 = float(t0)
            model = np.log(np.maximum(
                2.0 * np.abs(np.sin(0.5 * (thetas - t0))), 1e-300))
            step = TWO_PI / n
            offs = np.concatenate((-np.arange(3, 25), np.arange(3, 25)))
            node = int(round(t0 / step)) % n
            idx = (node + offs) % n
            good = np.isfinite(work[idx])
            A = np.stack([model[idx][good], np.ones(int(good.sum()))], axis=1)
            alpha = float(np.linalg.lstsq(A, work[idx][good], rcond=None)[0][0])
            work = work - alpha * model
            self._sing_terms.append((t0, alpha))
        bad = ~np.isfinite(work)
        if bad.any():
            idx = np.flatnonzero(bad)
            work[idx] = 0.5 * (work[(idx - 1) % n] + work[(idx + 1) % n])
        coeffs = np.fft.rfft(work) / n
        self.log_coeff0 = float(np.real(coeffs[0]))
        tail = coeffs[1:]
        keep = tail.size
        scale = max(np.abs(tail).max(), abs(self.log_coeff0), 1e-30)
        while keep > 1 and abs(tail[keep - 1]) < 1e-15 * scale:
            keep -= 1
        self.log_coeffs = tail[:keep]
        self.samples = vals
        self.thetas = thetas
        self.singular_thetas = tuple(float(t) for t in singular_thetas)
        self.label = f"outer[{n} samples]"

    def _log_series(self, z):
        z = np.asarray(z, dtype=complex)
        series = np.polynomial.polynomial.polyval(z, np.concatenate((
            [0.0], 2.0 * self.log_coeffs)))
        total = self.log_coeff0 + series
        for t0, alpha in self._sing_terms:
            total = total + alpha * np.log(1.0 - z * np.exp(-1j * t0))
        return total

    def _eval(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(self._log_series(z))

    def _deriv_eval(self, z):
        # (exp L)' = exp(L) L' with L'(z) = 2 sum_k k c_k z^{k-1} plus the
        # analytic derivative of each fitted singular term
        z = np.asarray(z, dtype=complex)
        k = np.arange(1, self.log_coeffs.size + 1)
        dcoef = 2.0 * self.log_coeffs * k
        dlog = np.polynomial.polynomial.polyval(z, dcoef)
        for t0, alpha in self._sing_terms:
            w = np.exp(-1j * t0)
            dlog = dlog - alpha * w / (1.0 - z * w)
        return self._eval(z) * dlog


class Product(AnalyticExpr):
    def __init__(self, f, g):
        self.f = f
        self.g = g
        self.label = f"({f.label})*({g.label})"
        self.zeros = tuple(f.zeros) + tuple(g.zeros)
        self.boundary_singularities = tuple(
            set(f.boundary_singularities) | set(g.boundary_singularities)
        )

    def _eval(self, z):
        return self.f._eval(z) * self.g._eval(z)

    def _deriv_eval(self, z):
        return (self.f._deriv_eval(z) * self.g._eval(z)
                + self.f._eval(z) * self.g._deriv_eval(z))


class Quotient(AnalyticExpr):
    """f/g for g nonvanishing on the closed disk interior."""

    def __init__(self, f, g):
        if tuple(g.zeros):
            raise UnsupportedExpression(
                "quotient denominators must not vanish inside the disk"
            )
        self.f = f
        self.g = g
        self.label = f"({f.label})/({g.label})"
        self.zeros = tuple(f.zeros)
        self.boundary_singularities = tuple(
            set(f.boundary_singularities) | set(g.boundary_singularities)
        )

    def _eval(self, z):
        return self.f._eval(z) / self.g._eval(z)

    def _deriv_eval(self, z):
        gv = self.g._eval(z)
        return (self.f._deriv_eval(z) * gv
                - self.f._eval(z) * self.g._deriv_eval(z)) / (gv * gv)


# ---------------------------------------------------------------------------
# factorization operations
# ---------------------------------------------------------------------------


def blaschke(zero_list):
    """Finite Blaschke product with the given zeros (multiplicity by repeat)."""
    return BlaschkeProduct(zero_list)


def outer_function(log_modulus, *, n_samples=8192, singular_thetas=()):
    """Outer function with boundary modulus exp(log_modulus)."""
    return OuterFunction(log_modulus, n_samples=n_samples,
                         singular_thetas=singular_thetas)


def divide_by_blaschke(f, p, u, *, n_samples=8192):
    """Split f = B h^{2/p} and check the norm carries over to h^{2/p}.

    B collects the interior zeros of f; h^{2/p} is realized as the outer
    function with boundary modulus |f*| (legitimate because |B*| = 1), so
    it is zero-free by construction.  The report compares the two weighted
    norms, which the factorization is supposed to preserve.
    """
    from . import hardy

    zero_list = []
    for loc, mult in f.zeros:
        zero_list.extend([loc] * int(mult))
    B = BlaschkeProduct(zero_list) if zero_list else Poly([1.0])

    def log_mod(theta):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(np.abs(f.boundary_trace(theta)))

    h_2p = OuterFunction(log_mod, n_samples=n_samples,
                         singular_thetas=f.boundary_singularities)
    norm_f = hardy.hardy_norm(f, p, u)
    norm_h = hardy.hardy_norm(h_2p, p, u)
    gap = None
    if norm_f.value is not None and norm_h.value is not None:
        gap = abs(norm_f.value - norm_h.value) / max(abs(norm_f.value), 1e-300)
    report = {
        "blaschke": B.label,
        "n_zeros": len(zero_list),
        "norm_f": norm_f.value,
        "norm_h": norm_h.value,
        "relative_gap": gap,
        "preserved": gap is not None and gap <= 5e-3,
    }
    return h_2p, report


# ---------------------------------------------------------------------------
# u-inner functions
# ---------------------------------------------------------------------------


class UInnerCandidate:
    """Outer multiplier whose boundary modulus squares against V to one.

    ``defect`` is the sup over clean samples of | |phi*|^2 V - 1 |; clean
    means outside small arcs around the weight's singular angles where the
    truncated boundary series cannot converge.
    """

    def __init__(self, outer_part, weight, thetas, phi_star, flatness,
                 clean_mask, norm_value, norm_report):
        self.outer_part = outer_part
        self.weight = weight
        self.thetas = thetas
        self.phi_star = phi_star
        self.flatness = flatness
        self.clean_mask = clean_mask
        self.defect = float(np.max(np.abs(flatness[clean_mask] - 1.0)))
        self.norm_value = norm_value
        self.norm_report = norm_report

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("theta,re_phi,im_phi,flatness\n")
            for t, ph, fl in zip(self.thetas, self.phi_star, self.flatness):
                fh.write(f"{float(t)!r},{float(ph.real)!r},"
                         f"{float(ph.imag)!r},{float(fl)!r}\n")


def u_inner(u, *, samples=2048, exclusion=1e-3):
    """Construct the outer multiplier phi with |phi*|^2 V = 1 a.e.

    phi is the outer function of -log(V)/2.  The defect is measured by
    evaluating the truncated boundary series of phi directly on the weight's
    own sample grid, excluding arcs of half-width ``exclusion`` (radians)
    around the declared singular angles of V.
    """
    from . import hardy

    weight = hardy.boundary_weight(u, samples=samples)
    if not weight.log_integrable:
        raise NotLogIntegrable(
            f"log V is not integrable for {u.label}; no outer candidate"
        )
    v_vals = weight.values
    with np.errstate(divide="ignore", invalid="ignore"):
        log_phi = -0.5 * np.log(v_vals)
    phi = OuterFunction.from_samples(
        weight.thetas, log_phi, singular_thetas=weight.singular_thetas
    )
    phi_star = phi.boundary_trace(weight.thetas)
    with np.errstate(invalid="ignore"):
        # 0 * inf at the singular nodes; those samples are never clean
        flatness = np.abs(phi_star) ** 2 * v_vals
    clean = np.isfinite(flatness)
    for t0 in weight.singular_thetas:
        gap = np.abs((weight.thetas - t0 + math.pi) % TWO_PI - math.pi)
        clean &= gap > exclusion
    report = hardy.hardy_norm(phi, 2.0, u)
    return UInnerCandidate(phi, weight, weight.thetas, phi_star, flatness,
                           clean, report.value, report)


def beurling_isometry_check(candidate, u, test_fns=None):
    """Verify the multiplier carries classical H^2 isometrically into H^2_u.

    For each test function g the weighted norm of phi*g must match the
    classical H^2 norm of g; the flatness samples |phi*|^2 V must have unit
    mean and no other Fourier content.  Singular-arc nodes are filled with
    the ideal value 1 before the DFT so the diagnostics probe only the
    trustworthy samples.
    """
    from . import hardy

    if test_fns is None:
        rng = np.random.default_rng(5)
        test_fns = [
            Poly([1.0]),
            Poly([0.0, 1.0]),
            Poly([0.0, 0.0, 1.0]),
            Poly(rng.normal(size=4) + 1j * rng.normal(size=4)),
            Poly([1.0, -1.0]),
        ]
    entries = []
    for g in test_fns:
        fg = Product(candidate.outer_part, g)
        weighted = hardy.hardy_norm(fg, 2.0, u)
        classical = hardy.classical_hardy_norm(g, 2.0)
        gap = None
        if weighted.value is not None:
            gap = abs(weighted.value - classical) / max(classical, 1e-300)
        entries.append({
            "label": g.label,
            "weighted": weighted.value,
            "classical": classical,
            "relative_gap": gap,
            "ok": gap is not None and gap <= 5e-3,
        })
    filled = np.where(candidate.clean_mask, candidate.flatness, 1.0)
    spectrum = np.fft.rfft(filled) / filled.size
    dc = float(np.real(spectrum[0]))
    max_other = float(np.abs(spectrum[1:]).max())
    flat = {
        "dc": dc,
        "max_other": max_other,
        "ok": abs(dc - 1.0) <= 1e-3 and max_other <= 1e-3,
    }
    return {
        "entries": entries,
        "flatness": flat,
        "ok": flat["ok"] and all(e["ok"] for e in entries),
    }
