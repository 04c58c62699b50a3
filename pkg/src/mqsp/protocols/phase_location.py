"""Phase location: which of ``s`` separated arcs holds the eigenphase.

Arc ``j = [a, b)`` (length below pi) gets

    P_j = c * (1 - R(z e^{-ia}))/2 * (1 + R(z e^{-ib}))/2,

a product of two rotated square waves that is ~1 on ``(a, b)`` and ~0 elsewhere.
The one arc allowed to exceed half the circle is filled in by completion.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv

from ..completion import complete_family
from ..errors import ArcSpecInvalid
from ..poly import LaurentPolynomial, PolynomialState, poly_mul, poly_rotate
from .reports import BuildReport
from .sign import build_sign_poly, sign_error

TWO_PI = 2 * math.pi
SHRINK = 0.999
GRID_FACTOR = 8


def _width(a, b):
    return (b - a) % TWO_PI


@dataclass(frozen=True)
class ArcSpec:
    """Half-open arcs ``[a_j, b_j)`` in radians with pairwise gap at least ``delta``."""

    delta: float
    arcs: tuple

    def __post_init__(self):
        delta = float(self.delta)
        arcs = []
        for arc in self.arcs:
            if len(arc) != 2:
                raise ArcSpecInvalid(f"arc {arc!r} needs exactly two endpoints")
            a, b = (float(v) for v in arc)
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ArcSpecInvalid("arc endpoints must be finite")
            a, b = a % TWO_PI, b % TWO_PI
            if a == b:
                raise ArcSpecInvalid(f"arc [{a}, {b}) is empty")
            arcs.append((a, b))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "arcs", tuple(arcs))
        if not arcs:
            raise ArcSpecInvalid("at least one arc is required")
        if not delta > 0 or delta >= math.pi:
            raise ArcSpecInvalid("delta must lie in (0, pi)")
        lengths = [_width(a, b) for a, b in arcs]
        if sum(1 for w in lengths if w > math.pi) > 1:
            raise ArcSpecInvalid("more than one arc covers over half the circle")
        # walk the arcs in circular order: every neutral zone must reach delta
        # and arcs plus zones must tile the circle exactly once
        order = sorted(range(len(arcs)), key=lambda i: arcs[i][0])
        total = 0.0
        for pos, i in enumerate(order):
            j = order[(pos + 1) % len(order)]
            gap = (arcs[j][0] - arcs[i][1]) % TWO_PI
            if gap < delta - 1e-12:
                raise ArcSpecInvalid(f"arcs {i} and {j} are closer than delta = {delta:g}")
            total += lengths[i] + gap
        if abs(total - TWO_PI) > 1e-9:
            raise ArcSpecInvalid("arcs overlap")

    @property
    def lengths(self):
        return [_width(a, b) for a, b in self.arcs]

    @property
    def completion_index(self):
        """Index of the arc realized by completion (the longest one)."""
        lengths = self.lengths
        return int(np.argmax(lengths))

    def shrunk_arcs(self, amount):
        return [(a + amount, b - amount) for a, b in self.arcs]

    def expanded(self, amount):
        return [(a - amount, b + amount) for a, b in self.arcs]

    def to_dict(self):
        return {"delta": self.delta, "arcs": [list(a) for a in self.arcs]}

    @classmethod
    def from_dict(cls, obj):
        try:
            return cls(obj["delta"], tuple(tuple(a) for a in obj["arcs"]))
        except (KeyError, TypeError) as exc:
            raise ArcSpecInvalid(f"malformed arc spec: {exc}") from exc


def in_arc(theta, arc):
    a, b = arc
    return (np.asarray(theta) - a) % TWO_PI < _width(a, b)


@dataclass(frozen=True)
class PhaseLocationBuild:
    state: PolynomialState
    spec: ArcSpec
    k: float
    n: int
    scale: float
    grid_max_error: float
    rescale_applied: float
    grid_ok: bool
    worst_inside: float
    worst_outside: float

    def report(self):
        return BuildReport(self.grid_max_error, self.rescale_applied, None)


def _sign_for(eps, h):
    """Smallest odd ``n`` (doubling, then bisection) with ``|R + sgn| <= eps`` where ``|sin| >= sin h``."""
    k = float(erfcinv(eps / 2) / math.sin(h))
    floor = math.sin(h)

    def err(n):
        return sign_error(build_sign_poly(k, n), None, floor, max(4096, 16 * n))

    lo = None
    n = 2 * math.ceil(k) + 1
    while err(n) > eps:
        lo = n
        n = 2 * n - 1
    if lo is not None:
        # the doubling overshoots by up to 2x; bisect the odd degrees
        while n - lo > 2:
            mid = (lo + n) // 2
            mid += 1 - mid % 2
            if mid >= n:
                break
            if err(mid) <= eps:
                n = mid
            else:
                lo = mid
    return k, n


def _arc_poly(r, a, b, scale):
    one = LaurentPolynomial.constant(1.0)
    rise = (one - poly_rotate(r, a)) * 0.5
    fall = (one + poly_rotate(r, b)) * 0.5
    return poly_mul(rise, fall) * scale


def build_phase_location(spec, eps_prime, tol=1e-10):
    """Phase-location state plus diagnostics; see :func:`build_phase_location_state`."""
    eps_prime = float(eps_prime)
    if not 0 < eps_prime < 0.5:
        raise ValueError("eps_prime must lie in (0, 1/2)")
    s = len(spec.arcs)
    dim = max(2, 1 << (s - 1).bit_length())
    big = spec.completion_index
    h = spec.delta / 2
    delta = eps_prime / 4
    eps = eps_prime / (4 * s)
    scale = math.sqrt(1 - delta) / (1 + eps) ** 2

    others = [j for j in range(s) if j != big]
    if others:
        k, n = _sign_for(eps, h)
        r = build_sign_poly(k, n)
    else:
        k, n, r = 0.0, 0, None
    basis = {j: _arc_poly(r, *spec.arcs[j], 1.0) for j in others}
    span = 2 * n
    m = max(GRID_FACTOR * 4 * span, 64)
    theta = TWO_PI * np.arange(m) / m
    zg = np.exp(1j * theta)
    vals = {j: p(zg) for j, p in basis.items()}
    while others and np.max(sum(np.abs(scale * v) ** 2 for v in vals.values())) > 1:
        scale *= SHRINK
    partial = [basis[j] * scale for j in others]
    res = complete_family(partial, span, tol)
    rows = [LaurentPolynomial() for _ in range(dim)]
    for j, p in zip(others, res.partials):
        rows[j] = p
    rows[big] = res.polynomial
    state = PolynomialState.from_polynomials(rows).shift(span)

    # grid verification of the per-arc guarantees
    probs = np.abs(state.evaluate(zg)) ** 2
    inner = spec.shrunk_arcs(h)
    outer = spec.expanded(h)
    worst_in, worst_out = 1.0, 0.0
    for j in range(s):
        lo_in = in_arc(theta, inner[j]) if _width(*spec.arcs[j]) > 2 * h else np.zeros(m, bool)
        if np.any(lo_in):
            worst_in = min(worst_in, float(np.min(probs[lo_in, j])))
        if j == big:
            # the completed row is only bounded where another arc's row is close to 1
            mask = np.zeros(m, bool)
            for i in others:
                mask |= in_arc(theta, inner[i])
        else:
            mask = ~in_arc(theta, outer[j])
        if np.any(mask):
            worst_out = max(worst_out, float(np.max(probs[mask, j])))
    ok = worst_in >= 1 - eps_prime and worst_out <= eps_prime
    return PhaseLocationBuild(
        state, spec, k, n, scale, res.grid_max_error, res.rescale_applied, ok, worst_in, worst_out
    )


def build_phase_location_state(spec, eps_prime, tol=1e-10):
    """Analytic state whose row ``j`` is ~1 on arc ``j`` and ~0 away from it.

    Rows for arcs other than the longest are products of two rotated sign
    waves; the longest arc's row is the completion.  Exponents are shifted by
    ``z^{2n}`` so the state is analytic (degree ``4n``).
    """
    return build_phase_location(spec, eps_prime, tol).state
