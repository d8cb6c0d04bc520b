"""Evaluation of the low-order Meijer-G instances used by the channel model.

Two independent paths:

* residue (Slater) series over the left poles of ``Gamma(b_j + s)``,
  ``j < m``, summed term by term in log domain with sign tracking;
* direct quadrature of the Mellin-Barnes integral along a vertical line
  ``Re s = c`` placed at the real-axis minimum of the integrand.

Coincident ``b`` parameters turn simple poles into double ones. Rather than
summing the logarithmic residues, colliding parameters are split
symmetrically by a small offset; the average is even in the offset, so
Richardson extrapolation removes the splitting error.
"""

import math
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import loggamma

from ..errors import AccuracyError, ParameterError
from .quadrature import QuadratureConfig, integrate_semi_infinite
from .special import log_gamma_sign

SERIES_MAX_Z = 10.0
COLLISION_TOL = 1e-4
SPLIT_OFFSET = 1e-2
_CANCELLATION_LIMIT = 1e4
_MAX_TERMS = 5000
_CONTOUR_CFG = QuadratureConfig(rel_tol=1e-13, abs_tol=1e-300, max_subdivisions=400)


class MeijerKind(Enum):
    """Instances supported, keyed by their orders ``(m, n, p, q)``."""

    G1122 = (1, 1, 1, 2)
    G2122 = (2, 1, 2, 2)
    G2223 = (2, 2, 2, 3)
    G3123 = (3, 1, 2, 3)

    @property
    def m(self):
        return self.value[0]

    @property
    def n(self):
        return self.value[1]

    @property
    def p(self):
        return self.value[2]

    @property
    def q(self):
        return self.value[3]


def meijer_g_instance(kind, z, a, b, method="auto"):
    """Value of ``G^{m,n}_{p,q}(z | a; b)`` for one of the supported kinds.

    ``method`` is ``"series"``, ``"contour"`` or ``"auto"`` (series up to
    ``z = 10``, contour beyond, each falling back on the other on failure).
    """
    if isinstance(kind, str):
        kind = MeijerKind[kind]
    elif not isinstance(kind, MeijerKind):
        kind = MeijerKind(tuple(kind))
    a = tuple(float(v) for v in a)
    b = tuple(float(v) for v in b)
    if len(a) != kind.p or len(b) != kind.q:
        raise ParameterError(
            f"{kind.name} takes {kind.p} upper and {kind.q} lower parameters, "
            f"got {len(a)} and {len(b)}"
        )
    z = float(z)
    if not z >= 0.0:
        raise ParameterError(f"Meijer-G argument must be >= 0, got {z!r}")
    m, n = kind.m, kind.n
    _check_separation(m, n, a, b)

    if method == "series":
        return series(m, n, a, b, z)
    if method == "contour":
        return contour(m, n, a, b, z)
    if method != "auto":
        raise ParameterError(f"unknown method {method!r}")

    if z == 0.0 or z <= _series_limit(kind):
        first, second = series, contour
    else:
        first, second = contour, series
    try:
        return first(m, n, a, b, z)
    except AccuracyError as exc:
        if z == 0.0:
            raise
        try:
            return second(m, n, a, b, z)
        except AccuracyError:
            raise exc from None


def _series_limit(kind):
    # p == q: the left-pole series only converges inside the unit disc
    return SERIES_MAX_Z if kind.p < kind.q else 0.5


def _check_separation(m, n, a, b):
    # a pole of Gamma(1 - a_j - s) landing on a pole of Gamma(b_h + s)
    for h in range(m):
        for j in range(n):
            d = a[j] - b[h]
            if d > 0 and abs(d - round(d)) < 1e-12:
                raise ParameterError(
                    f"a_{j + 1} - b_{h + 1} = {d} is a positive integer; "
                    "the Meijer-G integral is undefined"
                )


# --- residue series ---------------------------------------------------------


def series(m, n, a, b, z):
    offsets = _split_offsets(m, n, a, b)
    if offsets is None:
        return _series_checked(m, n, a, b, (0.0,) * len(b), z)

    def split(delta):
        off = tuple(delta * o for o in offsets)
        neg = tuple(-v for v in off)
        return 0.5 * (
            _series_checked(m, n, a, b, off, z) + _series_checked(m, n, a, b, neg, z)
        )

    # even in the offset: two Richardson steps leave an O(h^6) error
    h = min(SPLIT_OFFSET, _split_room(m, n, a, b, offsets))
    v1, v2, v3 = split(h), split(0.5 * h), split(0.25 * h)
    r1 = (4.0 * v2 - v1) / 3.0
    r2 = (4.0 * v3 - v2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def _series_checked(m, n, a, b, off, z):
    value, biggest = _series_raw(m, n, a, b, off, z)
    if value == 0.0 and biggest == 0.0:
        return 0.0
    if not math.isfinite(value) or biggest > _CANCELLATION_LIMIT * abs(value):
        raise AccuracyError(
            f"residue series lost precision (max term {biggest:.3e}, sum {value:.3e})",
            estimate=value,
        )
    return value


def _lgs(base, shift=0.0):
    """``log_gamma_sign(base + shift)``, exact near the poles.

    When ``base`` sits next to a non-positive integer the residual distance
    is formed before adding ``shift`` and the value comes from the
    reflection formula, so no precision is lost to the pole.
    """
    nearest = round(base)
    if nearest <= 0 and abs(base - nearest) < COLLISION_TOL:
        r = (base - nearest) + shift
        if r == 0.0:
            return math.inf, 0
        k = -int(nearest)
        log_abs = math.log(math.pi) - math.log(abs(math.sin(math.pi * r))) - math.lgamma(1.0 + k - r)
        sign = (-1 if k % 2 else 1) * (1 if r > 0 else -1)
        return log_abs, sign
    return log_gamma_sign(base + shift)


def _series_raw(m, n, a, b, off, z):
    """Sum of left-pole residues of ``G(z | a; b + off)``.

    Returns ``(sum, largest |term|)``. ``off`` is kept apart from ``b`` so
    differences of colliding parameters stay exact.
    """
    p, q = len(a), len(b)
    if p == q and z >= 1.0:
        raise AccuracyError("residue series diverges for p == q and z >= 1")
    log_z = math.log(z) if z > 0 else -math.inf
    terms = []
    biggest = 0.0
    for h in range(m):
        bh = b[h] + off[h]
        if z == 0.0:
            if bh < 0:
                return math.inf, math.inf
            if bh > 0:
                continue
        prev = math.inf
        branch_max = 0.0
        for k in range(_MAX_TERMS):
            log_t = -math.lgamma(k + 1.0)
            sign = -1 if k % 2 else 1
            stop_after = False
            zero = False
            for j in range(m):
                if j == h:
                    continue
                lg, sg = _lgs(b[j] - b[h] - k, off[j] - off[h])
                if sg == 0:
                    raise AccuracyError("coincident poles reached the residue series")
                log_t += lg
                sign *= sg
            for j in range(n):
                lg, sg = _lgs(1.0 - a[j] + b[h] + k, off[h])
                log_t += lg
                sign *= sg
            for j in range(m, q):
                lg, sg = _lgs(1.0 - b[j] + b[h] + k, off[h] - off[j])
                if sg == 0:
                    zero = True
                    continue
                log_t -= lg
                sign *= sg
            for j in range(n, p):
                lg, sg = _lgs(a[j] - b[h] - k, -off[h])
                if sg == 0:
                    # argument only decreases with k: every later term vanishes too
                    zero = True
                    stop_after = True
                    continue
                log_t -= lg
                sign *= sg
            if z == 0.0:
                if k == 0 and not zero:
                    terms.append(sign * math.exp(log_t))
                break
            if zero:
                if stop_after:
                    break
                continue
            log_t += (bh + k) * log_z
            if log_t > 700.0:
                raise AccuracyError("residue series terms overflow")
            t = sign * math.exp(log_t)
            terms.append(t)
            mag = abs(t)
            branch_max = max(branch_max, mag)
            if mag < prev and mag <= 1e-17 * branch_max:
                break
            prev = mag
        else:
            raise AccuracyError("residue series did not converge", estimate=math.fsum(terms))
        biggest = max(biggest, branch_max)
    return math.fsum(terms), biggest


def _collides(x, y):
    d = x - y
    return abs(d - round(d)) < COLLISION_TOL


def _separation_room(bh, n, a):
    room = math.inf
    for j in range(n):
        v = 1.0 - a[j] + bh
        room = min(room, v if v > 0 else abs(v - round(v)))
    return room


def _split_offsets(m, n, a, b):
    """Offset multipliers splitting colliding ``b`` parameters, or ``None``."""
    groups = []
    for j in range(m):
        for g in groups:
            if _collides(b[j], b[g[0]]):
                g.append(j)
                break
        else:
            groups.append([j])
    if all(len(g) == 1 for g in groups):
        return None
    offsets = [0.0] * len(b)
    for g in groups:
        # keep fixed the member closest to a separation singularity
        ordered = sorted(g, key=lambda j: _separation_room(b[j], n, a))
        for rank, j in enumerate(ordered):
            offsets[j] = float(rank)
    return offsets


def _split_room(m, n, a, b, offsets):
    room = math.inf
    for j in range(m):
        if offsets[j]:
            room = min(room, 0.25 * _separation_room(b[j], n, a) / offsets[j])
    return room


# --- Mellin-Barnes contour --------------------------------------------------


def _strip(m, n, a, b):
    lo = max(-b[j] for j in range(m))
    hi = min((1.0 - a[j] for j in range(n)), default=math.inf)
    return lo, hi


def _log_abs_integrand_real(c, m, n, a, b, log_z):
    val = -c * log_z
    for j in range(m):
        val += math.lgamma(b[j] + c)
    for j in range(n):
        val += math.lgamma(1.0 - a[j] - c)
    for j in range(m, len(b)):
        lg, s = log_gamma_sign(1.0 - b[j] - c)
        val -= lg if s else -math.inf
    for j in range(n, len(a)):
        lg, s = log_gamma_sign(a[j] + c)
        val -= lg if s else -math.inf
    return val


def contour(m, n, a, b, z):
    if z == 0.0:
        raise AccuracyError("contour path is not defined at z = 0")
    p, q = len(a), len(b)
    decay = (m + n) - 0.5 * (p + q)
    if decay <= 0:
        raise AccuracyError("Mellin-Barnes integrand does not decay on a vertical line")
    lo, hi = _strip(m, n, a, b)
    if not lo < hi:
        raise AccuracyError("no vertical line separates the two pole families")
    log_z = math.log(z)
    upper = hi if math.isfinite(hi) else lo + 20.0
    margin = 0.02 * (upper - lo)
    res = minimize_scalar(
        _log_abs_integrand_real,
        bounds=(lo + margin, upper - margin),
        args=(m, n, a, b, log_z),
        method="bounded",
        options={"xatol": 1e-6 * (upper - lo)},
    )
    c = float(res.x)
    peak = _log_abs_integrand_real(c, m, n, a, b, log_z)

    num_plus = np.array([b[j] for j in range(m)])
    num_minus = np.array([1.0 - a[j] for j in range(n)])
    den_minus = np.array([1.0 - b[j] for j in range(m, q)])
    den_plus = np.array([a[j] for j in range(n, p)])

    def integrand(t):
        s = c + 1j * t
        acc = -s * log_z - peak
        for v in num_plus:
            acc = acc + loggamma(v + s)
        for v in num_minus:
            acc = acc + loggamma(v - s)
        for v in den_minus:
            acc = acc - loggamma(v - s)
        for v in den_plus:
            acc = acc - loggamma(v + s)
        return np.exp(acc).real

    width = 1.0 / (decay * math.pi)
    cfg = QuadratureConfig(
        rel_tol=_CONTOUR_CFG.rel_tol,
        abs_tol=1e-16 * width,
        max_subdivisions=_CONTOUR_CFG.max_subdivisions,
    )
    value, err = integrate_semi_infinite(integrand, cfg, scale=width)
    scale = math.exp(peak) / math.pi
    result = value * scale
    if abs(value) < 1e-9 * width:
        raise AccuracyError(
            "contour integral cancels below working precision", estimate=result, error=err * scale
        )
    return result
