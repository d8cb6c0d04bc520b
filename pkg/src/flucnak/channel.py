"""Fluctuating Nakagami-m channel: densities, moments and the physical sampler.

The SNR density reduces to an incomplete gamma,

    f(g) = m_s / Gamma(m) / g * (lam g)^(-m_s) * gamma_low(m + m_s, lam g),
    lam  = m_s m / ((m_s - 1) mean_snr),

which is the fast path used everywhere; the Meijer-G form is kept as an
independent check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import AccuracyError, MomentDivergenceError, ParameterError
from .numerics.meijer import MeijerKind, meijer_g_instance
from .numerics.quadrature import DEFAULT_CONFIG, gk15_panels, integrate_interval
from .numerics.special import log_reg_lower_inc_gamma


@dataclass(frozen=True)
class ChannelParams:
    m: float
    m_s: float
    mean_snr: float

    def __post_init__(self):
        _check_fading(self.m, self.m_s)
        if not (math.isfinite(self.mean_snr) and self.mean_snr > 0):
            raise ParameterError(f"mean_snr must be > 0, got {self.mean_snr!r}")

    @property
    def lam(self):
        return self.m_s * self.m / ((self.m_s - 1.0) * self.mean_snr)

    def with_snr(self, mean_snr):
        return ChannelParams(self.m, self.m_s, mean_snr)


@dataclass(frozen=True)
class EnvelopeParams:
    m: float
    m_s: float
    omega: float

    def __post_init__(self):
        _check_fading(self.m, self.m_s)
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ParameterError(f"omega must be > 0, got {self.omega!r}")

    @classmethod
    def from_sigma(cls, m, m_s, sigma):
        """Build from the per-component Gaussian deviation of the cluster model."""
        _check_fading(m, m_s)
        return cls(m, m_s, 2.0 * sigma**2 * m * m_s / (m_s - 1.0))

    @property
    def lam(self):
        return self.m_s * self.m / ((self.m_s - 1.0) * self.omega)


def _check_fading(m, m_s):
    if not (math.isfinite(m) and m > 0):
        raise ParameterError(f"m must be > 0, got {m!r}")
    if not (math.isfinite(m_s) and m_s > 1):
        raise ParameterError(f"m_s must be > 1, got {m_s!r}")


def validate_params(m, m_s, mean_snr):
    return ChannelParams(float(m), float(m_s), float(mean_snr))


def _log_g1122(x, m, m_s):
    """log G^{1,1}_{1,2}(x | 1 - m_s; m, -m_s) = log(x^-m_s gamma_low(m + m_s, x)), x > 0."""
    a = m + m_s
    return -m_s * np.log(x) + log_reg_lower_inc_gamma(a, x) + math.lgamma(a)


def _zero_limit(m, m_s, lam):
    # f(g) ~ m_s lam^m g^(m-1) / (Gamma(m) (m + m_s)) as g -> 0
    if m > 1:
        return 0.0
    if m == 1:
        return m_s * lam / (1.0 + m_s)
    return math.inf


def _density(m, m_s, lam, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ParameterError("density argument must be >= 0")
    out = np.empty(x.shape)
    pos = x > 0
    if np.any(pos):
        xp = x[pos]
        lam_x = lam * xp
        out[pos] = np.exp(math.log(m_s) - math.lgamma(m) - np.log(xp) + _log_g1122(lam_x, m, m_s))
    out[~pos] = _zero_limit(m, m_s, lam)
    return out


def _scalar_or_array(res, like):
    return float(res) if np.ndim(like) == 0 else res


def pdf_snr(p, gamma):
    """SNR density; ``gamma = 0`` returns the analytic limit (``inf`` for m < 1)."""
    res = _density(p.m, p.m_s, p.lam, gamma)
    return _scalar_or_array(res, gamma)


def pdf_snr_meijer(p, gamma):
    """SNR density through the general Meijer-G evaluator (slow reference)."""
    g = float(gamma)
    if g < 0:
        raise ParameterError("density argument must be >= 0")
    if g == 0:
        return _zero_limit(p.m, p.m_s, p.lam)
    val = meijer_g_instance(MeijerKind.G1122, p.lam * g, (1.0 - p.m_s,), (p.m, -p.m_s))
    return p.m_s / math.gamma(p.m) / g * val


def pdf_envelope(ep, r):
    """Envelope density for mean power ``omega``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ParameterError("envelope argument must be > 0")
    lam = ep.lam
    x = lam * r * r
    log_f = (
        math.log(2.0 * ep.m_s) - math.lgamma(ep.m) - np.log(r) + _log_g1122(x, ep.m, ep.m_s)
    )
    return _scalar_or_array(np.exp(log_f), r)


# --- distribution function ---------------------------------------------------


def _first_gap(p, g, cfg):
    # g' = c u^(1/m) on [0, c] makes the g'^(m-1) endpoint behaviour smooth;
    # g' = c e^t above c spreads the polynomial tail evenly
    m = p.m
    inv = 1.0 / m
    c = min(g, p.mean_snr)

    def head(u):
        return _density(p.m, p.m_s, p.lam, c * u**inv) * (c * inv) * u ** (inv - 1.0)

    def tail(t):
        x = c * np.exp(t)
        return _density(p.m, p.m_s, p.lam, x) * x

    val, err = integrate_interval(head, 0.0, 1.0, cfg)
    if g > c:
        v2, e2 = integrate_interval(tail, 0.0, math.log(g / c), cfg)
        val, err = val + v2, err + e2
    return val, err


def cdf_snr(p, gamma, cfg=DEFAULT_CONFIG):
    """``P(snr <= gamma)`` by quadrature of the density.

    Arrays are sorted and integrated gap by gap, so the cost is one batched
    15-point rule per sample plus refinement of the few gaps that need it.
    """
    ga = np.asarray(gamma, dtype=float)
    if np.any(ga < 0) or np.any(np.isnan(ga)):
        raise ParameterError("cdf argument must be >= 0")
    flat = ga.ravel()
    order = np.argsort(flat, kind="stable")
    pts = flat[order]
    out = np.zeros(pts.shape)
    nz = np.flatnonzero(pts > 0)
    if nz.size:
        first = nz[0]
        head, _ = _first_gap(p, pts[first], cfg)
        lo = pts[first:-1]
        hi = pts[first + 1 :]
        pieces = np.zeros(hi.shape)
        if hi.size:
            mask = hi > lo
            if np.any(mask):
                pieces[mask] = _gap_integrals(p, lo[mask], hi[mask], cfg)
        out[first:] = head + np.concatenate(([0.0], np.cumsum(pieces)))
    out = np.minimum(out, 1.0)
    res = np.empty_like(out)
    res[order] = out
    return _scalar_or_array(res.reshape(ga.shape), gamma)


def _gap_integrals(p, lo, hi, cfg):
    def f(x):
        return _density(p.m, p.m_s, p.lam, x)

    val, err = gk15_panels(f, lo, hi)
    tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(val))
    for i in np.flatnonzero(err > tol):
        val[i], _ = integrate_interval(f, lo[i], hi[i], cfg)
    return val


def snr_quantile(p, q):
    """Inverse of :func:`cdf_snr` by bracketed root finding."""
    if not 0.0 < q < 1.0:
        raise ParameterError(f"quantile level must be in (0, 1), got {q!r}")
    hi = p.mean_snr
    while cdf_snr(p, hi) < q:
        hi *= 4.0
        if hi > 1e300:
            raise AccuracyError("quantile bracket diverged")
    return brentq(lambda g: cdf_snr(p, g) - q, 0.0, hi, xtol=1e-14 * hi, rtol=1e-14)


# --- moments and sampling -----------------------------------------------------


def snr_moment(p, n):
    """``E[snr^n]`` for real ``-m < n < m_s``."""
    n = float(n)
    if n >= p.m_s:
        raise MomentDivergenceError(f"E[snr^{n}] diverges: order must be below m_s = {p.m_s}")
    if n <= -p.m:
        raise MomentDivergenceError(f"E[snr^{n}] diverges: order must exceed -m = {-p.m}")
    if n == 0:
        return 1.0
    if n == 1:
        # the first moment simplifies to mean_snr algebraically
        return p.mean_snr
    log_val = (
        math.log(p.m_s)
        - math.log(p.m_s - n)
        + math.lgamma(p.m + n)
        - math.lgamma(p.m)
        - n * math.log(p.lam)
    )
    return math.exp(log_val)


def sample_snr(p, rng, n):
    """Draw ``n`` SNR values by building the envelope from its components.

    One shadowing draw ``U`` scales all clusters of a sample. Integer ``m``
    uses ``2m`` literal Gaussians; otherwise their sum of squares is drawn
    as ``2 sigma^2 Gamma(m, 1)``.
    """
    n = int(n)
    if n < 1:
        raise ParameterError("sample count must be >= 1")
    omega = 1.0
    sigma2 = omega * (p.m_s - 1.0) / (2.0 * p.m * p.m_s)
    if float(p.m).is_integer() and p.m <= 64:
        k = int(p.m)
        xy = rng.normal(0.0, math.sqrt(sigma2), size=(n, 2 * k))
        power = np.einsum("ij,ij->i", xy, xy)
    else:
        power = 2.0 * sigma2 * rng.standard_gamma(p.m, size=n)
    u = 1.0 - rng.random(n)  # (0, 1]
    r2 = u ** (-1.0 / p.m_s) * power
    return p.mean_snr * r2 / omega
