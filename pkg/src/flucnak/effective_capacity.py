"""Effective capacity under a statistical delay constraint.

EC(A) = -(1/A) log2 E[(1 + snr)^-A], with A = theta T B / ln 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, pdf_snr, snr_moment
from .errors import AsymptoteUndefinedError, BelowMinimumError, MomentDivergenceError, ParameterError
from .numerics.meijer import MeijerKind, meijer_g_instance
from .numerics.quadrature import DEFAULT_CONFIG, integrate_semi_infinite

LN2 = math.log(2.0)
# below this A the EC is within ~1e-3 bit of the ergodic capacity
ERGODIC_A_MAX = 1e-3


@dataclass(frozen=True)
class DelayConstraint:
    A: float
    theta: float | None = None
    T: float | None = None
    B: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A > 0):
            raise ParameterError(f"delay exponent A must be > 0, got {self.A!r}")

    @property
    def ergodic(self):
        return self.A <= ERGODIC_A_MAX


def delay_constraint(theta, T, B):
    for name, v in (("theta", theta), ("T", T), ("B", B)):
        if not (math.isfinite(v) and v > 0):
            raise ParameterError(f"{name} must be > 0, got {v!r}")
    return DelayConstraint(theta * T * B / LN2, float(theta), float(T), float(B))


def _exponent(A):
    if isinstance(A, DelayConstraint):
        return A.A
    return DelayConstraint(float(A)).A


def ec_exact(p, A):
    """Closed form through G^{2,2}_{2,3} evaluated at ``lam``."""
    a = _exponent(A)
    g = meijer_g_instance(MeijerKind.G2223, p.lam, (1.0, 1.0 - p.m_s), (a, p.m, -p.m_s))
    if not g > 0:
        raise ParameterError(f"Meijer-G value {g!r} is not a valid expectation")
    log_e = math.log(p.m_s) - math.lgamma(p.m) - math.lgamma(a) + math.log(g)
    return -log_e / (a * LN2)


def ec_quadrature(p, A, cfg=DEFAULT_CONFIG):
    """Direct quadrature of the defining expectation.

    When the expectation is close to 1 (small ``A`` or SNR) its complement
    ``E[1 - (1 + g)^-A]`` is integrated instead, so neither end cancels.
    """
    a = _exponent(A)

    def complement(g):
        return -np.expm1(-a * np.log1p(g)) * pdf_snr(p, g)

    d, _ = integrate_semi_infinite(complement, cfg, scale=p.mean_snr)
    if d < 0.5:
        return -math.log1p(-d) / (a * LN2)
    e, _ = integrate_semi_infinite(
        lambda g: np.exp(-a * np.log1p(g)) * pdf_snr(p, g), cfg, scale=p.mean_snr
    )
    return -math.log(e) / (a * LN2)


def ergodic_capacity(p, cfg=DEFAULT_CONFIG):
    """``E[log2(1 + snr)]``, the ``A -> 0`` limit."""
    val, _ = integrate_semi_infinite(lambda g: np.log1p(g) * pdf_snr(p, g), cfg, scale=p.mean_snr)
    return val / LN2


def ec_high_snr(p, A):
    """High-SNR asymptote from ``(1 + g)^-A ~ g^-A``; needs ``A < m``."""
    a = _exponent(A)
    if a >= p.m:
        raise AsymptoteUndefinedError(f"high-SNR EC needs A < m (A = {a}, m = {p.m})")
    log_e = (
        math.log(p.m_s)
        + math.lgamma(p.m - a)
        - math.log(p.m_s + a)
        - math.lgamma(p.m)
        + a * math.log(p.lam)
    )
    return -log_e / (a * LN2)


@dataclass(frozen=True)
class LowSnrExpansion:
    wideband_slope: float
    ebn0_min: float
    r1: float
    r2: float
    A: float

    @property
    def ebn0_min_db(self):
        return 10.0 * math.log10(self.ebn0_min)


def low_snr_expansion(m, m_s, A):
    """First-order Eb/N0 expansion with moments taken at unit mean SNR."""
    a = _exponent(A)
    if m_s <= 2:
        raise MomentDivergenceError(f"second SNR moment needs m_s > 2, got {m_s}")
    p = ChannelParams(float(m), float(m_s), 1.0)
    e1 = snr_moment(p, 1)
    e2 = snr_moment(p, 2)
    r1 = e1 / LN2
    r2 = (a * e1 * e1 - (a + 1.0) * e2) / LN2
    s0 = -2.0 * r1 * r1 * LN2 / r2
    return LowSnrExpansion(s0, 1.0 / r1, r1, r2, a)


def ec_low_snr(expansion, ebn0):
    ebn0 = np.asarray(ebn0, dtype=float)
    if np.any(ebn0 < expansion.ebn0_min):
        raise BelowMinimumError(
            f"Eb/N0 below the minimum {expansion.ebn0_min:.6g} ({expansion.ebn0_min_db:.3f} dB)"
        )
    res = expansion.wideband_slope * np.log2(ebn0 / expansion.ebn0_min)
    return float(res) if res.ndim == 0 else res
