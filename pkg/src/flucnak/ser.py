"""Symbol error rates of PSK under additive Laplacian noise.

Every instantaneous SER used here is a finite sum ``sum_i w_i exp(-c_i sqrt(g))``
(plus a ``sqrt(g) exp(-2 sqrt(g))`` term for QPSK), so channel averages reduce
to the transforms

    I(z) = E[exp(-z sqrt(snr))],   J(z) = E[sqrt(snr) exp(-z sqrt(snr))].

Both have closed forms as G^{3,1}_{2,3} (duplication formula applied to the
Mellin transform of the density). An alternative two-parameter G^{2,1}_{2,2}
form does not match quadrature; it is kept as
``laplace_sqrt_transform_printed`` so its consequences can be reported.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erfc

from .channel import pdf_snr
from .errors import AccuracyError, ParameterError
from .numerics.meijer import MeijerKind, meijer_g_instance
from .numerics.quadrature import DEFAULT_CONFIG, integrate_semi_infinite

MPSK_ORDERS = (8, 16, 32, 64)
PATH_TOL = 1e-4


@dataclass(frozen=True)
class Modulation:
    kind: str
    M: int

    def __post_init__(self):
        if self.kind not in ("BPSK", "QPSK", "MPSK"):
            raise ParameterError(f"unknown modulation {self.kind!r}")
        if self.kind == "MPSK" and self.M not in MPSK_ORDERS:
            raise ParameterError(f"M-PSK needs M in {MPSK_ORDERS}, got {self.M}")

    @classmethod
    def bpsk(cls):
        return cls("BPSK", 2)

    @classmethod
    def qpsk(cls):
        return cls("QPSK", 4)

    @classmethod
    def mpsk(cls, M):
        M = int(M)
        if M == 2:
            return cls.bpsk()
        if M == 4:
            return cls.qpsk()
        return cls("MPSK", M)

    @classmethod
    def parse(cls, text):
        t = str(text).strip().upper()
        if t in ("BPSK", "QPSK"):
            return getattr(cls, t.lower())()
        digits = "".join(ch for ch in t if ch.isdigit())
        if not digits:
            raise ParameterError(f"cannot parse modulation {text!r}")
        return cls.mpsk(int(digits))

    @property
    def label(self):
        return self.kind if self.kind != "MPSK" else f"{self.M}PSK"


@dataclass(frozen=True)
class LaplacianNoise:
    m_N: float = 0.0
    sigma_N: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma_N) and self.sigma_N > 0):
            raise ParameterError(f"sigma_N must be > 0, got {self.sigma_N!r}")

    @property
    def scale(self):
        return self.sigma_N / math.sqrt(2.0)

    def pdf(self, w):
        w = np.asarray(w, dtype=float)
        return np.exp(-math.sqrt(2.0) * np.abs(w - self.m_N) / self.sigma_N) / math.sqrt(
            2.0 * self.sigma_N**2
        )


# --- instantaneous error rates -------------------------------------------------


@lru_cache(maxsize=None)
def exponential_terms(mod):
    """``((w_i, c_i), ...)`` with ``P(e | g) = sum w_i exp(-c_i sqrt(g))`` (+ QPSK extra)."""
    if mod.kind == "BPSK":
        return ((0.5, 2.0),)
    if mod.kind == "QPSK":
        return ((0.75, 2.0),)
    M = mod.M
    s = math.sin(math.pi / M)
    t2 = math.tan(math.pi / M) ** 2
    terms = []
    for l in range(M // 4):
        phi = (2 * l + 1) * math.pi / M
        d = 2.0 * math.cos(2.0 * phi)
        terms.append((8.0 / M * math.cos(phi) ** 2 / d, 2.0 * s / math.cos(phi)))
        terms.append((-8.0 / M * math.sin(phi) ** 2 / d, 2.0 * s / math.sin(phi)))
        e = s / (8.0 * (math.cos(2.0 * math.pi / M) + math.sin(4.0 * l * math.pi / M)))
        c4 = 2.0 * math.sqrt(2.0) * math.cos(2.0 * l * math.pi / M - math.pi / 4.0)
        terms.append((-8.0 / M * e, c4))
    terms.append((2.0 * t2 / (M * (1.0 - t2)), 2.0))
    return tuple(terms)


def ser_instantaneous(mod, gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ParameterError("SNR must be >= 0")
    root = np.sqrt(g)
    out = np.zeros(g.shape)
    for w, c in exponential_terms(mod):
        out = out + w * np.exp(-c * root)
    if mod.kind == "QPSK":
        out = out + root * np.exp(-2.0 * root)
    return float(out) if g.ndim == 0 else out


def ser_inst_bpsk_gaussian(gamma):
    """BPSK under Gaussian noise, ``Q(sqrt(2 g))``."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ParameterError("SNR must be >= 0")
    out = 0.5 * erfc(np.sqrt(g))
    return float(out) if g.ndim == 0 else out


# --- the transforms I(z) and J(z) ----------------------------------------------


def _check_z(z):
    z = float(z)
    if not z >= 0:
        raise ParameterError(f"transform argument must be >= 0, got {z!r}")
    return z


def laplace_sqrt_transform_quadrature(p, z, cfg=DEFAULT_CONFIG):
    z = _check_z(z)
    val, _ = integrate_semi_infinite(
        lambda g: np.exp(-z * np.sqrt(g)) * pdf_snr(p, g), cfg, scale=p.mean_snr
    )
    return val


def laplace_sqrt_transform_analytic(p, z):
    z = _check_z(z)
    lam = p.lam
    g = meijer_g_instance(
        MeijerKind.G3123, z * z / (4.0 * lam), (1.0 - p.m, 1.0 + p.m_s), (0.0, 0.5, p.m_s)
    )
    return p.m_s / (math.gamma(p.m) * math.sqrt(math.pi)) * g


def laplace_sqrt_transform_printed(p, z):
    """The G^{2,1}_{2,2} form at ``z / sqrt(lam)``, evaluated as written."""
    z = _check_z(z)
    g = meijer_g_instance(
        MeijerKind.G2122, z / math.sqrt(p.lam), (1.0 - p.m, 1.0 + p.m_s), (0.0, p.m_s)
    )
    return p.m_s / math.gamma(p.m) * g


def laplace_sqrt_transform(p, z, check=False):
    """``I(z) = E[exp(-z sqrt(snr))]`` from the closed form.

    With ``check=True`` the quadrature path is also run and a relative gap
    above ``PATH_TOL`` raises :class:`AccuracyError`.
    """
    val = laplace_sqrt_transform_analytic(p, z)
    if check:
        ref = laplace_sqrt_transform_quadrature(p, z)
        gap = abs(val - ref) / abs(ref)
        if gap > PATH_TOL:
            raise AccuracyError(
                f"I({z}) paths disagree: closed form {val!r}, quadrature {ref!r}",
                estimate=ref,
                error=abs(val - ref),
            )
    return val


def sqrt_weighted_transform(p, z):
    """``J(z) = E[sqrt(snr) exp(-z sqrt(snr))]`` as a G^{3,1}_{2,3}."""
    z = _check_z(z)
    lam = p.lam
    g = meijer_g_instance(
        MeijerKind.G3123,
        z * z / (4.0 * lam),
        (0.5 - p.m, 0.5 + p.m_s),
        (0.0, 0.5, p.m_s - 0.5),
    )
    return p.m_s / (math.gamma(p.m) * math.sqrt(math.pi * lam)) * g


def sqrt_weighted_transform_quadrature(p, z, cfg=DEFAULT_CONFIG):
    z = _check_z(z)
    val, _ = integrate_semi_infinite(
        lambda g: np.sqrt(g) * np.exp(-z * np.sqrt(g)) * pdf_snr(p, g), cfg, scale=p.mean_snr
    )
    return val


# --- channel-averaged error rates ---------------------------------------------


def _assemble(mod, i_func, j_func):
    total = math.fsum(w * i_func(c) for w, c in exponential_terms(mod))
    if mod.kind == "QPSK":
        total += j_func(2.0)
    return total


def ser_average(p, mod):
    """Average SER from the closed-form transforms."""
    return _assemble(
        mod,
        lambda z: laplace_sqrt_transform_analytic(p, z),
        lambda z: sqrt_weighted_transform(p, z),
    )


def ser_average_printed(p, mod):
    """Average SER assembled from the G^{2,1}_{2,2} forms exactly as written."""

    def j_printed(z):
        arg = z / math.sqrt(p.lam)
        pre = math.sqrt(p.m_s * (p.m_s - 1.0) * p.mean_snr / p.m) / math.gamma(p.m)
        return pre * meijer_g_instance(
            MeijerKind.G2122, arg, (1.0 - p.m, 1.0 + p.m_s), (0.0, p.m_s)
        )

    return _assemble(mod, lambda z: laplace_sqrt_transform_printed(p, z), j_printed)


def ser_average_quadrature(p, mod, cfg=DEFAULT_CONFIG):
    val, _ = integrate_semi_infinite(
        lambda g: ser_instantaneous(mod, g) * pdf_snr(p, g), cfg, scale=p.mean_snr
    )
    return val


def ser_average_gaussian_bpsk(p, cfg=DEFAULT_CONFIG):
    val, _ = integrate_semi_infinite(
        lambda g: ser_inst_bpsk_gaussian(g) * pdf_snr(p, g), cfg, scale=p.mean_snr
    )
    return val


# --- high-SNR forms ---------------------------------------------------------------


def i_asymp_printed(p, z):
    """Power-law high-SNR form of ``I(z)``, decaying as ``mean_snr^(-m/2)``."""
    m, ms = p.m, p.m_s
    return ms ** (m / 2.0 + 1.0) / (m + ms) * (m / (z * z * (ms - 1.0) * p.mean_snr)) ** (m / 2.0)


def ser_asymptotic(p, mod):
    """High-SNR SER from the power-law asymptote of ``I``."""
    total = math.fsum(w * i_asymp_printed(p, c) for w, c in exponential_terms(mod))
    if mod.kind == "QPSK":
        m, ms, gb = p.m, p.m_s, p.mean_snr
        total += (
            1.0
            / (2.0**m * (m + ms))
            * math.sqrt(ms * (ms - 1.0) * gb / m)
            * (ms * m / ((ms - 1.0) * gb)) ** (m / 2.0)
        )
    return total


def i_asymp_oracle(p, z):
    """High-SNR ``I(z)`` from the small-SNR behaviour of the density.

    ``f(g) ~ m_s lam^m g^(m-1) / (Gamma(m) (m + m_s))`` and
    ``int g^(m-1) exp(-z sqrt(g)) dg = 2 Gamma(2m) / z^(2m)``.
    """
    z = float(z)
    if not z > 0:
        raise ParameterError("oracle needs z > 0")
    m, ms = p.m, p.m_s
    log_v = (
        math.log(2.0 * ms)
        + m * math.log(p.lam)
        + math.lgamma(2.0 * m)
        - math.lgamma(m)
        - math.log(m + ms)
        - 2.0 * m * math.log(z)
    )
    return math.exp(log_v)


def j_asymp_oracle(p, z):
    m, ms = p.m, p.m_s
    log_v = (
        math.log(2.0 * ms)
        + m * math.log(p.lam)
        + math.lgamma(2.0 * m + 1.0)
        - math.lgamma(m)
        - math.log(m + ms)
        - (2.0 * m + 1.0) * math.log(z)
    )
    return math.exp(log_v)


def ser_asymptotic_oracle(p, mod):
    return _assemble(mod, lambda z: i_asymp_oracle(p, z), lambda z: j_asymp_oracle(p, z))
