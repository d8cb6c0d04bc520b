"""Monte-Carlo estimators for EC and SER.

Work is cut into fixed-size chunks; chunk ``i`` always draws from the
stream ``(seed, i)``, and per-chunk statistics are merged in chunk order, so
results are bit-identical whatever the number of workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogorov

from ._accel import USE_NUMBA, njit
from .channel import sample_snr
from .effective_capacity import LN2, _exponent
from .errors import ContractError, ParameterError
from .ser import LaplacianNoise, ser_instantaneous

MIN_SAMPLES = 1000
_MASK64 = (1 << 64) - 1
_TWO53 = float(1 << 53)
MPSK_CAVEAT = (
    "full-mode M-PSK uses a minimum-L1 detector; the closed-form M-PSK SER need not "
    "describe this receiver, so disagreement at low SNR is expected"
)


@dataclass(frozen=True)
class McConfig:
    seed: int = 0
    n_samples: int = 1_000_000
    chunk_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ParameterError("n_samples must be >= 1")
        if self.chunk_size < 1:
            raise ParameterError("chunk_size must be >= 1")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    n: int
    seed: int
    caveat: str | None = None


def make_stream(seed, stream_id):
    """Philox generator keyed by ``(seed, stream_id)``."""
    ss = np.random.SeedSequence([int(seed) & _MASK64, int(stream_id) & _MASK64])
    return np.random.Generator(np.random.Philox(ss))


def _open_uniform(stream, n):
    # strictly inside (0, 1): no infinite log at either end
    return (stream.integers(0, 1 << 53, size=n, dtype=np.int64) + 0.5) / _TWO53


def sample_laplacian(stream, noise, n):
    """Inverse-CDF draws from the Laplace law with mean ``m_N`` and deviation ``sigma_N``."""
    n = int(n)
    if n < 1:
        raise ParameterError("sample count must be >= 1")
    u = _open_uniform(stream, n) - 0.5
    return noise.m_N - noise.scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))


# --- chunked moment accumulation -----------------------------------------------


def _chunk_sizes(cfg):
    full, rest = divmod(cfg.n_samples, cfg.chunk_size)
    return [cfg.chunk_size] * full + ([rest] if rest else [])


def _moments(y):
    n = y.size
    mean = math.fsum(y) / n
    dev = y - mean
    return n, mean, math.fsum(dev * dev)


def _merge(parts):
    # Chan et al. pairwise update, applied in chunk order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run(cfg, chunk_fn):
    sizes = _chunk_sizes(cfg)

    def task(i):
        return _moments(chunk_fn(make_stream(cfg.seed, i), sizes[i]))

    if cfg.workers == 1:
        parts = [task(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(task, range(len(sizes))))
    return _merge(parts)


def _require_samples(cfg):
    if cfg.n_samples < MIN_SAMPLES:
        raise ParameterError(f"estimators need at least {MIN_SAMPLES} samples")


# --- estimators ------------------------------------------------------------------


def estimate_ec_mc(p, A, cfg):
    """Sample-mean EC. The complement ``1 - (1 + g)^-A`` is averaged to keep small ``A`` exact."""
    _require_samples(cfg)
    a = _exponent(A)

    def chunk(stream, size):
        g = sample_snr(p, stream, size)
        return -np.expm1(-a * np.log1p(g))

    n, d, m2 = _run(cfg, chunk)
    s = math.sqrt(m2 / (n - 1))
    value = -math.log1p(-d) / (a * LN2)
    # delta method on -log2(1 - d) / A
    se = s / (math.sqrt(n) * a * (1.0 - d) * LN2)
    return Estimate(value, se, n, cfg.seed)


def constellation(mod):
    return np.exp(2j * np.pi * np.arange(mod.M) / mod.M)


@njit(cache=True)
def _l1_detect_numba(rx_re, rx_im, amp, pts_re, pts_im):
    n = rx_re.size
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = np.inf
        arg = 0
        for k in range(pts_re.size):
            d = abs(rx_re[i] - amp[i] * pts_re[k]) + abs(rx_im[i] - amp[i] * pts_im[k])
            if d < best:
                best = d
                arg = k
        out[i] = arg
    return out


def _l1_detect_numpy(rx_re, rx_im, amp, pts_re, pts_im):
    a = amp[:, None]
    d = np.abs(rx_re[:, None] - a * pts_re[None, :]) + np.abs(rx_im[:, None] - a * pts_im[None, :])
    return np.argmin(d, axis=1)


def l1_detect(rx_re, rx_im, amp, pts_re, pts_im):
    """Index of the point of ``amp * constellation`` nearest in L1 distance (Laplacian ML)."""
    args = [np.ascontiguousarray(v, dtype=float) for v in (rx_re, rx_im, amp, pts_re, pts_im)]
    return (_l1_detect_numba if USE_NUMBA else _l1_detect_numpy)(*args)


# unit noise power split evenly: variance 1/2 per component
FULL_MODE_NOISE = LaplacianNoise(0.0, math.sqrt(0.5))


def estimate_ser_mc(p, mod, cfg, mode="semi", fixed_snr=None):
    """SER by simulation.

    ``semi`` averages the instantaneous SER over channel draws. ``full``
    sends symbols through the channel with Laplacian noise and counts L1
    detector errors. ``fixed_snr`` replaces the fading draw with a constant.
    """
    _require_samples(cfg)
    if mode not in ("semi", "full"):
        raise ParameterError(f"mode must be 'semi' or 'full', got {mode!r}")

    def snr(stream, size):
        if fixed_snr is None:
            return sample_snr(p, stream, size)
        return np.full(size, float(fixed_snr))

    if mode == "semi":

        def chunk(stream, size):
            return ser_instantaneous(mod, snr(stream, size))

    else:
        pts = constellation(mod)

        def chunk(stream, size):
            amp = np.sqrt(snr(stream, size))
            sym = stream.integers(0, mod.M, size=size)
            nre = sample_laplacian(stream, FULL_MODE_NOISE, size)
            nim = sample_laplacian(stream, FULL_MODE_NOISE, size)
            rx_re = amp * pts.real[sym] + nre
            rx_im = amp * pts.imag[sym] + nim
            det = l1_detect(rx_re, rx_im, amp, pts.real, pts.imag)
            return (det != sym).astype(float)

    n, mean, m2 = _run(cfg, chunk)
    se = math.sqrt(m2 / (n - 1) / n)
    caveat = MPSK_CAVEAT if (mode == "full" and mod.kind == "MPSK") else None
    return Estimate(mean, se, n, cfg.seed, caveat)


def ks_statistic(samples, cdf):
    """Two-sided KS statistic of ``samples`` against ``cdf`` and its asymptotic p-value."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n < 100:
        raise ParameterError("KS test needs at least 100 samples")
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        raise ContractError("cdf must return one value per sample")
    if np.any(~np.isfinite(f)) or np.any(f < 0) or np.any(f > 1) or np.any(np.diff(f) < 0):
        raise ContractError("cdf is not a non-decreasing map into [0, 1]")
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    return d, float(kolmogorov(math.sqrt(n) * d))
