import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from flucnak import ChannelParams, EnvelopeParams, validate_params
from flucnak.channel import (
    cdf_snr,
    pdf_envelope,
    pdf_snr,
    pdf_snr_meijer,
    sample_snr,
    snr_moment,
    snr_quantile,
)
from flucnak.errors import MomentDivergenceError, ParameterError
from flucnak.mc_sim import ks_statistic, make_stream
from flucnak.numerics import integrate_semi_infinite, reg_lower_inc_gamma

GRID = list(itertools.product([0.75, 1.0, 2.5, 4.0], [1.5, 2.5, 4.0, 6.0], [1.0, 10.0]))

fading_m = st.floats(0.3, 8.0)
fading_ms = st.floats(1.2, 12.0)
mean_snr = st.floats(1e-2, 1e3)


def cdf_closed_form(p, g):
    # P(m, x) - x^-m_s Gamma(m + m_s) / Gamma(m) P(m + m_s, x), x = lam g
    x = p.lam * np.asarray(g, dtype=float)
    m, ms = p.m, p.m_s
    log_c = math.lgamma(m + ms) - math.lgamma(m)
    return reg_lower_inc_gamma(m, x) - np.exp(log_c - ms * np.log(x)) * reg_lower_inc_gamma(m + ms, x)


# --- parameters ------------------------------------------------------------------


@pytest.mark.parametrize("raw", [(2.5, 2.5, 1.0), (0.75, 2.5, 1.0)])
def test_validate_ok(raw):
    p = validate_params(*raw)
    assert (p.m, p.m_s, p.mean_snr) == raw


@pytest.mark.parametrize(
    "raw, word",
    [((1, 1, 1), "m_s"), ((0, 2, 1), "m"), ((1, 2, 0), "mean_snr"), ((1, 2, math.nan), "mean_snr")],
)
def test_validate_errors(raw, word):
    with pytest.raises(ParameterError, match=word):
        validate_params(*raw)


def test_lambda_and_with_snr():
    p = ChannelParams(1.0, 2.0, 1.0)
    assert p.lam == 2.0
    assert p.with_snr(4.0).lam == 0.5


def test_envelope_from_sigma():
    ep = EnvelopeParams.from_sigma(2.0, 3.0, 0.5)
    # Omega = 2 sigma^2 m m_s / (m_s - 1)
    assert ep.omega == pytest.approx(2.0 * 0.25 * 2.0 * 1.5)
    with pytest.raises(ParameterError):
        EnvelopeParams(2.0, 3.0, -1.0)


# --- density ---------------------------------------------------------------------


def test_pdf_example():
    # lam = 2: f(1) = gamma_low(3, 2) / 2 = 1 - 5 e^-2
    p = ChannelParams(1.0, 2.0, 1.0)
    expected = 1.0 - 5.0 * math.exp(-2.0)
    assert pdf_snr(p, 1.0) == pytest.approx(expected, rel=1e-13)
    assert pdf_snr_meijer(p, 1.0) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("m, ms, gb", GRID)
def test_normalisation(m, ms, gb):
    p = ChannelParams(m, ms, gb)
    val, _ = integrate_semi_infinite(lambda g: pdf_snr(p, g), scale=gb)
    assert abs(val - 1.0) < 1e-8


@pytest.mark.parametrize("m, ms, gb", GRID)
def test_mean_by_quadrature(m, ms, gb):
    p = ChannelParams(m, ms, gb)
    val, _ = integrate_semi_infinite(lambda g: g * pdf_snr(p, g), scale=gb)
    assert val == pytest.approx(gb, rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(fading_m, fading_ms, mean_snr, st.floats(1e-3, 50.0))
def test_scale_family(m, ms, gb, u):
    p = ChannelParams(m, ms, gb)
    unit = ChannelParams(m, ms, 1.0)
    assert pdf_snr(p, u * gb) == pytest.approx(pdf_snr(unit, u) / gb, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(fading_m, fading_ms, st.floats(1e-3, 30.0))
def test_fast_path_matches_meijer(m, ms, g):
    p = ChannelParams(m, ms, 1.0)
    assert pdf_snr(p, g) == pytest.approx(pdf_snr_meijer(p, g), rel=1e-9)


@pytest.mark.parametrize("m", [0.75, 1.0, 2.5])
def test_nakagami_limit(m):
    p = ChannelParams(m, 1e6, 3.0)
    g = np.linspace(0.1, 5.0, 50) * p.mean_snr
    ref = stats.gamma.pdf(g, m, scale=p.mean_snr / m)
    np.testing.assert_allclose(pdf_snr(p, g), ref, rtol=1e-3)


def test_zero_limits():
    assert pdf_snr(ChannelParams(2.0, 3.0, 1.0), 0.0) == 0.0
    p1 = ChannelParams(1.0, 2.0, 1.0)
    assert pdf_snr(p1, 0.0) == pytest.approx(p1.m_s * p1.lam / (1.0 + p1.m_s))
    assert pdf_snr(p1, 1e-9) == pytest.approx(pdf_snr(p1, 0.0), rel=1e-6)
    assert pdf_snr(ChannelParams(0.75, 2.0, 1.0), 0.0) == math.inf


def test_small_gamma_expansion():
    m, ms = 2.5, 3.0
    p = ChannelParams(m, ms, 1.0)
    g = 1e-8
    lead = ms * p.lam**m * g ** (m - 1) / (math.gamma(m) * (m + ms))
    assert pdf_snr(p, g) == pytest.approx(lead, rel=1e-6)


def test_pdf_rejects_negative():
    with pytest.raises(ParameterError):
        pdf_snr(ChannelParams(1.0, 2.0, 1.0), -1.0)


def test_pdf_array_shape():
    p = ChannelParams(2.0, 3.0, 1.0)
    out = pdf_snr(p, np.ones((3, 4)))
    assert out.shape == (3, 4)


@pytest.mark.parametrize("m, ms", [(0.75, 2.5), (2.0, 4.0), (4.0, 1.5)])
def test_envelope_identity(m, ms):
    omega = 2.0
    ep = EnvelopeParams(m, ms, omega)
    p = ChannelParams(m, ms, omega)
    r = np.linspace(0.05, 4.0, 40)
    np.testing.assert_allclose(pdf_envelope(ep, r), 2.0 * r * pdf_snr(p, r * r), rtol=1e-12)
    val, _ = integrate_semi_infinite(lambda x: pdf_envelope(ep, x), scale=math.sqrt(omega))
    assert val == pytest.approx(1.0, abs=1e-8)


def test_envelope_at_origin():
    ep = EnvelopeParams(2.0, 3.0, 1.0)
    assert pdf_envelope(ep, 1e-6) < 1e-12
    with pytest.raises(ParameterError):
        pdf_envelope(ep, 0.0)


# --- distribution function ---------------------------------------------------------


@pytest.mark.parametrize("m, ms, gb", [(0.75, 2.5, 1.0), (2.5, 2.5, 1.0), (4.0, 6.0, 10.0), (1.0, 1.5, 3.0)])
def test_cdf_against_closed_form(m, ms, gb):
    p = ChannelParams(m, ms, gb)
    g = np.geomspace(1e-3, 1e3, 60) * gb
    np.testing.assert_allclose(cdf_snr(p, g), cdf_closed_form(p, g), rtol=1e-8, atol=1e-12)


def test_cdf_endpoints():
    for m, ms in [(0.75, 2.5), (4.0, 4.0), (1.0, 1.5)]:
        p = ChannelParams(m, ms, 1.0)
        assert cdf_snr(p, 0.0) == 0.0
        # the m_s tail decays as g^-m_s, so "infinity" is taken far out
        assert abs(cdf_snr(p, 1e12) - 1.0) < 1e-8


@settings(max_examples=20, deadline=None)
@given(fading_m, fading_ms, st.lists(st.floats(0.0, 1e3), min_size=2, max_size=20))
def test_cdf_monotone(m, ms, pts):
    p = ChannelParams(m, ms, 1.0)
    g = np.sort(np.array(pts))
    f = cdf_snr(p, g)
    assert np.all(np.diff(f) >= -1e-14)
    assert np.all((f >= 0) & (f <= 1))


def test_cdf_order_independent():
    p = ChannelParams(2.0, 3.0, 1.0)
    g = np.array([3.0, 0.5, 10.0, 0.0, 0.5])
    np.testing.assert_allclose(cdf_snr(p, g), [cdf_snr(p, v) for v in g], rtol=1e-10)


@pytest.mark.parametrize("q", [0.01, 0.5, 0.99])
def test_quantile_round_trip(q):
    p = ChannelParams(2.5, 2.5, 1.0)
    assert cdf_snr(p, snr_quantile(p, q)) == pytest.approx(q, rel=1e-10)


def test_quantile_domain():
    with pytest.raises(ParameterError):
        snr_quantile(ChannelParams(2.5, 2.5, 1.0), 1.0)


# --- moments ---------------------------------------------------------------------


def test_moment_examples():
    assert snr_moment(ChannelParams(2.0, 3.0, 2.5), 1) == 2.5
    assert snr_moment(ChannelParams(2.0, 3.0, 1.0), 2) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(MomentDivergenceError):
        snr_moment(ChannelParams(2.0, 2.0, 1.0), 2)
    with pytest.raises(MomentDivergenceError):
        snr_moment(ChannelParams(2.0, 3.0, 1.0), -2)


@settings(max_examples=40, deadline=None)
@given(fading_m, fading_ms, mean_snr)
def test_mean_identity_exact(m, ms, gb):
    assert snr_moment(ChannelParams(m, ms, gb), 1) == gb


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 6.0), st.floats(2.5, 10.0))
def test_second_moment_closed_form(m, ms):
    p = ChannelParams(m, ms, 1.0)
    closed = (m + 1.0) * (ms - 1.0) ** 2 / (m * ms * (ms - 2.0))
    assert snr_moment(p, 2) == pytest.approx(closed, rel=1e-12)


@pytest.mark.parametrize("n", [-0.5, 0.5, 1.5, 2.0])
def test_fractional_moment_by_quadrature(n):
    p = ChannelParams(2.0, 4.0, 3.0)
    val, _ = integrate_semi_infinite(lambda g: g**n * pdf_snr(p, g), scale=p.mean_snr)
    assert snr_moment(p, n) == pytest.approx(val, rel=1e-8)


# --- sampler ---------------------------------------------------------------------


@pytest.mark.parametrize("m, ms", [(2.0, 4.0), (0.75, 2.5)])
def test_sampler_mean(m, ms):
    p = ChannelParams(m, ms, 3.0)
    x = sample_snr(p, make_stream(11, 0), 1_000_000)
    assert np.all(x >= 0)
    if ms > 2:
        se = x.std() / math.sqrt(x.size)
        assert abs(x.mean() - p.mean_snr) < 3 * se
    else:
        # infinite variance: compare the median instead
        assert np.median(x) == pytest.approx(snr_quantile(p, 0.5), rel=0.01)


@pytest.mark.parametrize("m, ms", [(2.5, 2.5), (3.0, 1.5), (0.75, 4.0)])
def test_sampler_ks(m, ms):
    p = ChannelParams(m, ms, 1.0)
    x = sample_snr(p, make_stream(12, 1), 100_000)
    _, pval = ks_statistic(x, lambda g: cdf_snr(p, g))
    assert pval > 0.01


@pytest.mark.parametrize("m", [0.75, 2.0])
def test_sampler_nakagami_limit(m):
    p = ChannelParams(m, 1e6, 2.0)
    x = sample_snr(p, make_stream(13, 0), 100_000)
    _, pval = ks_statistic(x, lambda g: stats.gamma.cdf(g, m, scale=p.mean_snr / m))
    assert pval > 0.01


def test_sampler_deterministic_and_counts():
    p = ChannelParams(2.0, 3.0, 1.0)
    a = sample_snr(p, make_stream(1, 2), 1000)
    b = sample_snr(p, make_stream(1, 2), 1000)
    assert np.array_equal(a, b)
    with pytest.raises(ParameterError):
        sample_snr(p, make_stream(1, 2), 0)
