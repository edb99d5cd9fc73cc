"""Quadrature layer: line/contour integrals, exact tails, packet smearing."""

import math

import numpy as np
import pytest
from scipy import integrate

from epresolve.boundary import BoundaryModel, bm_scatter
from epresolve.exact import ExpLaurent
from epresolve.quadrature import (
    ContourSpec,
    GaussianPacket,
    OscRational,
    ft_inverse_power,
    gauss_moment,
    osc_power_tail,
    packet_product_moment,
    quad_contour,
    quad_line,
    quad_packet,
)


# ---------------------------------------------------------------------------
# quad_line
# ---------------------------------------------------------------------------

def test_line_gaussian():
    r = quad_line(lambda x: np.exp(-(x**2)), tol=1e-10)
    assert abs(r.value - math.sqrt(math.pi)) < 1e-10
    assert r.error < 1e-8
    assert r.evaluations > 0


def test_line_double_pole_vanishes():
    # whole-line integral of 1/(x-i)^2 is exactly zero (antiderivative decays)
    r = quad_line(lambda x: 1.0 / (x - 1j) ** 2, tol=1e-9)
    assert abs(r.value) < 1e-8


def test_line_oscillatory_double_pole():
    # residue at x = i: ∫ e^{ix}/(x-i)^2 dx = 2 pi i * d/dx e^{ix}|_{x=i} = -2 pi / e
    r = quad_line(lambda x: np.exp(1j * x) / (x - 1j) ** 2, tol=1e-9, oscillation_k=1.0)
    assert abs(r.value - (-2 * math.pi / math.e)) < 1e-7


def test_line_determinism():
    f = lambda x: np.exp(1j * 2.0 * x) / (x - 0.3 - 1j) ** 2
    a = quad_line(f, tol=1e-9, oscillation_k=2.0)
    b = quad_line(f, tol=1e-9, oscillation_k=2.0)
    assert a.value == b.value and a.evaluations == b.evaluations


# ---------------------------------------------------------------------------
# quad_contour
# ---------------------------------------------------------------------------

def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(cutoff=10.0, epsilon=-0.1)
    with pytest.raises(ValueError):
        ContourSpec(cutoff=10.0, epsilon=0.5, direction="sideways")
    with pytest.raises(ValueError):
        ContourSpec(cutoff=10.0, epsilon=2.0, centers=(-1.0, 1.0))
    with pytest.raises(ValueError):
        ContourSpec(cutoff=1.0, epsilon=0.5, centers=(1.0,))


def test_contour_arc_residue_halves():
    # detour around the simple pole 1/k: up gives -i pi, down gives +i pi,
    # relative to the truncated principal-value segments (which vanish by parity)
    for direction, expect in (("up", -1j * math.pi), ("down", 1j * math.pi)):
        spec = ContourSpec(cutoff=4.0, epsilon=0.5, direction=direction, centers=(0.0,))
        r = quad_contour(lambda k: 1.0 / k, spec, tol=1e-10)
        assert abs(r.value - expect) < 1e-9, direction


def test_contour_entire_function_direction_independent():
    f = lambda k: np.exp(-(k**2))
    up = quad_contour(f, ContourSpec(3.0, 0.4, "up"), tol=1e-10)
    down = quad_contour(f, ContourSpec(3.0, 0.4, "down"), tol=1e-10)
    straight = integrate.quad(lambda k: math.exp(-(k**2)), -3, 3)[0]
    assert abs(up.value - down.value) < 1e-10
    assert abs(up.value - straight) < 1e-9


def test_contour_multiple_centers():
    # 1/(k^2 - 1) has simple poles at +-1 with residues +-1/2; detouring both
    # above adds -i pi (sum of residues * i pi each way) ... the two halves cancel.
    f = lambda k: 1.0 / (k * k - 1.0 + 0j)
    up = quad_contour(f, ContourSpec(6.0, 0.3, "up", centers=(-1.0, 1.0)), tol=1e-10)
    down = quad_contour(f, ContourSpec(6.0, 0.3, "down", centers=(-1.0, 1.0)), tol=1e-10)
    # residues at -1 and +1 are -1/2 and +1/2: the detour contributions cancel,
    # so both contours agree and equal the (finite) two-sided principal value
    assert abs(up.value - down.value) < 1e-9


# ---------------------------------------------------------------------------
# exact residue transforms and tails
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "q omega".split(),
    [(1, 0.7), (2, 0.7), (3, 1.3), (1, -0.7), (4, 2.0)],
)
def test_ft_inverse_power_against_quadrature(q, omega):
    z = 0.4 + 1.2j

    def f(x):
        return np.exp(1j * omega * x) / (x - z) ** q

    want = ft_inverse_power(q, omega, z)
    got = quad_line(f, tol=1e-10, oscillation_k=omega)
    assert abs(got.value - want) < 5e-7


def test_ft_inverse_power_zero_frequency():
    z = 1j
    assert ft_inverse_power(2, 0.0, z) == 0.0
    assert ft_inverse_power(1, 0.0, z) == 1j * math.pi
    assert ft_inverse_power(1, 0.0, -1j) == -1j * math.pi
    with pytest.raises(ValueError):
        ft_inverse_power(0, 0.0, z)


def test_ft_wrong_side_vanishes():
    # Im z > 0 keeps the pole above the axis: negative frequencies see nothing
    assert ft_inverse_power(2, -1.0, 1j) == 0.0
    assert ft_inverse_power(2, 1.0, -1j) == 0.0


@pytest.mark.parametrize(
    "mu q side".split(),
    [(0.9, 1, 1), (0.9, 3, 1), (-1.7, 2, 1), (0.9, 2, -1), (-0.5, 1, -1)],
)
def test_osc_power_tail_telescoping(mu, q, side, X=25.0):
    # T(X) - T(X + L) must equal the (absolutely computable) core on [X, X+L]
    from epresolve.quadrature import _adaptive

    z = -0.2 + 0.9j
    L = 37.0
    tX = osc_power_tail(mu, z, q, X, side)
    tXL = osc_power_tail(mu, z, q, X + L, side)

    def f(t):
        x = side * t
        return np.exp(1j * mu * x) / (x - z) ** q

    core = _adaptive(f, X, X + L, 1e-12)
    assert abs((tX - tXL) - core.value) < 1e-10


def test_osc_power_tail_against_mpmath():
    import mpmath as mp

    mp.mp.dps = 25
    mu, q, X = 0.9, 1, 25.0
    z = mp.mpc("-0.2", "0.9")
    want = complex(mp.quadosc(lambda t: mp.e ** (1j * mu * t) / (t - z) ** q, [X, mp.inf], omega=mu))
    got = osc_power_tail(mu, complex(z), q, X, 1)
    assert abs(got - want) < 1e-13


def test_osc_power_tail_abel_settling():
    # q = 0 (plain oscillation): the two Abel tails plus the finite core
    # telescope to zero, the regularized whole-line value
    mu, X = 0.8, 25.0
    z = 1j
    both = osc_power_tail(mu, z, 0, X, 1) + osc_power_tail(mu, z, 0, X, -1)
    assert abs(both - (-2 * math.sin(mu * X) / mu)) < 1e-12
    # polynomially growing amplitude, Abel sense: check the q=-1 recursion
    # against its own integration-by-parts identity on a finite window
    t1 = osc_power_tail(mu, z, -1, X, 1)
    t2 = osc_power_tail(mu, z, -1, X + 10.0, 1)
    from epresolve.quadrature import _adaptive

    core = _adaptive(lambda t: np.exp(1j * mu * t) * (t - z), X, X + 10.0, 1e-12)
    assert abs((t1 - t2) - core.value) < 1e-9


def test_tail_zero_frequency_power():
    z = 1j
    X = 30.0
    want = osc_power_tail(0.0, z, 3, X, 1)
    got = integrate.quad(lambda t: ((t - z) ** -3).real, X, np.inf)[0] + 1j * (
        integrate.quad(lambda t: ((t - z) ** -3).imag, X, np.inf)[0]
    )
    assert abs(want - got) < 1e-12
    with pytest.raises(ValueError):
        osc_power_tail(0.0, z, 1, X, 1)


# ---------------------------------------------------------------------------
# OscRational
# ---------------------------------------------------------------------------

def test_oscrational_full_line_matches_residue():
    z = 0.1 + 1.0j
    f = OscRational(z, [(1.2, 2, 0.7 - 0.3j), (-0.4, 1, 1.1j), (0.0, 3, 2.0)])
    want = (
        (0.7 - 0.3j) * ft_inverse_power(2, 1.2, z)
        + 1.1j * ft_inverse_power(1, -0.4, z)
        + 2.0 * ft_inverse_power(3, 0.0, z)
    )
    assert abs(f.integral_full_line() - want) < 1e-14


def test_oscrational_line_consistency():
    # core-plus-exact-tails must agree with the closed-form whole-line value
    z = 0.3 + 0.8j
    f = OscRational(z, [(0.9, 2, 1.0), (-0.9, 2, 0.5), (0.3, 3, -2.0j)])
    closed = f.integral_full_line()
    pieced = f.integral_line(X=40.0, tol=1e-11)
    assert abs(pieced.value - closed) < 1e-9


def test_oscrational_algebra_and_eval():
    z = 1j
    c = OscRational.cosine(z, 0.5)
    s = OscRational.sine(z, 0.5)
    # cos^2 + sin^2 == 1
    one = c * c + s * s
    xs = np.linspace(-3, 3, 11)
    assert np.allclose(one.eval(xs), 1.0)
    # sin(a)cos(a) = sin(2a)/2
    prod = s * c
    half_double = OscRational.sine(z, 1.0) * 0.5
    assert np.allclose(prod.eval(xs), half_double.eval(xs))


def test_oscrational_poly_shift():
    z = 0.2 + 1j
    # (x-z) * (x-z)^{-2} == (x-z)^{-1}
    f = OscRational.centered_poly(z, [0.0, 1.0]).shift_power(2)
    g = OscRational(z, [(0.0, 1, 1.0)])
    xs = np.linspace(-2, 2, 7)
    assert np.allclose(f.eval(xs), g.eval(xs))


# ---------------------------------------------------------------------------
# Gaussian packets
# ---------------------------------------------------------------------------

def test_gauss_moment_base_cases():
    assert abs(gauss_moment(0, 0.0) - math.sqrt(math.pi)) < 1e-15
    # first moment with phase: sqrt(pi) * (i b / 2) e^{-b^2/4}
    b = 0.8
    want = math.sqrt(math.pi) * (1j * b / 2) * math.exp(-(b**2) / 4)
    assert abs(gauss_moment(1, b) - want) < 1e-14


@pytest.mark.parametrize("order", [0, 1, 2, 3, 5])
def test_gauss_moment_against_quadrature(order):
    b = 1.3
    re = integrate.quad(lambda t: t**order * math.exp(-t * t) * math.cos(b * t), -12, 12)[0]
    im = integrate.quad(lambda t: t**order * math.exp(-t * t) * math.sin(b * t), -12, 12)[0]
    assert abs(gauss_moment(order, b) - complex(re, im)) < 1e-12


def test_packet_validation_and_eval():
    with pytest.raises(ValueError):
        GaussianPacket(width=0.0)
    g = GaussianPacket(center=1.0, width=0.5, poly=(0.0, 1.0))  # g(k) = k e^{-((k-1)/.5)^2}
    assert abs(g.eval(1.0) - 1.0) < 1e-15


def test_packet_derivatives_match_finite_differences():
    g = GaussianPacket(center=0.7, width=1.3, poly=(0.5, -1.0, 2.0))
    h = 1e-5
    for k in (0.0, 0.4, -1.1):
        fd1 = (g.eval(k + h) - g.eval(k - h)) / (2 * h)
        assert abs(g.deriv_at(k, 1) - fd1) < 1e-8
        fd2 = (g.eval(k + h) - 2 * g.eval(k) + g.eval(k - h)) / h**2
        assert abs(g.deriv_at(k, 2) - fd2) < 1e-5


def test_packet_plane_moment_oracles():
    # ∫ e^{-k^2} e^{ikx} dk = sqrt(pi) e^{-x^2/4}
    g = GaussianPacket()
    x = 1.7
    assert abs(g.plane_moment(0, x) - math.sqrt(math.pi) * math.exp(-(x**2) / 4)) < 1e-14
    # ∫ k e^{-k^2} e^{ikx} dk = sqrt(pi) (ix/2) e^{-x^2/4}
    want = math.sqrt(math.pi) * (1j * x / 2) * math.exp(-(x**2) / 4)
    assert abs(g.plane_moment(1, x) - want) < 1e-14
    # center shift multiplies by e^{ix}
    g1 = GaussianPacket(center=1.0)
    want_shift = math.sqrt(math.pi) * np.exp(1j * x) * math.exp(-(x**2) / 4)
    assert abs(g1.plane_moment(0, x) - want_shift) < 1e-14


def test_packet_product_moment_against_quadrature():
    g1 = GaussianPacket(center=0.5, width=0.8)
    g2 = GaussianPacket(center=-0.2, width=1.1, poly=(1.0, 0.5))
    for power in (0, 1, 2):
        want = integrate.quad(
            lambda k: (g1.eval(k) * g2.eval(k)).real * k**power, -15, 15
        )[0]
        assert abs(packet_product_moment(g1, g2, power) - want) < 1e-10


def test_quad_packet_rejects_negative_spectral_powers():
    g = GaussianPacket()
    f = ExpLaurent.monomial(1, k_pow=-1, phase_x=1)
    with pytest.raises(ValueError):
        quad_packet(g, f, 1j)


def test_quad_packet_against_tensor_quadrature():
    # smear the n=1 scaled scattering solution and spot-check against a
    # brute-force k-grid at a few coordinates
    m = BoundaryModel(1, z=1j)
    F = bm_scatter(m)
    g = GaussianPacket(center=0.6, width=0.9)
    smeared = quad_packet(g, F, m.z)
    ks = np.linspace(-12, 12, 8001)
    for x in (-1.3, 0.0, 2.1):
        brute = np.trapezoid(g.eval(ks) * F.eval(ks, x, m.z), ks)
        assert abs(smeared(x) - brute) < 1e-9 * max(1.0, abs(brute))


def test_quad_packet_gaussian_decay_in_x():
    m = BoundaryModel(2, z=1j)
    smeared = quad_packet(GaussianPacket(width=1.0), bm_scatter(m), m.z)
    assert abs(smeared(40.0)) < 1e-80
