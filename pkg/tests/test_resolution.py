"""Resolution layer: exact coefficient tables, the scaled chain, closed-form
gap certificates, and the numeric reconstruction schemes."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from epresolve.boundary import BoundaryModel, bm_apply_h, bm_assoc
from epresolve.exact import i_power
from epresolve.interior import InteriorModel, im_psi0
from epresolve import resolution as rs
from epresolve.resolution import (
    Scheme,
    SchemeId,
    TestFunction,
    apply_base_resolution,
    apply_scheme,
    beta_seq,
    closed_form_gap,
    coeff_C,
    convolution_gap,
    eps_chain,
    outer_product_gap,
    psi1_expandability,
    reproduce_psi0_term,
    reproduce_psi20_terms,
)


def quad_c(f, a, b, **kw):
    """Complex-valued scipy.quad, used for independent oracles only."""
    re = quad(lambda t: f(t).real, a, b, **kw)[0]
    im = quad(lambda t: f(t).imag, a, b, **kw)[0]
    return re + 1j * im


# ---------------------------------------------------------------------------
# coefficient table
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "l m n expected".split(),
    [
        (1, 0, 1, Fraction(1)),
        (1, 0, 4, Fraction(1)),
        (2, 0, 2, Fraction(1, 2)),
        (2, 1, 2, Fraction(-2)),
        (3, 0, 2, Fraction(0)),
        (3, 1, 2, Fraction(-1)),
        (3, 2, 3, Fraction(5)),
    ],
)
def test_coefficient_table(l, m, n, expected):
    got = coeff_C(l, m, n)
    assert got.im == 0
    assert got.re == expected


@pytest.mark.parametrize(
    "l m n".split(),
    [(0, 0, 1), (2, 2, 2), (4, 0, 2), (1, 1, 3), (2, -1, 2)],
)
def test_coefficient_table_rejects_out_of_range(l, m, n):
    with pytest.raises(ValueError):
        coeff_C(l, m, n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6], ids=[f"n{k}" for k in range(1, 7)])
def test_closed_form_gap_empty(n):
    # the full endpoint-difference bracket minus its closed double-sum form,
    # expanded exactly: empty dict == identical expressions at every eps
    assert closed_form_gap(n) == {}


def test_closed_form_gap_detects_index_shift():
    """Shifting the inner binomial's lower index by one breaks the identity.

    This is the discriminating check between the two transcriptions of the
    coefficient table; the shipped table is the one that closes the gap.
    """
    for n in (2, 3):
        assert closed_form_gap(n, lower_shift=1) != {}


def test_n2_trig_rearrangement_certified():
    # chain outer product + the three trigonometric corrections equals the
    # endpoint-difference bracket, exactly, term by term
    assert rs._n2_rearranged_gap() == {}


# ---------------------------------------------------------------------------
# smoothing coefficients and the scaled chain
# ---------------------------------------------------------------------------


def test_smoothing_coefficients_frozen():
    assert beta_seq(5) == [
        Fraction(1),
        Fraction(1, 6),
        Fraction(31, 360),
        Fraction(863, 15120),
        Fraction(76813, 1814400),
    ]


@given(st.integers(min_value=0, max_value=16))
def test_smoothing_convolution_identity(l):
    b = beta_seq(l + 1)
    assert sum(b[j] * b[l - j] for j in range(l + 1)) == Fraction(1, 2 * l + 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6], ids=[f"n{k}" for k in range(1, 7)])
def test_scaled_convolution_system_exact(n):
    assert convolution_gap(BoundaryModel(n)) == [Fraction(0)] * n


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6], ids=[f"n{k}" for k in range(1, 7)])
def test_outer_product_identity_exact(n):
    assert outer_product_gap(BoundaryModel(n)) == {}


def test_eps_chain_n2_members_match_display():
    m = BoundaryModel(2)
    eps = Fraction(1, 2)
    ch = eps_chain(m, eps)
    assert ch.unit == i_power(3)
    assert ch.root == Fraction(4)
    assert ch.members[0] == bm_assoc(m, 0)
    assert ch.members[1] == bm_assoc(m, 1) + bm_assoc(m, 0) * (Fraction(1, 6) / eps**2)


def test_eps_chain_numeric_prefactor():
    m = BoundaryModel(2)
    ch = eps_chain(m, Fraction(1, 10))
    x = np.array([0.7, -1.3])
    z = m.z
    base = -3.0 / (np.sqrt(2 * np.pi) * (x - z) ** 2)
    got = ch.member_eval(0, z)(x)
    want = -1j * np.sqrt(2 / 0.1) * base
    assert np.allclose(got, want, rtol=1e-14, atol=0)


@pytest.mark.parametrize("n", [1, 2, 3, 4], ids="n1 n2 n3 n4".split())
def test_eps_chain_ladder_property(n):
    """The operator annihilates the scaled head and steps members down."""
    m = BoundaryModel(n)
    ch = eps_chain(m, Fraction(2, 7))
    assert not bm_apply_h(m, ch.members[0]).terms
    for l in range(1, n):
        assert bm_apply_h(m, ch.members[l]) == ch.members[l - 1]


def test_eps_chain_rejects_bad_radius():
    with pytest.raises(ValueError):
        eps_chain(BoundaryModel(1), 0)


# ---------------------------------------------------------------------------
# partial fractions helper (numeric reconstruction property)
# ---------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    p1=st.integers(min_value=1, max_value=3),
    p2=st.integers(min_value=1, max_value=3),
    p3=st.integers(min_value=0, max_value=2),
    x=st.floats(min_value=-3.0, max_value=3.0),
)
def test_partial_fractions_reconstruct(p1, p2, p3, x):
    centers = [(1j, p1), (-1j, p2)]
    if p3:
        centers.append((0.4 + 0.9j, p3))
    direct = 1.0 + 0.0j
    for c, p in centers:
        direct *= (x - c) ** (-p)
    rebuilt = sum(w * (x - ct) ** (-j) for ct, j, w in rs._pf_decompose(centers))
    assert abs(rebuilt - direct) <= 1e-10 * abs(direct)


def test_merged_centers_collapses_coincident_poles():
    merged = rs._merged_centers([(1j, 2), (-1j, 2), (1j, 3)])
    assert merged == [(1j, 5), (-1j, 2)]


# ---------------------------------------------------------------------------
# exact schemes at finite radius
# ---------------------------------------------------------------------------


GAUSS = TestFunction.gaussian(0.0, 1.0)
XP = 0.3
TARGET = float(np.exp(-(XP**2)))


@pytest.mark.parametrize("n", [1, 2, 3], ids="n1 n2 n3".split())
@pytest.mark.parametrize("eps", [0.3, 0.7], ids="eps03 eps07".split())
def test_closed_reconstruction_is_exact(n, eps):
    val = apply_scheme(Scheme(SchemeId.RES3, BoundaryModel(n)), eps, 50.0 / eps, GAUSS, XP)
    assert abs(val - TARGET) < 5e-6


def test_closed_reconstruction_radius_independent():
    m = BoundaryModel(2)
    a = apply_scheme(Scheme(SchemeId.RES3, m), 0.3, 50.0 / 0.3, GAUSS, XP)
    b = apply_scheme(Scheme(SchemeId.RES3, m), 0.7, 50.0 / 0.7, GAUSS, XP)
    assert abs(a - b) < 1e-8


@pytest.mark.parametrize(
    "probe",
    [
        TestFunction.hermite_gaussian(2, 0.4, 1.1),
        TestFunction.rational_decay(2),
        TestFunction.rational_decay(3),
    ],
    ids="hermite2 rational2 rational3".split(),
)
def test_closed_reconstruction_other_probes(probe):
    m = BoundaryModel(1)
    want = complex(probe.make_eval(m)(np.array([XP]))[0])
    val = apply_scheme(Scheme(SchemeId.RES3, m), 0.5, 120.0, probe, XP)
    assert abs(val - want) < 1e-8


def test_rational_probe_with_displacement_on_probe_pole():
    # probe poles at +-i coincide with the default displacement: the merged
    # partial-fraction path must handle the doubled pole
    m = BoundaryModel(1, 1j)
    probe = TestFunction.rational_decay(3)
    want = complex(probe.make_eval(m)(np.array([XP]))[0])
    val = apply_scheme(Scheme(SchemeId.RES3, m), 0.5, 120.0, probe, XP)
    assert abs(val - want) < 1e-8


def test_n2_rearranged_scheme_exact_at_finite_radius():
    m = BoundaryModel(2)
    for eps in (0.4, 0.1):
        val = apply_scheme(Scheme(SchemeId.RES9, m), eps, 50.0 / eps, GAUSS, XP)
        assert abs(val - TARGET) < 1e-9


def test_interior_exact_scheme_at_finite_radius():
    m = InteriorModel(1.0, 1j)
    for eps in (0.5, 0.2):
        val = apply_scheme(Scheme(SchemeId.RES13, m), eps, 50.0 / eps, GAUSS, XP)
        assert abs(val - TARGET) < 1e-9


# ---------------------------------------------------------------------------
# reduced schemes: first-order convergence, shared limits
# ---------------------------------------------------------------------------


def test_reduced_schemes_share_the_limit():
    m = BoundaryModel(2)
    errs = {}
    for sid in (SchemeId.RES7, SchemeId.RES10, SchemeId.RES6):
        errs[sid] = [
            abs(apply_scheme(Scheme(sid, m), eps, 50.0 / eps, GAUSS, XP) - TARGET)
            for eps in (0.4, 0.1)
        ]
    for sid, (coarse, fine) in errs.items():
        assert fine < 0.6 * coarse, sid
        assert fine < 0.1


def test_limit_scheme_sweep_boundary():
    # narrow probe: the dropped remainder acts like eps * integral(f), so the
    # sub-1e-3 endpoint needs a packet whose mass is small; coupling must
    # outrun the packet bandwidth at the coarse end
    f = TestFunction.gaussian(0.0, 0.01)
    xp = 0.005
    want = float(np.exp(-((xp / 0.01) ** 2)))
    m = BoundaryModel(1)
    errs = [
        abs(apply_scheme(Scheme(SchemeId.RES5, m), eps, 400.0 / eps, f, xp) - want)
        for eps in (0.4, 0.2, 0.1, 0.05)
    ]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_limit_scheme_sweep_interior():
    f = TestFunction.gaussian(0.0, 0.01)
    xp = 0.005
    want = float(np.exp(-((xp / 0.01) ** 2)))
    m = InteriorModel(1.0, 1j)
    errs = [
        abs(apply_scheme(Scheme(SchemeId.RES12, m), eps, 400.0 / eps, f, xp) - want)
        for eps in (0.4, 0.2, 0.1, 0.05)
    ]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_res12_example_sweep_decreases():
    m = InteriorModel(1.0, 1j)
    errs = [
        abs(apply_scheme(Scheme(SchemeId.RES12, m), eps, 50.0 / eps, GAUSS, XP) - TARGET)
        for eps in (0.4, 0.2, 0.1, 0.05)
    ]
    assert all(a > b for a, b in zip(errs, errs[1:]))


# ---------------------------------------------------------------------------
# chain members as test functions: floors and recoveries
# ---------------------------------------------------------------------------


def test_truncated_scheme_cannot_see_the_chain_head():
    """The chain-only scheme returns exactly zero on the n=2 chain head."""
    m = BoundaryModel(2)
    f20 = TestFunction.chain_boundary(0)
    head = complex(-3.0 / (np.sqrt(2 * np.pi) * (XP - m.z) ** 2))
    for eps in (0.2, 0.05):
        val = apply_scheme(Scheme(SchemeId.RES6, m), eps, 50.0 / eps, f20, XP)
        assert abs(val) < 1e-12
        assert abs(val - head) > 0.9 * abs(head)


def test_partially_reduced_scheme_recovers_the_chain_head():
    m = BoundaryModel(2)
    f20 = TestFunction.chain_boundary(0)
    head = complex(-3.0 / (np.sqrt(2 * np.pi) * (XP - m.z) ** 2))
    errs = [
        abs(apply_scheme(Scheme(SchemeId.RES10, m), eps, 50.0 / eps, f20, XP) - head)
        for eps in (0.2, 0.05)
    ]
    assert errs[1] < 0.4 * errs[0]


def test_partner_function_floor_quick():
    rep = psi1_expandability(InteriorModel(1.0, 1j), eps_min=0.1)
    assert rep.residual <= rep.tolerance
    assert len(rep.trace) == 3


# ---------------------------------------------------------------------------
# singular-term weights, with independent quadrature oracles
# ---------------------------------------------------------------------------


def test_pair_weight_oracle_finite_radius():
    """Cross-check the odd-term weight against direct quadrature at eps=0.25."""
    m = BoundaryModel(2)
    eps = 0.25
    z = m.z
    xp = 0.3

    def member(x):
        return -3.0 / (np.sqrt(2 * np.pi) * (x - z) ** 2)

    def term12(x):
        d = x - xp
        return (
            12.0
            * d
            * np.sin(eps * d / 4) ** 2
            * np.sin(eps * d / 2)
            / (np.pi * eps**2 * (x - z) ** 2 * (xp - z) ** 2)
        )

    oracle = quad_c(lambda x: member(x) * term12(x), -4000, 4000, limit=4000) / member(xp)
    got = reproduce_psi20_terms(m, eps)[0]
    assert abs(got - oracle) < 5e-5


def test_square_weight_oracle_finite_radius():
    m = BoundaryModel(2)
    eps = 0.25
    z = m.z
    xp = 0.3

    def member(x):
        return -3.0 / (np.sqrt(2 * np.pi) * (x - z) ** 2)

    def term3sq(x):
        d = x - xp
        return (
            3.0
            * (eps * d - 2 * np.sin(eps * d / 2)) ** 2
            / (2 * np.pi * eps**3 * (x - z) ** 2 * (xp - z) ** 2)
        )

    oracle = quad_c(lambda x: member(x) * term3sq(x), -8000, 8000, limit=8000) / member(xp)
    got = reproduce_psi20_terms(m, eps)[1]
    # the integrand settles like 1/x^2, so the truncated oracle is the loose side
    assert abs(got - oracle) < 5e-4


def test_pair_and_square_weights_reach_their_limits():
    m = BoundaryModel(2)
    c1_coarse, c2_coarse = reproduce_psi20_terms(m, 1e-2)
    c1, c2 = reproduce_psi20_terms(m, 1e-3)
    assert abs(c1 - 0.75) < 0.01 * 0.75
    assert abs(c2 - 0.25) < 0.01 * 0.25
    assert abs(c1 - 0.75) < 0.2 * abs(c1_coarse - 0.75)
    assert abs(c2 - 0.25) < 0.2 * abs(c2_coarse - 0.25)


def test_interior_overlap_weight_oracle():
    m = InteriorModel(1.0, 1j)
    eps = 0.1
    xp = 0.0

    def integrand(x):
        p0 = im_psi0(m, np.array([x])).value[0]
        return np.sin(eps * (x - xp) / 2) ** 2 * p0 * p0

    oracle = quad_c(integrand, -10000, 10000, limit=10000) * 2.0 / (np.pi * eps * m.alpha)
    got = reproduce_psi0_term(m, eps, xp)
    assert abs(got - oracle) < 2e-3 * abs(oracle)


def test_interior_overlap_weight_reaches_one():
    m = InteriorModel(1.0, 1j)
    coarse = reproduce_psi0_term(m, 1e-2)
    for xp in (0.0, 1.7):
        v = reproduce_psi0_term(m, 1e-3, xp)
        assert abs(v - 1.0) < 0.01
    assert abs(reproduce_psi0_term(m, 1e-3) - 1.0) < 0.2 * abs(coarse - 1.0)


# ---------------------------------------------------------------------------
# deformed-contour base resolution
# ---------------------------------------------------------------------------


def test_base_resolution_direction_invariance_boundary():
    m = BoundaryModel(1)
    up = apply_base_resolution(m, GAUSS, XP, 0.5, 60.0, "up")
    dn = apply_base_resolution(m, GAUSS, XP, 0.5, 60.0, "down")
    assert abs(up - dn) < 1e-12
    assert abs(up - TARGET) < 1e-9


def test_base_resolution_direction_invariance_interior():
    m = InteriorModel(1.0, 1j)
    up = apply_base_resolution(m, GAUSS, XP, 0.3, 80.0, "up")
    dn = apply_base_resolution(m, GAUSS, XP, 0.3, 80.0, "down")
    assert abs(up - dn) < 1e-12
    assert abs(up - TARGET) < 1e-9


# ---------------------------------------------------------------------------
# argument validation
# ---------------------------------------------------------------------------


def test_scheme_family_consistency_enforced():
    with pytest.raises(ValueError):
        Scheme(SchemeId.RES12, BoundaryModel(1))
    with pytest.raises(ValueError):
        Scheme(SchemeId.RES5, InteriorModel(1.0, 1j))
    with pytest.raises(ValueError):
        Scheme(SchemeId.RES9, BoundaryModel(1))  # rearranged family needs n=2


def test_apply_scheme_regulator_validation():
    s = Scheme(SchemeId.RES3, BoundaryModel(1))
    with pytest.raises(ValueError):
        apply_scheme(s, 0.0, 100.0, GAUSS, XP)
    with pytest.raises(ValueError):
        apply_scheme(s, 0.2, -1.0, GAUSS, XP)
    si = Scheme(SchemeId.RES12, InteriorModel(1.0, 1j))
    with pytest.raises(ValueError):
        apply_scheme(si, 1.5, 100.0, GAUSS, XP)  # radius must stay below alpha


def test_base_resolution_rejects_unknown_direction():
    with pytest.raises(ValueError):
        apply_base_resolution(BoundaryModel(1), GAUSS, XP, 0.5, 60.0, "sideways")
