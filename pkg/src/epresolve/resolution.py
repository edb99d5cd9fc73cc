"""Regularized resolutions of the identity for both model families.

The module provides three layers:

1. exact combinatorics: the rational coefficient table ``coeff_C``, the
   convolution sequence ``beta_seq``, the scaled small-momentum chains
   (``eps_chain``) and exact symbolic checks of the outer-product and
   convolution identities, including a two-point trigonometric-Laurent
   algebra that decides equality of the two closed forms of the exact
   boundary resolution;
2. scheme application: ``apply_scheme`` evaluates any of the eleven
   regularized reconstruction schemes on a concrete test function at fixed
   regulators (puncture radius eps, spectral cutoff A);
3. singular-term experiments: the closed-form reproduction coefficients for
   the index-2 boundary model and the interior bound state, and the
   non-expandability probe for the interior chain partner.

Scheme and identity labels (``res3``, ``vych1`` ...) are internal registry
ids used consistently across reports, the CLI, and tests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import sici

from .boundary import BoundaryModel, bm_assoc, bm_scatter
from .exact import ExpLaurent, RC_ONE, RationalComplex, i_power
from .interior import InteriorModel, im_psi0, im_psi1, im_tail_model
from .kernels import el_eval_grid, interior_psi_grid
from .quadrature import (
    ContourSpec,
    OscRational,
    _adaptive,
    _adaptive_oscillatory,
    _gl,
    ft_inverse_power,
    quad_contour,
)
from .report import VerificationReport

__all__ = [
    "SchemeId",
    "Scheme",
    "TestFunction",
    "EpsChain",
    "coeff_C",
    "beta_seq",
    "eps_chain",
    "outer_product_gap",
    "convolution_gap",
    "closed_form_gap",
    "apply_scheme",
    "apply_base_resolution",
    "reproduce_psi20_terms",
    "reproduce_psi0_term",
    "psi1_expandability",
]


# ---------------------------------------------------------------------------
# rational coefficient layers
# ---------------------------------------------------------------------------

def coeff_C(l: int, m: int, n: int, lower_shift: int = 0) -> RationalComplex:
    """Exact alternating-binomial coefficient of the closed boundary form.

    C(l, m, n) = (1/l) * sum_{j=0}^{m} (-1)^j binom(l, j) binom(n-m-1+2j, l-1).

    The ``lower_shift`` parameter exists for the symbolic adjudication test
    only: shifting the lower binomial index by one reproduces a competing
    transcription of the same table, and the two-point identity check
    (:func:`closed_form_gap`) singles out the correct one.
    """
    if not (1 <= l <= 2 * n - 1):
        raise ValueError(f"first index must lie in 1..2n-1, got l={l} for n={n}")
    if not (0 <= m <= min(l - 1, n - 1)):
        raise ValueError(f"second index must lie in 0..min(l-1,n-1), got m={m}")
    total = Fraction(0)
    for j in range(m + 1):
        total += (-1) ** j * math.comb(l, j) * math.comb(
            max(n - m - 1 + 2 * j + lower_shift, 0), l - 1
        )
    return RationalComplex.from_value(total / l)


def beta_seq(count: int) -> list[Fraction]:
    """Convolution-normalized rational sequence: b0=1, sum_j b_j b_{l-j} = 1/(2l+1)."""
    if count < 1:
        raise ValueError("need at least one term")
    betas = [Fraction(1)]
    for l in range(1, count):
        inner = sum((betas[j] * betas[l - j] for j in range(1, l)), Fraction(0))
        betas.append(Fraction(1, 2) * (Fraction(1, 2 * l + 1) - inner))
    return betas


# ---------------------------------------------------------------------------
# scaled small-momentum chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsChain:
    """Chain of scaled solutions at puncture radius eps.

    The l-th member equals  unit * sqrt(root) * members[l]  where ``unit``
    is the exact fourth root of unity i**(n+1) and ``root`` = 2/eps; the
    irrational square root is kept factored so ``members`` stay exact
    (rational-coefficient) expressions, and every quadratic identity can be
    verified without leaving exact arithmetic.
    """

    n: int
    eps: Fraction
    members: tuple[ExpLaurent, ...]
    unit: RationalComplex
    root: Fraction

    def member_eval(self, l: int, z: complex) -> Callable[[np.ndarray], np.ndarray]:
        """Numeric closure for the full l-th member, prefactor included."""
        scale = complex(self.unit.to_complex()) * math.sqrt(float(self.root))
        f = self.members[l]

        def ev(x: np.ndarray) -> np.ndarray:
            return scale * np.asarray(f.eval(0.0, x, z))

        return ev


def eps_chain(model: BoundaryModel, eps: Fraction | float) -> EpsChain:
    """Build the scaled chain: member l = sum_{j<=l} (b_j / eps^{2j}) * chain[l-j]."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("puncture radius must be positive")
    n = model.n
    betas = beta_seq(max(n, 1))
    members = []
    for l in range(n):
        acc = ExpLaurent.zero()
        for j in range(l + 1):
            acc = acc + bm_assoc(model, l - j) * (betas[j] / eps ** (2 * j))
        members.append(acc)
    return EpsChain(
        n=n, eps=eps, members=tuple(members), unit=i_power(n + 1), root=Fraction(2) / eps
    )


def _pair_basis(chain: EpsChain, model: BoundaryModel) -> dict[tuple[int, int, int], Fraction]:
    """LHS outer products in the basis eps^e * chain[a](x) * chain[b](x').

    Includes the squared prefactor unit^2 * root = (-1)^(n+1) * 2/eps, which
    is exact; keys carry the eps exponent.
    """
    n = chain.n
    betas = beta_seq(max(n, 1))
    sq = Fraction(2) * (-1) ** (n + 1)  # (i^(n+1))^2 * 2, over one eps power
    out: dict[tuple[int, int, int], Fraction] = {}
    for l in range(n):
        for j in range(l + 1):
            for jp in range(n - l):
                coeff = sq * betas[j] * betas[jp]
                key = (-1 - 2 * j - 2 * jp, l - j, n - 1 - l - jp)
                out[key] = out.get(key, Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v}


def outer_product_gap(model: BoundaryModel, eps: Fraction | float = 1) -> dict:
    """Exact difference between the two sides of the chain outer-product identity.

    Both sides are expanded in the basis eps^e * chain[a](x) * chain[b](x');
    an empty dict certifies exact equality.  The eps argument is irrelevant
    to the check (the expansion is graded in eps) and kept only so the chain
    constructor can be exercised at the caller's radius.
    """
    n = model.n
    chain = eps_chain(model, eps)
    lhs = _pair_basis(chain, model)
    rhs: dict[tuple[int, int, int], Fraction] = {}
    for l in range(n):
        coeff = Fraction(-2 * (-1) ** n, 2 * n - 2 * l - 1)
        for m in range(l + 1):
            key = (-(2 * n - 2 * l - 1), m, l - m)
            rhs[key] = rhs.get(key, Fraction(0)) + coeff
    gap = dict(lhs)
    for key, v in rhs.items():
        gap[key] = gap.get(key, Fraction(0)) - v
    return {k: v for k, v in gap.items() if v}


def convolution_gap(model: BoundaryModel) -> list[Fraction]:
    """Residuals of the scaled-coefficient convolution system, exactly.

    With a_j = unit * sqrt(2/eps) * b_j / eps^(2j), the products a_j a_{l-j}
    are rational multiples of eps^-(2l+1); the system requires their sum to
    equal -2(-1)^n / ((2l+1) eps^(2l+1)).  Returns one exact residual per
    l = 0..n-1 (all zero when the system holds).
    """
    n = model.n
    betas = beta_seq(max(n, 1))
    sq = Fraction(2) * (-1) ** (n + 1)
    out = []
    for l in range(n):
        s = sum((sq * betas[j] * betas[l - j] for j in range(l + 1)), Fraction(0))
        out.append(s - Fraction(-2 * (-1) ** n, 2 * l + 1))
    return out


# ---------------------------------------------------------------------------
# two-point trigonometric-Laurent algebra (exact closed-form adjudication)
# ---------------------------------------------------------------------------
#
# Terms are keyed (hx, hxp, a, b, e) and denote
#   exp(i*(hx/2)*eps*(x-z)) * exp(i*(hxp/2)*eps*(x'-z)) * (x-z)^a * (x'-z)^b * eps^e
# with RationalComplex coefficients.  All displacement phases exp(+-i eps z)
# cancel between the two points by construction and are tracked separately
# during assembly to prove it.

_TP = dict  # alias for readability: dict[tuple, RationalComplex]


def _tp_add(dst: _TP, key: tuple, val: RationalComplex) -> None:
    prev = dst.get(key)
    total = val if prev is None else prev + val
    if total.is_zero:
        dst.pop(key, None)
    else:
        dst[key] = total


def _tp_mul(a: _TP, b: _TP) -> _TP:
    out: _TP = {}
    for (h1, hp1, a1, b1, e1), c1 in a.items():
        for (h2, hp2, a2, b2, e2), c2 in b.items():
            _tp_add(out, (h1 + h2, hp1 + hp2, a1 + a2, b1 + b2, e1 + e2), c1 * c2)
    return out


def _tp_scale(a: _TP, c: RationalComplex | Fraction | int) -> _TP:
    cc = RationalComplex.from_value(c) if not isinstance(c, RationalComplex) else c
    out: _TP = {}
    for key, v in a.items():
        _tp_add(out, key, v * cc)
    return out


def _tp_sub(a: _TP, b: _TP) -> _TP:
    out = dict(a)
    for key, v in b.items():
        _tp_add(out, key, v * (-1))
    return out


_HALF_I = RationalComplex(Fraction(0), Fraction(1, 2))     # i/2
_NEG_HALF_I = RationalComplex(Fraction(0), Fraction(-1, 2))


def _tp_wave(var: int, halves: int) -> _TP:
    """exp(i*(halves/2)*eps*(x-z)) on point ``var`` (0: x, 1: x')."""
    key = (halves, 0, 0, 0, 0) if var == 0 else (0, halves, 0, 0, 0)
    return {key: RC_ONE}


def _tp_sin_delta(halves: int) -> _TP:
    """sin((halves/2) * eps * (x - x')) expanded in two-point waves."""
    plus = _tp_mul(_tp_wave(0, halves), _tp_wave(1, -halves))
    minus = _tp_mul(_tp_wave(0, -halves), _tp_wave(1, halves))
    return _tp_sub(_tp_scale(plus, _NEG_HALF_I), _tp_scale(minus, _NEG_HALF_I))


def _tp_cos_delta(halves: int) -> _TP:
    plus = _tp_mul(_tp_wave(0, halves), _tp_wave(1, -halves))
    minus = _tp_mul(_tp_wave(0, -halves), _tp_wave(1, halves))
    out = _tp_scale(plus, Fraction(1, 2))
    for key, v in _tp_scale(minus, Fraction(1, 2)).items():
        _tp_add(out, key, v)
    return out


def _tp_mono(a: int = 0, b: int = 0, e: int = 0, c: RationalComplex | int = 1) -> _TP:
    cc = RationalComplex.from_value(c) if not isinstance(c, RationalComplex) else c
    return {(0, 0, a, b, e): cc}


def _solution_at_puncture(m: int, eta: int, var: int, z_units: list[int]) -> _TP:
    """The index-m generic solution at spectral value eta*eps, on point ``var``.

    eta = +-1 picks the puncture edge.  The displacement-phase unit count
    (eta per factor) is appended to ``z_units`` so the caller can verify the
    exact cancellation.  The shared (2*pi)^(-1/2) is dropped here; callers
    account for one factor of 1/(2*pi) per solution pair.
    """
    model = BoundaryModel(m)
    F = bm_scatter(model)
    out: _TP = {}
    for (mk, p), c in F.terms.items():
        # F has k-power mk; dividing by k^m leaves mk - m <= 0
        kpow = mk - m
        coeff = c * (Fraction(eta) ** kpow if kpow else Fraction(1))
        key_pow = (0, 0, p, 0, kpow) if var == 0 else (0, 0, 0, p, kpow)
        piece = {key_pow: coeff}
        wave = _tp_wave(var, 2 * eta)
        for key, v in _tp_mul(piece, wave).items():
            _tp_add(out, key, v)
    z_units.append(eta)
    return out


def _boundary_bracket(n: int) -> _TP:
    """The endpoint-difference block of the first closed form, times 2*pi.

    Sum over l of ratio^l * [sol_{n-l-1}(x;k) sol_{n-l}(x';-k) / (i(x-z))]
    evaluated at k = +eps minus k = -eps.  The two solutions carry exactly
    cancelling displacement phases, asserted here.
    """
    total: _TP = {}
    inv_i = RationalComplex(Fraction(0), Fraction(-1))  # 1/i = -i
    for l in range(n):
        ratio = _tp_mono(a=-l, b=l)
        for eta in (1, -1):
            z_units: list[int] = []
            left = _solution_at_puncture(n - l - 1, eta, 0, z_units)
            right = _solution_at_puncture(n - l, -eta, 1, z_units)
            assert sum(z_units) == 0  # displacement phases cancel exactly
            prod = _tp_mul(left, right)
            prod = _tp_mul(prod, ratio)
            prod = _tp_mul(prod, _tp_mono(a=-1, c=inv_i))
            prod = _tp_scale(prod, Fraction(eta))  # (+eps) minus (-eps)
            for key, v in prod.items():
                _tp_add(total, key, v)
    return total


def _boundary_blocks(n: int, lower_shift: int) -> tuple[_TP, _TP]:
    """The cos- and sin-proportional coefficient blocks of form 2, times 2*pi."""
    cos_block: _TP = {}
    for l in range(n):
        for m in range(min(2 * l, n - 1) + 1):
            c = coeff_C(2 * l + 1, m, n, lower_shift).re * Fraction(
                math.factorial(n + 2 * l + 1 - m), math.factorial(n - 1 - m)
            )
            coeff = Fraction(-1, 4) ** l * c * Fraction(-1)
            piece = _tp_mul(
                _tp_cos_delta(2),
                _tp_mono(a=-(m + 1), b=m - 2 * l - 1, e=-2 * l - 1, c=RationalComplex.from_value(coeff)),
            )
            for key, v in piece.items():
                _tp_add(cos_block, key, v)
    sin_block: _TP = {}
    for l in range(1, n):
        for m in range(min(2 * l - 1, n - 1) + 1):
            c = coeff_C(2 * l, m, n, lower_shift).re * Fraction(
                math.factorial(n + 2 * l - m), math.factorial(n - 1 - m)
            )
            coeff = Fraction(-1, 4) ** l * c * Fraction(2)
            piece = _tp_mul(
                _tp_sin_delta(2),
                _tp_mono(a=-(m + 1), b=m - 2 * l, e=-2 * l, c=RationalComplex.from_value(coeff)),
            )
            for key, v in piece.items():
                _tp_add(sin_block, key, v)
    return cos_block, sin_block


def _sinc_difference(n: int) -> _TP:
    """(ratio^n - 1) * sin(eps*(x-x'))/(x-x'), times 2*pi (i.e. coefficient 2).

    The 1/(x-x') pole cancels against (ratio^n - 1); the quotient expands as
    -sum_j (x'-z)^j (x-z)^(-1-j), a pure two-point Laurent sum.
    """
    quotient: _TP = {}
    for j in range(n):
        _tp_add(quotient, (0, 0, -1 - j, j, 0), RationalComplex.from_value(Fraction(-1)))
    return _tp_scale(_tp_mul(_tp_sin_delta(2), quotient), Fraction(2))


def closed_form_gap(n: int, lower_shift: int = 0) -> _TP:
    """Exact difference of the two closed forms of the boundary resolution.

    Empty dict <=> the endpoint-difference form and the coefficient-table
    form agree identically (the shared principal-range spectral integral
    cancels).  Running this with ``lower_shift`` of 0 vs 1 adjudicates the
    two transcriptions of the coefficient table.
    """
    bracket = _boundary_bracket(n)
    cos_block, sin_block = _boundary_blocks(n, lower_shift)
    gap = _tp_sub(bracket, cos_block)
    gap = _tp_sub(gap, sin_block)
    # form1 - form2 also carries (ratio^n - 1) * sinc
    for key, v in _sinc_difference(n).items():
        _tp_add(gap, key, v)
    return gap


def _n2_rearranged_gap() -> _TP:
    """Exact gap between the index-2 trigonometric rearrangement and form 1.

    The rearranged kernel replaces the coefficient blocks by the scaled-chain
    outer product plus three explicit trigonometric terms; equality with the
    endpoint-difference form certifies it, again up to the shared spectral
    integral.  All terms times 2*pi.
    """
    n = 2
    model = BoundaryModel(n)
    chain = eps_chain(model, 1)
    # chain outer product: unit^2*(2/eps) * sum_l members[l](x) members[1-l](x')
    chain_tp: _TP = {}
    betas = beta_seq(n)
    sq = Fraction(2) * (-1) ** (n + 1)
    for l in range(n):
        for j in range(l + 1):
            for jp in range(n - l):
                coeff = sq * betas[j] * betas[jp]
                e = -1 - 2 * j - 2 * jp
                fa = bm_assoc(model, l - j)
                fb = bm_assoc(model, n - 1 - l - jp)
                ((_, pa),) = fa.terms.keys()
                ((_, pb),) = fb.terms.keys()
                ca = next(iter(fa.terms.values()))
                cb = next(iter(fb.terms.values()))
                # coefficients exclude the shared (2*pi)^-1, matching the
                # times-2*pi convention of the other blocks
                _tp_add(chain_tp, (0, 0, pa, pb, e), ca * cb * coeff)
    # delta polynomial (x-x')^d expanded around z: sum binom (x-z)^i (-(x'-z))^(d-i)
    def delta_pow(d: int) -> _TP:
        out: _TP = {}
        for i in range(d + 1):
            c = Fraction(math.comb(d, i)) * (-1) ** (d - i)
            _tp_add(out, (0, 0, i, d - i, 0), RationalComplex.from_value(c))
        return out

    # full sinc: sin(eps D)/(pi D) * 2pi -> 2 sin(eps D) * [1/D around z]
    # 1/D has no two-point Laurent expansion, so fold it with (1 - ratio^2)
    # exactly as in the general check: rearranged - form1 contains
    # (1 - ratio^2) sinc which IS expandable.
    term6 = _tp_scale(
        _tp_mul(_tp_mul(_tp_sin_delta(1), _tp_sin_delta(1)), _tp_mono(a=-1, b=-1, e=-1)),
        Fraction(12),
    )
    # 12 D sin^2(eD/4) sin(eD/2): rewrite sin^2(a)sin(2a) = sin(eD/2)/2 - sin(eD)/4
    trig12 = _tp_sub(_tp_scale(_tp_sin_delta(1), Fraction(1, 2)), _tp_scale(_tp_sin_delta(2), Fraction(1, 4)))
    term12 = _tp_scale(
        _tp_mul(_tp_mul(delta_pow(1), trig12), _tp_mono(a=-2, b=-2, e=-2)),
        Fraction(24),
    )
    # 3 [eps D - 2 sin(eD/2)]^2 / (2 eps^3 ...): expand the square exactly
    sq_block: _TP = {}
    for key, v in _tp_mul(delta_pow(2), _tp_mono(e=2)).items():
        _tp_add(sq_block, key, v)
    for key, v in _tp_scale(_tp_mul(delta_pow(1), _tp_mul(_tp_sin_delta(1), _tp_mono(e=1))), Fraction(-4)).items():
        _tp_add(sq_block, key, v)
    _tp_add(sq_block, (0, 0, 0, 0, 0), RationalComplex.from_value(Fraction(2)))
    for key, v in _tp_scale(_tp_cos_delta(2), Fraction(-2)).items():
        _tp_add(sq_block, key, v)
    term3sq = _tp_scale(_tp_mul(sq_block, _tp_mono(a=-2, b=-2, e=-3)), Fraction(3))
    # assemble: rearranged - form1 = chain + term6 + term12 + term3sq
    #           + (1 - ratio^2) sinc  - bracket
    gap: _TP = {}
    for piece in (chain_tp, term6, term12, term3sq):
        for key, v in piece.items():
            _tp_add(gap, key, v)
    for key, v in _sinc_difference(n).items():
        _tp_add(gap, key, v * (-1))
    for key, v in _boundary_bracket(n).items():
        _tp_add(gap, key, v * (-1))
    return gap


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Concrete probe for the reconstruction schemes, with known decay class.

    kinds: "gaussian" (center, width), "hermite_gaussian" (order, center,
    width), "rational_decay" (exponent q, f = (1+x^2)^-q), "chain"
    (a member of one of the model families; ref is ("assoc", l),
    ("interior0",) or ("interior1",)).
    """

    __test__ = False  # not a pytest collection target despite the name

    kind: str
    center: float = 0.0
    width: float = 1.0
    order: int = 0
    exponent: int = 1
    ref: tuple = ()

    @staticmethod
    def gaussian(center: float = 0.0, width: float = 1.0) -> "TestFunction":
        return TestFunction(kind="gaussian", center=center, width=width)

    @staticmethod
    def hermite_gaussian(order: int, center: float = 0.0, width: float = 1.0) -> "TestFunction":
        return TestFunction(kind="hermite_gaussian", center=center, width=width, order=order)

    @staticmethod
    def rational_decay(exponent: int) -> "TestFunction":
        if exponent < 1:
            raise ValueError("decay exponent must be >= 1")
        return TestFunction(kind="rational_decay", exponent=exponent)

    @staticmethod
    def chain_boundary(l: int) -> "TestFunction":
        return TestFunction(kind="chain", ref=("assoc", l))

    @staticmethod
    def chain_interior(which: int) -> "TestFunction":
        if which not in (0, 1):
            raise ValueError("interior chain members are 0 (bounded) and 1 (partner)")
        return TestFunction(kind="chain", ref=(f"interior{which}",))

    # -- evaluation --------------------------------------------------------
    def make_eval(self, model) -> Callable[[np.ndarray], np.ndarray]:
        if self.kind == "gaussian":
            c, w = self.center, self.width
            return lambda x: np.exp(-(((np.asarray(x) - c) / w) ** 2)) + 0j
        if self.kind == "hermite_gaussian":
            c, w, order = self.center, self.width, self.order
            coeffs = np.zeros(order + 1)
            coeffs[order] = 1.0

            def ev(x):
                t = (np.asarray(x) - c) / w
                return np.polynomial.hermite.hermval(t, coeffs) * np.exp(-t * t) + 0j

            return ev
        if self.kind == "rational_decay":
            q = self.exponent
            return lambda x: (1.0 + np.asarray(x) ** 2) ** (-q) + 0j
        if self.kind == "chain":
            if self.ref[0] == "assoc":
                f = bm_assoc(model, self.ref[1])
                return lambda x: np.asarray(f.eval(0.0, x, model.z))
            member = im_psi0 if self.ref[0] == "interior0" else im_psi1
            return lambda x: np.atleast_1d(member(model, np.asarray(x, dtype=np.float64)).value)
        raise ValueError(f"unknown test function kind {self.kind!r}")

    def window(self) -> float:
        """Half-width outside which the function is numerically negligible."""
        if self.kind in ("gaussian", "hermite_gaussian"):
            return abs(self.center) + self.width * (9.0 + 0.6 * self.order)
        if self.kind == "rational_decay":
            return min(10.0 ** (9.0 / (2 * self.exponent)) + 5.0, 2000.0)
        return 40.0  # chain members: algebraic decay, handled by exact tails

    @property
    def is_chain(self) -> bool:
        return self.kind == "chain"


# ---------------------------------------------------------------------------
# schemes
# ---------------------------------------------------------------------------

class SchemeId(enum.Enum):
    RES3 = "res3"
    RES5 = "res5"
    INT5 = "int5"
    RES9 = "res9"
    RES7 = "res7"
    RES10 = "res10"
    RES6 = "res6"
    RES13 = "res13"
    RES11 = "res11"
    RES12 = "res12"
    INT04 = "int04"


_INTERIOR_IDS = {SchemeId.RES13, SchemeId.RES11, SchemeId.RES12, SchemeId.INT04}
_N2_ONLY = {SchemeId.RES9, SchemeId.RES7, SchemeId.RES10, SchemeId.RES6}


@dataclass(frozen=True)
class Scheme:
    """A reconstruction scheme bound to a concrete model."""

    kind: SchemeId
    model: BoundaryModel | InteriorModel

    def __post_init__(self) -> None:
        interior = isinstance(self.model, InteriorModel)
        if interior != (self.kind in _INTERIOR_IDS):
            raise ValueError(f"scheme {self.kind.value} does not apply to this model family")
        if self.kind in _N2_ONLY and self.model.n != 2:
            raise ValueError(f"scheme {self.kind.value} is defined for the index-2 model only")


# ---------------------------------------------------------------------------
# boundary transforms
# ---------------------------------------------------------------------------

def _grid_for(f: TestFunction, k_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss grid resolving both f's support and e^{ikx} phases."""
    W = f.window()
    h = min(0.5, 9.0 / max(k_max, 1.0))
    n_panels = max(8, int(math.ceil(2 * W / h)))
    edges = np.linspace(-W, W, n_panels + 1)
    xg, wg = _gl(16)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * xg).ravel()
    weights = (half[:, None] * np.broadcast_to(wg, (n_panels, 16))).ravel()
    return nodes, weights


def _spectral_reach(f: TestFunction) -> float:
    if f.kind in ("gaussian", "hermite_gaussian"):
        return 6.0 + 16.0 / f.width + 1.2 * f.order
    if f.kind == "rational_decay":
        return 45.0
    return 42.0  # chain transforms decay like k^m e^{-k Im z}


# extra k-range for interior transforms of localized packets, whose decay is
# set by the denominator's complex zeros rather than the packet bandwidth
_INTERIOR_REACH_PAD = 26.0


def _pf_decompose(centers: Sequence[tuple[complex, int]]) -> list[tuple[complex, int, complex]]:
    """Partial fractions of prod (x-c)^(-p) over distinct centers.

    Returns triples (center, power j, coefficient) with sum c/(x-center)^j
    reproducing the product.  Uses exact Leibniz differentiation of the
    complementary factors in a tiny multi-exponent basis.
    """
    out = []
    for t, (ct, pt) in enumerate(centers):
        # complementary product as dict {exponent vector: coeff}
        others = [(cs, ps) for s, (cs, ps) in enumerate(centers) if s != t]
        # represent g(x) = prod (x-cs)^(-es); derivatives stay in this family
        state: dict[tuple[int, ...], complex] = {tuple(ps for _, ps in others): 1.0 + 0.0j}

        def eval_state(st):
            total = 0.0 + 0.0j
            for exps, coeff in st.items():
                v = coeff
                for (cs, _), e in zip(others, exps):
                    v = v / (ct - cs) ** e
                total += v
            return total

        for j in range(pt, 0, -1):
            out.append((ct, j, eval_state(state) / math.factorial(pt - j)))
            nxt: dict[tuple[int, ...], complex] = {}
            for exps, coeff in state.items():
                for idx in range(len(exps)):
                    ne = list(exps)
                    ne[idx] += 1
                    key = tuple(ne)
                    nxt[key] = nxt.get(key, 0.0 + 0.0j) + coeff * (-exps[idx])
            state = nxt
    return out


def _merged_centers(pairs: Iterable[tuple[complex, int]]) -> list[tuple[complex, int]]:
    # coinciding pole locations must enter the decomposition as one center
    out: list[tuple[complex, int]] = []
    for ct, p in pairs:
        for i, (c0, p0) in enumerate(out):
            if abs(complex(ct) - c0) < 1e-12:
                out[i] = (c0, p0 + int(p))
                break
        else:
            out.append((complex(ct), int(p)))
    return out


def _boundary_transform(model: BoundaryModel, f: TestFunction) -> Callable[[np.ndarray], np.ndarray]:
    """k-array -> integral of f(x) * (generic solution at k) over x.

    Numeric tensor for localized f; closed residue transforms for chain and
    rational test functions (their spectral integrals are exact one-sided
    forms).  The generic solution is the k-scaled expression divided by k^n.
    """
    n, z = model.n, model.z
    F = bm_scatter(model)
    if f.kind in ("gaussian", "hermite_gaussian"):
        nodes, weights = _grid_for(f, _spectral_reach(f))
        fw = f.make_eval(model)(nodes) * weights
        ms, ps, cs = F.to_term_arrays()
        scale = (2 * math.pi) ** (-0.5 * F.unit_pow)

        def T(k: np.ndarray) -> np.ndarray:
            karr = np.asarray(k, dtype=np.complex128)
            grid = el_eval_grid(ms, ps, cs, F.phase_x, F.phase_z, scale, np.atleast_1d(karr), nodes, z)
            return (grid @ fw) / np.atleast_1d(karr) ** n

        return T
    if f.kind == "chain":
        prod = bm_assoc(model, f.ref[1]) * F
        terms = [(mk, -p, c.to_complex()) for (mk, p), c in prod.terms.items()]
        unit_scale = (2 * math.pi) ** (-0.5 * prod.unit_pow)

        def T(k: np.ndarray) -> np.ndarray:
            karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
            if np.any(np.abs(karr.imag) > 1e-12):
                raise ValueError("chain transforms are defined on the real spectral axis")
            out = np.zeros(karr.shape, dtype=np.complex128)
            for mk, q, c in terms:
                vals = np.array([ft_inverse_power(q, float(kv.real), z) for kv in karr])
                out += c * karr**mk * vals
            return out * unit_scale / karr**n

        return T
    if f.kind == "rational_decay":
        q = f.exponent
        ms, ps, cs = F.to_term_arrays()

        def T(k: np.ndarray) -> np.ndarray:
            karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
            if np.any(np.abs(karr.imag) > 1e-12):
                raise ValueError("closed transforms are defined on the real spectral axis")
            out = np.zeros(karr.shape, dtype=np.complex128)
            for m, p, c in zip(ms, ps, cs):
                centers = [(1j, q), (-1j, q)]
                if p < 0:
                    centers.append((z, -int(p)))
                for (ct, j, w) in _pf_decompose(_merged_centers(centers)):
                    vals = np.array([ft_inverse_power(j, float(kv.real), ct) for kv in karr])
                    out += c * karr ** int(m) * w * vals
            return out * (2 * math.pi) ** -0.5 / karr**n

        return T
    raise ValueError(f"unsupported test function kind {f.kind!r}")


def _psi_unscaled(model: BoundaryModel, k: np.ndarray, x: float) -> np.ndarray:
    F = bm_scatter(model)
    karr = np.asarray(k, dtype=np.complex128)
    return np.asarray(F.eval(karr, x, model.z)) / karr**model.n


def _ik_boundary(
    model: BoundaryModel, f: TestFunction, eps: float, A: float, xp: float, tol: float
) -> complex:
    T = _boundary_transform(model, f)
    K = min(A, _spectral_reach(f))
    if K <= eps:
        return 0.0 + 0.0j

    def integrand(k: np.ndarray) -> np.ndarray:
        return np.asarray(T(k)) * _psi_unscaled(model, -np.asarray(k, dtype=np.complex128), xp)

    left = _adaptive(integrand, -K, -eps, tol)
    right = _adaptive(integrand, eps, K, tol)
    return left.value + right.value


def _f_osc_moment(model, f: TestFunction, mu: float, q: int, tol: float = 1e-11) -> complex:
    """integral of f(x) e^{i mu x} (x-z)^(-q) dx, closed-form where possible."""
    z = model.z
    if f.kind == "chain" and isinstance(model, BoundaryModel):
        g = bm_assoc(model, f.ref[1])
        ((_, p),) = g.terms.keys()
        c = next(iter(g.terms.values())).to_complex() * (2 * math.pi) ** -0.5
        return c * ft_inverse_power(q - p, mu, z)
    if f.kind == "rational_decay":
        qq = f.exponent
        centers = [(1j, qq), (-1j, qq)]
        if q > 0:
            centers.append((z, q))
        total = 0.0 + 0.0j
        for ct, j, w in _pf_decompose(_merged_centers(centers)):
            total += w * ft_inverse_power(j, mu, ct)
        return total
    ev = f.make_eval(model)
    W = f.window()

    def integrand(x: np.ndarray) -> np.ndarray:
        return ev(x) * np.exp(1j * mu * x) * (x - z + 0j) ** (-q)

    return _adaptive_oscillatory(integrand, -W, W, tol, abs(mu) + 1.0).value


def _sinc_applied(model, f: TestFunction, eps: float, xp: float, alpha: float | None = None) -> complex:
    """integral of f(x) * cos(alpha*(x-xp)) * sin(eps*(x-xp))/(pi*(x-xp)) dx.

    ``alpha`` None means the plain reconstruction kernel; the interior
    variant carries the extra cosine and a coefficient 2 instead of 1.
    """
    ev = f.make_eval(model)
    W = f.window() if not f.is_chain else max(300.0, 12.0 / eps)
    coeff = 2.0 if alpha is not None else 1.0

    def integrand(x: np.ndarray) -> np.ndarray:
        u = np.asarray(x) - xp
        base = (eps / math.pi) * np.sinc(eps * u / math.pi)
        if alpha is not None:
            base = base * np.cos(alpha * u)
        return coeff * ev(x) * base

    om = eps + (alpha or 0.0) + 1.0
    return _adaptive_oscillatory(integrand, -W, W, 1e-11, om).value


def _chain_term_boundary(model: BoundaryModel, f: TestFunction, eps: float, xp: float) -> complex:
    """Outer-product block: sum_l <f, member_l> member_{n-1-l}(x')."""
    chain = eps_chain(model, Fraction(eps).limit_denominator(10**9))
    n = model.n
    scale = complex(chain.unit.to_complex()) * math.sqrt(float(chain.root))
    total = 0.0 + 0.0j
    for l in range(n):
        moment = 0.0 + 0.0j
        for (_, p), c in chain.members[l].terms.items():
            moment += c.to_complex() * (2 * math.pi) ** -0.5 * _f_osc_moment(model, f, 0.0, -p)
        other = chain.members[n - 1 - l].eval(0.0, xp, model.z)
        total += (scale * moment) * (scale * complex(other))
    return total


def _blocks_applied(model: BoundaryModel, f: TestFunction, eps: float, xp: float) -> complex:
    """The cos- and sin-proportional coefficient blocks applied to f."""
    n, z = model.n, model.z
    total = 0.0 + 0.0j
    # cos block: -cos(eps D)/(2 pi eps (x-z)(x'-z)) * sum ...
    for l in range(n):
        for m in range(min(2 * l, n - 1) + 1):
            c = float(coeff_C(2 * l + 1, m, n).re) * (
                math.factorial(n + 2 * l + 1 - m) / math.factorial(n - 1 - m)
            )
            pref = -c * (-0.25) ** l / (2 * math.pi * eps ** (2 * l + 1)) * (xp - z) ** (m - 2 * l - 1)
            mom_p = _f_osc_moment(model, f, eps, m + 1)
            mom_m = _f_osc_moment(model, f, -eps, m + 1)
            total += pref * 0.5 * (cmath_exp(-1j * eps * xp) * mom_p + cmath_exp(1j * eps * xp) * mom_m)
    # sin block: +sin(eps D)/(pi (x-z)) * sum ...
    for l in range(1, n):
        for m in range(min(2 * l - 1, n - 1) + 1):
            c = float(coeff_C(2 * l, m, n).re) * (
                math.factorial(n + 2 * l - m) / math.factorial(n - 1 - m)
            )
            pref = c * (-0.25) ** l / (math.pi * eps ** (2 * l)) * (xp - z) ** (m - 2 * l)
            mom_p = _f_osc_moment(model, f, eps, m + 1)
            mom_m = _f_osc_moment(model, f, -eps, m + 1)
            total += pref * (cmath_exp(-1j * eps * xp) * mom_p - cmath_exp(1j * eps * xp) * mom_m) / 2j
    return total


def cmath_exp(v: complex) -> complex:
    return complex(np.exp(v))


def _n2_trig_terms(model: BoundaryModel, f: TestFunction, eps: float, xp: float, which: set) -> complex:
    """The three explicit index-2 trigonometric terms, applied to f.

    ``which`` selects from {"pair", "odd", "square"}:
      pair   : 6 sin^2(eps D/2) / (pi eps (x-z)(x'-z))
      odd    : 12 D sin^2(eps D/4) sin(eps D/2) / (pi eps^2 (x-z)^2 (x'-z)^2)
      square : 3 [eps D - 2 sin(eps D/2)]^2 / (2 pi eps^3 (x-z)^2 (x'-z)^2)
    """
    z = model.z
    total = 0.0 + 0.0j

    def mom(mu: float, q: int, dpow: int) -> complex:
        # integral of f * e^{i mu x} * (x - xp)^dpow * (x-z)^(-q): expand the
        # displacement polynomial around z
        out = 0.0 + 0.0j
        for i in range(dpow + 1):
            coeff = math.comb(dpow, i) * (-(xp - z)) ** (dpow - i)
            out += coeff * _f_osc_moment(model, f, mu, q - i)
        return out

    if "pair" in which:
        pref = 6.0 / (math.pi * eps * (xp - z))
        # sin^2(eps D / 2) = (1 - cos(eps D))/2
        val = 0.5 * mom(0.0, 1, 0)
        val -= 0.25 * (cmath_exp(-1j * eps * xp) * mom(eps, 1, 0) + cmath_exp(1j * eps * xp) * mom(-eps, 1, 0))
        total += pref * val
    if "odd" in which:
        pref = 12.0 / (math.pi * eps**2 * (xp - z) ** 2)
        # D sin^2(eps D/4) sin(eps D/2) = D [sin(eps D/2)/2 - sin(eps D)/4]
        for mu, c in ((eps / 2, 0.5), (eps, -0.25)):
            val = (cmath_exp(-1j * mu * xp) * mom(mu, 2, 1) - cmath_exp(1j * mu * xp) * mom(-mu, 2, 1)) / 2j
            total += pref * c * val
    if "square" in which:
        pref = 3.0 / (2 * math.pi * eps**3 * (xp - z) ** 2)
        # [eps D - 2 sin(eps D/2)]^2 = eps^2 D^2 - 4 eps D sin(eps D/2) + 2 - 2 cos(eps D)
        val = eps**2 * mom(0.0, 2, 2)
        s = (lambda mu: (cmath_exp(-1j * mu * xp) * mom(mu, 2, 1) - cmath_exp(1j * mu * xp) * mom(-mu, 2, 1)) / 2j)
        val -= 4 * eps * s(eps / 2)
        val += 2 * mom(0.0, 2, 0)
        val -= cmath_exp(-1j * eps * xp) * mom(eps, 2, 0) + cmath_exp(1j * eps * xp) * mom(-eps, 2, 0)
        total += pref * val
    return total


# ---------------------------------------------------------------------------
# interior transforms
# ---------------------------------------------------------------------------

def _interior_transform(model: InteriorModel, f: TestFunction) -> Callable[[np.ndarray], np.ndarray]:
    """k-array -> integral of f(x) psi(x;k) dx for the interior family.

    Localized f: three fixed-grid plane-wave transforms assembled with the
    explicit pole factors.  Chain members: per-k core quadrature plus exact
    oscillatory-settling tails from the large-x models (the integrals exist
    in the Abel sense; the tail machinery evaluates exactly that).
    """
    a, z = model.alpha, model.z
    if f.kind in ("gaussian", "hermite_gaussian", "rational_decay"):
        # the transform inherits an exp(-|k| Im x0) tail from the complex
        # zeros of the denominator, so the k-range outlives the packet's own
        # bandwidth; _INTERIOR_REACH_PAD pushes that tail below 1e-10
        nodes, weights = _grid_for(f, _spectral_reach(f) + 2 * a + _INTERIOR_REACH_PAD)
        fv = f.make_eval(model)(nodes)
        s = np.sin(2 * a * nodes)
        c2 = np.cos(2 * a * nodes)
        W = s + 2 * a * (nodes - z)
        u1 = (2 * a * c2 + 2 * a) / W
        u2 = (-4 * a * a * s) / W
        w0 = fv * weights
        w1 = fv * u1 * weights
        w2 = fv * u2 * weights

        def theta(k: np.ndarray) -> np.ndarray:
            karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
            ph = np.exp(1j * karr[:, None] * nodes[None, :])
            g0 = ph @ w0
            g1 = ph @ w1
            g2 = ph @ w2
            return (g0 + (1j * karr * g1 - 0.5 * g2) / (karr * karr - a * a)) / math.sqrt(2 * math.pi)

        return theta
    if f.kind == "chain":
        which = "psi0" if f.ref[0] == "interior0" else "psi1"
        member = im_psi0 if which == "psi0" else im_psi1
        # truncation (2 a |X-z|)^(-order-1) ~ 4e-12 at X=40: past the noise
        # floor of the core grid, and term count grows quadratically in order
        member_tail = im_tail_model(model, which, 5)
        X = 40.0
        # members settle to O(1) oscillation, so the core grid only has to
        # resolve phases up to k_max plus the potential's harmonics; the
        # remainder integrals are exact large-x models
        h = min(0.5, 9.0 / (_spectral_reach(f) + 8 * a))
        n_panels = int(math.ceil(2 * X / h))
        xg, wg = _gl(16)
        edges = np.linspace(-X, X, n_panels + 1)
        midp = 0.5 * (edges[:-1] + edges[1:])
        halfp = 0.5 * np.diff(edges)
        nodes = (midp[:, None] + halfp[:, None] * xg).ravel()
        weights = (halfp[:, None] * np.broadcast_to(wg, (n_panels, 16))).ravel()
        mv = member(model, nodes).value
        s = np.sin(2 * a * nodes)
        c2 = np.cos(2 * a * nodes)
        W = s + 2 * a * (nodes - z)
        w0 = mv * weights
        w1 = mv * ((2 * a * c2 + 2 * a) / W) * weights
        w2 = mv * ((-4 * a * a * s) / W) * weights
        # tail products with the wave's plane-phase factored out, so only a
        # one-term wave multiply and the tail integral remain per k
        inv_w = im_tail_model(model, "inv_w", 5)
        p1 = member_tail * ((OscRational.cosine(z, 2 * a, 2 * a) + OscRational.constant(z, 2 * a)) * inv_w)
        p2 = member_tail * (OscRational.sine(z, 2 * a, 2 * a * a) * inv_w)
        rt2pi = math.sqrt(2 * math.pi)

        def theta(k: np.ndarray) -> np.ndarray:
            karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
            ph = np.exp(1j * karr[:, None] * nodes[None, :])
            g0 = ph @ w0
            g1 = ph @ w1
            g2 = ph @ w2
            core = (g0 + (1j * karr * g1 - 0.5 * g2) / (karr * karr - a * a)) / math.sqrt(2 * math.pi)
            tails = np.empty(karr.shape, dtype=np.complex128)
            for i, kv in enumerate(karr):
                kr = float(kv.real)
                wavek = OscRational.wave(z, kr, 0, 1.0)
                t0 = (member_tail * wavek).integral_tails(X)
                t1 = (p1 * wavek).integral_tails(X)
                t2 = (p2 * wavek).integral_tails(X)
                tails[i] = (t0 + (1j * kr * t1 + t2) / (kr * kr - a * a)) / rt2pi
            return core + tails

        return theta
    raise ValueError(f"unsupported test function kind {f.kind!r}")


def _psi_interior_at(model: InteriorModel, k: np.ndarray, x: float) -> np.ndarray:
    karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
    return interior_psi_grid(karr, np.array([x]), model.alpha, model.z, False)[:, 0]


def _ik_interior(
    model: InteriorModel, f: TestFunction, eps: float, A: float, xp: float, tol: float
) -> complex:
    a = model.alpha
    pad = 3 * a if f.is_chain else 3 * a + _INTERIOR_REACH_PAD
    K = min(A, _spectral_reach(f) + pad)
    theta = _interior_transform(model, f)

    def integrand(k: np.ndarray) -> np.ndarray:
        karr = np.asarray(k, dtype=np.complex128)
        return np.asarray(theta(karr)) * _psi_interior_at(model, -karr, xp)

    segments = [(-K, -a - eps), (-a + eps, a - eps), (a + eps, K)]
    if f.is_chain:
        # fixed composite grids: the integrand is smooth on the punctured
        # axis, and per-spectral-point transforms are expensive, so a
        # deterministic rule beats adaptivity here; the only oscillation in
        # k comes from the x' plane-wave phase, well under a panel width
        total = 0.0 + 0.0j
        xg, wg = _gl(12)
        for lo, hi in segments:
            if hi <= lo:
                continue
            n_panels = max(6, int(math.ceil((hi - lo) * 0.4)))
            edges = np.linspace(lo, hi, n_panels + 1)
            midp = 0.5 * (edges[:-1] + edges[1:])
            halfp = 0.5 * np.diff(edges)
            nodes = (midp[:, None] + halfp[:, None] * xg).ravel()
            weights = (halfp[:, None] * np.broadcast_to(wg, (n_panels, 12))).ravel()
            total += np.sum(integrand(nodes) * weights)
        return total
    total = 0.0 + 0.0j
    for lo, hi in segments:
        if hi > lo:
            total += _adaptive(integrand, lo, hi, tol).value
    return total


def _interior_pair_moment(
    model: InteriorModel, f: TestFunction, member: str, mu: float, xp: float
) -> complex:
    """integral of f(x) * member(x) * e^{i mu (x - xp)} dx with exact tails."""
    ev_m = (im_psi0 if member == "psi0" else im_psi1)
    if f.is_chain:
        which = "psi0" if f.ref[0] == "interior0" else "psi1"
        fm = im_tail_model(model, which, 12)
        mm = im_tail_model(model, member, 12)
        wave = OscRational.wave(model.z, mu, 0, 1.0)
        tail_model = (fm * mm) * wave
        X = 60.0
        ev_f = f.make_eval(model)

        def integrand(x: np.ndarray) -> np.ndarray:
            return ev_f(x) * ev_m(model, x).value * np.exp(1j * mu * np.asarray(x))

        core = _adaptive_oscillatory(integrand, -X, X, 1e-12, abs(mu) + 2 * model.alpha)
        return (core.value + tail_model.integral_tails(X)) * cmath_exp(-1j * mu * xp)
    ev_f = f.make_eval(model)
    W = f.window()

    def integrand(x: np.ndarray) -> np.ndarray:
        return ev_f(x) * ev_m(model, x).value * np.exp(1j * mu * np.asarray(x))

    core = _adaptive_oscillatory(integrand, -W, W, 1e-12, abs(mu) + 2 * model.alpha)
    return core.value * cmath_exp(-1j * mu * xp)


def _interior_singular_terms(
    model: InteriorModel, f: TestFunction, eps: float, xp: float, kind: SchemeId
) -> complex:
    """The non-integral blocks of the interior schemes, applied to f."""
    a = model.alpha
    p0_xp = complex(im_psi0(model, xp).value)
    p1_xp = complex(im_psi1(model, xp).value)

    def pair(member: str, mu: float) -> complex:
        return _interior_pair_moment(model, f, member, mu, xp)

    if kind in (SchemeId.RES12, SchemeId.INT04):
        return -(1.0 / (math.pi * eps * a)) * pair("psi0", 0.0) * p0_xp
    if kind == SchemeId.RES11:
        # -(1/(pi eps a)) cos(eps D) pairing
        val = 0.5 * (pair("psi0", eps) + pair("psi0", -eps))
        return -(1.0 / (math.pi * eps * a)) * val * p0_xp
    if kind == SchemeId.RES13:
        total = _sinc_applied(model, f, eps, xp, alpha=a) / 1.0
        # bracket: (1/eps)cos(eps D) - (eps/(4a^2-eps^2)) cos(2a D)cos(eps D)
        #          - (2a/(4a^2-eps^2)) sin(2a D) sin(eps D)
        waves: dict[float, complex] = {}

        def add_wave(mu: float, c: complex) -> None:
            waves[mu] = waves.get(mu, 0.0 + 0.0j) + c

        for s1 in (1, -1):
            add_wave(s1 * eps, 0.5 / eps)
        denom = 4 * a * a - eps * eps
        for s1 in (1, -1):
            for s2 in (1, -1):
                add_wave(s1 * 2 * a + s2 * eps, -eps / denom * 0.25)
                add_wave(s1 * 2 * a + s2 * eps, -(2 * a) / denom * (s1 * s2) * (-0.25))
        bracket = 0.0 + 0.0j
        for mu, c in waves.items():
            if c != 0:
                bracket += c * pair("psi0", mu)
        total += -(1.0 / (math.pi * a)) * bracket * p0_xp
        # partner cross term with the band integral J(D)
        ev_f = f.make_eval(model)
        W = f.window() if not f.is_chain else 400.0

        def j_of(x: np.ndarray) -> np.ndarray:
            d = np.abs(np.asarray(x) - xp)
            hi = sici((2 * a + eps) * d)[1]
            lo = sici((2 * a - eps) * d)[1]
            out = hi - lo
            flat = math.log((2 * a + eps) / (2 * a - eps))
            return np.where(d < 1e-12, flat, out)

        for member, other in (("psi0", p1_xp), ("psi1", p0_xp)):
            ev_m = im_psi0 if member == "psi0" else im_psi1

            def integrand(x: np.ndarray) -> np.ndarray:
                return ev_f(x) * ev_m(model, x).value * j_of(x)

            val = _adaptive_oscillatory(integrand, -W, W, 1e-11, 2 * a + eps).value
            total += -(1.0 / math.pi) * val * other
        return total
    raise ValueError(f"scheme {kind} has no interior singular block")


# ---------------------------------------------------------------------------
# scheme application
# ---------------------------------------------------------------------------

def apply_scheme(
    scheme: Scheme,
    eps: float,
    A: float,
    f: TestFunction,
    xp: float,
    tol: float = 1e-9,
) -> complex:
    """Evaluate the scheme's reconstruction of f at the probe point.

    The spectral integral runs over the punctured range with cutoff A; the
    scheme's closed blocks are added per its definition.  Exact-identity
    schemes reproduce f(xp) at any eps up to quadrature error; reduced
    schemes approach it as eps decreases (or fail to, when f lies outside
    the scheme's admissible class -- that outcome is the experiment).
    """
    if eps <= 0 or A <= 0:
        raise ValueError("regulators must be positive")
    kind, model = scheme.kind, scheme.model
    if kind in _INTERIOR_IDS:
        if eps >= model.alpha:
            raise ValueError("puncture radius must stay below the resonance momentum")
        total = _ik_interior(model, f, eps, A, xp, tol)
        total += _interior_singular_terms(model, f, eps, xp, kind)
        return total
    # boundary family
    total = _ik_boundary(model, f, eps, A, xp, tol)
    if kind == SchemeId.RES3:
        total += _sinc_applied(model, f, eps, xp)
        total += _blocks_applied(model, f, eps, xp)
    elif kind == SchemeId.RES5:
        total += _blocks_applied(model, f, eps, xp)
    elif kind == SchemeId.INT5:
        total += _chain_term_boundary(model, f, eps, xp)
    elif kind in _N2_ONLY:
        total += _chain_term_boundary(model, f, eps, xp)
        if kind == SchemeId.RES9:
            total += _sinc_applied(model, f, eps, xp)
            total += _n2_trig_terms(model, f, eps, xp, {"pair", "odd", "square"})
        elif kind == SchemeId.RES7:
            total += _n2_trig_terms(model, f, eps, xp, {"pair", "odd", "square"})
        elif kind == SchemeId.RES10:
            total += _n2_trig_terms(model, f, eps, xp, {"odd", "square"})
        # RES6: spectral integral + chain outer product only
    else:
        raise ValueError(f"unhandled scheme {kind}")
    return total


def apply_base_resolution(
    model: BoundaryModel | InteriorModel,
    f: TestFunction,
    xp: float,
    radius: float,
    cutoff: float,
    direction: str = "up",
    tol: float = 1e-9,
) -> complex:
    """The un-rearranged deformed-contour reconstruction of f at xp.

    The spectral path detours around the singular points (origin for the
    boundary family, both resonance momenta for the interior one) on
    semicircles of the given radius; ``direction`` picks the half-plane.
    Equality of the two directions -- the vanishing of the enclosed residue
    -- is a property of the construction that tests assert.
    """
    if isinstance(model, BoundaryModel):
        T = _boundary_transform(model, f)
        centers = [0.0]

        def g(k: np.ndarray) -> np.ndarray:
            karr = np.asarray(k, dtype=np.complex128)
            return np.asarray(T(karr)) * _psi_unscaled(model, -karr, xp)

    else:
        theta = _interior_transform(model, f)
        a = model.alpha
        centers = [-a, a]

        def g(k: np.ndarray) -> np.ndarray:
            karr = np.asarray(k, dtype=np.complex128)
            return np.asarray(theta(karr)) * _psi_interior_at(model, -karr, xp)

    pad = 4.0 if isinstance(model, BoundaryModel) else 4.0 + _INTERIOR_REACH_PAD
    K = min(cutoff, _spectral_reach(f) + pad)
    spec = ContourSpec(cutoff=K, epsilon=radius, direction=direction, centers=tuple(centers))
    return quad_contour(g, spec, tol).value


# ---------------------------------------------------------------------------
# singular-term reproduction experiments
# ---------------------------------------------------------------------------

def reproduce_psi20_terms(model: BoundaryModel, eps: float) -> tuple[complex, complex]:
    """Closed-form values of the two index-2 singular terms on the bound member.

    Both integrands are finite sums  c * e^{i mu x} (x-z)^(-q), so the
    whole-line integrals are exact residue transforms; no quadrature error
    enters and the returned coefficients differ from their limits 3/4 and
    1/4 only by O(eps) remainders.  Values are normalized by the member at
    the probe point.
    """
    if model.n != 2:
        raise ValueError("the reproduction experiment is defined for the index-2 model")
    z = model.z
    xp = 0.3  # fixed interior probe; the limit is xp-independent
    member = bm_assoc(model, 0)
    ((_, pm),) = member.terms.keys()
    cm = next(iter(member.terms.values())).to_complex() * (2 * math.pi) ** -0.5
    target = cm * (xp - z) ** pm

    def delta_mono(dpow: int, qbase: int, mu: float, c: complex) -> OscRational:
        # c * e^{i mu (x-xp)} * (x-xp)^dpow * (x-z)^(-qbase) * member(x)
        terms = []
        for i in range(dpow + 1):
            coeff = c * math.comb(dpow, i) * (-(xp - z)) ** (dpow - i)
            terms.append((mu, qbase - i - pm, coeff * cm))
        return OscRational(z, terms) * cmath_exp(-1j * mu * xp)

    # first term: 12 D [sin(eps D/2)/2 - sin(eps D)/4] / (pi eps^2 (x-z)^2 (xp-z)^2)
    pref1 = 12.0 / (math.pi * eps**2 * (xp - z) ** 2)
    acc1 = OscRational(z, [])
    for mu, c in ((eps / 2, 0.5), (eps, -0.25)):
        acc1 = acc1 + delta_mono(1, 2, mu, c / 2j) + delta_mono(1, 2, -mu, -c / 2j)
    c1 = pref1 * acc1.integral_full_line() / target

    # second term: 3 [eps^2 D^2 - 4 eps D sin(eps D/2) + 2 - 2 cos(eps D)] /
    #              (2 pi eps^3 (x-z)^2 (xp-z)^2)
    pref2 = 3.0 / (2 * math.pi * eps**3 * (xp - z) ** 2)
    acc2 = delta_mono(2, 2, 0.0, eps**2)
    for s in (1, -1):
        acc2 = acc2 + delta_mono(1, 2, s * eps / 2, -4 * eps * s / 2j)
    acc2 = acc2 + delta_mono(0, 2, 0.0, 2.0)
    for s in (1, -1):
        acc2 = acc2 + delta_mono(0, 2, s * eps, -1.0)
    c2 = pref2 * acc2.integral_full_line() / target
    return complex(c1), complex(c2)


def reproduce_psi0_term(model: InteriorModel, eps: float, xp: float = 0.0) -> complex:
    """The bound-state reproducing term of the interior schemes, normalized.

    Evaluates (2/(pi eps a)) * integral of sin^2(eps(x-xp)/2) * member(x)^2 dx,
    whose small-eps limit is 1.  Core quadrature plus exact oscillatory
    tails; at small eps the mass sits far out and the tails carry it.
    """
    a = model.alpha
    if not (0 < eps < a):
        raise ValueError("puncture radius must lie in (0, resonance momentum)")

    def integrand(x: np.ndarray) -> np.ndarray:
        v = im_psi0(model, x).value
        return np.sin(0.5 * eps * (np.asarray(x) - xp)) ** 2 * v * v

    X = 60.0
    core = _adaptive_oscillatory(integrand, -X, X, 1e-12, 2 * a + eps)
    sq = im_tail_model(model, "psi0", 12) * im_tail_model(model, "psi0", 12)
    # sin^2(eps D / 2) = 1/2 - cos(eps D)/2
    tail_model = sq * OscRational.constant(model.z, 0.5)
    for s in (1, -1):
        wave = OscRational.wave(model.z, s * eps, 0, -0.25 * cmath_exp(-1j * s * eps * xp))
        tail_model = tail_model + sq * wave
    total = core.value + tail_model.integral_tails(X)
    return (2.0 / (math.pi * eps * a)) * total


def psi1_expandability(
    model: InteriorModel, eps_min: float = 0.0125, xp: float = 0.7, coupling: float = 50.0
) -> VerificationReport:
    """Probe whether the chain partner is reconstructed by the reduced scheme.

    Sweeps the puncture radius geometrically down to ``eps_min`` with the
    cutoff coupled as A = coupling/eps, reconstructing both the partner
    and a Gaussian control.  The partner's error must hold a floor while
    the control's error vanishes; the report passes when the floor exceeds
    ten times the final control error.
    """
    scheme = Scheme(SchemeId.RES12, model)
    partner = TestFunction.chain_interior(1)
    control = TestFunction.gaussian(0.0, 1.0)
    eps = 0.4
    sweep: list[tuple[float, float, float]] = []
    p1 = complex(im_psi1(model, xp).value)
    while eps >= eps_min * 0.999:
        A = coupling / eps
        got_p = apply_scheme(scheme, eps, A, partner, xp)
        err_p = abs(got_p - p1)
        got_c = apply_scheme(scheme, eps, A, control, xp)
        err_c = abs(got_c - complex(control.make_eval(model)(np.array([xp]))[0]))
        sweep.append((eps, err_p, err_c))
        eps *= 0.5
    floor = min(e for _, e, _ in sweep)
    control_final = sweep[-1][2]
    residual = control_final * 10.0 / floor if floor > 0 else math.inf
    return VerificationReport(
        identity="res12-partner-floor",
        label="chain partner is not reconstructed while the control converges",
        mode="numeric",
        residual=float(residual),
        tolerance=1.0,
        trace=tuple(f"eps {e:.4g}: partner {p:.3e}, control {c:.3e}" for e, p, c in sweep),
    )
