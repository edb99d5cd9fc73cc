"""Exact rational-complex Laurent algebra for oscillatory scattering states.

Everything in this module is exact: coefficients are Gaussian rationals
(:class:`RationalComplex`), and the symbolic carrier :class:`ExpLaurent`
represents finite sums

    (2*pi)**(-unit_pow/2) * sum_{m,p} c[m,p] * k**m * (x-z)**p
        * exp(i*sigma*k*(x-z)) * exp(i*tau*k*z)

over integer powers ``m`` (spectral variable ``k``) and ``p`` (centered
coordinate ``x - z``, with ``z`` a fixed complex displacement kept symbolic).
The two phase integers ``sigma`` (coordinate phase) and ``tau`` (displacement
phase) and the unit grading ``unit_pow`` are carried per expression, not per
term; sums require them to match, products add them.  This is enough to
express the singular potentials' bound-state chains, the scattering solutions
multiplied by their natural power of ``k``, and all first-order ladder
operators connecting neighbouring potentials -- while keeping every identity
check free of floating-point error.

Differentiation, ladder application, ``k -> -k`` substitution and the
``k -> 0`` limit of phase-stripped expressions are all closed operations here.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "RationalComplex",
    "ExpLaurent",
    "dfact",
    "binom",
    "i_power",
    "el_diff_x",
    "el_apply_q",
    "el_apply_h",
    "el_limit_k0_deriv",
]


def _as_fraction(value: numbers.Real | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        # Floats are accepted only when they are exactly representable
        # rationals the caller produced deliberately (e.g. 0.5); reject the
        # rest loudly rather than silently poisoning an exact computation.
        frac = Fraction(value).limit_denominator(10**12)
        if float(frac) != value:
            raise TypeError(f"non-exact float {value!r} in exact context")
        return frac
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RationalComplex:
    """A complex number with exact rational real and imaginary parts.

    >>> a = RationalComplex(Fraction(1, 2), Fraction(-3))
    >>> b = RationalComplex.unit_i()
    >>> (a * b).re
    Fraction(3, 1)
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_value(value: "RationalComplex | Fraction | int | float") -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        return RationalComplex(_as_fraction(value))

    @staticmethod
    def unit_i(power: int = 1) -> "RationalComplex":
        """Return i**power exactly."""
        return _I_POWERS[power % 4]

    # -- predicates ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "RationalComplex | Fraction | int") -> "RationalComplex":
        o = RationalComplex.from_value(other)
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "RationalComplex":
        return RationalComplex(-self.re, -self.im)

    def __sub__(self, other: "RationalComplex | Fraction | int") -> "RationalComplex":
        return self + (-RationalComplex.from_value(other))

    def __rsub__(self, other: "RationalComplex | Fraction | int") -> "RationalComplex":
        return RationalComplex.from_value(other) + (-self)

    def __mul__(self, other: "RationalComplex | Fraction | int") -> "RationalComplex":
        o = RationalComplex.from_value(other)
        return RationalComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalComplex | Fraction | int") -> "RationalComplex":
        o = RationalComplex.from_value(other)
        denom = o.re * o.re + o.im * o.im
        if not denom:
            raise ZeroDivisionError("division by exact zero")
        return RationalComplex(
            (self.re * o.re + self.im * o.im) / denom,
            (self.im * o.re - self.re * o.im) / denom,
        )

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"RationalComplex({self.re!s}, {self.im!s})"


_I_POWERS = (
    RationalComplex(Fraction(1)),
    RationalComplex(Fraction(0), Fraction(1)),
    RationalComplex(Fraction(-1)),
    RationalComplex(Fraction(0), Fraction(-1)),
)

RC_ZERO = RationalComplex()
RC_ONE = RationalComplex(Fraction(1))
RC_I = RationalComplex(Fraction(0), Fraction(1))


def i_power(n: int) -> RationalComplex:
    """Exact i**n for any integer n (negative included)."""
    return _I_POWERS[n % 4]


def binom(n: int, k: int) -> int:
    """Binomial coefficient with the convention C(n, k) = 0 outside 0<=k<=n."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def dfact(m: int) -> Fraction:
    """Double factorial m!! extended to negative odd integers.

    The empty products ``0!!`` and ``(-1)!!`` are 1, and for m = -(2j+1) the
    reflection ``(-2j-1)!! = (-1)**j / (2j-1)!!`` extends the recursion
    m!! = m * (m-2)!! to all odd m.  Negative even arguments have no
    consistent value and are rejected.

    >>> dfact(7)
    Fraction(105, 1)
    >>> dfact(-5)
    Fraction(1, 3)
    """
    if m >= -1:
        if m <= 1:
            return Fraction(1)
        acc = 1
        while m > 1:
            acc *= m
            m -= 2
        return Fraction(acc)
    if m % 2 == 0:
        raise ValueError(f"double factorial undefined for negative even {m}")
    j = (-m - 1) // 2  # m = -(2j+1)
    sign = -1 if j % 2 else 1
    return Fraction(sign, int(dfact(2 * j - 1)))


_TermMap = Mapping[tuple[int, int], RationalComplex]


class ExpLaurent:
    """Finite Laurent sum in ``k`` and ``x - z`` carrying an oscillatory phase.

    Instances are immutable; all operations return new objects.  The empty
    sum is the universal zero and is compatible with every phase/unit grading.
    """

    __slots__ = ("terms", "phase_x", "phase_z", "unit_pow")

    def __init__(
        self,
        terms: _TermMap | Iterable[tuple[tuple[int, int], RationalComplex]] = (),
        phase_x: int = 0,
        phase_z: int = 0,
        unit_pow: int = 0,
    ) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, int], RationalComplex] = {}
        for (m, p), coeff in items:
            if not isinstance(m, numbers.Integral) or not isinstance(p, numbers.Integral):
                raise TypeError("term keys must be integer (k_pow, xz_pow) pairs")
            coeff = RationalComplex.from_value(coeff)
            if coeff.is_zero:
                continue
            key = (int(m), int(p))
            prev = clean.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero:
                clean.pop(key, None)
            else:
                clean[key] = total
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "phase_x", int(phase_x))
        object.__setattr__(self, "phase_z", int(phase_z))
        object.__setattr__(self, "unit_pow", int(unit_pow))

    def __setattr__(self, name: str, value: object) -> None:  # pragma: no cover
        raise AttributeError("ExpLaurent instances are immutable")

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero() -> "ExpLaurent":
        return _EL_ZERO

    @staticmethod
    def monomial(
        coeff: RationalComplex | Fraction | int,
        k_pow: int = 0,
        xz_pow: int = 0,
        phase_x: int = 0,
        phase_z: int = 0,
        unit_pow: int = 0,
    ) -> "ExpLaurent":
        return ExpLaurent(
            {(k_pow, xz_pow): RationalComplex.from_value(coeff)},
            phase_x=phase_x,
            phase_z=phase_z,
            unit_pow=unit_pow,
        )

    # -- predicates ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _grading(self) -> tuple[int, int, int]:
        return (self.phase_x, self.phase_z, self.unit_pow)

    def compatible(self, other: "ExpLaurent") -> bool:
        return (
            self.is_zero
            or other.is_zero
            or self._grading() == other._grading()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpLaurent):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return self._grading() == other._grading() and self.terms == other.terms

    def __hash__(self) -> int:
        if self.is_zero:
            return hash("ExpLaurent-zero")
        return hash((self._grading(), frozenset(self.terms.items())))

    # -- ring operations -------------------------------------------------
    def __add__(self, other: "ExpLaurent") -> "ExpLaurent":
        if not isinstance(other, ExpLaurent):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self._grading() != other._grading():
            raise ValueError(
                "cannot add expressions with different phase/unit grading: "
                f"{self._grading()} vs {other._grading()}"
            )
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = merged.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero:
                merged.pop(key, None)
            else:
                merged[key] = total
        return ExpLaurent(merged, *self._grading())

    def __neg__(self) -> "ExpLaurent":
        return ExpLaurent(
            {key: -coeff for key, coeff in self.terms.items()}, *self._grading()
        )

    def __sub__(self, other: "ExpLaurent") -> "ExpLaurent":
        return self + (-other)

    def __mul__(self, other: "ExpLaurent | RationalComplex | Fraction | int") -> "ExpLaurent":
        if isinstance(other, ExpLaurent):
            if self.is_zero or other.is_zero:
                return _EL_ZERO
            out: dict[tuple[int, int], RationalComplex] = {}
            for (m1, p1), c1 in self.terms.items():
                for (m2, p2), c2 in other.terms.items():
                    key = (m1 + m2, p1 + p2)
                    prod = c1 * c2
                    prev = out.get(key)
                    total = prod if prev is None else prev + prod
                    if total.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = total
            return ExpLaurent(
                out,
                phase_x=self.phase_x + other.phase_x,
                phase_z=self.phase_z + other.phase_z,
                unit_pow=self.unit_pow + other.unit_pow,
            )
        scalar = RationalComplex.from_value(other)
        if scalar.is_zero or self.is_zero:
            return _EL_ZERO
        return ExpLaurent(
            {key: coeff * scalar for key, coeff in self.terms.items()},
            *self._grading(),
        )

    def __rmul__(self, other: "RationalComplex | Fraction | int") -> "ExpLaurent":
        return self * other

    # -- index shifts ------------------------------------------------------
    def mul_k(self, m: int) -> "ExpLaurent":
        """Multiply by k**m."""
        return ExpLaurent(
            {(mm + m, pp): c for (mm, pp), c in self.terms.items()}, *self._grading()
        )

    def mul_xz(self, p: int) -> "ExpLaurent":
        """Multiply by (x-z)**p."""
        return ExpLaurent(
            {(mm, pp + p): c for (mm, pp), c in self.terms.items()}, *self._grading()
        )

    def phase_shift_z(self, delta: int) -> "ExpLaurent":
        """Multiply by exp(i*delta*k*z), adjusting only the displacement phase."""
        return ExpLaurent(
            self.terms, self.phase_x, self.phase_z + delta, self.unit_pow
        )

    # -- calculus ------------------------------------------------------------
    def diff_x(self) -> "ExpLaurent":
        """Exact d/dx.  The phase contributes i*sigma*k per term."""
        out: dict[tuple[int, int], RationalComplex] = {}

        def _acc(key: tuple[int, int], val: RationalComplex) -> None:
            prev = out.get(key)
            total = val if prev is None else prev + val
            if total.is_zero:
                out.pop(key, None)
            else:
                out[key] = total

        sigma = self.phase_x
        for (m, p), c in self.terms.items():
            if sigma:
                _acc((m + 1, p), c * RC_I * sigma)
            if p:
                _acc((m, p - 1), c * p)
        return ExpLaurent(out, *self._grading())

    def subst_neg_k(self) -> "ExpLaurent":
        """Substitute k -> -k: coefficients flip by (-1)**m, phases negate."""
        return ExpLaurent(
            {(m, p): (c if m % 2 == 0 else -c) for (m, p), c in self.terms.items()},
            phase_x=-self.phase_x,
            phase_z=-self.phase_z,
            unit_pow=self.unit_pow,
        )

    # -- structure probes -------------------------------------------------
    def min_k_power(self) -> int | None:
        if self.is_zero:
            return None
        return min(m for m, _ in self.terms)

    def max_k_power(self) -> int | None:
        if self.is_zero:
            return None
        return max(m for m, _ in self.terms)

    def coeff_of_k(self, m: int) -> "ExpLaurent":
        """The (x-z)-Laurent coefficient of k**m, with phases dropped."""
        return ExpLaurent(
            {(0, p): c for (mm, p), c in self.terms.items() if mm == m},
            unit_pow=self.unit_pow,
        )

    # -- evaluation ---------------------------------------------------------
    def to_term_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Pack terms as (k_pows, xz_pows, coeffs) arrays, deterministic order."""
        keys = sorted(self.terms)
        ms = np.array([m for m, _ in keys], dtype=np.int64)
        ps = np.array([p for _, p in keys], dtype=np.int64)
        cs = np.array([self.terms[key].to_complex() for key in keys], dtype=np.complex128)
        return ms, ps, cs

    def eval(self, k: np.ndarray | complex, x: np.ndarray | complex, z: complex) -> np.ndarray | complex:
        """Numerically evaluate at spectral value(s) k and coordinate(s) x.

        Broadcasts k against x.  Pure numpy; the jit-compiled grid kernel in
        :mod:`epresolve.kernels` exists for the hot paths.
        """
        karr = np.asarray(k, dtype=np.complex128)
        xarr = np.asarray(x, dtype=np.complex128)
        xz = xarr - z
        out = np.zeros(np.broadcast(karr, xarr).shape, dtype=np.complex128)
        for (m, p), c in self.terms.items():
            out = out + c.to_complex() * karr**m * xz**p
        phase = np.exp(1j * karr * (self.phase_x * xz + self.phase_z * z))
        scale = (2.0 * math.pi) ** (-0.5 * self.unit_pow)
        result = scale * out * phase
        if np.ndim(result) == 0:
            return complex(result)
        return result

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        if self.is_zero:
            return "ExpLaurent(0)"
        body = " + ".join(
            f"({c.re}{'+' if c.im >= 0 else ''}{c.im}i)*k^{m}*(x-z)^{p}"
            for (m, p), c in sorted(self.terms.items())
        )
        return (
            f"ExpLaurent[{body}; sigma={self.phase_x}, tau={self.phase_z}, "
            f"unit={self.unit_pow}]"
        )


_EL_ZERO = ExpLaurent()


def el_diff_x(f: ExpLaurent) -> ExpLaurent:
    """Exact spatial derivative of an :class:`ExpLaurent` expression."""
    return f.diff_x()


def el_apply_q(f: ExpLaurent, n: int, sign: int) -> ExpLaurent:
    """Apply the first-order ladder operator of index n.

    The raising (+) and lowering (-) forms are ``-d/dx + n/(x-z)`` and
    ``+d/dx + n/(x-z)`` respectively: sign selects which, and must be +1
    or -1.  Raising maps solutions of the index-(n-1) problem to index n;
    lowering goes the other way.
    """
    if n < 1:
        raise ValueError(f"ladder index must be a positive integer, got {n}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 (raising) or -1 (lowering), got {sign}")
    sup = f.mul_xz(-1) * Fraction(n)
    if sign == 1:
        return -f.diff_x() + sup
    return f.diff_x() + sup


def el_apply_h(f: ExpLaurent, coupling: Fraction | int) -> ExpLaurent:
    """Apply -d^2/dx^2 + coupling/(x-z)^2, the centered singular Hamiltonian."""
    return -f.diff_x().diff_x() + f.mul_xz(-2) * Fraction(coupling)


def el_mutate(f: ExpLaurent, delta: Fraction) -> ExpLaurent:
    """Scale the first term coefficient by (1 + delta): a controlled defect.

    Deterministic (first key in sorted order), exact, and reversible; used by
    sensitivity checks to confirm that verification suites detect wrong
    coefficients of relative size delta.
    """
    if f.is_zero:
        raise ValueError("cannot mutate the zero expression")
    key = sorted(f.terms)[0]
    terms = dict(f.terms)
    terms[key] = terms[key] * (RC_ONE + RationalComplex.from_value(Fraction(delta)))
    return ExpLaurent(terms, f.phase_x, f.phase_z, f.unit_pow)


def el_limit_k0_deriv(f: ExpLaurent, order: int) -> ExpLaurent:
    """Exact limit of d^order/dk^order applied to f, as k -> 0.

    Requires the displacement phase to be absent (``phase_z == 0``); strip it
    first via :meth:`ExpLaurent.phase_shift_z`.  Expanding the remaining phase
    exp(i*sigma*k*(x-z)) in powers of k, the term c*k**m*(x-z)**p contributes

        c * order!/(order-m)! * (i*sigma*(x-z))**(order-m) * (x-z)**p

    whenever m <= order.  Negative k-powers that survive canonicalization make
    the limit divergent and are rejected.
    """
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    if f.phase_z != 0:
        raise ValueError(
            "displacement phase must be stripped (phase_shift_z) before the k->0 limit"
        )
    bad = [key for key in f.terms if key[0] < 0]
    if bad:
        raise ValueError(f"k->0 limit divergent: negative k-powers remain at {sorted(bad)}")
    sigma = f.phase_x
    out: dict[tuple[int, int], RationalComplex] = {}
    for (m, p), c in f.terms.items():
        if m > order:
            continue
        j = order - m
        if sigma == 0 and j > 0:
            continue
        factor = RationalComplex.from_value(
            Fraction(math.factorial(order), math.factorial(j))
        )
        phase_part = i_power(j) * Fraction(sigma) ** j if j else RC_ONE
        contrib = c * factor * phase_part
        key = (0, p + j)
        prev = out.get(key)
        total = contrib if prev is None else prev + contrib
        if total.is_zero:
            out.pop(key, None)
        else:
            out[key] = total
    return ExpLaurent(out, phase_x=0, phase_z=0, unit_pow=f.unit_pow)
