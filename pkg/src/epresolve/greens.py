"""Green functions, contour-moment pole orders, and the spectral index triple.

Both model families admit the same closed Green function: the product of the
scattering solutions on either side of the diagonal, weighted by pi*i/k at
k = sqrt(E) taken in the upper half plane.  At the exceptional spectral point
the function develops a pole whose order is measured here by contour moments
(integer-valued output with a clean separation criterion, rather than a
log-slope fit), and the three integer indexes of the point are assembled
from the chain structure, the resolution content, and that pole order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boundary import BoundaryModel, ChainClass, bm_classify, bm_scatter
from .interior import InteriorModel, im_scatter

__all__ = ["IndexTriple", "green", "pole_order", "indexes"]

# off-diagonal probe pairs; the second witness guards against an accidental
# zero of the solution at a single probe point
_PROBES = ((0.7, -0.4), (1.3, 0.2))

_MOMENT_SAMPLES = 256


@dataclass(frozen=True)
class IndexTriple:
    """The three integer characteristics of the exceptional spectral point."""

    n1: int
    n2: int
    n3: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "n3"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")


def _k_upper(E: complex) -> complex:
    k = cmath.sqrt(E)
    if k.imag < 0:
        k = -k
    return k


def _psi_boundary(model: BoundaryModel, k: complex, x: float) -> complex:
    vals = bm_scatter(model).eval(np.array([k]), np.array([float(x)]), model.z)
    return complex(np.asarray(vals).reshape(-1)[0]) / k**model.n


def green(
    model: BoundaryModel | InteriorModel, x: float, xp: float, E: complex
) -> complex:
    """Green function at energy E, evaluated off (or on) the diagonal.

    The spectral momentum is sqrt(E) with nonnegative imaginary part.  The
    construction is symmetric in (x, x'); evaluation at the exceptional
    momentum itself (the branch point for the inverse-square family, the
    embedded resonance for the trigonometric one) is refused.
    """
    k = _k_upper(complex(E))
    hi, lo = (x, xp) if x >= xp else (xp, x)
    if isinstance(model, BoundaryModel):
        if abs(k) < 1e-8:
            raise ValueError("Green function is singular at the spectral origin")
        left = _psi_boundary(model, k, hi)
        right = _psi_boundary(model, -k, lo)
    else:
        a = model.alpha
        if abs(k * k - a * a) < 1e-6:
            raise ValueError("Green function is singular at the embedded momentum")
        left = complex(im_scatter(model, k, hi).value)
        right = complex(im_scatter(model, -k, lo).value)
    return (math.pi * 1j / k) * left * right


def _green_k(model, k: complex, x: float, xp: float) -> complex:
    # same product as `green` but parametrized by momentum, for contour work
    hi, lo = (x, xp) if x >= xp else (xp, x)
    if isinstance(model, BoundaryModel):
        left = _psi_boundary(model, k, hi)
        right = _psi_boundary(model, -k, lo)
    else:
        left = complex(im_scatter(model, k, hi).value)
        right = complex(im_scatter(model, -k, lo).value)
    return (math.pi * 1j / k) * left * right


def pole_order(
    model: BoundaryModel | InteriorModel,
    center: complex,
    radius: float,
    max_order: int = 12,
    tol: float = 1e-7,
) -> int:
    """Order of the momentum-plane pole of the Green function at ``center``.

    Contour moments M_j = integral of (k-center)^j G dk on a circle of the
    given radius (uniform trapezoid, spectrally accurate for this analytic
    integrand) vanish exactly for j at and above the order; the order is the
    smallest p with M_{p-1} significant and all later moments below
    tol * |M_{p-1}| * radius^(p-j).  Raises when no p separates cleanly.

    For the trigonometric family probed at center = alpha, the energy map
    E = k**2 is biholomorphic (alpha != 0), so the momentum-plane order *is*
    the energy-plane order there.
    """
    if radius <= 0:
        raise ValueError("probe radius must be positive")
    theta = np.arange(_MOMENT_SAMPLES) * (2 * math.pi / _MOMENT_SAMPLES)
    offs = radius * np.exp(1j * theta)
    ks = complex(center) + offs
    dk = 1j * offs * (2 * math.pi / _MOMENT_SAMPLES)

    orders = []
    for x, xp in _PROBES:
        g = np.array([_green_k(model, complex(kv), x, xp) for kv in ks])
        moments = [np.sum(offs**j * g * dk) for j in range(max_order + 1)]
        mags = [abs(m) for m in moments]
        floor = 1e-9 * max(mags)
        found = None
        for p in range(1, max_order + 1):
            if mags[p - 1] <= floor:
                continue
            if all(
                mags[j] < tol * mags[p - 1] * radius ** (p - j)
                for j in range(p, max_order + 1)
            ):
                found = p
                break
        if found is None:
            raise ValueError(
                "contour moments do not separate into a clean pole order; "
                "shrink the radius or move the probe points"
            )
        orders.append(found)
    # an accidental solution zero at one probe can only lower the apparent
    # order, never raise it
    return max(orders)


def indexes(model: BoundaryModel | InteriorModel) -> IndexTriple:
    """The (n1, n2, n3) triple of the exceptional point.

    n1 counts linearly independent normalizable members at the exceptional
    energy; n2 counts the functions the resolution's singular term carries;
    n3 is the pole order expressed in the energy variable.  For the
    inverse-square family the exceptional energy is a branch point of E, so
    the energy-plane order is taken as (momentum-plane order - 1) / 2; the
    raw momentum-plane order is available from :func:`pole_order` directly.
    """
    from .resolution import eps_chain  # local import; resolution sits above this module

    if isinstance(model, BoundaryModel):
        n1 = sum(
            1 for l in range(model.n) if bm_classify(model, l) is ChainClass.NORMALIZABLE
        )
        n2 = len(eps_chain(model, Fraction(1, 2)).members)
        raw = pole_order(model, 0j, 0.5)
        n3 = (raw - 1) // 2
        return IndexTriple(n1=n1, n2=n2, n3=n3)
    # trigonometric family: one square-summable member at the embedded energy
    # (the chain partner is bounded only), and the singular term of the
    # reduced schemes carries that single member
    n1 = 1
    n2 = 1
    n3 = pole_order(model, complex(model.alpha), 0.25)
    return IndexTriple(n1=n1, n2=n2, n3=n3)
