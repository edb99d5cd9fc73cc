"""Verification records shared by the pairing suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one identity.

    ``identity`` is the package-internal registry id of the relation being
    checked, ``label`` a human-readable description, ``mode`` either
    ``"exact-symbolic"`` (zero-tolerance algebra) or ``"numeric"``.
    """

    identity: str
    label: str
    mode: str
    residual: float
    tolerance: float
    trace: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.mode not in ("exact-symbolic", "numeric"):
            raise ValueError(f"unknown verification mode {self.mode!r}")

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "label": self.label,
            "mode": self.mode,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
            "trace": list(self.trace),
        }

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.identity}: residual {self.residual:.3e} (tol {self.tolerance:.1e})"
