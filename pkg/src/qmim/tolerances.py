"""Numerical tolerances used throughout the package.

All matrices handled here have unit trace, so the defaults are absolute
thresholds at the double-precision eigensolver noise scale. Determinant
comparisons are the exception: a k x k minor of a matrix with entries of
size `scale` is itself of size `scale**k`, so those thresholds grow with
the minor order (see :meth:`Tolerances.det`).
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_SCALE_VAR = "QMIM_TOLERANCE_SCALE"


@dataclass(frozen=True)
class Tolerances:
    """Bundle of the epsilons used by validation and classification.

    Attributes:
        herm: entrywise bound on |M - M^dag| for Hermiticity checks.
        trace: bound on |tr(rho) - 1| and on vector-norm deviations.
        psd: most negative eigenvalue tolerated in a physical state.
        mutual_info: negative mutual-information values above this bound
            (in magnitude) are clipped to zero; below it they are an error.
        pivot: threshold under which an elimination pivot counts as zero.
        det_base: base factor for minor-determinant comparisons.
        row: bound used when checking that a zero-entropy subsystem has a
            numerically zero row of pairwise mutual informations.
        psd_matrix: relative eigenvalue tolerance for declaring a mutual
            information matrix positive semidefinite.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    mutual_info: float = 1e-8
    pivot: float = 1e-9
    det_base: float = 1e-9
    row: float = 1e-8
    psd_matrix: float = 1e-9

    def det(self, scale: float, order: int) -> float:
        """Tolerance for an `order` x `order` minor of a matrix whose largest
        diagonal entry is `scale`."""
        return self.det_base * scale**order

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every epsilon multiplied by `factor`."""
        if factor <= 0:
            raise ValueError(f"tolerance scale must be positive, got {factor}")
        return Tolerances(
            **{f.name: getattr(self, f.name) * factor for f in dataclasses.fields(self)}
        )

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT = Tolerances()


def from_environment() -> tuple[Tolerances, float]:
    """Read the tolerance scale from ``QMIM_TOLERANCE_SCALE`` (default 1.0).

    Returns the scaled tolerances together with the scale factor itself.
    """
    raw = os.environ.get(ENV_SCALE_VAR, "1.0")
    try:
        factor = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_SCALE_VAR} must be a number, got {raw!r}") from exc
    return DEFAULT.scaled(factor), factor
