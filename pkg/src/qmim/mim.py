"""Mutual information matrices and their positive-semidefiniteness.

The matrix of an n-party state holds the marginal entropies on the
diagonal and the pairwise quantum mutual informations off it. Such a
matrix is real symmetric but, unlike its classical counterpart, need not
be positive semidefinite: a maximally entangled pair already gives
[[1, 2], [2, 1]] with a negative eigenvalue.

Three classifiers are provided:

* ``psd_by_eigen`` -- the eigenvalue oracle.
* ``psd_by_theorem`` -- exact closed-form minor conditions for up to
  three parties, after deleting zero-entropy subsystems (whose rows must
  be numerically zero) and sorting the diagonal ascending.
* ``psd_by_conjecture`` -- for any n: the determinant test when all
  smaller leading minors are strictly positive, otherwise the sign
  pattern of symmetric-elimination pivots (congruence preserves inertia,
  so completed eliminations decide definiteness exactly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .infotheory import quantum_mutual_information, von_neumann_entropy
from .states import DensityMatrix, partial_trace
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class MutualInfoMatrix:
    """Real symmetric n x n matrix of pairwise correlations, in bits."""

    entries: np.ndarray = field(repr=False)
    source_permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"entries must be square, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise ValueError("entries must be exactly symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        if self.source_permutation is not None:
            perm = tuple(int(i) for i in self.source_permutation)
            if sorted(perm) != list(range(arr.shape[0])):
                raise ValueError(f"not a permutation of 0..{arr.shape[0] - 1}: {perm}")
            object.__setattr__(self, "source_permutation", perm)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.entries)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [[float(x) for x in row] for row in self.entries],
            "permutation": (
                list(self.source_permutation)
                if self.source_permutation is not None
                else None
            ),
        }

    @staticmethod
    def from_dict(data: dict) -> "MutualInfoMatrix":
        perm = data.get("permutation")
        return MutualInfoMatrix(
            np.array(data["entries"], dtype=float),
            None if perm is None else tuple(perm),
        )


@dataclass(frozen=True)
class IndefiniteWitness:
    """A 2x2 principal submatrix with a (near-)zero diagonal pivot but a
    large off-diagonal entry; its determinant is negative, so the matrix
    cannot be positive semidefinite."""

    row: int
    col: int
    block: tuple[tuple[float, float], tuple[float, float]]
    determinant: float

    def to_dict(self) -> dict:
        return {
            "row": self.row,
            "col": self.col,
            "block": [list(r) for r in self.block],
            "determinant": self.determinant,
        }


@dataclass(frozen=True)
class CongruenceResult:
    """Outcome of symmetric Gaussian elimination C M C^T = diag(pivots).

    ``transform`` is unit lower triangular (determinant exactly 1).
    When ``indefinite_witness`` is set the elimination stopped early and
    ``pivots`` holds only the pivots found up to that point.
    """

    pivots: tuple[float, ...]
    transform: np.ndarray = field(repr=False)
    zero_pivot_indices: frozenset[int]
    indefinite_witness: IndefiniteWitness | None = None

    def to_dict(self) -> dict:
        return {
            "pivots": list(self.pivots),
            "transform": [[float(x) for x in row] for row in self.transform],
            "zero_pivot_indices": sorted(self.zero_pivot_indices),
            "indefinite_witness": (
                self.indefinite_witness.to_dict() if self.indefinite_witness else None
            ),
        }


@dataclass(frozen=True)
class PsdVerdict:
    """PSD decision with the route taken and, when negative, a witness.

    ``method`` names the mathematical route ("eigen", "theorem", or
    "congruence"); ``path`` the concrete branch inside it. For 3-party
    theorem verdicts ``case_label`` is "a" (a zero-entropy subsystem was
    removed), "b" (boundary case of the leading 2x2 minor), or "c"
    (strictly positive leading minor).
    """

    is_psd: bool
    method: str
    witness: dict | None = None
    case_label: str | None = None
    path: str | None = None

    def to_dict(self) -> dict:
        return {
            "is_psd": self.is_psd,
            "method": self.method,
            "witness": self.witness,
            "case_label": self.case_label,
            "path": self.path,
        }


def build_mim(rho: DensityMatrix, tol: Tolerances = DEFAULT) -> MutualInfoMatrix:
    """Mutual information matrix of a state.

    Diagonal entries are the marginal entropies; entry (i, j) with i != j
    is the mutual information of the two-subsystem reduction. Each upper
    entry is computed once and mirrored, so the result is exactly
    symmetric.
    """
    n = rho.n
    entries = np.zeros((n, n))
    for i in range(n):
        entries[i, i] = von_neumann_entropy(partial_trace(rho, {i}), tol)
    for i in range(n):
        for j in range(i + 1, n):
            value = quantum_mutual_information(partial_trace(rho, {i, j}), tol)
            entries[i, j] = entries[j, i] = value
    return MutualInfoMatrix(entries)


def sort_ascending(m: MutualInfoMatrix) -> MutualInfoMatrix:
    """Permute rows and columns so the diagonal is non-decreasing.

    The sort is stable (ties keep their original order) and the applied
    permutation is recorded; being a congruence by a permutation matrix,
    it cannot change definiteness.
    """
    perm = np.argsort(m.diagonal, kind="stable")
    entries = m.entries[np.ix_(perm, perm)]
    if m.source_permutation is not None:
        perm = np.array([m.source_permutation[i] for i in perm])
    return MutualInfoMatrix(entries, tuple(int(i) for i in perm))


def leading_principal_minors(m: MutualInfoMatrix) -> list[float]:
    """Determinants of the top-left k x k blocks for k = 1..n."""
    a = m.entries
    return [float(np.linalg.det(a[:k, :k])) for k in range(1, m.n + 1)]


def congruent_diagonalize(
    m: MutualInfoMatrix, tol: Tolerances = DEFAULT
) -> CongruenceResult:
    """Diagonalize by symmetric Gaussian elimination without pivoting.

    At step k the pivot is the current (k, k) entry. A pivot below the
    pivot tolerance is recorded as zero and skipped provided the rest of
    its row is also below tolerance; if some off-diagonal entry remains
    large, that 2x2 principal block has negative determinant and the
    elimination stops with it as an indefiniteness witness.
    """
    a = np.array(m.entries, dtype=float)
    n = m.n
    transform = np.eye(n)
    pivots: list[float] = []
    zero_indices: set[int] = set()
    witness = None

    for k in range(n):
        pivot = a[k, k]
        if abs(pivot) <= tol.pivot:
            tail = np.abs(a[k, k + 1:])
            if tail.size and float(tail.max()) > tol.pivot:
                j = k + 1 + int(tail.argmax())
                block = (
                    (float(a[k, k]), float(a[k, j])),
                    (float(a[j, k]), float(a[j, j])),
                )
                det = float(a[k, k] * a[j, j] - a[k, j] * a[j, k])
                witness = IndefiniteWitness(k, j, block, det)
                break
            pivots.append(float(pivot))
            zero_indices.add(k)
            continue
        pivots.append(float(pivot))
        if k + 1 < n:
            elim = np.eye(n)
            elim[k + 1:, k] = -a[k + 1:, k] / pivot
            a = elim @ a @ elim.T
            transform = elim @ transform

    return CongruenceResult(
        tuple(pivots), transform, frozenset(zero_indices), witness
    )


def psd_by_eigen(m: MutualInfoMatrix, tol: Tolerances = DEFAULT) -> PsdVerdict:
    """Spectral oracle: PSD iff the smallest eigenvalue is nonnegative to
    a tolerance relative to the largest eigenvalue magnitude."""
    eigvals, eigvecs = np.linalg.eigh(m.entries)
    lo = float(eigvals[0])
    hi = float(np.abs(eigvals).max())
    if lo >= -tol.psd_matrix * max(1.0, hi):
        return PsdVerdict(True, "eigen", path="eigen")
    witness = {
        "kind": "negative-eigenvalue",
        "eigenvalue": lo,
        "eigenvector": [float(x) for x in eigvecs[:, 0]],
    }
    return PsdVerdict(False, "eigen", witness=witness, path="eigen")


def _reduce_sorted(m: MutualInfoMatrix, tol: Tolerances):
    """Sort ascending, then drop zero-entropy subsystems.

    A subsystem with (numerically) zero marginal entropy must have a
    numerically zero row, since every pairwise mutual information is
    bounded by twice the smaller marginal entropy. Returns the reduced
    entries, how many rows were dropped, and -- if some dropped row was
    not numerically zero -- a diagnostic dict describing the violation
    (such a matrix cannot come from a physical state, and the offending
    2x2 principal block certifies it is not PSD).
    """
    ms = sort_ascending(m)
    a = ms.entries
    n = ms.n
    drop = int(np.count_nonzero(ms.diagonal <= tol.pivot))
    for i in range(drop):
        off = np.abs(np.concatenate([a[i, :i], a[i, i + 1:]]))
        if off.size and float(off.max()) > tol.row:
            j = int(np.argmax(np.abs(a[i]) * (np.arange(n) != i)))
            return None, drop, {
                "kind": "zero-entropy-row-violation",
                "row": i,
                "entropy": float(a[i, i]),
                "max_off_diagonal": float(off.max()),
                "block_determinant": float(a[i, i] * a[j, j] - a[i, j] ** 2),
            }
    return a[drop:, drop:], drop, None


def _det_k(a: np.ndarray, k: int) -> float:
    return float(np.linalg.det(a[:k, :k]))


def psd_by_theorem(m: MutualInfoMatrix, tol: Tolerances = DEFAULT) -> PsdVerdict:
    """Closed-form PSD conditions, exact for up to three parties.

    Pipeline: sort the diagonal ascending, remove zero-entropy subsystems
    (their rows must be numerically zero -- a violation is itself a
    not-PSD certificate), then decide on the remaining r x r block:

    * r = 0 or 1: PSD iff the remaining entropy is nonnegative.
    * r = 2: PSD iff the determinant is nonnegative.
    * r = 3: with P2 the leading 2x2 minor -- if P2 is negative the
      matrix is rejected outright; if P2 = 0 (boundary case) PSD requires
      S1*S3 >= I13^2 together with the exact relation S1*I23 = I12*I13;
      if P2 > 0, PSD iff the full determinant is nonnegative.
    """
    n = m.n
    if n > 3:
        raise ValueError(
            f"theorem conditions cover up to 3 parties, got {n}; "
            "use psd_by_conjecture"
        )
    reduced, dropped, violation = _reduce_sorted(m, tol)
    case = None
    if n == 3:
        case = "a" if dropped else None
    elif n == 2:
        case = "a" if dropped else "b"
    if violation is not None:
        return PsdVerdict(
            False, "theorem", witness=violation, case_label=case,
            path="lemma-violation",
        )

    r = reduced.shape[0]
    if r == 0:
        return PsdVerdict(True, "theorem", case_label=case, path="all-zero")
    scale = float(reduced.diagonal().max())
    if r == 1:
        ok = float(reduced[0, 0]) >= -tol.pivot
        witness = None if ok else {"kind": "negative-diagonal", "value": float(reduced[0, 0])}
        return PsdVerdict(ok, "theorem", witness=witness, case_label=case, path="single")

    p2 = _det_k(reduced, 2)
    eps2 = tol.det(scale, 2)
    if r == 2:
        if p2 >= -eps2:
            return PsdVerdict(True, "theorem", case_label=case, path="det2")
        witness = {"kind": "violated-minor", "order": 2, "value": p2}
        return PsdVerdict(False, "theorem", witness=witness, case_label=case, path="det2")

    # r == 3, no subsystem dropped
    if p2 < -eps2:
        witness = {"kind": "violated-minor", "order": 2, "value": p2}
        return PsdVerdict(False, "theorem", witness=witness, path="minor2-negative")
    if abs(p2) <= eps2:
        s1, s3 = float(reduced[0, 0]), float(reduced[2, 2])
        i12, i13, i23 = (
            float(reduced[0, 1]),
            float(reduced[0, 2]),
            float(reduced[1, 2]),
        )
        corner = s1 * s3 - i13 * i13
        coupling = s1 * i23 - i12 * i13
        if corner < -eps2:
            witness = {"kind": "violated-minor", "order": 2, "value": corner,
                       "rows": [0, 2]}
            return PsdVerdict(False, "theorem", witness=witness,
                              case_label="b", path="case-b")
        if abs(coupling) > eps2:
            witness = {"kind": "failed-equality", "value": coupling}
            return PsdVerdict(False, "theorem", witness=witness,
                              case_label="b", path="case-b")
        return PsdVerdict(True, "theorem", case_label="b", path="case-b")
    p3 = _det_k(reduced, 3)
    if p3 >= -tol.det(scale, 3):
        return PsdVerdict(True, "theorem", case_label="c", path="det3")
    witness = {"kind": "violated-minor", "order": 3, "value": p3}
    return PsdVerdict(False, "theorem", witness=witness, case_label="c", path="det3")


def psd_by_conjecture(m: MutualInfoMatrix, tol: Tolerances = DEFAULT) -> PsdVerdict:
    """Determinant test for any number of parties, with an inertia fallback.

    After the same reduction-and-sort step as :func:`psd_by_theorem`: when
    the leading minors P1..P_{n-1} are all strictly positive, the verdict
    is the sign of P_n. Otherwise the minor test is inconclusive and the
    verdict comes from the congruence pivots, whose sign pattern equals
    the eigenvalue sign pattern whenever elimination completes.
    """
    if m.n < 2:
        raise ValueError(f"need at least 2 parties, got {m.n}")
    reduced, _, violation = _reduce_sorted(m, tol)
    if violation is not None:
        return PsdVerdict(False, "theorem", witness=violation, path="lemma-violation")
    r = reduced.shape[0]
    if r == 0:
        return PsdVerdict(True, "theorem", path="all-zero")
    scale = float(reduced.diagonal().max())
    if r == 1:
        ok = float(reduced[0, 0]) >= -tol.pivot
        witness = None if ok else {"kind": "negative-diagonal", "value": float(reduced[0, 0])}
        return PsdVerdict(ok, "theorem", witness=witness, path="single")

    minors = [_det_k(reduced, k) for k in range(1, r + 1)]
    if all(minors[k - 1] > tol.det(scale, k) for k in range(1, r)):
        p_n = minors[-1]
        if p_n >= -tol.det(scale, r):
            return PsdVerdict(True, "theorem", path="conjecture-minors")
        witness = {"kind": "violated-minor", "order": r, "value": p_n}
        return PsdVerdict(False, "theorem", witness=witness, path="conjecture-minors")

    result = congruent_diagonalize(MutualInfoMatrix(reduced), tol)
    if result.indefinite_witness is not None:
        witness = {"kind": "indefinite-block",
                   **result.indefinite_witness.to_dict()}
        return PsdVerdict(False, "congruence", witness=witness,
                          path="congruence-fallback")
    negatives = [p for p in result.pivots if p < -tol.pivot]
    if negatives:
        witness = {"kind": "negative-pivot", "value": min(negatives)}
        return PsdVerdict(False, "congruence", witness=witness,
                          path="congruence-fallback")
    return PsdVerdict(True, "congruence", path="congruence-fallback")
