"""Finite-dimensional multipartite quantum states.

States are density matrices carrying a subsystem layout. The tensor
convention is row-major: the basis ket ``|i1 ... in>`` maps to the flat
index ``sum_k i_k * prod_{m>k} d_m``, which is exactly numpy's reshape
order, so ``rho.reshape(dims + dims)`` exposes one axis per subsystem
bra/ket index.

All objects are immutable after construction; operations are pure
functions and random generators take explicit seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from typing import Iterable

import numpy as np

from .errors import InvalidStateError, StateFormatError
from .tolerances import DEFAULT, Tolerances

# Desk-scale memory budget: 10 qubits, i.e. a 1024 x 1024 complex matrix.
MAX_TOTAL_DIM = 1024

NAMED_TAGS = ("singlet", "ghz", "w", "pure-product", "maximally-mixed")


@dataclass(frozen=True)
class SystemLayout:
    """Ordered list of subsystem dimensions defining the tensor structure."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(dims):
                raise ValueError(
                    f"{len(labels)} labels for {len(dims)} subsystems"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return f"A{i + 1}"

    def subsystem(self, keep: Iterable[int]) -> "SystemLayout":
        """Layout of the given subsystems, preserving original order."""
        kept = sorted(set(keep))
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[i] for i in kept)
        return SystemLayout(tuple(self.dims[i] for i in kept), labels)


def _frozen_array(a, dtype, shape_check):
    arr = np.array(a, dtype=dtype)
    shape_check(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over a subsystem layout."""

    layout: SystemLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        def check(arr):
            if arr.ndim != 1 or arr.shape[0] != self.layout.total_dim:
                raise ValueError(
                    f"amplitude vector of length {arr.shape} does not match "
                    f"layout dimension {self.layout.total_dim}"
                )

        object.__setattr__(
            self, "amplitudes", _frozen_array(self.amplitudes, complex, check)
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Complex square matrix with a subsystem layout.

    Construction checks only structure (squareness, side length); use
    :func:`validate` to measure the physicality invariants.
    """

    layout: SystemLayout
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        def check(arr):
            d = self.layout.total_dim
            if arr.ndim != 2 or arr.shape != (d, d):
                raise ValueError(
                    f"entries of shape {arr.shape} do not match layout "
                    f"dimension {d}"
                )

        object.__setattr__(
            self, "entries", _frozen_array(self.entries, complex, check)
        )

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


@dataclass(frozen=True)
class Violation:
    """One violated state invariant together with its magnitude."""

    kind: str  # "hermiticity" | "trace" | "positivity"
    magnitude: float

    def __str__(self):
        return f"{self.kind} violation of {self.magnitude:.6g}"


def density_from_pure(psi: PureState, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Outer-product projector of a normalized pure state.

    Raises:
        InvalidStateError: if the squared norm deviates from 1 by more
            than the trace tolerance.
    """
    norm_sq = float(np.vdot(psi.amplitudes, psi.amplitudes).real)
    if abs(norm_sq - 1.0) > tol.trace:
        raise InvalidStateError(
            f"pure state has squared norm {norm_sq!r}, not normalized"
        )
    entries = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix(psi.layout, entries)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state of the subsystems in `keep`, in their original order.

    Args:
        rho: state to reduce.
        keep: non-empty collection of subsystem indices to retain.

    Returns:
        The reduced density matrix. Keeping every subsystem returns `rho`
        itself (exactly).
    """
    kept = sorted(set(int(i) for i in keep))
    n = rho.n
    if not kept:
        raise ValueError("keep set must be non-empty")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"subsystem index out of range 0..{n - 1}: {kept}")
    if len(kept) == n:
        return rho

    dims = list(rho.layout.dims)
    tensor = rho.entries.reshape(dims + dims)
    # Trace out dropped axes from the highest index down so earlier axis
    # numbers stay valid.
    for idx in sorted(set(range(n)) - set(kept), reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + len(dims))
        del dims[idx]
    side = prod(dims)
    return DensityMatrix(rho.layout.subsystem(kept), tensor.reshape(side, side))


def validate(rho: DensityMatrix, tol: Tolerances = DEFAULT) -> list[Violation]:
    """Measure the three state invariants; empty report means physical.

    Checks Hermiticity entrywise, unit trace, and spectrum positivity.
    Reports violations with magnitudes instead of raising.
    """
    report = []
    m = rho.entries
    herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if herm_dev > tol.herm:
        report.append(Violation("hermiticity", herm_dev))
    trace_dev = abs(complex(np.trace(m)) - 1.0)
    if trace_dev > tol.trace:
        report.append(Violation("trace", float(trace_dev)))
    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    min_eig = float(eigs[0]) if eigs.size else 0.0
    if min_eig < -tol.psd:
        report.append(Violation("positivity", -min_eig))
    return report


def _qubit_layout(n: int) -> SystemLayout:
    return SystemLayout((2,) * n)


def _named_vector(tag: str, n: int) -> PureState:
    """Amplitude vector for the pure named states."""
    if tag == "singlet":
        if n != 2:
            raise ValueError("singlet is a two-qubit state; n must be 2")
        vec = np.zeros(4, dtype=complex)
        vec[1] = 1 / np.sqrt(2)   # |01>
        vec[2] = -1 / np.sqrt(2)  # |10>
        return PureState(_qubit_layout(2), vec)
    if tag in ("ghz", "w") and not 2 <= n <= 10:
        raise ValueError(f"{tag} supports 2..10 qubits, got n={n}")
    if tag == "ghz":
        vec = np.zeros(2**n, dtype=complex)
        vec[0] = vec[-1] = 1 / np.sqrt(2)
        return PureState(_qubit_layout(n), vec)
    if tag == "w":
        vec = np.zeros(2**n, dtype=complex)
        for k in range(n):
            vec[2 ** (n - 1 - k)] = 1 / np.sqrt(n)
        return PureState(_qubit_layout(n), vec)
    if tag == "pure-product":
        if not 1 <= n <= 10:
            raise ValueError(f"pure-product supports 1..10 qubits, got n={n}")
        vec = np.zeros(2**n, dtype=complex)
        vec[0] = 1.0
        return PureState(_qubit_layout(n), vec)
    raise ValueError(f"unknown pure state tag {tag!r}")


def named_state(tag: str, n: int) -> DensityMatrix:
    """Build a named state: singlet, ghz(n), w(n), pure-product(n), or
    maximally-mixed(d).

    For ``maximally-mixed`` the count argument is the single subsystem's
    dimension d.
    """
    if tag == "maximally-mixed":
        d = n
        if not 2 <= d <= MAX_TOTAL_DIM:
            raise ValueError(f"maximally-mixed supports d in 2..{MAX_TOTAL_DIM}")
        return DensityMatrix(SystemLayout((d,)), np.eye(d, dtype=complex) / d)
    if tag not in NAMED_TAGS:
        raise ValueError(f"unknown state tag {tag!r}; supported: {NAMED_TAGS}")
    return density_from_pure(_named_vector(tag, n))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(layout: SystemLayout, seed) -> DensityMatrix:
    """Haar-random pure state: normalized complex-Gaussian vector.

    Deterministic for a given integer seed; also accepts a
    ``numpy.random.Generator``.
    """
    rng = _as_rng(seed)
    d = layout.total_dim
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    vec /= np.linalg.norm(vec)
    return density_from_pure(PureState(layout, vec))


def random_mixed(layout: SystemLayout, rank: int, seed) -> DensityMatrix:
    """Random mixed state from the rank-constrained Ginibre ensemble.

    Draws a complex Gaussian matrix G with `rank` columns and returns
    G G^dag normalized to unit trace, which has full support on a
    rank-dimensional subspace almost surely.

    Args:
        layout: subsystem structure of the output.
        rank: number of Ginibre columns, between 1 and the total dimension.
        seed: integer seed or ``numpy.random.Generator``.
    """
    d = layout.total_dim
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in 1..{d}, got {rank}")
    rng = _as_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix(layout, m / np.trace(m).real)


# ---------------------------------------------------------------------------
# State file format (JSON):
#   {"dims": [d1, ..., dn], "kind": "pure",  "vector": [[re, im], ...]}
#   {"dims": [d1, ..., dn], "kind": "mixed", "matrix": [[[re, im], ...], ...]}


def pure_to_dict(psi: PureState) -> dict:
    return {
        "dims": list(psi.layout.dims),
        "kind": "pure",
        "vector": [[float(z.real), float(z.imag)] for z in psi.amplitudes],
    }


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.layout.dims),
        "kind": "mixed",
        "matrix": [
            [[float(z.real), float(z.imag)] for z in row] for row in rho.entries
        ],
    }


def named_state_dict(tag: str, n: int) -> dict:
    """JSON form of a named state, using the compact pure encoding when
    the state is pure."""
    if tag == "maximally-mixed":
        return state_to_dict(named_state(tag, n))
    return pure_to_dict(_named_vector(tag, n))


def _complex_pair(value, what):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) for x in value)
    ):
        raise StateFormatError(f"{what} must be a [re, im] pair, got {value!r}")
    return complex(value[0], value[1])


def state_from_dict(data: dict, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Decode the state file schema into a density matrix.

    Structural problems (non-square matrix, dimension mismatch, missing
    keys) raise :class:`StateFormatError`; an unnormalized pure vector
    raises :class:`InvalidStateError`. Physicality of mixed matrices is
    deliberately not checked here -- run :func:`validate` on the result.
    """
    if not isinstance(data, dict):
        raise StateFormatError(f"state must be a JSON object, got {type(data).__name__}")
    try:
        dims = data["dims"]
        kind = data["kind"]
    except KeyError as exc:
        raise StateFormatError(f"state file missing key {exc.args[0]!r}") from None
    if (
        not isinstance(dims, list)
        or not dims
        or not all(isinstance(d, int) and d >= 2 for d in dims)
    ):
        raise StateFormatError(f"dims must be a list of integers >= 2, got {dims!r}")
    layout = SystemLayout(tuple(dims))
    d = layout.total_dim

    if kind == "pure":
        vector = data.get("vector")
        if not isinstance(vector, list):
            raise StateFormatError("pure state needs a 'vector' array")
        if len(vector) != d:
            raise StateFormatError(
                f"vector length {len(vector)} does not match product of dims {d}"
            )
        amps = np.array(
            [_complex_pair(v, "vector entry") for v in vector], dtype=complex
        )
        return density_from_pure(PureState(layout, amps), tol)

    if kind == "mixed":
        matrix = data.get("matrix")
        if not isinstance(matrix, list):
            raise StateFormatError("mixed state needs a 'matrix' array")
        if len(matrix) != d or any(
            not isinstance(row, list) or len(row) != d for row in matrix
        ):
            raise StateFormatError(
                f"matrix must be square with side {d} (product of dims)"
            )
        entries = np.array(
            [[_complex_pair(z, "matrix entry") for z in row] for row in matrix],
            dtype=complex,
        )
        return DensityMatrix(layout, entries)

    raise StateFormatError(f"kind must be 'pure' or 'mixed', got {kind!r}")


def loads_state(text: str, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Parse a state from JSON text, surfacing syntax errors with position."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return state_from_dict(data, tol)


def load_state(path, tol: Tolerances = DEFAULT) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_state(fh.read(), tol)


def dump_state(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(rho), fh)
        fh.write("\n")
