"""Entropy and mutual information kernels, all in bits (log base 2).

The single entropy path is a Hermitian eigensolve followed by the Shannon
formula on the spectrum with the 0 log2 0 = 0 convention. Eigenvalues in
[-eps_psd, 0) are clipped to zero without renormalizing the spectrum.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ClippedMutualInfoWarning, InvalidStateError, NumericalFailureError
from .states import DensityMatrix, partial_trace
from .tolerances import DEFAULT, Tolerances


def shannon_entropy(p, tol: Tolerances = DEFAULT) -> float:
    """Shannon entropy -sum p_i log2 p_i of a probability vector, in bits.

    Entries may dip below zero by at most the positivity tolerance (they
    are clipped to 0); the vector must sum to 1 within the trace tolerance.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"probability vector must be 1-D, got shape {p.shape}")
    if p.size and float(p.min()) < -tol.psd:
        raise ValueError(f"negative probability {float(p.min())!r}")
    total = float(p.sum())
    if abs(total - 1.0) > tol.trace:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    p = np.clip(p, 0.0, None)
    mask = p > 0
    h = float(-np.sum(p[mask] * np.log2(p[mask])))
    if h < 0.0:
        # only float noise from eigenvalues a hair above 1 can land here
        if h < -1e-12:
            raise NumericalFailureError(f"entropy came out {h!r}")
        h = 0.0
    return h


def von_neumann_entropy(rho: DensityMatrix, tol: Tolerances = DEFAULT) -> float:
    """Entropy of the state's eigenvalue spectrum, in bits.

    Raises:
        InvalidStateError: if an eigenvalue is below the positivity
            tolerance, i.e. the input is not a physical state.
    """
    eigs = np.linalg.eigvalsh(rho.entries)
    if float(eigs[0]) < -tol.psd:
        raise InvalidStateError(
            f"state has eigenvalue {float(eigs[0])!r} below -{tol.psd}"
        )
    return shannon_entropy(eigs, tol)


def _check_bipartite(rho: DensityMatrix, who: str):
    if rho.n != 2:
        raise ValueError(f"{who} needs a 2-subsystem layout, got {rho.n} subsystems")


def quantum_mutual_information(rho_ab: DensityMatrix, tol: Tolerances = DEFAULT) -> float:
    """Total bipartite correlation S(A) + S(B) - S(AB), in bits.

    Subadditivity makes the true value nonnegative; small negative
    results (eigensolve noise accumulated over three entropies) are
    clipped to zero with a :class:`ClippedMutualInfoWarning`.

    Raises:
        NumericalFailureError: if the value is negative beyond the
            mutual-information tolerance.
    """
    _check_bipartite(rho_ab, "quantum_mutual_information")
    s_a = von_neumann_entropy(partial_trace(rho_ab, {0}), tol)
    s_b = von_neumann_entropy(partial_trace(rho_ab, {1}), tol)
    s_ab = von_neumann_entropy(rho_ab, tol)
    value = s_a + s_b - s_ab
    if value < 0.0:
        if value < -tol.mutual_info:
            raise NumericalFailureError(
                f"mutual information {value!r} below -{tol.mutual_info}"
            )
        warnings.warn(
            f"clipped mutual information {value!r} to 0",
            ClippedMutualInfoWarning,
            stacklevel=2,
        )
        value = 0.0
    return value


def conditional_entropy(rho_ab: DensityMatrix, tol: Tolerances = DEFAULT) -> float:
    """S(A|B) = S(AB) - S(B); negative exactly on entangled pure states."""
    _check_bipartite(rho_ab, "conditional_entropy")
    s_ab = von_neumann_entropy(rho_ab, tol)
    s_b = von_neumann_entropy(partial_trace(rho_ab, {1}), tol)
    return s_ab - s_b
