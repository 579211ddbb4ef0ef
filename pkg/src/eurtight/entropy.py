"""Outcome distributions and Shannon entropy sums, in bits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quantum import ObservableBasis, ObservableSet, PureState

# probabilities below this are exact zeros (0 log 0 = 0)
ZERO_PROB = 1e-15
SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if np.any(p < -SUM_TOL) or np.any(p > 1 + SUM_TOL):
            raise DomainError(f"probabilities out of [0, 1]: {p}")
        if abs(p.sum() - 1) > SUM_TOL:
            raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


@dataclass(frozen=True)
class EntropyProfile:
    per_observable: tuple[tuple[str, float], ...]
    total: float

    def values(self) -> list[float]:
        return [h for _, h in self.per_observable]


def outcome_distribution(state: PureState, basis: ObservableBasis) -> OutcomeDistribution:
    if state.dim != basis.dim:
        raise DomainError(f"state dim {state.dim} vs basis dim {basis.dim}")
    amps = basis.matrix.conj().T @ state.amplitudes
    return OutcomeDistribution(np.abs(amps) ** 2)


def entropy_bits(p) -> np.ndarray:
    """Elementwise -p log2 p summed over the last axis; works on batches."""
    p = np.asarray(p, dtype=float)
    safe = np.where(p > ZERO_PROB, p, 1.0)
    return -np.sum(np.where(p > ZERO_PROB, p * np.log2(safe), 0.0), axis=-1)


def shannon_entropy(dist) -> float:
    if isinstance(dist, OutcomeDistribution):
        dist = dist.probs
    return float(entropy_bits(dist))


def entropy_sum(state: PureState, obs: ObservableSet) -> EntropyProfile:
    if state.dim != obs.dim:
        raise DomainError(f"state dim {state.dim} vs observable dim {obs.dim}")
    entries = []
    for basis in obs.bases:
        entries.append((basis.label, shannon_entropy(outcome_distribution(state, basis))))
    return EntropyProfile(tuple(entries), float(sum(h for _, h in entries)))


def batch_probabilities(amplitudes: np.ndarray, obs: ObservableSet) -> np.ndarray:
    """Outcome probabilities for many states at once, shape (n, L, d).

    Each row is reduced on its own, so a row's value does not depend on what
    else is in the batch.
    """
    amps = np.asarray(amplitudes, dtype=complex)
    ov = (obs.rows[None, :, :, :] * amps[:, None, None, :]).sum(axis=-1)
    return ov.real ** 2 + ov.imag ** 2


def batch_entropy_sums(amplitudes: np.ndarray, obs: ObservableSet) -> np.ndarray:
    """Total entropy for each row of ``amplitudes`` (shape (n, d))."""
    return entropy_bits(batch_probabilities(amplitudes, obs)).sum(axis=-1)


def density_distribution(rho: np.ndarray, basis: ObservableBasis) -> np.ndarray:
    """Diagonal of ``rho`` in ``basis``: p_k = <b_k| rho |b_k>."""
    m = basis.matrix
    return np.real(np.einsum("ik,ij,jk->k", m.conj(), rho, m))


def mixed_entropy_sum(rho: np.ndarray, obs: ObservableSet) -> float:
    return float(sum(shannon_entropy(density_distribution(rho, b)) for b in obs.bases))
