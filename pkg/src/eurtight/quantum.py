"""Small-dimension pure states, their angle/phase chart, spin operators and
observable bases.

A pure state of dimension ``d`` is written in the hyperspherical chart

    psi_{d-1} = cos a_0
    psi_{d-2} = e^{i chi_{d-2}} sin a_0 cos a_1
    ...
    psi_1     = e^{i chi_1} sin a_0 ... sin a_{d-3} sin a_{d-2}
    psi_0     = e^{i chi_0} sin a_0 ... sin a_{d-3} cos a_{d-2}

with ``a_i`` in ``[0, pi/2]`` and ``chi_i`` in ``[0, 2 pi)``. The last ket
carries no phase, so the chart has ``2d - 2`` real parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError

HALF_PI = np.pi / 2
TWO_PI = 2 * np.pi

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
HERMITIAN_TOL = 1e-12
# amplitudes below this are treated as zero when fixing phases
ZERO_AMP = 1e-12


def canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate ``vec`` so its first non-negligible component is real and >= 0."""
    vec = np.asarray(vec, dtype=complex)
    nz = np.flatnonzero(np.abs(vec) > ZERO_AMP)
    if nz.size == 0:
        return vec.copy()
    lead = vec[nz[0]]
    out = vec * (abs(lead) / lead)
    out[nz[0]] = abs(lead)
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector in C^d, stored in canonical global phase."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if not 2 <= amps.size <= 8:
            raise DomainError(f"state dimension {amps.size} out of range")
        norm = np.sqrt(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1) > NORM_TOL:
            raise DomainError(f"state norm {norm!r} differs from 1")
        amps = canonical_phase(amps)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> PureState:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> PureState:
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: PureState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def distance(self, other: PureState) -> float:
        """Phase-insensitive distance sqrt(1 - |<psi|phi>|^2)."""
        fid = abs(self.overlap(other)) ** 2
        return float(np.sqrt(max(0.0, 1.0 - fid)))

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def __repr__(self):
        return f"PureState({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class StateParams:
    """Chart coordinates: ``d-1`` angles in [0, pi/2] and ``d-1`` phases in [0, 2pi)."""

    angles: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        angles = np.array(self.angles, dtype=float).reshape(-1)
        phases = np.array(self.phases, dtype=float).reshape(-1)
        if angles.size != phases.size or not 1 <= angles.size <= 7:
            raise DomainError("need d-1 angles and d-1 phases")
        if np.any(angles < -1e-12) or np.any(angles > HALF_PI + 1e-12):
            raise DomainError(f"angles must lie in [0, pi/2], got {angles}")
        if np.any(phases < -1e-12) or np.any(phases >= TWO_PI + 1e-12):
            raise DomainError(f"phases must lie in [0, 2pi), got {phases}")
        angles = np.clip(angles, 0.0, HALF_PI)
        phases = np.clip(phases, 0.0, None)
        angles.setflags(write=False)
        phases.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "phases", phases)

    @property
    def dim(self) -> int:
        return self.angles.size + 1

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.angles, self.phases])

    @classmethod
    def from_vector(cls, x) -> StateParams:
        x = np.asarray(x, dtype=float)
        half = x.size // 2
        return cls(x[:half], x[half:])


def chart_magnitudes(angles: np.ndarray) -> np.ndarray:
    """Amplitude moduli for a batch of angle rows, shape (..., d-1) -> (..., d)."""
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[-1]
    d = n + 1
    out = np.empty(angles.shape[:-1] + (d,))
    sines = np.ones(angles.shape[:-1])
    for j in range(d - 2):
        out[..., d - 1 - j] = sines * np.cos(angles[..., j])
        sines = sines * np.sin(angles[..., j])
    out[..., 1] = sines * np.sin(angles[..., d - 2])
    out[..., 0] = sines * np.cos(angles[..., d - 2])
    return out


def chart_amplitudes(angles: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Batch version of :func:`state_from_params` without canonicalization."""
    mags = chart_magnitudes(angles).astype(complex)
    mags[..., :-1] *= np.exp(1j * np.asarray(phases, dtype=float))
    return mags


def state_from_params(params: StateParams) -> PureState:
    return PureState(chart_amplitudes(params.angles, params.phases))


def params_from_state(state: PureState) -> StateParams:
    """Invert the chart. Angles that become irrelevant (a zero prefix of sines)
    are set to 0, phases of vanishing amplitudes to 0."""
    amps = np.asarray(state.amplitudes, dtype=complex)
    d = amps.size
    nz = np.flatnonzero(np.abs(amps) > ZERO_AMP)
    # the chart keeps the highest nonzero ket real and positive
    top = amps[nz[-1]]
    amps = amps * (abs(top) / top)
    mags = np.abs(amps)

    angles = np.zeros(d - 1)
    for j in range(d - 2):
        rest = np.sqrt(np.sum(mags[: d - 1 - j] ** 2))
        angles[j] = np.arctan2(rest, mags[d - 1 - j])
    angles[d - 2] = np.arctan2(mags[1], mags[0])

    phases = np.where(mags[:-1] > ZERO_AMP, np.angle(amps[:-1]), 0.0)
    phases = np.mod(phases, TWO_PI)
    phases[phases >= TWO_PI] = 0.0
    return StateParams(angles, phases)


def random_params(dim: int, rng: np.random.Generator, inset: float = 0.0) -> StateParams:
    """Uniform draw over the chart box, optionally kept ``inset`` away from the
    angle faces."""
    angles = rng.uniform(inset, HALF_PI - inset, dim - 1)
    phases = rng.uniform(0.0, TWO_PI, dim - 1)
    return StateParams(angles, phases)


def random_state(dim: int, rng_seed=None, haar: bool = False) -> PureState:
    """Random pure state. Uniform in chart coordinates unless ``haar`` is set."""
    if not 2 <= dim <= 5:
        raise DomainError(f"dim must be in [2, 5], got {dim}")
    rng = np.random.default_rng(rng_seed)
    if haar:
        z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return PureState.normalized(z)
    return state_from_params(random_params(dim, rng))


def random_amplitudes(dim: int, n: int, rng: np.random.Generator, haar: bool = False) -> np.ndarray:
    """``n`` random unit vectors as rows, for bulk property checks."""
    if haar:
        z = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    angles = rng.uniform(0.0, HALF_PI, (n, dim - 1))
    phases = rng.uniform(0.0, TWO_PI, (n, dim - 1))
    return chart_amplitudes(angles, phases)


# ---------------------------------------------------------------- spin


def parse_spin(spin) -> Fraction:
    if isinstance(spin, str):
        spin = Fraction(spin.strip())
    s = Fraction(spin).limit_denominator(2)
    if s not in (Fraction(1), Fraction(3, 2), Fraction(2)):
        raise DomainError(f"spin must be one of 1, 3/2, 2; got {spin}")
    return s


def spin_operators(spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """S_x, S_y, S_z for spin 1, 3/2 or 2 in the S_z basis, m = s, s-1, ..., -s."""
    s = float(parse_spin(spin))
    m = np.arange(s, -s - 1, -1)
    d = m.size
    jplus = np.zeros((d, d))
    for k in range(1, d):
        jplus[k - 1, k] = np.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    sx = (jplus + jplus.T) / 2
    sy = (jplus - jplus.T) / 2j
    sz = np.diag(m)
    return sx.astype(complex), sy.astype(complex), sz.astype(complex)


def spin1_cartesian_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-1 components in the basis where every S_j^2 is diagonal,
    (S_k)_{lm} = -i eps_{klm}."""
    sx = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])
    sy = np.array([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]])
    sz = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
    return sx, sy, sz


# ---------------------------------------------------------------- bases


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Orthonormal measurement basis; column ``k`` of ``matrix`` is outcome ``k``."""

    matrix: np.ndarray
    label: str = ""
    eigenvalues: tuple[float, ...] | None = None

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DomainError(f"basis matrix must be square, got shape {mat.shape}")
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > ORTHO_TOL:
            raise DomainError(f"basis {self.label!r} not orthonormal (defect {defect:.3g})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.eigenvalues is not None:
            ev = tuple(float(v) for v in self.eigenvalues)
            if len(ev) != mat.shape[0]:
                raise DomainError("one eigenvalue per basis vector required")
            object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list[PureState]:
        return [PureState(self.matrix[:, k]) for k in range(self.dim)]

    def operator(self) -> np.ndarray:
        """Reassemble sum_k lambda_k |v_k><v_k| (requires eigenvalues)."""
        if self.eigenvalues is None:
            raise DomainError(f"basis {self.label!r} has no eigenvalues")
        return (self.matrix * np.array(self.eigenvalues)) @ self.matrix.conj().T


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Ordered collection of bases in one dimension."""

    bases: tuple[ObservableBasis, ...]
    kind: str = "custom"
    annotations: tuple[str, ...] = field(default=())

    def __post_init__(self):
        bases = tuple(self.bases)
        if not bases:
            raise DomainError("an observable set needs at least one basis")
        dims = {b.dim for b in bases}
        if len(dims) != 1:
            raise DomainError(f"bases of mixed dimension {sorted(dims)}")
        labels = [b.label for b in bases]
        if len(set(labels)) != len(labels):
            raise DomainError(f"basis labels must be unique: {labels}")
        if self.kind not in ("spin", "mub", "custom"):
            raise DomainError(f"unknown observable kind {self.kind!r}")
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "annotations", tuple(self.annotations))
        # rows[l, k, :] = <b_k^{(l)}|, so probabilities are |rows @ psi|^2
        rows = np.stack([b.matrix.conj().T for b in bases])
        rows.setflags(write=False)
        object.__setattr__(self, "_rows", rows)

    @property
    def dim(self) -> int:
        return self.bases[0].dim

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.bases]

    def __len__(self):
        return len(self.bases)

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def subset(self, indices: Sequence[int]) -> ObservableSet:
        return ObservableSet(tuple(self.bases[i] for i in indices), self.kind, self.annotations)

    def describe(self) -> dict:
        return {"dim": self.dim, "count": len(self), "kind": self.kind, "labels": self.labels}


def _assert_hermitian(op: np.ndarray) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DomainError("operator must be a square matrix")
    if np.abs(op - op.conj().T).max() > HERMITIAN_TOL:
        raise DomainError("operator is not Hermitian")
    return op


def eigenbasis(op, label: str = "", decimals: int = 9) -> ObservableBasis:
    """Eigenbasis of a Hermitian matrix, ordered by descending eigenvalue.

    Each eigenspace gets a reproducible basis: the standard basis vectors are
    projected onto it in index order and Gram-Schmidt orthonormalized, then
    every vector is put in canonical phase.
    """
    op = _assert_hermitian(op)
    d = op.shape[0]
    vals, vecs = np.linalg.eigh(op)
    keys = np.round(vals, decimals)
    groups = []
    for key in sorted(set(keys.tolist()), reverse=True):
        idx = np.flatnonzero(keys == key)
        groups.append((float(np.mean(vals[idx])), vecs[:, idx]))

    columns, eigvals = [], []
    for val, space in groups:
        proj = space @ space.conj().T
        picked = []
        for k in range(d):
            v = proj[:, k].copy()
            for u in picked:
                v -= np.vdot(u, v) * u
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                picked.append(v / norm)
            if len(picked) == space.shape[1]:
                break
        columns.extend(canonical_phase(v) for v in picked)
        eigvals.extend([val] * len(picked))
    return ObservableBasis(np.column_stack(columns), label, tuple(eigvals))


def spin_observables(spin, components: str | Sequence[str] = "xyz") -> ObservableSet:
    """Eigenbases of the requested spin components (S_z-basis representation)."""
    ops = dict(zip("xyz", spin_operators(spin)))
    comps = [c.strip().lower() for c in components if c.strip() not in ("", ",")]
    if not comps or any(c not in ops for c in comps) or len(set(comps)) != len(comps):
        raise DomainError(f"components must be distinct letters from x, y, z; got {components!r}")
    return ObservableSet(tuple(eigenbasis(ops[c], f"S_{c}") for c in comps), kind="spin")


@dataclass(frozen=True)
class OverlapPair:
    c: float
    c2: float

    def __post_init__(self):
        if not (0 < self.c2 <= self.c <= 1 + 1e-12):
            raise DomainError(f"need 0 < c2 <= c <= 1, got c={self.c}, c2={self.c2}")


def overlaps(a: ObservableBasis, b: ObservableBasis, decimals: int = 10,
             distinct: bool = False) -> OverlapPair:
    """Largest overlap c and second overlap c2 of |<a_j|b_k>|.

    By default c2 is the second entry of the overlap multiset sorted in
    descending order, so a repeated maximum gives c2 = c. With ``distinct``
    c2 is instead the largest value strictly below c (zeros ignored); that
    reading can push q_CP and q_RPZ above attainable entropy sums.
    """
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch {a.dim} vs {b.dim}")
    mags = np.abs(a.matrix.conj().T @ b.matrix).ravel()
    c = min(float(mags.max()), 1.0)
    if not distinct:
        ordered = np.sort(mags)[::-1]
        if ordered[0] - ordered[1] <= 10.0 ** -decimals:
            return OverlapPair(c, c)
        return OverlapPair(c, float(ordered[1]))
    values = sorted({v for v in np.round(mags, decimals).tolist() if v > 0}, reverse=True)
    if len(values) == 1:
        return OverlapPair(c, c)
    near = np.abs(mags - values[1]) <= 10.0 ** -decimals
    return OverlapPair(c, float(mags[near].max()))
