"""Mutually unbiased bases for d = 2..5.

Prime dimensions (3, 5) use the Weyl-Heisenberg construction, whose bases
are the computational basis plus the columns ``omega^(k j^2 + m j) / sqrt(d)``
for k = 0..d-1. The order of the k's follows the published Hadamard
matrices, which are kept here as exponent tables and cross-checked at load.
Dimension 4 has no prime field structure, so its five published matrices are
used directly after one corrected entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CatalogIntegrityError, DomainError
from .quantum import ObservableBasis, ObservableSet

UNBIASED_TOL = 1e-10

# published matrices for prime d, as exponent tables of omega = exp(2 pi i / d)
# (row j, column m); the identity basis is implicit
_PUBLISHED_EXPONENTS = {
    3: [
        [[0, 0, 0], [0, 1, 2], [0, 2, 1]],
        [[0, 0, 0], [2, 1, 0], [0, 1, 2]],
        [[0, 0, 0], [1, 2, 0], [0, 2, 1]],
    ],
    5: [
        [[0, 0, 0, 0, 0], [0, 1, 2, 3, 4], [0, 2, 4, 1, 3], [0, 3, 1, 4, 2], [0, 4, 3, 2, 1]],
        [[0, 0, 0, 0, 0], [1, 2, 3, 4, 0], [4, 1, 3, 0, 2], [4, 2, 0, 3, 1], [1, 0, 4, 3, 2]],
        [[0, 0, 0, 0, 0], [3, 4, 0, 1, 2], [2, 4, 1, 3, 0], [2, 0, 3, 1, 4], [3, 2, 3, 0, 4]],
        [[0, 0, 0, 0, 0], [2, 3, 4, 0, 1], [3, 0, 2, 4, 1], [3, 1, 2, 2, 0], [2, 1, 0, 4, 3]],
        [[0, 0, 0, 0, 0], [4, 0, 1, 2, 3], [1, 3, 0, 2, 4], [1, 4, 2, 0, 3], [4, 3, 2, 1, 0]],
    ],
}

# quadratic coefficient k of each published matrix, read off its first column
_WH_ORDER = {3: (0, 1, 2), 5: (0, 1, 3, 2, 4)}

_I = 1j
# published d = 4 matrices; M5[2, 1] is printed as +i, which makes columns 0
# and 1 non-orthogonal. -i is the only value completing the set.
_D4 = [
    np.eye(4),
    np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]]) / 2,
    np.array([[1, 1, 1, 1], [1, 1, -1, -1], [-_I, _I, _I, -_I], [_I, -_I, _I, -_I]]) / 2,
    np.array([[1, 1, 1, 1], [_I, -_I, _I, -_I], [-1, -1, 1, 1], [_I, -_I, -_I, _I]]) / 2,
    np.array([[1, 1, 1, 1], [_I, -_I, _I, -_I], [_I, -_I, -_I, _I], [-1, -1, 1, 1]]) / 2,
]
D4_CORRECTION = "M5 entry (row 2, col 1) taken as -i instead of the printed +i"

_D2 = [
    np.eye(2),
    np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    np.array([[1, 1], [_I, -_I]]) / np.sqrt(2),
]


def weyl_heisenberg_basis(d: int, k: int) -> np.ndarray:
    """Columns omega^(k j^2 + m j) / sqrt(d), m = 0..d-1, for odd prime d."""
    j = np.arange(d)[:, None]
    m = np.arange(d)[None, :]
    return np.exp(2j * np.pi * ((k * j * j + m * j) % d) / d) / np.sqrt(d)


def published_matrices(d: int) -> list[np.ndarray]:
    """The Hadamard matrices as printed (identity first), without any fixes."""
    if d == 4:
        printed = [m.copy() for m in _D4]
        printed[4][2, 1] = _I / 2
        return printed
    if d not in _PUBLISHED_EXPONENTS:
        raise DomainError(f"no published matrices for d={d}")
    w = np.exp(2j * np.pi / d)
    mats = [np.eye(d, dtype=complex)]
    for table in _PUBLISHED_EXPONENTS[d]:
        mats.append(w ** np.array(table) / np.sqrt(d))
    return mats


def same_projectors(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> list[int]:
    """Columns of ``a`` that are not, up to phase, a column of ``b``."""
    fid = np.abs(a.conj().T @ b) ** 2
    return [col for col in range(a.shape[1]) if fid[col].max() < 1 - tol]


@dataclass(frozen=True)
class MubReport:
    max_bias_deviation: float
    max_unitarity_defect: float
    worst_pair: tuple[int, int] | None

    def ok(self, tol: float = UNBIASED_TOL) -> bool:
        return self.max_bias_deviation < tol and self.max_unitarity_defect < tol


def mub_report(mats) -> MubReport:
    mats = [np.asarray(m, dtype=complex) for m in mats]
    d = mats[0].shape[0]
    unit = max(float(np.abs(m.conj().T @ m - np.eye(d)).max()) for m in mats)
    worst, worst_pair = 0.0, None
    for i, j in itertools.combinations(range(len(mats)), 2):
        dev = float(np.abs(np.abs(mats[i].conj().T @ mats[j]) ** 2 - 1 / d).max())
        if worst_pair is None or dev > worst:
            worst, worst_pair = dev, (i, j)
    return MubReport(worst, unit, worst_pair)


def verify_mub(obs: ObservableSet) -> MubReport:
    """Largest deviation of |<a|b>|^2 from 1/d over cross-basis pairs, and the
    largest unitarity defect. Purely diagnostic."""
    return mub_report([b.matrix for b in obs.bases])


@lru_cache(maxsize=None)
def _catalog(d: int) -> tuple[tuple[np.ndarray, ...], tuple[str, ...]]:
    notes: list[str] = []
    if d == 2:
        mats = list(_D2)
    elif d == 4:
        mats = list(_D4)
        notes.append(D4_CORRECTION)
    elif d in _WH_ORDER:
        mats = [np.eye(d, dtype=complex)] + [weyl_heisenberg_basis(d, k) for k in _WH_ORDER[d]]
        for idx, (ours, printed) in enumerate(zip(mats, published_matrices(d))):
            bad = same_projectors(printed, ours)
            if bad:
                cols = ", ".join(str(c) for c in bad)
                notes.append(
                    f"published M{idx + 1} columns [{cols}] differ from Weyl-Heisenberg basis "
                    f"k={_WH_ORDER[d][idx - 1]}; using the construction"
                )
    else:
        raise DomainError(f"MUB catalog covers d = 2..5, got {d}")

    report = mub_report(mats)
    if not report.ok():
        raise CatalogIntegrityError(
            f"d={d} catalog fails check: bases {report.worst_pair} deviate by "
            f"{report.max_bias_deviation:.3g}, unitarity defect {report.max_unitarity_defect:.3g}"
        )
    frozen = []
    for m in mats:
        m = np.array(m, dtype=complex)
        m.setflags(write=False)
        frozen.append(m)
    return tuple(frozen), tuple(notes)


def mub_catalog(d: int) -> tuple[list[np.ndarray], list[str]]:
    mats, notes = _catalog(int(d))
    return list(mats), list(notes)


def mub_bases(dim: int, count: int | None = None, subset=None) -> ObservableSet:
    """The first ``count`` catalog bases, or an explicit 1-based ``subset``."""
    mats, notes = _catalog(int(dim))
    if subset is not None:
        picks = [int(i) for i in subset]
        if count is not None and count != len(picks):
            raise DomainError("count and subset disagree")
        if len(set(picks)) != len(picks) or any(not 1 <= i <= len(mats) for i in picks):
            raise DomainError(f"subset entries must be distinct in 1..{len(mats)}, got {picks}")
    else:
        if count is None:
            count = len(mats)
        if not 1 <= count <= dim + 1:
            raise DomainError(f"need 1 <= L <= {dim + 1}, got {count}")
        picks = list(range(1, count + 1))
    bases = tuple(ObservableBasis(mats[i - 1], f"A{i}") for i in picks)
    return ObservableSet(bases, kind="mub", annotations=tuple(notes))
