"""Closed-form spin-1 machinery.

A qutrit density matrix is fixed by omega_j = 1 - <S_j^2>, a_j = <S_j> and
q_j = <{S_k, S_l}> in the representation where every S_j^2 is diagonal (see
:func:`eurtight.quantum.spin1_cartesian_operators`).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .entropy import ZERO_PROB, OutcomeDistribution
from .errors import DomainError

TRACE_TOL = 1e-12
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
CSV_HEADER = ("omega_x", "omega_y", "gamma")


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > ZERO_PROB, x, 1.0)
    return np.where(x > ZERO_PROB, x * np.log2(safe), 0.0)


@dataclass(frozen=True)
class QutritBlochParams:
    omega: tuple[float, float, float]
    a: tuple[float, float, float] = (0.0, 0.0, 0.0)
    q: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("omega", "a", "q"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) != 3:
                raise DomainError(f"{name} needs three components")
            object.__setattr__(self, name, vals)
        w = np.array(self.omega)
        if np.any(w < -TRACE_TOL) or np.any(w > 1 + TRACE_TOL):
            raise DomainError(f"omega components must lie in [0, 1], got {self.omega}")
        if abs(w.sum() - 1) > TRACE_TOL:
            raise DomainError(f"omega must sum to 1 (trace condition), got {w.sum()!r}")
        # |a_j| <= 1 is left to check_positivity: the minors already imply it


def density_from_bloch(p: QutritBlochParams) -> np.ndarray:
    wx, wy, wz = p.omega
    ax, ay, az = p.a
    qx, qy, qz = p.q
    return np.array(
        [
            [wx, (-1j * az - qz) / 2, (1j * ay - qy) / 2],
            [(1j * az - qz) / 2, wy, (-1j * ax - qx) / 2],
            [(-1j * ay - qy) / 2, (1j * ax - qx) / 2, wz],
        ]
    )


def bloch_from_density(rho) -> QutritBlochParams:
    """Read (omega, a, q) back off a 3x3 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    omega = tuple(np.real(np.diag(rho)))
    a = (-2 * rho[1, 2].imag, 2 * rho[0, 2].imag, -2 * rho[0, 1].imag)
    q = (-2 * rho[1, 2].real, -2 * rho[0, 2].real, -2 * rho[0, 1].real)
    return QutritBlochParams(omega, a, q)


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    margin: float
    spectral_min: float

    @property
    def psd(self) -> bool:
        return self.spectral_min >= -1e-10


def check_positivity(p: QutritBlochParams) -> PositivityReport:
    """2x2 minor conditions 4 omega_k omega_l >= a_j^2. With nonzero q the
    full spectrum must be non-negative as well, since the minors do not
    constrain q. The smallest eigenvalue is always reported; note that even
    with q = 0 the minors alone do not guarantee it is non-negative."""
    w, a = p.omega, p.a
    margins = [4 * w[k] * w[l] - a[j] ** 2 for j, k, l in CYCLIC]
    margin = float(min(margins))
    ok = margin >= -1e-12
    spectral = float(np.linalg.eigvalsh(density_from_bloch(p)).min())
    if any(p.q):
        ok = ok and spectral >= -1e-10
    return PositivityReport(bool(ok), margin, spectral)


def spin1_probabilities(omega_j: float, a_j: float) -> OutcomeDistribution:
    """(p_0, p_+, p_-) = (omega, (1 - omega - a)/2, (1 - omega + a)/2)."""
    p = np.array([omega_j, (1 - omega_j - a_j) / 2, (1 - omega_j + a_j) / 2])
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise DomainError(f"(omega={omega_j}, a={a_j}) gives probabilities {p}")
    return OutcomeDistribution(np.clip(p, 0.0, 1.0))


def spin1_entropy(omega_j, a_j) -> float:
    """H(S_j) in closed form."""
    spin1_probabilities(omega_j, a_j)
    plus = (1 - omega_j + a_j) / 2
    minus = (1 - omega_j - a_j) / 2
    return float(-(_xlog2x(plus) + _xlog2x(minus) + _xlog2x(omega_j)))


def spin1_entropy_total(omega, a) -> np.ndarray:
    """Vectorized sum over j of H(S_j); ``omega`` and ``a`` have shape (..., 3)."""
    omega = np.asarray(omega, dtype=float)
    a = np.asarray(a, dtype=float)
    plus = (1 - omega + a) / 2
    minus = (1 - omega - a) / 2
    return -(_xlog2x(plus) + _xlog2x(minus) + _xlog2x(omega)).sum(axis=-1)


def _gamma(wx, wy):
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    wz = np.clip(1 - wx - wy, 0.0, None)
    w = (wx, wy, wz)
    total = 0.0
    for j, k, l in CYCLIC:
        g = 1 - w[j] + 2 * np.sqrt(w[k] * w[l])
        # g log2(g/2) = 2 (g/2) log2(g/2)
        total = total - (_xlog2x(w[j]) + 2 * _xlog2x(g / 2))
    return total


def gamma_bound(omega_x: float, omega_y: float) -> float:
    """The spin-1 lower-bound surface over the simplex omega_x + omega_y <= 1."""
    if omega_x < -TRACE_TOL or omega_y < -TRACE_TOL or omega_x + omega_y > 1 + TRACE_TOL:
        raise DomainError(f"({omega_x}, {omega_y}) is outside the simplex")
    return float(_gamma(max(omega_x, 0.0), max(omega_y, 0.0)))


def gamma_surface(resolution: int) -> np.ndarray:
    """Rows (omega_x, omega_y, gamma) on the triangular grid with ``resolution``
    points per edge, ordered lexicographically in (omega_x, omega_y)."""
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    n = resolution - 1
    i, k = np.array([(i, k) for i in range(n + 1) for k in range(n + 1 - i)]).T
    wx = i / n
    wy = k / n
    return np.column_stack([wx, wy, _gamma(wx, wy)])


def surface_csv(grid: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in grid:
        writer.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()


def read_surface_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != CSV_HEADER:
        raise DomainError(f"unexpected header {rows[0]}")
    return np.array([[float(v) for v in r] for r in rows[1:]])


def sample_physical(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """omega uniform on the simplex, each a_j uniform on its minors interval,
    q = 0. Returns arrays of shape (n, 3)."""
    omega = rng.dirichlet(np.ones(3), size=n)
    a = np.empty_like(omega)
    for j, k, l in CYCLIC:
        r = 2 * np.sqrt(omega[:, k] * omega[:, l])
        a[:, j] = rng.uniform(-r, r)
    return omega, a


def bloch_from_state(amplitudes) -> QutritBlochParams:
    v = np.asarray(amplitudes, dtype=complex)
    return bloch_from_density(np.outer(v, v.conj()))
