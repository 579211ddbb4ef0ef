"""Registry of published bound constants and the states claimed to attain
them. Drives ``eurtight verify`` and the saturating-state tests."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .certify import EXACT_TOL, ROUNDED_TOL, SaturationCheck, verify_saturating_state
from .errors import DomainError
from .mubs import mub_bases
from .quantum import ObservableSet, PureState, spin_observables

S32_TRIPLE = 6 - 1.5 * math.log2(3)
SQ2 = 1 / math.sqrt(2)


def _ket(d: int, coeffs: dict) -> PureState:
    v = np.zeros(d, dtype=complex)
    for k, c in coeffs.items():
        v[k] = c
    return PureState.normalized(v)


def null_state(spin, component: str) -> PureState:
    """Eigenvalue-zero eigenvector of S_component (integer spin only)."""
    basis = spin_observables(spin, component).bases[0]
    zero = np.flatnonzero(np.abs(basis.eigenvalues) < 1e-9)
    if zero.size != 1:
        raise DomainError(f"spin {spin} has no null projection state")
    return basis.vectors[int(zero[0])]


def eigenstates(obs: ObservableSet) -> list[PureState]:
    return [v for b in obs.bases for v in b.vectors]


def d3_phase_family() -> list[PureState]:
    out = []
    for (j, k), phi in itertools.product([(0, 1), (0, 2), (1, 2)], (np.pi / 3, np.pi, 5 * np.pi / 3)):
        out.append(_ket(3, {j: np.exp(1j * phi), k: 1}))
    return out


def d4_psi_jk() -> list[PureState]:
    """(|j> +- i^t |k>)/sqrt 2 for j < k and t = 0, 1."""
    out = []
    for j, k in itertools.combinations(range(4), 2):
        for sign, t in itertools.product((1, -1), (0, 1)):
            out.append(_ket(4, {j: 1, k: sign * 1j ** t}))
    return out


def d4_l4_family() -> list[PureState]:
    pairs = [(0, 1, 1), (0, 2, 1), (0, 3, 1j), (1, 2, 1j), (1, 3, 1), (2, 3, 1)]
    return [_ket(4, {j: 1, k: s * ph}) for j, k, ph in pairs for s in (1, -1)]


def stato_5d() -> PureState:
    """The printed four-term d = 5 state, renormalized (its amplitudes are
    rounded to two decimals)."""
    return _ket(5, {
        0: 0.19 * np.exp(5j * np.pi / 3),
        1: 0.19,
        3: 0.68 * np.exp(9j * np.pi / 5),
        4: 0.68,
    })


@dataclass(frozen=True)
class SaturationCase:
    name: str
    description: str
    observables: Callable[[], ObservableSet]
    states: Callable[[], list[PureState]]
    expected: float
    tolerance: float = EXACT_TOL

    def run(self) -> list[SaturationCheck]:
        obs = self.observables()
        return [verify_saturating_state(s, obs, self.expected, self.tolerance) for s in self.states()]


@dataclass(frozen=True)
class BoundCase:
    """A published minimum together with how to rebuild its observables."""

    name: str
    observables: Callable[[], ObservableSet]
    expected: float
    tolerance: float
    exact: bool


def _c(name, desc, obs, states, expected, tol=EXACT_TOL):
    return SaturationCase(name, desc, obs, states, expected, tol)


SATURATION_CASES: tuple[SaturationCase, ...] = (
    _c("spin1-null-projection", "s=1 null projection states on {S_x,S_y,S_z}",
       lambda: spin_observables(1, "xyz"), lambda: [null_state(1, c) for c in "xyz"], 2.0),
    _c("spin1-pair-null", "s=1 null state of S_x on {S_x,S_z}",
       lambda: spin_observables(1, "xz"), lambda: [null_state(1, "x"), null_state(1, "z")], 1.0),
    _c("spin32-eigenstates", "s=3/2 eigenstates of every component on the triple",
       lambda: spin_observables("3/2", "xyz"), lambda: eigenstates(spin_observables("3/2", "xyz")),
       S32_TRIPLE),
    _c("spin32-sin15", "sin15|0> + cos15|2> on {S_x,S_z}",
       lambda: spin_observables("3/2", "xz"),
       lambda: [_ket(4, {0: math.sin(math.radians(15)), 2: math.cos(math.radians(15))})],
       1.71, ROUNDED_TOL),
    _c("spin2-null-projection", "s=2 null states on {S_x,S_y,S_z} against the printed 3.12",
       lambda: spin_observables(2, "xyz"), lambda: [null_state(2, c) for c in "xyz"], 3.12, ROUNDED_TOL),
    _c("spin2-pair-null", "s=2 null state of S_x on {S_x,S_z} against the printed 1.56",
       lambda: spin_observables(2, "xz"), lambda: [null_state(2, "x")], 1.56, ROUNDED_TOL),
    _c("d2-eigenstates", "qubit MUB eigenstates on all three bases",
       lambda: mub_bases(2, 3), lambda: eigenstates(mub_bases(2, 3)), 2.0),
    _c("d3-superposition", "(|1> - |2>)/sqrt2 on the complete d=3 set",
       lambda: mub_bases(3, 4), lambda: [_ket(3, {1: 1, 2: -1})], 4.0),
    _c("d3-superposition-l3", "(|1> - |2>)/sqrt2 on three d=3 MUBs",
       lambda: mub_bases(3, 3), lambda: [_ket(3, {1: 1, 2: -1})], 3.0),
    _c("d3-phase-family", "(e^{i phi}|j> + |k>)/sqrt2, phi in {pi/3, pi, 5pi/3}, complete d=3 set",
       lambda: mub_bases(3, 4), d3_phase_family, 4.0),
    _c("d3-phase-family-l3", "the same family on three d=3 MUBs",
       lambda: mub_bases(3, 3), d3_phase_family, 3.0),
    _c("d4-l3", "(|0> +- |1>)/sqrt2 and (|2> +- |3>)/sqrt2 on A1, A2, A3",
       lambda: mub_bases(4, 3),
       lambda: [_ket(4, {0: 1, 1: s}) for s in (1, -1)] + [_ket(4, {2: 1, 3: s}) for s in (1, -1)], 3.0),
    _c("d4-l3-permuted", "(|0> +- |2>)/sqrt2 and (|1> +- |3>)/sqrt2 on A1, A2, A4",
       lambda: mub_bases(4, subset=(1, 2, 4)),
       lambda: [_ket(4, {0: 1, 2: s}) for s in (1, -1)] + [_ket(4, {1: 1, 3: s}) for s in (1, -1)], 3.0),
    _c("d4-l4", "the twelve two-term states on four d=4 MUBs",
       lambda: mub_bases(4, 4), d4_l4_family, 5.0),
    _c("d4-psi-jk", "(|j> +- i^t|k>)/sqrt2 on the complete d=4 set",
       lambda: mub_bases(4, 5), d4_psi_jk, 7.0),
    _c("d5-eigenstates", "any MUB eigenstate on three d=5 MUBs",
       lambda: mub_bases(5, 3), lambda: eigenstates(mub_bases(5, 3)), 2 * math.log2(5)),
    _c("d5-stato", "renormalized printed four-term state on four d=5 MUBs",
       lambda: mub_bases(5, 4), lambda: [stato_5d()], 6.34, 0.01),
)


BOUND_CASES: tuple[BoundCase, ...] = (
    BoundCase("spin1-triple", lambda: spin_observables(1, "xyz"), 2.0, EXACT_TOL, True),
    BoundCase("spin1-xy", lambda: spin_observables(1, "xy"), 1.0, EXACT_TOL, True),
    BoundCase("spin1-xz", lambda: spin_observables(1, "xz"), 1.0, EXACT_TOL, True),
    BoundCase("spin1-yz", lambda: spin_observables(1, "yz"), 1.0, EXACT_TOL, True),
    BoundCase("spin32-xy", lambda: spin_observables("3/2", "xy"), 1.71, ROUNDED_TOL, False),
    BoundCase("spin32-xz", lambda: spin_observables("3/2", "xz"), 1.71, ROUNDED_TOL, False),
    BoundCase("spin32-yz", lambda: spin_observables("3/2", "yz"), 1.71, ROUNDED_TOL, False),
    BoundCase("spin32-triple", lambda: spin_observables("3/2", "xyz"), S32_TRIPLE, EXACT_TOL, True),
    BoundCase("spin2-xy", lambda: spin_observables(2, "xy"), 1.56, ROUNDED_TOL, False),
    BoundCase("spin2-xz", lambda: spin_observables(2, "xz"), 1.56, ROUNDED_TOL, False),
    BoundCase("spin2-yz", lambda: spin_observables(2, "yz"), 1.56, ROUNDED_TOL, False),
    BoundCase("spin2-triple", lambda: spin_observables(2, "xyz"), 3.12, ROUNDED_TOL, False),
    BoundCase("d2-l3", lambda: mub_bases(2, 3), 2.0, EXACT_TOL, True),
    BoundCase("d3-l3", lambda: mub_bases(3, 3), 3.0, EXACT_TOL, True),
    BoundCase("d3-l4", lambda: mub_bases(3, 4), 4.0, EXACT_TOL, True),
    BoundCase("d4-l3", lambda: mub_bases(4, 3), 3.0, EXACT_TOL, True),
    BoundCase("d4-l4", lambda: mub_bases(4, 4), 5.0, EXACT_TOL, True),
    BoundCase("d4-l5", lambda: mub_bases(4, 5), 7.0, EXACT_TOL, True),
    BoundCase("d5-l3", lambda: mub_bases(5, 3), 2 * math.log2(5), EXACT_TOL, True),
    BoundCase("d5-l4", lambda: mub_bases(5, 4), 6.34, ROUNDED_TOL, False),
    BoundCase("d5-l5", lambda: mub_bases(5, 5), 8.33, ROUNDED_TOL, False),
    BoundCase("d5-l6", lambda: mub_bases(5, 6), 10.25, ROUNDED_TOL, False),
)


def saturation_case(name: str) -> SaturationCase:
    for c in SATURATION_CASES:
        if c.name == name:
            return c
    raise KeyError(name)


def bound_case(name: str) -> BoundCase:
    for c in BOUND_CASES:
        if c.name == name:
            return c
    raise KeyError(name)
