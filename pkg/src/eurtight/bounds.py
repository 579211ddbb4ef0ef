"""Closed-form entropic uncertainty bounds from the literature, and a report
comparing them with a numerically certified minimum."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import ApplicabilityError, DomainError
from .quantum import ObservableSet, overlaps

DOMINANCE_TOL = 1e-6


def _check_overlaps(c, c2=None):
    if not 0 < c <= 1:
        raise DomainError(f"c must lie in (0, 1], got {c}")
    if c2 is not None and not 0 < c2 <= c:
        raise DomainError(f"c2 must lie in (0, c], got {c2}")


def q_mu(c: float) -> float:
    """Maassen-Uffink: -2 log2 c."""
    _check_overlaps(c)
    return -2 * math.log2(c)


def q_cp(c: float, c2: float) -> float:
    """Coles-Piani: 2[-log2 c + (1 - sqrt c)/2 log2(c/c2)]."""
    _check_overlaps(c, c2)
    return 2 * (-math.log2(c) + 0.5 * (1 - math.sqrt(c)) * math.log2(c / c2))


def q_rpz(c: float, c2: float) -> float:
    """Rudnicki-Puchala-Zyczkowski: 2[-log2 c - log2(b^2 + (c2/c)(1 - b^2))],
    b = (1 + sqrt c)/2."""
    _check_overlaps(c, c2)
    b = (1 + math.sqrt(c)) / 2
    return 2 * (-math.log2(c) - math.log2(b * b + (c2 / c) * (1 - b * b)))


def q_ivanovic(d: int) -> float:
    """Complete set of d + 1 MUBs: (d + 1)(log2(d + 1) - 1)."""
    if d < 2:
        raise DomainError(f"d must be at least 2, got {d}")
    return (d + 1) * (math.log2(d + 1) - 1)


def q_sanchez(d: int) -> float:
    """Complete set of MUBs in even d: (d/2) log2(d/2) + ((d+1)/2) log2((d+1)/2)."""
    if d < 2 or d % 2:
        raise ApplicabilityError(f"the Sanchez bound needs even d, got {d}")
    return (d / 2) * math.log2(d / 2) + ((d + 1) / 2) * math.log2((d + 1) / 2)


def q_bw(d: int, L: int) -> float:
    """Pairwise Maassen-Uffink for L MUBs: (L/2) log2 d."""
    if d < 2 or L < 1:
        raise DomainError(f"need d >= 2 and L >= 1, got d={d}, L={L}")
    return L / 2 * math.log2(d)


def bw_tight(d: int, L: int) -> bool:
    """(L/2) log2 d is known to be tight for square d = r^2 and L < r + 1."""
    r = math.isqrt(d)
    return r * r == d and L < r + 1


def q_azarchs(d: int, L: int) -> float:
    """Incomplete MUB sets: -L log2((d + L - 1)/(d L))."""
    if d < 2 or L < 1:
        raise DomainError(f"need d >= 2 and L >= 1, got d={d}, L={L}")
    return -L * math.log2((d + L - 1) / (d * L))


@dataclass(frozen=True)
class LiteratureBound:
    name: str
    value: float
    note: str = ""


@dataclass(frozen=True)
class BoundReport:
    dim: int
    count: int
    kind: str
    labels: tuple[str, ...]
    certified_min: float | None
    literature: tuple[LiteratureBound, ...] = field(default=())

    @property
    def strongest(self) -> LiteratureBound | None:
        if not self.literature:
            return None
        return max(self.literature, key=lambda b: b.value)

    def get(self, name: str) -> LiteratureBound:
        for b in self.literature:
            if b.name == name:
                return b
        raise KeyError(name)

    def dominance_violations(self, tol: float = DOMINANCE_TOL) -> list[LiteratureBound]:
        if self.certified_min is None:
            return []
        return [b for b in self.literature if b.value > self.certified_min + tol]

    def as_dict(self) -> dict:
        strongest = self.strongest
        return {
            "dim": self.dim,
            "count": self.count,
            "kind": self.kind,
            "labels": list(self.labels),
            "certified_min": self.certified_min,
            "literature": [
                {"name": b.name, "value": b.value, "note": b.note} for b in self.literature
            ],
            "strongest": None if strongest is None else strongest.name,
        }


def _pairwise(obs: ObservableSet) -> list[LiteratureBound]:
    L = len(obs)
    pairs = list(itertools.combinations(range(L), 2))
    ov = [overlaps(obs.bases[i], obs.bases[j]) for i, j in pairs]
    # summing the pair inequalities counts each H(A_j) L - 1 times
    scale = 1 / (L - 1)
    if L == 2:
        note = f"c={ov[0].c:.6g}, c2={ov[0].c2:.6g}"
    else:
        note = f"applied to each of {len(pairs)} pairs, scaled by 1/{L - 1}"
    cp_note, rpz_note = note, note
    alt = [overlaps(obs.bases[i], obs.bases[j], distinct=True) for i, j in pairs]
    if any(a.c2 != o.c2 for a, o in zip(alt, ov)):
        # the value obtained when c2 skips a repeated maximum; informative only
        cp_alt = scale * sum(q_cp(a.c, a.c2) for a in alt)
        rpz_alt = scale * sum(q_rpz(a.c, a.c2) for a in alt)
        cp_note += f"; with c2 the next distinct overlap: {cp_alt:.6g}"
        rpz_note += f"; with c2 the next distinct overlap: {rpz_alt:.6g}"
    return [
        LiteratureBound("q_MU", scale * sum(q_mu(o.c) for o in ov), note),
        LiteratureBound("q_CP", scale * sum(q_cp(o.c, o.c2) for o in ov), cp_note),
        LiteratureBound("q_RPZ", scale * sum(q_rpz(o.c, o.c2) for o in ov), rpz_note),
    ]


def compare_bounds(obs: ObservableSet, certified: float | None = None) -> BoundReport:
    """Every applicable literature bound for ``obs``."""
    d, L = obs.dim, len(obs)
    lit: list[LiteratureBound] = []
    if L >= 2:
        lit.extend(_pairwise(obs))
    if obs.kind == "mub" and L >= 2:
        tight = "tight (square d, L < sqrt(d) + 1)" if bw_tight(d, L) else "not known tight"
        lit.append(LiteratureBound("q_BW", q_bw(d, L), tight))
        if L <= d + 1:
            lit.append(LiteratureBound("q_A", q_azarchs(d, L), "incomplete MUB sets"))
        if L == d + 1:
            lit.append(LiteratureBound("q_I", q_ivanovic(d), "complete MUB set"))
            if d % 2 == 0:
                lit.append(LiteratureBound("q_S", q_sanchez(d), "complete MUB set, even d"))
    return BoundReport(d, L, obs.kind, tuple(obs.labels), certified, tuple(lit))
