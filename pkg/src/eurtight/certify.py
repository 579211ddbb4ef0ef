"""Multi-start minimization of entropy sums over pure states, minimizer
clustering, a brute-force grid oracle, and saturating-state checks."""

from __future__ import annotations

import itertools
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .entropy import batch_entropy_sums, entropy_bits, entropy_sum
from .errors import DomainError
from .quantum import (
    HALF_PI,
    TWO_PI,
    ObservableSet,
    PureState,
    StateParams,
    chart_amplitudes,
    chart_magnitudes,
    params_from_state,
    state_from_params,
)

log = logging.getLogger(__name__)

EXACT_TOL = 1e-6
ROUNDED_TOL = 0.005


@dataclass(frozen=True)
class OptimizerConfig:
    n_starts: int = 256
    max_iters: int = 2000
    value_tol: float = 1e-10
    param_tol: float = 1e-9
    seed: int = 0
    cluster_radius: float = 1e-4
    initial_step: float = 0.35
    boundary_inset: float = 1e-3
    simplex_restarts: int = 1
    block_size: int = 32
    # execution only; never changes the numbers
    workers: int = 1

    def __post_init__(self):
        for name in ("n_starts", "max_iters", "block_size", "workers"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be positive")
        for name in ("value_tol", "param_tol", "cluster_radius", "initial_step"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.simplex_restarts < 0 or self.boundary_inset < 0:
            raise DomainError("simplex_restarts and boundary_inset must be non-negative")

    def numeric(self) -> dict:
        """Everything that influences the result (drops ``workers``)."""
        out = asdict(self)
        out.pop("workers")
        return out


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    min_value: float
    best_params: StateParams
    best_state: PureState
    cluster_representatives: tuple[PureState, ...]
    final_values: np.ndarray
    final_states: np.ndarray
    converged: np.ndarray
    restarts_converged_to_best: int
    config: OptimizerConfig
    labels: tuple[str, ...] = field(default=())

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def fraction_at_best(self) -> float:
        return self.restarts_converged_to_best / len(self.final_values)

    @property
    def nonconvergence_warning(self) -> bool:
        return bool(np.mean(~self.converged) > 0.5)

    def next_best_gap(self, distinct: float = EXACT_TOL) -> float | None:
        """Gap from the minimum to the best final value that differs from it
        by more than ``distinct``."""
        rest = self.final_values[self.final_values > self.min_value + distinct]
        if rest.size == 0:
            return None
        return float(rest.min() - self.min_value)


# ---------------------------------------------------------------- chart


def fold(x: np.ndarray) -> np.ndarray:
    """Map unconstrained coordinates into the chart box: angles are reflected
    into [0, pi/2], phases wrapped into [0, 2pi)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    a = np.mod(x[..., :n], np.pi)
    a = np.where(a > HALF_PI, np.pi - a, a)
    ph = np.mod(x[..., n:], TWO_PI)
    return np.concatenate([a, ph], axis=-1)


def objective(obs: ObservableSet):
    n = obs.dim - 1

    def f(x):
        y = fold(x)
        return batch_entropy_sums(chart_amplitudes(y[:, :n], y[:, n:]), obs)

    return f


def start_points(dim: int, cfg: OptimizerConfig) -> np.ndarray:
    """One start per restart index, each from its own counter-derived stream."""
    n = dim - 1
    out = np.empty((cfg.n_starts, 2 * n))
    lo, hi = cfg.boundary_inset, HALF_PI - cfg.boundary_inset
    for i in range(cfg.n_starts):
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(i,)))
        out[i, :n] = rng.uniform(lo, hi, n)
        out[i, n:] = rng.uniform(0.0, TWO_PI, n)
    return out


# ---------------------------------------------------------------- simplex descent


def _initial_simplex(x0, step):
    m, n = x0.shape
    sim = np.repeat(x0[:, None, :], n + 1, axis=1)
    sim[:, 1:, :] += step * np.eye(n)[None]
    return sim


def nelder_mead_batch(fun, x0, *, step, max_iters, ftol, xtol, restarts=1):
    """Nelder-Mead on every row of ``x0`` at once.

    ``fun`` maps an (k, n) array to k values. Rows never interact: each keeps
    its own simplex, iteration count and stopping state. After convergence a
    row is restarted ``restarts`` times from a fresh simplex around its best
    vertex, which catches collapsed simplices.

    Returns (x_best, f_best, converged).
    """
    x0 = np.asarray(x0, dtype=float)
    m, n = x0.shape
    # adaptive coefficients (Gao & Han) behave better than the classic ones
    # beyond a handful of dimensions
    alpha, gamma = 1.0, 1.0 + 2.0 / n
    rho, sigma = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n

    sim = _initial_simplex(x0, step)
    fs = fun(sim.reshape(-1, n)).reshape(m, n + 1)
    active = np.ones(m, dtype=bool)
    converged = np.zeros(m, dtype=bool)
    used = np.zeros(m, dtype=int)
    left = np.full(m, restarts)

    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        order = np.argsort(fs[idx], axis=1, kind="stable")
        S = np.take_along_axis(sim[idx], order[:, :, None], axis=1)
        F = np.take_along_axis(fs[idx], order, axis=1)

        done = (F[:, -1] - F[:, 0] <= ftol) & (
            np.abs(S[:, 1:] - S[:, :1]).max(axis=(1, 2)) <= xtol
        )
        if done.any():
            rows = idx[done]
            again = left[rows] > 0
            if again.any():
                r = rows[again]
                left[r] -= 1
                fresh = _initial_simplex(S[done][again][:, 0], step)
                sim[r] = fresh
                fs[r] = fun(fresh.reshape(-1, n)).reshape(-1, n + 1)
            stop = rows[~again]
            active[stop] = False
            converged[stop] = True
            sim[stop] = S[done][~again]
            fs[stop] = F[done][~again]
            keep = ~done
            idx, S, F = idx[keep], S[keep], F[keep]
            if idx.size == 0:
                continue
        used[idx] += 1

        xbar = S[:, :-1].mean(axis=1)
        worst = S[:, -1]
        xr = xbar + alpha * (xbar - worst)
        fr = fun(xr)

        new_x = xr.copy()
        new_f = fr.copy()
        shrink = np.zeros(idx.size, dtype=bool)

        exp = fr < F[:, 0]
        if exp.any():
            xe = xbar[exp] + gamma * (xr[exp] - xbar[exp])
            fe = fun(xe)
            better = fe < fr[exp]
            sub = np.flatnonzero(exp)
            new_x[sub[better]] = xe[better]
            new_f[sub[better]] = fe[better]

        outside = (fr >= F[:, -2]) & (fr < F[:, -1])
        inside = fr >= F[:, -1]
        con = outside | inside
        if con.any():
            sub = np.flatnonzero(con)
            xc = np.where(
                outside[sub, None],
                xbar[sub] + rho * (xr[sub] - xbar[sub]),
                xbar[sub] - rho * (xbar[sub] - worst[sub]),
            )
            fc = fun(xc)
            ok = np.where(outside[sub], fc <= fr[sub], fc < F[sub, -1])
            new_x[sub[ok]] = xc[ok]
            new_f[sub[ok]] = fc[ok]
            shrink[sub[~ok]] = True

        S[:, -1] = np.where(shrink[:, None], S[:, -1], new_x)
        F[:, -1] = np.where(shrink, F[:, -1], new_f)
        if shrink.any():
            sub = np.flatnonzero(shrink)
            best = S[sub, :1]
            moved = best + sigma * (S[sub, 1:] - best)
            fm = fun(moved.reshape(-1, n)).reshape(-1, n)
            S[sub, 1:] = moved
            F[sub, 1:] = fm

        sim[idx] = S
        fs[idx] = F

    best = np.argmin(fs, axis=1)
    xb = sim[np.arange(m), best]
    fb = fs[np.arange(m), best]
    return xb, fb, converged


def _run_block(obs, x0, cfg):
    return nelder_mead_batch(
        objective(obs),
        x0,
        step=cfg.initial_step,
        max_iters=cfg.max_iters,
        ftol=cfg.value_tol,
        xtol=cfg.param_tol,
        restarts=cfg.simplex_restarts,
    )


def minimize_entropy_sum(obs: ObservableSet, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Global minimum of the entropy sum of ``obs`` over pure states.

    Starts are split into fixed blocks of ``cfg.block_size``; blocks may run
    on several threads, and because the split does not depend on
    ``cfg.workers`` the result is bit-identical for any worker count.
    """
    cfg = cfg or OptimizerConfig()
    d = obs.dim
    if not 2 <= d <= 5:
        raise DomainError(f"dimension {d} outside [2, 5]")
    x0 = start_points(d, cfg)
    blocks = [x0[s : s + cfg.block_size] for s in range(0, len(x0), cfg.block_size)]
    if cfg.workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda b: _run_block(obs, b, cfg), blocks))
    else:
        parts = [_run_block(obs, b, cfg) for b in blocks]
    xs = np.concatenate([p[0] for p in parts])
    conv = np.concatenate([p[2] for p in parts])

    y = fold(xs)
    n = d - 1
    amps = chart_amplitudes(y[:, :n], y[:, n:])
    values = batch_entropy_sums(amps, obs)
    best = int(np.argmin(values))
    best_state = PureState(amps[best])
    min_value = entropy_sum(best_state, obs).total
    at_best = int(np.sum(values <= min_value + cfg.value_tol))

    result = OptimizationResult(
        min_value=min_value,
        best_params=params_from_state(best_state),
        best_state=best_state,
        cluster_representatives=(),
        final_values=values,
        final_states=amps,
        converged=conv,
        restarts_converged_to_best=at_best,
        config=cfg,
        labels=tuple(obs.labels),
    )
    reps = tuple(cluster_minimizers(result, cfg.cluster_radius, obs))
    result = replace(result, cluster_representatives=reps)
    if result.nonconvergence_warning:
        warnings.warn(
            f"{np.sum(~conv)} of {len(conv)} starts hit max_iters without converging",
            RuntimeWarning,
            stacklevel=2,
        )
    return result


SNAP_AMP = 1e-6


def _tidy(v: np.ndarray, obs_rows: np.ndarray | None, limit: float) -> np.ndarray:
    # descent leaves vanishing amplitudes at ~1e-7 rather than 0, which spoils
    # the canonical phase; zero them if that does not cost entropy
    small = np.abs(v) < SNAP_AMP
    if not small.any() or obs_rows is None:
        return v
    w = np.where(small, 0.0, v)
    w = w / np.linalg.norm(w)
    ov = obs_rows @ w
    p = ov.real ** 2 + ov.imag ** 2
    return w if float(entropy_bits(p).sum()) <= limit else v


def cluster_minimizers(result: OptimizationResult, radius: float | None = None,
                       obs: ObservableSet | None = None) -> list[PureState]:
    """One canonical state per group of near-optimal final states, grouping by
    the phase-free distance sqrt(1 - |<psi|phi>|^2). With ``obs`` given,
    negligible amplitudes of each representative are set to exactly zero
    when that keeps it within tolerance of the minimum."""
    radius = result.config.cluster_radius if radius is None else radius
    window = result.min_value + result.config.value_tol
    order = np.argsort(result.final_values, kind="stable")
    reps: list[np.ndarray] = []
    for i in order:
        if result.final_values[i] > window:
            break
        v = result.final_states[i]
        if all(np.sqrt(max(0.0, 1 - abs(np.vdot(r, v)) ** 2)) > radius for r in reps):
            reps.append(v)
    rows = None if obs is None else obs.rows
    return [PureState(_tidy(v, rows, window)) for v in reps]


# ---------------------------------------------------------------- oracle

COARSE_D5 = 6


def chart_grid(dim: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles at multiples of (pi/2)/resolution (endpoints included) and phases
    at multiples of 2pi/resolution, as two product grids."""
    n = dim - 1
    ang = np.linspace(0.0, HALF_PI, resolution + 1)
    ph = np.arange(resolution) * (TWO_PI / resolution)
    A = np.array(list(itertools.product(ang, repeat=n)))
    P = np.array(list(itertools.product(ph, repeat=n)))
    return A, P


def _grid_scan(obs: ObservableSet, resolution: int, keep: int = 1, chunk: int = 256):
    """Exhaustive float32 scan; returns the ``keep`` best grid points as
    (angles, phases) rows."""
    d = obs.dim
    A, P = chart_grid(d, resolution)
    R = chart_magnitudes(A)
    phase = np.ones((len(P), d), dtype=np.complex64)
    phase[:, :-1] = np.exp(1j * P)
    phase_t = np.ascontiguousarray(phase.T)
    rows = obs.rows.reshape(-1, d)
    tiny = np.float32(1e-30)

    best_vals = np.full(keep, np.inf)
    best_idx = np.zeros((keep, 2), dtype=np.int64)
    for s in range(0, len(R), chunk):
        Rc = R[s : s + chunk]
        tot = np.zeros((len(Rc), len(P)), dtype=np.float32)
        for v in rows:
            ov = (Rc * v).astype(np.complex64) @ phase_t
            p = ov.real * ov.real
            p += ov.imag * ov.imag
            np.maximum(p, tiny, out=p)
            tot -= p * np.log2(p)
        flat = tot.ravel()
        k = min(keep, flat.size)
        cand = np.argpartition(flat, k - 1)[:k]
        vals = np.concatenate([best_vals, flat[cand].astype(float)])
        ids = np.concatenate([best_idx, np.column_stack(np.unravel_index(cand, tot.shape)) + [s, 0]])
        top = np.lexsort((ids[:, 1], ids[:, 0], vals))[:keep]
        best_vals, best_idx = vals[top], ids[top]
    return A[best_idx[:, 0]], P[best_idx[:, 1]]


def grid_oracle(obs: ObservableSet, resolution: int = 24, polish_cfg: OptimizerConfig | None = None) -> float:
    """Minimum of the entropy sum over a uniform chart grid.

    The value is always attained by an actual state, so it upper-bounds the
    true minimum. For d <= 4 the grid is exhaustive. For d = 5 a grid of
    resolution ``min(resolution, 6)`` is scanned and its best 32 points are
    polished by simplex descent.
    """
    if resolution < 4:
        raise DomainError(f"resolution must be at least 4, got {resolution}")
    d = obs.dim
    n = d - 1
    if d <= 4:
        A, P = _grid_scan(obs, resolution, keep=8)
        vals = batch_entropy_sums(chart_amplitudes(A, P), obs)
        return float(vals.min())
    A, P = _grid_scan(obs, min(resolution, COARSE_D5), keep=32)
    cfg = polish_cfg or OptimizerConfig()
    x0 = np.concatenate([A, P], axis=1)
    xs, _, _ = _run_block(obs, x0, cfg)
    y = fold(xs)
    vals = batch_entropy_sums(chart_amplitudes(y[:, :n], y[:, n:]), obs)
    return float(vals.min())


# ---------------------------------------------------------------- certification


@dataclass(frozen=True)
class Certificate:
    min_value: float
    oracle_value: float | None
    fraction_at_best: float
    next_best_gap: float | None
    status: str

    def as_dict(self) -> dict:
        return asdict(self)


def certify(result: OptimizationResult, obs: ObservableSet, oracle_resolution: int | None = 24,
            oracle_tol: float = 0.02, min_fraction: float = 0.25) -> Certificate:
    """Grade the evidence behind ``result``: enough starts must reach the
    minimum and the grid oracle must agree within ``oracle_tol``."""
    oracle = None
    agrees = False
    if oracle_resolution is not None:
        oracle = grid_oracle(obs, oracle_resolution)
        agrees = oracle - result.min_value <= oracle_tol and oracle >= result.min_value - oracle_tol
    frac = result.fraction_at_best
    status = "certified (numerical)" if agrees and frac >= min_fraction else "uncertified"
    return Certificate(result.min_value, oracle, frac, result.next_best_gap(), status)


@dataclass(frozen=True)
class SaturationCheck:
    passed: bool
    value: float
    expected: float
    residual: float
    tolerance: float


def verify_saturating_state(state: PureState, obs: ObservableSet, expected: float,
                            tolerance: float = EXACT_TOL) -> SaturationCheck:
    """Does ``state`` attain ``expected`` on ``obs``? Use 1e-6 for exact
    constants and 0.005 for constants printed to two decimals."""
    if state.dim != obs.dim:
        raise DomainError(f"state dim {state.dim} vs observable dim {obs.dim}")
    value = entropy_sum(state, obs).total
    residual = abs(value - expected)
    return SaturationCheck(residual < tolerance, value, float(expected), residual, tolerance)


def state_from_degrees(angles_deg, phases_deg=None) -> PureState:
    angles = np.radians(np.asarray(angles_deg, dtype=float))
    phases = np.zeros_like(angles) if phases_deg is None else np.radians(np.asarray(phases_deg, dtype=float))
    return state_from_params(StateParams(angles, np.mod(phases, TWO_PI)))
