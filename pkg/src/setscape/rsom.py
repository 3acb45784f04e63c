"""Reservation-based self-organizing-map training.

Every item claims a unique grid cell per iteration: once a neuron is reserved,
later items in the same iteration ignore it.  Similar items therefore flood a
region and trickle outwards as it fills, and the final iteration's
reservations are the layout assignment.

Angular (cosine) distance is used throughout; learning strength and
neighborhood radius decay linearly over iterations.  Re-layouts warm-start
from the previous neuron grid with a small initial strength so the picture
changes as little as the new set system allows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import rng
from ._kernel import run_chunk
from .errors import CapacityError, ValidationError
from .model import ActiveSystem, MembershipMatrix

CHUNK_ITERATIONS = 1024
FRESH_STRENGTH = 0.5
WARM_STRENGTH = 0.01


@dataclass(frozen=True)
class SomConfig:
    grid_side: int
    iterations: int
    initial_strength: float = FRESH_STRENGTH
    seed: int = 0
    warm_start_strength: float = WARM_STRENGTH

    def __post_init__(self) -> None:
        if self.grid_side < 1:
            raise ValidationError("grid side must be positive")
        if self.iterations < 1:
            raise ValidationError("iteration count must be positive")
        for name in ("initial_strength", "warm_start_strength"):
            c = getattr(self, name)
            if not (0.0 < c < 1.0):
                raise ValidationError(f"{name} must lie in (0, 1), got {c}")


def derive_config(item_count: int, seed: int = 0) -> SomConfig:
    """Default configuration: grid side 2|T|, floor(1e6/|T|) iterations."""
    if item_count < 1:
        raise ValidationError("cannot derive a configuration for an empty module")
    return SomConfig(grid_side=2 * item_count,
                     iterations=int(1_000_000 // item_count),
                     seed=seed)


def schedule(i: int, cfg: SomConfig) -> tuple[float, int]:
    """(alpha, radius) at iteration i: both decay linearly to zero at i=I."""
    if not (0 <= i <= cfg.iterations):
        raise ValidationError(f"iteration {i} outside [0, {cfg.iterations}]")
    frac = 1.0 - i / cfg.iterations
    return cfg.initial_strength * frac, int(np.floor(frac * cfg.grid_side))


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Angular distance arccos(u.v/|u||v|)/pi in [0, 1].

    Zero-vector fallback: d(0, nonzero) = 0.5 and d(0, 0) = 0.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValidationError(
            f"vector length mismatch: {u.shape} vs {v.shape}")
    nu = float(np.sqrt(u @ u))
    nv = float(np.sqrt(v @ v))
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 0.5
    cos = float(u @ v) / (nu * nv)
    cos = min(1.0, max(-1.0, cos))
    return float(np.arccos(cos)) / np.pi


@dataclass(frozen=True)
class SomGrid:
    side: int
    neurons: np.ndarray = field(repr=False)  # (side, side, M), [y, x, :]

    @property
    def dimension(self) -> int:
        return int(self.neurons.shape[2])

    def component_field(self, index: int) -> np.ndarray:
        """Scalar field of one vector component, indexed [x, y]."""
        return self.neurons[:, :, index].T.copy()


@dataclass(frozen=True)
class TrainedMap:
    grid: SomGrid
    assignment: Mapping[str, tuple[int, int]]  # item id -> (x, y), injective
    active: ActiveSystem
    iteration_trace: tuple[Mapping[str, tuple[int, int]], ...] = ()


def init_grid(cfg: SomConfig, weights: np.ndarray) -> SomGrid:
    """Neurons uniform in [0, w_i] per component, from the config seed."""
    weights = np.asarray(weights, dtype=np.float64)
    m = weights.shape[0]
    if m < 1:
        raise ValidationError("at least one active set is required")
    n = cfg.grid_side
    u = rng.u01_stream(rng.derive_seed(cfg.seed, rng.STREAM_INIT), n * n * m)
    neurons = u.reshape(n, n, m) * weights[None, None, :]
    return SomGrid(n, neurons)


def _warm_start_neurons(cfg: SomConfig, previous: TrainedMap,
                        active: ActiveSystem, item_ids: tuple[str, ...],
                        ) -> np.ndarray:
    n = cfg.grid_side
    if previous.grid.side != n:
        raise ValidationError(
            f"warm start grid side {previous.grid.side} != configured {n}")
    missing = set(previous.assignment) - set(item_ids)
    if missing:
        raise ValidationError(
            f"warm start items not in current module: {sorted(missing)}")
    prev_index = {e.identity: i for i, e in enumerate(previous.active.entries)}
    weights = active.weights
    fresh = init_grid(SomConfig(n, cfg.iterations, cfg.initial_strength,
                                rng.derive_seed(cfg.seed, rng.STREAM_WARM)),
                      weights).neurons
    neurons = np.empty((n, n, active.dimension), dtype=np.float64)
    for j, entry in enumerate(active.entries):
        k = prev_index.get(entry.identity)
        if k is None:
            neurons[:, :, j] = fresh[:, :, j]  # newly added set
        else:
            neurons[:, :, j] = previous.grid.neurons[:, :, k]
    return neurons


def train(matrix: MembershipMatrix, cfg: SomConfig,
          previous: TrainedMap | None = None, *,
          cancel: Callable[[], bool] | None = None,
          trace_iterations: int = 0) -> TrainedMap:
    """Run reservation training and return the final grid and assignment.

    With ``previous`` given, neurons start from the previous grid (components
    for newly added sets are initialized randomly, removed ones dropped) and
    the strength schedule starts at ``cfg.warm_start_strength``.

    ``cancel`` is polled between iteration chunks; returning True abandons
    the run by raising ``InterruptedError``.
    """
    item_ids = matrix.item_ids
    n_items = len(item_ids)
    if n_items == 0:
        raise ValidationError("cannot train on an empty module")
    n = cfg.grid_side
    if n_items > n * n:
        raise CapacityError(
            f"{n_items} items exceed the {n}x{n} grid capacity")
    weights = matrix.active.weights
    if previous is None:
        q0 = init_grid(cfg, weights).neurons
        strength = cfg.initial_strength
    else:
        q0 = _warm_start_neurons(cfg, previous, matrix.active, item_ids)
        strength = cfg.warm_start_strength

    items = np.ascontiguousarray(matrix.rows, dtype=np.float64)
    nn = n * n
    q0_flat = q0.reshape(nn, -1)
    total_i = cfg.iterations

    # per-iteration schedule, i = 1..I (the last pass has alpha 0: a pure
    # reservation sweep over the final neurons)
    idx = np.arange(1, total_i + 1, dtype=np.float64)
    frac = 1.0 - idx / total_i
    alphas = (strength * frac).astype(np.float32)
    radii = np.floor(frac * n).astype(np.int32)

    gram = np.ascontiguousarray(items @ items.T, dtype=np.float32)
    phat = np.ascontiguousarray((q0_flat @ items.T).T, dtype=np.float32)
    sqn = np.einsum("ij,ij->i", q0_flat, q0_flat).astype(np.float32)
    invsqn = np.where(sqn > 1e-35, 1.0 / np.maximum(sqn, 1e-35), 0.0
                      ).astype(np.float32)
    lam = np.ones(nn, dtype=np.float32)
    invlam = np.ones(nn, dtype=np.float32)
    c0 = np.ones(nn, dtype=np.float64)
    chat = np.zeros((n_items, nn), dtype=np.float32)
    reserved = np.zeros(nn, dtype=np.uint8)
    scal = np.ones(1, dtype=np.float64)
    cells = np.zeros((n_items, 2), dtype=np.int32)
    trace = np.zeros((trace_iterations, n_items, 2), dtype=np.int32)

    done = 0
    while done < total_i:
        if cancel is not None and cancel():
            raise InterruptedError("training cancelled")
        span = min(CHUNK_ITERATIONS, total_i - done)
        perms = rng.iteration_order_batch(cfg.seed, done + 1, span, n_items)
        run_chunk(phat, sqn, invsqn, lam, invlam, c0, chat, reserved, scal,
                  gram, alphas[done:done + span], radii[done:done + span],
                  perms, n, cells, trace, done)
        done += span

    coeff = chat.astype(np.float64) * lam.astype(np.float64)[None, :]
    neurons = c0[:, None] * q0_flat + coeff.T @ items
    np.clip(neurons, 0.0, weights[None, :], out=neurons)
    grid = SomGrid(n, neurons.reshape(n, n, -1))
    assignment = {item_ids[t]: (int(cells[t, 0]), int(cells[t, 1]))
                  for t in range(n_items)}
    trace_out = tuple(
        {item_ids[t]: (int(trace[i, t, 0]), int(trace[i, t, 1]))
         for t in range(n_items)}
        for i in range(min(trace_iterations, total_i)))
    return TrainedMap(grid, assignment, matrix.active, trace_out)


def positions(assignment: Mapping[str, tuple[int, int]],
              tile_size: float) -> dict[str, tuple[float, float]]:
    """Tile-center canvas coordinates for every assigned item."""
    if tile_size <= 0:
        raise ValidationError("tile size must be positive")
    return {item: ((x + 0.5) * tile_size, (y + 0.5) * tile_size)
            for item, (x, y) in assignment.items()}


def dump_debug(trained: TrainedMap) -> dict:
    """JSON-ready dump: grid dimensions, flattened neurons, assignment."""
    grid = trained.grid
    return {
        "grid_side": grid.side,
        "dimension": grid.dimension,
        "neurons": [float(v) for v in grid.neurons.ravel()],
        "assignment": {k: [x, y] for k, (x, y) in
                       sorted(trained.assignment.items())},
        "active": [e.identity for e in trained.active.entries],
        "weights": [float(w) for w in trained.active.weights],
    }
