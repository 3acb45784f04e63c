"""Independent brute-force re-implementations used as test oracles.

These deliberately share no code with the library paths they check (except
the public seeding/permutation helpers, which are inputs to the algorithm,
not part of it).
"""

from __future__ import annotations

import math

import numpy as np

from setscape import rng
from setscape.rsom import SomConfig, init_grid


def brute_cosine(u, v) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 0.5
    dot = sum(x * y for x, y in zip(u, v))
    return math.acos(min(1.0, max(-1.0, dot / (nu * nv)))) / math.pi


def brute_rsom(items: np.ndarray, item_ids, cfg: SomConfig,
               weights: np.ndarray, n_iterations: int | None = None,
               q0: np.ndarray | None = None, strength: float | None = None):
    """Straightforward float64 simulation of reservation training.

    Scans every unreserved neuron exhaustively per placement.  Returns
    (per-iteration reservations, final neuron grid).
    """
    n = cfg.grid_side
    if q0 is None:
        q0 = init_grid(cfg, weights).neurons
    neurons = q0.astype(np.float64).copy()
    c = cfg.initial_strength if strength is None else strength
    total = cfg.iterations if n_iterations is None else n_iterations
    per_iteration = []
    for i in range(1, total + 1):
        frac = 1.0 - i / cfg.iterations
        alpha = c * frac
        radius = int(np.floor(frac * n))
        reserved: set[tuple[int, int]] = set()
        cells: dict[str, tuple[int, int]] = {}
        for t in rng.iteration_order(cfg.seed, i, len(item_ids)):
            item = items[t]
            best, best_cell = None, None
            for y in range(n):
                for x in range(n):
                    if (x, y) in reserved:
                        continue
                    d = brute_cosine(neurons[y, x], item)
                    if best is None or d < best:
                        best, best_cell = d, (x, y)
            bx, by = best_cell
            reserved.add(best_cell)
            cells[item_ids[t]] = best_cell
            for y in range(max(0, by - radius), min(n - 1, by + radius) + 1):
                for x in range(max(0, bx - radius), min(n - 1, bx + radius) + 1):
                    neurons[y, x] += alpha * (item - neurons[y, x])
        per_iteration.append(cells)
    return per_iteration, neurons


def brute_point_in_polygon(px: float, py: float, rings) -> bool:
    """Even-odd ray casting over a list of rings (sequences of (x, y))."""
    inside = False
    for ring in rings:
        m = len(ring)
        for k in range(m):
            x1, y1 = ring[k]
            x2, y2 = ring[(k + 1) % m]
            if (y1 > py) != (y2 > py):
                xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                if px < xint:
                    inside = not inside
    return inside


def brute_polygon_area(rings) -> float:
    """Total shoelace area (outers positive, holes negative)."""
    total = 0.0
    for ring in rings:
        acc = 0.0
        m = len(ring)
        for k in range(m):
            x1, y1 = ring[k]
            x2, y2 = ring[(k + 1) % m]
            acc += x1 * y2 - x2 * y1
        total += acc / 2.0
    return total


def flood_fill_components(mask: np.ndarray) -> int:
    """Number of 4-connected True components (independent of the tracer)."""
    seen = np.zeros_like(mask, dtype=bool)
    count = 0
    w, h = mask.shape
    for sx in range(w):
        for sy in range(h):
            if mask[sx, sy] and not seen[sx, sy]:
                count += 1
                stack = [(sx, sy)]
                seen[sx, sy] = True
                while stack:
                    x, y = stack.pop()
                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        a, b = x + dx, y + dy
                        if 0 <= a < w and 0 <= b < h and mask[a, b] \
                                and not seen[a, b]:
                            seen[a, b] = True
                            stack.append((a, b))
    return count
