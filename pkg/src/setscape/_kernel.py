"""Compiled inner loop of reservation-based SOM training.

The training semantics are: per iteration, clear reservations, draw items in
a given order, assign each item to the unreserved neuron with minimum angular
distance (ties to the lowest row-major index), then blend every neuron within
Chebyshev radius r of the reserved cell toward the item by factor alpha.

Scanning all N^2 neuron vectors per placement is too slow at spec scale, so
the kernel never touches neuron vectors during training.  It maintains:

* ``phat``  -- (T, N^2) scaled dot products: q_n . item_t == sigma * phat[t,n].
  A neighborhood update multiplies the box rows by (1-a) and adds a*G[t,:].
  When the box covers more than half the grid, the multiplication is applied
  by scaling the global ``sigma`` instead and *undoing* it on the complement,
  so the per-placement cost is min(box, N^2-box) rows.
* ``sqn``   -- true squared neuron norms, updated in closed form from phat.
* ``lam``/``invlam``/``c0``/``chat`` -- per-neuron affine coefficients over
  the item vectors, so the final neuron vectors can be reconstructed exactly
  as q = c0 * q_init + lam * (chat . items).  ``lam`` is refolded into
  ``chat`` before float32 underflow.

The search key sign(c)*c^2/|q|^2 is a strictly increasing function of the
cosine, so argmax(key) equals argmin(angular distance), with the same ties.
Zero-norm vectors use the sentinel distances d(0,nonzero)=0.5 and d(0,0)=0,
which map to keys 0 and 1 in a dedicated branch.
"""

from __future__ import annotations

import numba
import numpy as np

F4 = np.float32
ZERO_NORM_EPS = 1e-35  # squared-norm threshold below which a vector is "zero"
LAM_FOLD_EPS = 1e-30   # refold lam into chat below this
SIGMA_RENORM = 1e-12   # refold sigma into phat below this


@numba.njit(cache=True, fastmath=True)
def run_chunk(phat, sqn, invsqn, lam, invlam, c0, chat, reserved, scal, gram,
              alphas, radii, perms, n_side, cells, trace, iter_offset):
    n_items = phat.shape[0]
    nn = phat.shape[1]
    n_trace = trace.shape[0]
    key = np.empty(nn, dtype=F4)
    for it in range(alphas.shape[0]):
        alpha = alphas[it]
        radius = radii[it]
        one_m_a = F4(1.0) - alpha
        inv1ma = F4(1.0) / one_m_a
        k1 = one_m_a * one_m_a
        reserved[:] = 0
        for draw in range(n_items):
            t = perms[it, draw]
            gtt = gram[t, t]
            sigma = scal[0]

            # search: key strictly increasing in cos(angle(q, item_t))
            if gtt <= ZERO_NORM_EPS:
                for n in range(nn):
                    if reserved[n] != 0:
                        key[n] = F4(-4.0)
                    elif sqn[n] <= ZERO_NORM_EPS:
                        key[n] = F4(1.0)
                    else:
                        key[n] = F4(0.0)
                low = F4(-5.0)
            else:
                low = -F4(2.0) * gtt - F4(2.0)
                for n in range(nn):
                    c = phat[t, n]
                    k = c * np.abs(c) * invsqn[n]
                    if reserved[n] != 0:
                        k = low
                    key[n] = k
            best = low
            for n in range(nn):
                if key[n] > best:
                    best = key[n]
            win = 0
            for n in range(nn):
                if key[n] == best:
                    win = n
                    break
            reserved[win] = 1
            bx = win % n_side
            by = win // n_side
            cells[t, 0] = bx
            cells[t, 1] = by
            git = iter_offset + it
            if git < n_trace:
                trace[git, t, 0] = bx
                trace[git, t, 1] = by

            if alpha <= F4(0.0):
                continue
            x0 = max(0, bx - radius)
            x1 = min(n_side - 1, bx + radius)
            y0 = max(0, by - radius)
            y1 = min(n_side - 1, by + radius)
            width = x1 - x0 + 1
            box = width * (y1 - y0 + 1)

            # norms + reconstruction coefficients (always box-sized work)
            k2 = F4(2.0) * alpha * one_m_a * F4(sigma)
            k3 = alpha * alpha * gtt
            a64 = np.float64(one_m_a)
            for y in range(y0, y1 + 1):
                lo = y * n_side + x0
                hi = lo + width
                for n in range(lo, hi):
                    c = phat[t, n]
                    sp = k1 * sqn[n] + k2 * c + k3
                    sqn[n] = sp
                    invsqn[n] = F4(1.0) / sp if sp > ZERO_NORM_EPS else F4(0.0)
                for n in range(lo, hi):
                    lam[n] *= one_m_a
                    invlam[n] *= inv1ma
                    chat[t, n] += alpha * invlam[n]
                for n in range(lo, hi):
                    c0[n] *= a64
                for n in range(lo, hi):
                    if lam[n] < F4(LAM_FOLD_EPS):
                        f = lam[n]
                        for u in range(n_items):
                            chat[u, n] *= f
                        lam[n] = F4(1.0)
                        invlam[n] = F4(1.0)

            # dot-product table: charge whichever of box/complement is smaller
            if 2 * box <= nn:
                for s in range(n_items):
                    add = alpha * gram[t, s] / F4(sigma)
                    for y in range(y0, y1 + 1):
                        lo = y * n_side + x0
                        hi = lo + width
                        for n in range(lo, hi):
                            phat[s, n] = one_m_a * phat[s, n] + add
            else:
                sigma_new = sigma * np.float64(one_m_a)
                scal[0] = sigma_new
                for s in range(n_items):
                    add = alpha * gram[t, s] / F4(sigma_new)
                    lo0 = y0 * n_side
                    hi0 = (y1 + 1) * n_side
                    for n in range(lo0):
                        phat[s, n] *= inv1ma
                    for n in range(hi0, nn):
                        phat[s, n] *= inv1ma
                    for y in range(y0, y1 + 1):
                        row = y * n_side
                        for n in range(row, row + x0):
                            phat[s, n] *= inv1ma
                        for n in range(row + x0, row + x0 + width):
                            phat[s, n] += add
                        for n in range(row + x0 + width, row + n_side):
                            phat[s, n] *= inv1ma
                if scal[0] < SIGMA_RENORM:
                    f = F4(scal[0])
                    for s in range(n_items):
                        for n in range(nn):
                            phat[s, n] *= f
                    scal[0] = 1.0
