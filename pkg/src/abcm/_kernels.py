"""Hot inner loops, JIT-compiled with numba.

The synchronous-model round accumulates each node's in-bound neighborhood
mean with plain sequential IEEE-double additions in ascending node-id order,
self included at its sorted position. The pure-Python oracle implementations
in tests follow the same documented order, which is what makes the
(gamma, delta) = (0, 1) reduction bitwise exact.
"""

from __future__ import annotations

from numba import njit


@njit(cache=True)
def hk_round(x, conf, nbr, nbr_edge, nbr_ptr, edge_src, edge_dst,
             gamma, delta, x_out, conf_out):
    """One synchronous round; reads time-t arrays, writes t+1 arrays.

    Returns the max absolute opinion movement of the round.
    """
    n = x.shape[0]
    move = 0.0
    for i in range(n):
        acc = 0.0
        cnt = 0
        placed = False
        xi = x[i]
        for k in range(nbr_ptr[i], nbr_ptr[i + 1]):
            j = nbr[k]
            if not placed and j > i:
                acc += xi
                cnt += 1
                placed = True
            d = xi - x[j]
            if d < 0.0:
                d = -d
            if d < conf[nbr_edge[k]]:
                acc += x[j]
                cnt += 1
        if not placed:
            acc += xi
            cnt += 1
        xn = acc / cnt
        x_out[i] = xn
        m = xn - xi
        if m < 0.0:
            m = -m
        if m > move:
            move = m
    for e in range(edge_src.shape[0]):
        d = x[edge_src[e]] - x[edge_dst[e]]
        if d < 0.0:
            d = -d
        c = conf[e]
        if d < c:
            conf_out[e] = c + gamma * (1.0 - c)
        else:
            conf_out[e] = delta * c
    return move


@njit(cache=True)
def dw_window(x, conf, edge_src, edge_dst, selections, mu, gamma, delta):
    """Apply a batch of asynchronous steps in place; one selection per step.

    Returns the number of interacting (opinion-changing) steps in the batch.
    """
    interactions = 0
    for s in range(selections.shape[0]):
        e = selections[s]
        i = edge_src[e]
        j = edge_dst[e]
        d = x[i] - x[j]
        if d < 0.0:
            d = -d
        c = conf[e]
        if d < c:
            xi = x[i]
            xj = x[j]
            x[i] = xi + mu * (xj - xi)
            x[j] = xj + mu * (xi - xj)
            conf[e] = c + gamma * (1.0 - c)
            interactions += 1
        else:
            conf[e] = delta * c
    return interactions
