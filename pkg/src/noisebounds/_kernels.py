"""Numba kernels for exhaustive enumeration and heat-bath dynamics.

The enumeration walks configurations in Gray-code order so each step
flips exactly one spin and costs O(degree). Weights are accumulated with
a running-max log-sum-exp and Kahan compensation so that block sums are
accurate to a few ulps even over 2^20 terms.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BLOCK_BITS = 20


@njit(cache=True, nogil=True, inline="always")
def _flip_position(step):
    # Gray codes of consecutive integers differ in bit ctz(step).
    k = 0
    v = step
    while v & np.uint64(1) == np.uint64(0):
        v >>= np.uint64(1)
        k += 1
    return k


@njit(cache=True, nogil=True)
def _init_walk(indptr, indices, data, fields, start):
    """Spin vector, energy and magnetization at Gray index ``start``."""
    n = fields.shape[0]
    g = np.uint64(start) ^ (np.uint64(start) >> np.uint64(1))
    s = np.empty(n, dtype=np.int8)
    mag = 0.0
    for k in range(n):
        bit = (g >> np.uint64(k)) & np.uint64(1)
        s[k] = np.int8(1 - 2 * int(bit))
        mag += s[k]
    e = 0.0
    for k in range(n):
        e -= fields[k] * s[k]
        for t in range(indptr[k], indptr[k + 1]):
            j = indices[t]
            if j > k:
                e -= data[t] * s[k] * s[j]
    return s, e, mag


@njit(cache=True, nogil=True)
def gray_partition_block(indptr, indices, data, fields, beta, gamma, start, count):
    """Partition sums over ``count`` Gray-code configurations from ``start``.

    Returns (m, w, we, ground, habs) where m is the running maximum of the
    exponent x = -beta*E + gamma*mag, w = sum exp(x - m), we = sum E*exp(x - m),
    ground = min E and habs = max |E| over the block.
    """
    s, e, mag = _init_walk(indptr, indices, data, fields, start)
    m = -np.inf
    w = 0.0
    cw = 0.0
    we = 0.0
    cwe = 0.0
    ground = np.inf
    habs = 0.0
    for step in range(count):
        x = -beta * e + gamma * mag
        if x > m:
            if m == -np.inf:
                w = 0.0
                we = 0.0
                cw = 0.0
                cwe = 0.0
            else:
                scale = np.exp(m - x)
                w *= scale
                cw *= scale
                we *= scale
                cwe *= scale
            m = x
        term = np.exp(x - m)
        # Kahan-compensated accumulation of w and we.
        y = term - cw
        t = w + y
        cw = (t - w) - y
        w = t
        ye = e * term - cwe
        te = we + ye
        cwe = (te - we) - ye
        we = te
        if e < ground:
            ground = e
        ae = abs(e)
        if ae > habs:
            habs = ae
        if step < count - 1:
            k = _flip_position(np.uint64(start) + np.uint64(step) + np.uint64(1))
            sk = s[k]
            h = fields[k]
            for t2 in range(indptr[k], indptr[k + 1]):
                h += data[t2] * s[indices[t2]]
            e += 2.0 * sk * h
            s[k] = -sk
            mag -= 2.0 * sk
    return m, w, we, ground, habs


@njit(cache=True, nogil=True)
def gray_spectrum_block(indptr, indices, data, fields, start, count, out_e, out_m, offset):
    """Store energy and magnetization of each configuration in the block."""
    s, e, mag = _init_walk(indptr, indices, data, fields, start)
    for step in range(count):
        out_e[offset + step] = e
        out_m[offset + step] = np.int8(mag)
        if step < count - 1:
            k = _flip_position(np.uint64(start) + np.uint64(step) + np.uint64(1))
            sk = s[k]
            h = fields[k]
            for t2 in range(indptr[k], indptr[k + 1]):
                h += data[t2] * s[indices[t2]]
            e += 2.0 * sk * h
            s[k] = -sk
            mag -= 2.0 * sk


@njit(cache=True, nogil=True)
def heat_bath_sweeps(indptr, indices, data, fields, betas, gamma, s, uniforms, e0, best_s, best_e0):
    """Run len(betas) sequential heat-bath sweeps in place.

    Site k is set to +1 with probability 1/(1 + exp(-2*beta*h_k - 2*gamma))
    where h_k is the local field, sweeping sites in order 0..n-1. The
    incrementally tracked energy is returned together with the best energy
    seen after any single-site update; ``best_s`` is updated in place.
    """
    n = s.shape[0]
    e = e0
    best_e = best_e0
    for sweep in range(betas.shape[0]):
        beta = betas[sweep]
        for k in range(n):
            h = fields[k]
            for t in range(indptr[k], indptr[k + 1]):
                h += data[t] * s[indices[t]]
            p_up = 1.0 / (1.0 + np.exp(-2.0 * beta * h - 2.0 * gamma))
            new = np.int8(1) if uniforms[sweep, k] < p_up else np.int8(-1)
            if new != s[k]:
                e += 2.0 * s[k] * h
                s[k] = new
            if e < best_e:
                best_e = e
                for q in range(n):
                    best_s[q] = s[q]
    return e, best_e
