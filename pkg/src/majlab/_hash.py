"""Counter-based edge oracle: deterministic 64-bit mixing of (seed, u, v).

The same arithmetic is implemented twice: a pure-Python scalar version
(the reference, used by `edge_present`) and numba kernels operating on
uint64 (used by the simulators).  They must agree bit for bit; the test
suite checks this.
"""

import numpy as np
from numba import njit, prange

_MASK = (1 << 64) - 1

# murmur3 fmix64 constants plus two odd multipliers to separate the
# two vertex coordinates before mixing
_F1 = 0xFF51AFD7ED558CCD
_F2 = 0xC4CEB9FE1A85EC53
_C1 = 0x9E3779B97F4A7C15
_C2 = 0xC2B2AE3D27D4EB4F

# edge present iff the top 53 bits of the hash, as a uniform fraction,
# fall below p
_FRAC_BITS = 53


def mix64(z: int) -> int:
    """Pure-Python murmur3 finalizer (bijective on 64-bit words)."""
    z &= _MASK
    z ^= z >> 33
    z = (z * _F1) & _MASK
    z ^= z >> 33
    z = (z * _F2) & _MASK
    z ^= z >> 33
    return z


def edge_hash(seed: int, u: int, v: int) -> int:
    """64-bit hash of an unordered pair; symmetric via canonical ordering."""
    a, b = (u, v) if u < v else (v, u)
    return mix64(mix64(seed ^ ((a * _C1) & _MASK)) ^ ((b * _C2) & _MASK))


def p_threshold(p: float) -> int:
    """Integer threshold so that P(hash >> 11 < threshold) = p up to 2^-53."""
    return int(p * (1 << _FRAC_BITS))


def trial_seed(master_seed: int, index: int) -> int:
    """Derive an independent per-trial seed from a master seed."""
    return mix64(master_seed ^ mix64(index + 1))


# ---------------------------------------------------------------------------
# numba versions (identical arithmetic on wrapping uint64)

_U = np.uint64
_NF1 = _U(_F1)
_NF2 = _U(_F2)
_NC1 = _U(_C1)
_NC2 = _U(_C2)
_S33 = _U(33)
_S11 = _U(11)


@njit(cache=True, inline="always")
def _mix64(z):
    z ^= z >> _S33
    z *= _NF1
    z ^= z >> _S33
    z *= _NF2
    z ^= z >> _S33
    return z


@njit(cache=True, inline="always")
def _row_key(seed, u):
    # partial hash shared by every pair with smaller endpoint u
    return _mix64(seed ^ (_U(u) * _NC1))


@njit(cache=True, inline="always")
def _pair_bits(row_key, v):
    return _mix64(row_key ^ (_U(v) * _NC2)) >> _S11


@njit(cache=True)
def _fill_dense_rows(n, seed, thresh, rows):
    """Materialize the packed symmetric adjacency (uint8 rows, little bit order)."""
    useed = _U(seed)
    uthresh = _U(thresh)
    for u in range(n):
        rk = _row_key(useed, u)
        for v in range(u + 1, n):
            if _pair_bits(rk, v) < uthresh:
                rows[u, v >> 3] |= np.uint8(1 << (v & 7))
                rows[v, u >> 3] |= np.uint8(1 << (u & 7))


@njit(cache=True)
def _signed_degree_diff(n, seed, thresh, red):
    """Per-vertex (red-degree minus blue-degree), streaming the edge oracle."""
    useed = _U(seed)
    uthresh = _U(thresh)
    s = np.zeros(n, np.int64)
    for u in range(n):
        rk = _row_key(useed, u)
        su = np.int64(1) if red[u] else np.int64(-1)
        for v in range(u + 1, n):
            if _pair_bits(rk, v) < uthresh:
                s[u] += np.int64(1) if red[v] else np.int64(-1)
                s[v] += su
    return s


@njit(cache=True)
def _one_step_red_count(n, r0, seed, thresh):
    """|R_1| for the canonical coloring (vertices 0..r0-1 red), O(n) memory."""
    useed = _U(seed)
    uthresh = _U(thresh)
    s = np.zeros(n, np.int64)
    for u in range(n):
        rk = _row_key(useed, u)
        su = np.int64(1) if u < r0 else np.int64(-1)
        for v in range(u + 1, n):
            if _pair_bits(rk, v) < uthresh:
                s[u] += np.int64(1) if v < r0 else np.int64(-1)
                s[v] += su
    count = 0
    for v in range(n):
        if s[v] > 0 or (s[v] == 0 and v < r0):
            count += 1
    return count


@njit(cache=True, parallel=True)
def _one_step_red_counts_batch(n, r0, thresh, seeds, out):
    for t in prange(len(seeds)):
        out[t] = _one_step_red_count(n, r0, seeds[t], thresh)


@njit(cache=True, parallel=True)
def _opposing_counts_batch(n, r_size, thresh, seeds, out):
    """Count of vertices with at least as many edges to V \\ R as to R."""
    for t in prange(len(seeds)):
        s = _signed_degree_diff(n, seeds[t], thresh, _canonical_red(n, r_size))
        c = 0
        for v in range(n):
            if s[v] <= 0:
                c += 1
        out[t] = c


@njit(cache=True, inline="always")
def _canonical_red(n, r0):
    red = np.zeros(n, np.bool_)
    for v in range(r0):
        red[v] = True
    return red


@njit(cache=True)
def _swing_count(x, m, seed, thresh):
    """|T_R u T_B| for the block layout X = [0,x), R = [x,x+m), B = [x+m,x+2m)."""
    n = x + 2 * m
    useed = _U(seed)
    uthresh = _U(thresh)
    d_r = np.zeros(n, np.int64)
    d_b = np.zeros(n, np.int64)
    d_x = np.zeros(n, np.int64)
    for u in range(n):
        rk = _row_key(useed, u)
        for v in range(u + 1, n):
            if u >= x or v >= x:  # X-X edges are irrelevant here
                if _pair_bits(rk, v) < uthresh:
                    if v < x:
                        d_x[u] += 1
                    elif v < x + m:
                        d_r[u] += 1
                    else:
                        d_b[u] += 1
                    if u < x:
                        d_x[v] += 1
                    elif u < x + m:
                        d_r[v] += 1
                    else:
                        d_b[v] += 1
    count = 0
    for v in range(x, x + m):  # T_R: 0 < d_B - d_R <= d_X
        diff = d_b[v] - d_r[v]
        if 0 < diff <= d_x[v]:
            count += 1
    for v in range(x + m, n):  # T_B: 0 <= d_B - d_R < d_X
        diff = d_b[v] - d_r[v]
        if 0 <= diff < d_x[v]:
            count += 1
    return count


@njit(cache=True, parallel=True)
def _swing_counts_batch(x, m, thresh, seeds, out):
    for t in prange(len(seeds)):
        out[t] = _swing_count(x, m, seeds[t], thresh)
