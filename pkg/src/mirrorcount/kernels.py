"""Enumeration kernels over a subfield F_Q, in Zech-log representation.

A *chart problem* is a set of terms sum_t C[t, r] * prod_j x_j^E[t, j]
over free coordinates x_1..x_f ranging over all of F_Q; a tuple is a zero
when every output component r vanishes.  Logs are int64 with -1 for zero.

Each kernel has a numba path and a numpy path; ``MIRRORCOUNT_DISABLE_JIT``
selects the latter (see :mod:`mirrorcount._jit`).
"""
import itertools
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._jit import USE_JIT, njit

# numpy path vectorises over trailing coordinates up to this block size
_BLOCK = 1 << 20


@njit
def zadd(a, b, zech, qm1):
    if a < 0:
        return b
    if b < 0:
        return a
    d = b - a
    if d < 0:
        d += qm1
    z = zech[d]
    if z < 0:
        return -1
    s = a + z
    if s >= qm1:
        s -= qm1
    return s


@njit
def _count_block(E, C, qm1, zech, lo, hi, collect, out):
    T = C.shape[0]
    R = C.shape[1]
    f = E.shape[1]
    Q = qm1 + 1
    n_inner = 1
    for _ in range(f - 1):
        n_inner *= Q
    t = np.empty(f, np.int64)
    acc = np.empty(R, np.int64)
    count = 0
    for v0 in range(lo, hi):
        t[0] = v0 - 1
        for r in range(n_inner):
            rr = r
            for j in range(f - 1, 0, -1):
                t[j] = rr % Q - 1
                rr //= Q
            for c in range(R):
                acc[c] = -1
            for term in range(T):
                lg = 0
                zero = False
                for j in range(f):
                    e = E[term, j]
                    if e != 0:
                        if t[j] < 0:
                            zero = True
                            break
                        lg += e * t[j]
                if zero:
                    continue
                lg %= qm1
                for c in range(R):
                    cl = C[term, c]
                    if cl < 0:
                        continue
                    x = lg + cl
                    if x >= qm1:
                        x -= qm1
                    acc[c] = zadd(acc[c], x, zech, qm1)
            ok = True
            for c in range(R):
                if acc[c] >= 0:
                    ok = False
                    break
            if ok:
                if collect:
                    for j in range(f):
                        out[count, j] = t[j]
                count += 1
    return count


def zadd_vec(a, b, zech, qm1):
    """Vectorised Zech addition of log arrays."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    out = np.where(a < 0, b, a)
    both = (a >= 0) & (b >= 0)
    if both.any():
        aa, bb = a[both], b[both]
        z = zech[(bb - aa) % qm1]
        out[both] = np.where(z < 0, -1, (aa + z) % qm1)
    return out


def _zero_mask_numpy(E, C, qm1, zech, lead, grid):
    """Mask over the trailing grid of tuples whose components all vanish.

    ``lead`` holds log values of the leading coordinates, ``grid`` is a
    (b, M) array of log values for the trailing b coordinates.
    """
    T, R = C.shape
    nl = len(lead)
    M = grid.shape[1]
    acc = np.full((R, M), -1, dtype=np.int64)
    for term in range(T):
        e = E[term]
        lead_log = 0
        dead = False
        for j in range(nl):
            if e[j]:
                if lead[j] < 0:
                    dead = True
                    break
                lead_log += int(e[j]) * int(lead[j])
        if dead:
            continue
        lg = np.full(M, lead_log, dtype=np.int64)
        alive = np.ones(M, dtype=bool)
        for j in range(grid.shape[0]):
            ej = int(e[nl + j])
            if ej:
                alive &= grid[j] >= 0
                lg += ej * grid[j]
        lg %= qm1
        for c in range(R):
            cl = int(C[term, c])
            if cl < 0:
                continue
            val = np.where(alive, (lg + cl) % qm1, -1)
            acc[c] = zadd_vec(acc[c], val, zech, qm1)
    return np.all(acc < 0, axis=0)


def _trailing_grid(Q, b):
    vals = np.arange(Q, dtype=np.int64) - 1
    if b == 0:
        return np.zeros((0, 1), dtype=np.int64)
    mesh = np.meshgrid(*([vals] * b), indexing="ij")
    return np.stack([m.ravel() for m in mesh])


def _numpy_chart(E, C, qm1, zech, lo, hi, collect):
    f = E.shape[1]
    Q = qm1 + 1
    if f == 1:
        grid = (np.arange(lo, hi, dtype=np.int64) - 1)[None, :]
        mask = _zero_mask_numpy(E, C, qm1, zech, (), grid)
        if collect:
            return int(mask.sum()), grid[:, mask].T.copy()
        return int(mask.sum())
    b = 0
    while b < f - 1 and Q ** (b + 1) <= _BLOCK:
        b += 1
    # coordinate 0 iterates over [lo, hi); coordinates 1..f-1-b iterate in Python
    grid = _trailing_grid(Q, b)
    vals = np.arange(Q, dtype=np.int64) - 1
    total = 0
    found = []
    for v0 in range(lo, hi):
        for mid in itertools.product(vals, repeat=f - 1 - b):
            lead = (v0 - 1,) + tuple(int(m) for m in mid)
            mask = _zero_mask_numpy(E, C, qm1, zech, lead, grid)
            n = int(mask.sum())
            total += n
            if collect and n:
                pts = np.empty((n, f), dtype=np.int64)
                pts[:, : len(lead)] = lead
                pts[:, len(lead):] = grid[:, mask].T
                found.append(pts)
    if collect:
        return total, (np.concatenate(found) if found else np.zeros((0, f), dtype=np.int64))
    return total


def _single_tuple(C, qm1, zech):
    """Evaluate the chart with no free coordinates."""
    for c in range(C.shape[1]):
        acc = -1
        for term in range(C.shape[0]):
            if C[term, c] >= 0:
                acc = zadd(acc, int(C[term, c]), zech, qm1)
        if acc >= 0:
            return False
    return True


def _splits(Q, workers):
    workers = max(1, int(workers))
    bounds = np.linspace(0, Q, min(workers, Q) + 1).astype(int)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(len(bounds) - 1)]


def count_chart(tab, E, C, workers=1):
    """Number of tuples in F_Q^f on which every component vanishes."""
    E = np.ascontiguousarray(E, dtype=np.int64)
    C = np.ascontiguousarray(C, dtype=np.int64)
    if C.ndim == 1:
        C = C[:, None]
    qm1, zech = tab.qm1, tab.zech
    if E.shape[1] == 0:
        return int(_single_tuple(C, qm1, zech))
    dummy = np.zeros((1, 1), dtype=np.int64)
    parts = _splits(tab.Q, workers)

    def run(bounds):
        lo, hi = bounds
        if USE_JIT:
            return int(_count_block(E, C, qm1, zech, lo, hi, False, dummy))
        return _numpy_chart(E, C, qm1, zech, lo, hi, False)

    if len(parts) == 1:
        return run(parts[0])
    with ThreadPoolExecutor(len(parts)) as ex:
        return sum(ex.map(run, parts))


def collect_chart(tab, E, C):
    """All zero tuples as an (N, f) array of logs, in enumeration order."""
    E = np.ascontiguousarray(E, dtype=np.int64)
    C = np.ascontiguousarray(C, dtype=np.int64)
    if C.ndim == 1:
        C = C[:, None]
    qm1, zech = tab.qm1, tab.zech
    f = E.shape[1]
    if f == 0:
        return np.zeros((int(_single_tuple(C, qm1, zech)), 0), dtype=np.int64)
    if USE_JIT:
        dummy = np.zeros((1, 1), dtype=np.int64)
        n = _count_block(E, C, qm1, zech, 0, tab.Q, False, dummy)
        out = np.empty((n, f), dtype=np.int64)
        _count_block(E, C, qm1, zech, 0, tab.Q, True, out)
        return out
    return _numpy_chart(E, C, qm1, zech, 0, tab.Q, True)[1]


# -- univariate polynomials over F_Q in log representation -----------------

@njit
def _pdeg(a, upto):
    for i in range(upto, -1, -1):
        if a[i] >= 0:
            return i
    return -1


@njit
def _prem(a, da, b, db, zech, qm1, negl):
    """a <- a mod b in place; returns the new degree of a."""
    lb = b[db]
    while da >= db:
        fl = a[da] - lb
        if fl < 0:
            fl += qm1
        shift = da - db
        for i in range(db):
            if b[i] >= 0:
                x = (fl + b[i] + negl) % qm1
                a[shift + i] = zadd(a[shift + i], x, zech, qm1)
        a[da] = -1
        da = _pdeg(a, da - 1)
    return da


@njit
def _pmulmod(x, dx, y, dy, m, dm, tmp, zech, qm1, negl):
    """tmp <- x*y mod m; returns degree of result (stored in tmp)."""
    for i in range(tmp.shape[0]):
        tmp[i] = -1
    if dx < 0 or dy < 0:
        return -1
    for i in range(dx + 1):
        if x[i] < 0:
            continue
        for j in range(dy + 1):
            if y[j] < 0:
                continue
            s = x[i] + y[j]
            if s >= qm1:
                s -= qm1
            tmp[i + j] = zadd(tmp[i + j], s, zech, qm1)
    return _prem(tmp, _pdeg(tmp, dx + dy), m, dm, zech, qm1, negl)


@njit
def _count_roots(m, dm, Q, zech, qm1, negl, w1, w2, w3, w4):
    """Number of distinct roots in F_Q of the polynomial m (degree dm >= 0)."""
    if dm <= 0:
        return 0
    if dm == 1:
        return 1
    size = w1.shape[0]
    # base = X mod m
    for i in range(size):
        w1[i] = -1
        w2[i] = -1
    w1[1] = 0
    db = 1
    w2[0] = 0
    dr = 0
    e = Q
    while e > 0:
        if e & 1:
            dr = _pmulmod(w2, dr, w1, db, m, dm, w3, zech, qm1, negl)
            for i in range(size):
                w2[i] = w3[i]
        e >>= 1
        if e > 0:
            db = _pmulmod(w1, db, w1, db, m, dm, w3, zech, qm1, negl)
            for i in range(size):
                w1[i] = w3[i]
    # h = X^Q - X (dm >= 2 so X is already reduced)
    w2[1] = zadd(w2[1], negl, zech, qm1)
    dh = _pdeg(w2, max(dr, 1))
    if dh < 0:
        return dm
    # gcd(m, h)
    for i in range(size):
        w4[i] = m[i] if i <= dm else -1
    da = dm
    a = w4
    b = w2
    dbb = dh
    while dbb >= 0:
        da = _prem(a, da, b, dbb, zech, qm1, negl)
        a, b = b, a
        da, dbb = dbb, da
    return da


@njit
def _roots_block(E, coef, pid, npoly, dmax, qm1, zech, negl, lo, hi, out):
    """Common roots in the last coordinate, per row of the leading coordinates.

    Rows are indexed lo..hi-1 in mixed radix over the first f-1 coordinates;
    out[row - lo] receives the number of common roots (Q when all polys vanish).
    """
    T = E.shape[0]
    f = E.shape[1]
    Q = qm1 + 1
    size = 2 * dmax + 2
    U = np.empty((npoly, size), np.int64)
    g = np.empty(size, np.int64)
    h = np.empty(size, np.int64)
    w1 = np.empty(size, np.int64)
    w2 = np.empty(size, np.int64)
    w3 = np.empty(size, np.int64)
    w4 = np.empty(size, np.int64)
    t = np.empty(max(f - 1, 1), np.int64)
    total = 0
    for row in range(lo, hi):
        rr = row
        for j in range(f - 2, -1, -1):
            t[j] = rr % Q - 1
            rr //= Q
        for i in range(npoly):
            for j in range(size):
                U[i, j] = -1
        for term in range(T):
            lg = coef[term]
            zero = False
            for j in range(f - 1):
                e = E[term, j]
                if e != 0:
                    if t[j] < 0:
                        zero = True
                        break
                    lg += e * t[j]
            if zero:
                continue
            lg %= qm1
            k = E[term, f - 1]
            U[pid[term], k] = zadd(U[pid[term], k], lg, zech, qm1)
        # gcd of all nonzero rows
        dg = -2
        for i in range(npoly):
            di = _pdeg(U[i], dmax)
            if di < 0:
                continue
            if dg == -2:
                for j in range(size):
                    g[j] = U[i, j]
                dg = di
                continue
            if dg == 0:
                break
            for j in range(size):
                h[j] = U[i, j]
            a = g
            b = h
            da = dg
            dbb = di
            while dbb >= 0:
                da = _prem(a, da, b, dbb, zech, qm1, negl)
                a, b = b, a
                da, dbb = dbb, da
            for j in range(size):
                g[j] = a[j]
            dg = da
        if dg == -2:
            n = Q
        else:
            n = _count_roots(g, dg, Q, zech, qm1, negl, w1, w2, w3, w4)
        out[row - lo] = n
        total += n
    return total


def roots_rows(tab, E, coef, pid, npoly, workers=1):
    """Per-row common-root counts in the last free coordinate.

    ``E`` is (T, f) with f >= 1; the last column is the univariate variable.
    Returns an int64 array of length Q^(f-1).
    """
    E = np.ascontiguousarray(E, dtype=np.int64)
    coef = np.ascontiguousarray(coef, dtype=np.int64)
    pid = np.ascontiguousarray(pid, dtype=np.int64)
    f = E.shape[1]
    n_rows = tab.Q ** (f - 1)
    dmax = int(E[:, -1].max()) if E.shape[0] else 0
    dmax = max(dmax, 1)
    out = np.zeros(n_rows, dtype=np.int64)
    parts = _splits(n_rows, workers)

    def run(bounds):
        lo, hi = bounds
        view = out[lo:hi]
        _roots_block(E, coef, pid, npoly, dmax, tab.qm1, tab.zech, tab.neg_one_log, lo, hi, view)

    if len(parts) == 1:
        run(parts[0])
    else:
        with ThreadPoolExecutor(len(parts)) as ex:
            list(ex.map(run, parts))
    return out


# -- additive convolution of value distributions ---------------------------

@njit
def _convolve_hist(c, h, qm1, zech):
    """out[log(x+y)] += c[log x] * h[log y]; arrays indexed by log + 1."""
    Q = qm1 + 1
    out = np.zeros(Q, np.int64)
    for i in range(Q):
        ci = c[i]
        if ci == 0:
            continue
        for j in range(Q):
            hj = h[j]
            if hj == 0:
                continue
            s = zadd(i - 1, j - 1, zech, qm1)
            out[s + 1] += ci * hj
    return out


def _convolve_hist_numpy(c, h, qm1, zech):
    Q = qm1 + 1
    out = np.zeros(Q, dtype=np.int64)
    logs = np.arange(Q, dtype=np.int64) - 1
    for j in np.nonzero(h)[0]:
        s = zadd_vec(logs, j - 1, zech, qm1)
        np.add.at(out, s + 1, c * h[j])
    return out


def convolve_hist(c, h, tab):
    c = np.ascontiguousarray(c, dtype=np.int64)
    h = np.ascontiguousarray(h, dtype=np.int64)
    if USE_JIT:
        return _convolve_hist(c, h, tab.qm1, tab.zech)
    return _convolve_hist_numpy(c, h, tab.qm1, tab.zech)
