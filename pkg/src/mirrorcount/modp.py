"""Dense linear algebra and polynomial helpers over the prime field F_p.

Matrices and polynomials are int64 numpy arrays with entries in [0, p).
Polynomials are stored constant term first.
"""
import numpy as np


def rref(M, p):
    """Reduced row echelon form of ``M`` over F_p; returns (R, pivot_columns)."""
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        others = np.nonzero(R[:, c])[0]
        for o in others:
            if o != r:
                R[o] = (R[o] - R[o, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, p):
    return len(rref(M, p)[1])


def left_kernel(A, p):
    """Basis (as rows, in RREF) of {v : v @ A == 0 mod p}."""
    A = np.asarray(A, dtype=np.int64)
    R, pivots = rref(A.T, p)
    n = A.shape[0]
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-R[r, f]) % p
    if basis.shape[0]:
        basis = rref(basis, p)[0]
    return basis


def inverse(A, p):
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return R[:, n:].copy()


def matmul(A, B, p):
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def matpow(A, e, p):
    n = A.shape[0]
    result = np.eye(n, dtype=np.int64)
    base = np.array(A, dtype=np.int64) % p
    while e:
        if e & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return result


# -- univariate polynomials over F_p ---------------------------------------

def ptrim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.nonzero(a)[0]
    return a[: nz[-1] + 1] if nz.size else a[:0]


def pmod(a, f, p):
    """Remainder of ``a`` modulo monic-or-not ``f`` (both trimmed)."""
    a = ptrim(np.array(a, dtype=np.int64) % p).copy()
    f = ptrim(f)
    df = len(f) - 1
    if df < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(int(f[-1]), -1, p)
    while len(a) - 1 >= df:
        shift = len(a) - 1 - df
        factor = (a[-1] * inv_lead) % p
        a[shift:] = (a[shift:] - factor * f) % p
        a = ptrim(a)
    return a


def pmulmod(a, b, f, p):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    return pmod(np.convolve(a, b) % p, f, p)


def ppowmod(base, e, f, p):
    result = np.array([1], dtype=np.int64)
    base = pmod(base, f, p)
    while e:
        if e & 1:
            result = pmulmod(result, base, f, p)
        base = pmulmod(base, base, f, p)
        e >>= 1
    return result


def pgcd(a, b, p):
    a, b = ptrim(np.asarray(a) % p), ptrim(np.asarray(b) % p)
    while len(b):
        a, b = b, pmod(a, b, p)
    if len(a):
        a = (a * pow(int(a[-1]), -1, p)) % p
    return a


def peval(a, x, p):
    acc = 0
    for c in reversed([int(v) for v in a]):
        acc = (acc * x + c) % p
    return acc
