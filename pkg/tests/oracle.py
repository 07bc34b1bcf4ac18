"""Independent brute-force reference computations in floating point.

Plain loops over basis indices straight from the defining formulas; nothing here
imports the package, so agreement with it is a genuine cross-check.
"""
from __future__ import annotations

import itertools
from math import factorial

import numpy as np


def structure(brackets, dim, one_based=True):
    c = np.zeros((dim, dim, dim))
    off = 1 if one_based else 0
    for i, j, k, v in brackets:
        v = float(eval(str(v)))  # rational strings only
        c[i - off, j - off, k - off] += v
        c[j - off, i - off, k - off] -= v
    return c


def bracket(c, x, y):
    return np.einsum("i,j,ijk->k", x, y, c)


def d_form(c, alpha):
    """d of a dense alternating k-array: sum_{i<j} (-1)^{i+j} alpha([X_i, X_j], ...)."""
    n = c.shape[0]
    k = alpha.ndim
    out = np.zeros((n,) * (k + 1))
    E = np.eye(n)
    for idx in itertools.product(range(n), repeat=k + 1):
        s = 0.0
        for i, j in itertools.combinations(range(k + 1), 2):
            br = bracket(c, E[idx[i]], E[idx[j]])
            rest = [idx[m] for m in range(k + 1) if m not in (i, j)]
            val = np.einsum("a,a...->...", br, alpha)
            for r in rest:
                val = val[r]
            s += (-1) ** (i + j) * val
        out[idx] = s
    return out


def omega(g, J):
    """omega(X, Y) = g(JX, Y)."""
    return np.asarray(J, dtype=float).T @ np.asarray(g, dtype=float)


def torsion_H(c, g, J):
    """H(X, Y, Z) = d omega(JX, JY, JZ)."""
    dw = d_form(c, omega(g, J))
    return np.einsum("abc,ax,by,cz->xyz", dw, J, J, J)


def lee_trace(H, J, g):
    """theta(X) = 1/2 sum_i H(e_i, J e_i, J X) over an orthonormal frame of g."""
    n = len(g)
    frame = np.linalg.cholesky(np.linalg.inv(g))  # columns orthonormal for g
    th = np.zeros(n)
    for x in range(n):
        JX = J[:, x]
        for i in range(n):
            e = frame[:, i]
            th[x] += 0.5 * np.einsum("abc,a,b,c->", H, e, J @ e, JX)
    return th


def levi_civita(c, g):
    """gamma[x, k, y] = e_k component of nabla_{e_x} e_y from the Koszul formula."""
    n = len(g)
    low = np.zeros((n, n, n))
    gc = np.einsum("xyk,kz->xyz", c, g)      # g([x,y], z)
    for x, y, z in itertools.product(range(n), repeat=3):
        low[x, y, z] = 0.5 * (gc[x, y, z] - gc[y, z, x] + gc[z, x, y])
    ginv = np.linalg.inv(g)
    return np.einsum("xyz,zk->xky", low, ginv)


def bismut(c, g, H):
    n = len(g)
    lc = levi_civita(c, g)
    ginv = np.linalg.inv(g)
    return lc + 0.5 * np.einsum("xyz,zk->xky", H, ginv)


def curvature4(c, g, gamma):
    """R[x,y,z,w] = g(R(e_x,e_y)e_z, e_w) with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]."""
    n = len(g)
    R = np.zeros((n, n, n, n))
    for x, y in itertools.product(range(n), repeat=2):
        op = gamma[x] @ gamma[y] - gamma[y] @ gamma[x] - np.einsum("k,kij->ij", c[x, y], gamma)
        R[x, y] = (g @ op).T
    return R


def norm_sq(a):
    """Full unrestricted index sum of squares (orthonormal frame)."""
    return float(np.sum(a * a))


def wedge_dense(a, b):
    """Dense alternating arrays; (a ^ b) = Alt(a (x) b) * (p+q)!/(p! q!)."""
    p, q = a.ndim, b.ndim
    n = a.shape[0] if p else b.shape[0]
    t = np.multiply.outer(a, b)
    out = np.zeros((n,) * (p + q))
    for perm in itertools.permutations(range(p + q)):
        sign = np.linalg.det(np.eye(p + q)[list(perm)])
        out += sign * np.transpose(t, perm)
    return out / (factorial(p) * factorial(q))
