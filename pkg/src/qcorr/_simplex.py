"""Compiled Nelder-Mead kernels for the oracle's distance objectives.

Objectives are squared Hilbert-Schmidt distances from a target coefficient
table to a parameterized state family:

    PRODUCT    6 params: two Bloch vectors (folded into the unit ball)
    ONE_SIDED  9 params: measurement direction (2 angles), weight angle,
                         two conditional Bloch vectors of the second qubit
    TWO_SIDED  7 params: two measurement directions (4 angles), 3 weight angles

Outcome weights are squared components of a unit vector given in
hyperspherical angles, which leaves no scale redundancy in the search space.
"""

import math

import numpy as np
from numba import njit

PRODUCT = 0
ONE_SIDED = 1
TWO_SIDED = 2

DIMENSIONS = {PRODUCT: 6, ONE_SIDED: 9, TWO_SIDED: 7}


@njit(cache=True)
def _ball(x, start, out):
    # x -> x sin(pi|x|/2)/|x|: onto the closed unit ball, smooth, no flat region
    norm = math.sqrt(x[start] ** 2 + x[start + 1] ** 2 + x[start + 2] ** 2)
    scale = math.sin(0.5 * math.pi * norm) / norm if norm > 1e-12 else 0.5 * math.pi
    for i in range(3):
        out[i] = scale * x[start + i]


@njit(cache=True)
def _sphere(theta, phi, out):
    st = math.sin(theta)
    out[0] = st * math.cos(phi)
    out[1] = st * math.sin(phi)
    out[2] = math.cos(theta)


@njit(cache=True)
def fill_table(family, x, r):
    """Write the coefficient table of the state encoded by ``x`` into ``r``."""
    r[:, :] = 0.0
    r[0, 0] = 1.0
    u = np.empty(3)
    v = np.empty(3)
    if family == PRODUCT:
        _ball(x, 0, u)
        _ball(x, 3, v)
        for i in range(3):
            r[i + 1, 0] = u[i]
            r[0, i + 1] = v[i]
            for j in range(3):
                r[i + 1, j + 1] = u[i] * v[j]
    elif family == ONE_SIDED:
        _sphere(x[0], x[1], u)
        pp = math.cos(x[2]) ** 2
        pm = math.sin(x[2]) ** 2
        bp = np.empty(3)
        bm = np.empty(3)
        _ball(x, 3, bp)
        _ball(x, 6, bm)
        for i in range(3):
            r[i + 1, 0] = (pp - pm) * u[i]
            r[0, i + 1] = pp * bp[i] + pm * bm[i]
            for j in range(3):
                r[i + 1, j + 1] = u[i] * (pp * bp[j] - pm * bm[j])
    else:
        _sphere(x[0], x[1], u)
        _sphere(x[2], x[3], v)
        s1, s2 = math.sin(x[4]), math.sin(x[5])
        p00 = math.cos(x[4]) ** 2
        p01 = (s1 * math.cos(x[5])) ** 2
        p10 = (s1 * s2 * math.cos(x[6])) ** 2
        p11 = (s1 * s2 * math.sin(x[6])) ** 2
        mu = p00 + p01 - p10 - p11
        mv = p00 - p01 + p10 - p11
        corr = p00 - p01 - p10 + p11
        for i in range(3):
            r[i + 1, 0] = mu * u[i]
            r[0, i + 1] = mv * v[i]
            for j in range(3):
                r[i + 1, j + 1] = corr * u[i] * v[j]


@njit(cache=True)
def distance_sq(family, target, x, work):
    fill_table(family, x, work)
    acc = 0.0
    for a in range(4):
        for b in range(4):
            d = target[a, b] - work[a, b]
            acc += d * d
    return 0.25 * acc


@njit(cache=True)
def nelder_mead(family, target, x0, fatol, xatol, maxiter):
    """Adaptive-coefficient Nelder-Mead; returns (x, f, iterations, converged)."""
    d = x0.shape[0]
    alpha, gamma = 1.0, 1.0 + 2.0 / d
    rho, sigma = 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d
    work = np.empty((4, 4))

    sim = np.empty((d + 1, d))
    fs = np.empty(d + 1)
    sim[0] = x0
    for i in range(d):
        y = x0.copy()
        y[i] = y[i] * 1.05 if y[i] != 0.0 else 0.00025
        sim[i + 1] = y
    for i in range(d + 1):
        fs[i] = distance_sq(family, target, sim[i], work)

    it = 0
    converged = False
    while it < maxiter:
        order = np.argsort(fs)
        sim = sim[order]
        fs = fs[order]

        fspread = 0.0
        xspread = 0.0
        for i in range(1, d + 1):
            fspread = max(fspread, abs(fs[i] - fs[0]))
            for j in range(d):
                xspread = max(xspread, abs(sim[i, j] - sim[0, j]))
        if fspread <= fatol and xspread <= xatol:
            converged = True
            break
        it += 1

        centroid = np.zeros(d)
        for i in range(d):
            centroid += sim[i]
        centroid /= d
        worst = sim[d]

        xr = centroid + alpha * (centroid - worst)
        fr = distance_sq(family, target, xr, work)
        if fr < fs[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = distance_sq(family, target, xe, work)
            if fe < fr:
                sim[d], fs[d] = xe, fe
            else:
                sim[d], fs[d] = xr, fr
            continue
        if fr < fs[d - 1]:
            sim[d], fs[d] = xr, fr
            continue
        if fr < fs[d]:
            xc = centroid + rho * (xr - centroid)
            fc = distance_sq(family, target, xc, work)
            if fc <= fr:
                sim[d], fs[d] = xc, fc
                continue
        else:
            xc = centroid + rho * (worst - centroid)
            fc = distance_sq(family, target, xc, work)
            if fc < fs[d]:
                sim[d], fs[d] = xc, fc
                continue
        for i in range(1, d + 1):
            sim[i] = sim[0] + sigma * (sim[i] - sim[0])
            fs[i] = distance_sq(family, target, sim[i], work)

    best = np.argmin(fs)
    return sim[best].copy(), fs[best], it, converged
