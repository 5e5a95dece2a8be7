# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the numerical kernels.

Mirrors fallback.py function for function; see that module for the angle
vector layout and sign conventions. Problem sizes are fixed and small
(16 mixture terms, 4x4 densities, eigenproblems up to 16x16), so every
work buffer lives on the stack and the eigensolver is a cyclic Jacobi
iteration rather than a LAPACK call.
"""

import numpy as np

from libc.math cimport cos, log, log1p, sin, sqrt

BACKEND = "compiled"

N_ANGLES = 79
N_TERMS = 16


cdef inline double complex _cpack(double re, double im) noexcept:
    return re + im * 1j


cdef int _jacobi(const double complex[:, ::1] a, double[::1] vals,
                 double complex[:, ::1] vecs) except -1:
    """Cyclic complex Jacobi eigensolver, eigenvalues descending.

    Each rotation first strips the phase of the pivot so the remaining
    2x2 problem is real symmetric, then applies the classical tangent
    rule. Quadratic convergence makes the sweep cap generous.
    """
    cdef double complex h[16][16]
    cdef double complex v[16][16]
    cdef double complex hkp, hkq, vkp, vkq, w, cw
    cdef double app, aqq, ab, tau, t, c, s, norm, off, tol, dbest
    cdef int n = a.shape[0]
    cdef int p, q, k, i, j, sweep, best, converged
    if n > 16:
        raise ValueError("compiled eigensolver handles dimension <= 16")
    norm = 0.0
    for i in range(n):
        for j in range(n):
            h[i][j] = a[i, j]
            norm += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
            v[i][j] = 1.0 if i == j else 0.0
    # scale-relative stopping rule on the off-diagonal Frobenius mass
    tol = 1e-14 * max(1.0, sqrt(norm))
    converged = 0
    for sweep in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += h[p][q].real * h[p][q].real + h[p][q].imag * h[p][q].imag
        if sqrt(off) <= tol:
            converged = 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                ab = abs(h[p][q])
                if ab <= 1e-300:
                    continue
                w = h[p][q] / ab
                cw = w.conjugate()
                app = h[p][p].real
                aqq = h[q][q].real
                tau = (aqq - app) / (2.0 * ab)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # columns by J, rows by J^H, eigenvectors by J; J is the
                # identity outside the (p, q) block where it reads
                # [[c, s], [-s*conj(w), c*conj(w)]]
                for k in range(n):
                    hkp = h[k][p]
                    hkq = h[k][q]
                    h[k][p] = c * hkp - s * cw * hkq
                    h[k][q] = s * hkp + c * cw * hkq
                for k in range(n):
                    hkp = h[p][k]
                    hkq = h[q][k]
                    h[p][k] = c * hkp - s * w * hkq
                    h[q][k] = s * hkp + c * w * hkq
                h[p][q] = 0.0
                h[q][p] = 0.0
                h[p][p] = h[p][p].real
                h[q][q] = h[q][q].real
                for k in range(n):
                    vkp = v[k][p]
                    vkq = v[k][q]
                    v[k][p] = c * vkp - s * cw * vkq
                    v[k][q] = s * vkp + c * cw * vkq
    if not converged:
        raise RuntimeError("Jacobi sweep limit reached without convergence")
    for i in range(n):
        best = i
        dbest = h[i][i].real
        for j in range(i + 1, n):
            if h[j][j].real > dbest:
                best = j
                dbest = h[j][j].real
        if best != i:
            hkp = h[i][i]
            h[i][i] = h[best][best]
            h[best][best] = hkp
            for k in range(n):
                vkp = v[k][i]
                v[k][i] = v[k][best]
                v[k][best] = vkp
    for i in range(n):
        vals[i] = h[i][i].real
        for k in range(n):
            vecs[k, i] = v[k][i]
    return 0


def eigh(matrix):
    """Hermitian eigendecomposition with eigenvalues sorted descending."""
    m = np.ascontiguousarray(matrix, dtype=complex)
    n = m.shape[0]
    vals = np.empty(n)
    vecs = np.empty((n, n), dtype=complex)
    _jacobi(m, vals, vecs)
    return vals, vecs


cdef void _weights(const double[::1] x, double* w) noexcept:
    cdef double c[15]
    cdef double s[15]
    cdef double suf[16]
    cdef double p
    cdef int i, j
    for j in range(15):
        c[j] = cos(x[j])
        s[j] = sin(x[j])
    suf[15] = 1.0
    for j in range(14, -1, -1):
        suf[j] = c[j] * suf[j + 1]
    w[0] = suf[0] * suf[0]  # sin(phi_0) = 1
    for i in range(1, 16):
        p = s[i - 1] * suf[i]
        w[i] = p * p


cdef void _weight_grad(const double[::1] x, double dw[16][15]) noexcept:
    cdef double c[15]
    cdef double s[15]
    cdef double cc[15]
    cdef double csuf[16]
    cdef double se2[16]
    cdef double inner
    cdef int i, m, k
    for k in range(15):
        c[k] = cos(x[k])
        s[k] = sin(x[k])
        cc[k] = c[k] * c[k]
    csuf[15] = 1.0
    for k in range(14, -1, -1):
        csuf[k] = cc[k] * csuf[k + 1]
    se2[0] = 1.0
    for i in range(1, 16):
        se2[i] = s[i - 1] * s[i - 1]
    for i in range(16):
        for m in range(15):
            dw[i][m] = 0.0
    for i in range(16):
        if i >= 1:
            dw[i][i - 1] = 2.0 * s[i - 1] * c[i - 1] * csuf[i]
        # cos^2 factors kept as running products: no division, so zero
        # cosines stay harmless
        inner = se2[i]
        for m in range(i, 15):
            dw[i][m] = -2.0 * c[m] * s[m] * inner * csuf[m + 1]
            inner *= cc[m]


cdef void _local_vectors(const double[::1] x, double complex av[16][2],
                         double complex bv[16][2]) noexcept:
    cdef int i
    cdef double ca, sa, cb, sb
    for i in range(16):
        ca = cos(x[15 + i])
        sa = sin(x[15 + i])
        av[i][0] = ca
        av[i][1] = sa * _cpack(cos(x[31 + i]), sin(x[31 + i]))
        cb = cos(x[47 + i])
        sb = sin(x[47 + i])
        bv[i][0] = cb
        bv[i][1] = sb * _cpack(cos(x[63 + i]), sin(x[63 + i]))


cdef void _kron_terms(double complex av[16][2], double complex bv[16][2],
                      double complex v[16][4]) noexcept:
    cdef int i
    for i in range(16):
        v[i][0] = av[i][0] * bv[i][0]
        v[i][1] = av[i][0] * bv[i][1]
        v[i][2] = av[i][1] * bv[i][0]
        v[i][3] = av[i][1] * bv[i][1]


cdef void _density(double* w, double complex v[16][4],
                   double complex rho[4][4]) noexcept:
    cdef int i, a, b
    for a in range(4):
        for b in range(4):
            rho[a][b] = 0.0
    for i in range(16):
        for a in range(4):
            for b in range(4):
                rho[a][b] += w[i] * v[i][a] * v[i][b].conjugate()


def product_terms(x):
    """Mixture weights (16,) and product vectors (16, 4) for an angle vector."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef double w[16]
    cdef double complex av[16][2]
    cdef double complex bv[16][2]
    cdef double complex v[16][4]
    cdef int i, a
    _weights(xv, w)
    _local_vectors(xv, av, bv)
    _kron_terms(av, bv, v)
    wout = np.empty(16)
    vout = np.empty((16, 4), dtype=complex)
    cdef double[::1] wm = wout
    cdef double complex[:, ::1] vm = vout
    for i in range(16):
        wm[i] = w[i]
        for a in range(4):
            vm[i, a] = v[i][a]
    return wout, vout


def separable_density(x):
    """The realized 4x4 separable density matrix."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef double w[16]
    cdef double complex av[16][2]
    cdef double complex bv[16][2]
    cdef double complex v[16][4]
    cdef double complex rho[4][4]
    cdef int a, b
    _weights(xv, w)
    _local_vectors(xv, av, bv)
    _kron_terms(av, bv, v)
    _density(w, v, rho)
    out = np.empty((4, 4), dtype=complex)
    cdef double complex[:, ::1] om = out
    for a in range(4):
        for b in range(4):
            om[a, b] = rho[a][b]
    return out


cdef int _density_eig(double complex rho[4][4], double[::1] r,
                      double complex[:, ::1] vecs) except -1:
    buf = np.empty((4, 4), dtype=complex)
    cdef double complex[:, ::1] bm = buf
    cdef int a, b
    for a in range(4):
        for b in range(4):
            bm[a, b] = rho[a][b]
    return _jacobi(bm, r, vecs)


def ree_cross(x, sigma, double clamp):
    """-tr(sigma ln rho(x)) with rho eigenvalues clamped below at `clamp`."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef const double complex[:, ::1] sm = np.ascontiguousarray(sigma, dtype=complex)
    cdef double w[16]
    cdef double complex av[16][2]
    cdef double complex bv[16][2]
    cdef double complex v[16][4]
    cdef double complex rho[4][4]
    cdef double complex acc
    cdef double cross, rc
    cdef int i, a, b
    _weights(xv, w)
    _local_vectors(xv, av, bv)
    _kron_terms(av, bv, v)
    _density(w, v, rho)
    rv = np.empty(4)
    uv = np.empty((4, 4), dtype=complex)
    cdef double[::1] rm = rv
    cdef double complex[:, ::1] um = uv
    _density_eig(rho, rm, um)
    cross = 0.0
    for i in range(4):
        acc = 0.0
        for a in range(4):
            for b in range(4):
                acc += um[a, i].conjugate() * sm[a, b] * um[b, i]
        rc = rm[i] if rm[i] > clamp else clamp
        cross -= acc.real * log(rc)
    return cross


def ree_cross_and_grad(x, sigma, double clamp):
    """Clamped cross term -tr(sigma ln rho(x)) and its 79-component gradient.

    Same decomposition as the fallback: the log Frechet witness
    K = V (G o V^H sigma V) V^H contracts against drho/dt for each
    parameter, with G the divided-difference matrix of ln at the clamped
    eigenvalues.
    """
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef const double complex[:, ::1] sm = np.ascontiguousarray(sigma, dtype=complex)
    cdef double w[16]
    cdef double dw[16][15]
    cdef double complex av[16][2]
    cdef double complex bv[16][2]
    cdef double complex dav[16][2]
    cdef double complex dev[16][2]
    cdef double complex dbv[16][2]
    cdef double complex dmv[16][2]
    cdef double complex v[16][4]
    cdef double complex dva[4]
    cdef double complex dve[4]
    cdef double complex dvb[4]
    cdef double complex dvm[4]
    cdef double complex kv[4]
    cdef double complex rho[4][4]
    cdef double complex st[4][4]
    cdef double complex kb[4][4]
    cdef double complex km[4][4]
    cdef double complex acc, ea, eb
    cdef double rc[4]
    cdef double g
    cdef double cross, p, q, d, quad, ca, sa, cb, sb
    cdef int i, m, a, b, jj
    _weights(xv, w)
    _weight_grad(xv, dw)
    for i in range(16):
        ca = cos(xv[15 + i])
        sa = sin(xv[15 + i])
        ea = _cpack(cos(xv[31 + i]), sin(xv[31 + i]))
        av[i][0] = ca
        av[i][1] = sa * ea
        dav[i][0] = -sa
        dav[i][1] = ca * ea
        dev[i][0] = 0.0
        dev[i][1] = _cpack(0.0, sa) * ea
        cb = cos(xv[47 + i])
        sb = sin(xv[47 + i])
        eb = _cpack(cos(xv[63 + i]), sin(xv[63 + i]))
        bv[i][0] = cb
        bv[i][1] = sb * eb
        dbv[i][0] = -sb
        dbv[i][1] = cb * eb
        dmv[i][0] = 0.0
        dmv[i][1] = _cpack(0.0, sb) * eb
    _kron_terms(av, bv, v)
    _density(w, v, rho)
    rv = np.empty(4)
    uv = np.empty((4, 4), dtype=complex)
    cdef double[::1] rm = rv
    cdef double complex[:, ::1] um = uv
    _density_eig(rho, rm, um)
    for i in range(4):
        rc[i] = rm[i] if rm[i] > clamp else clamp
    # st = V^H sigma V
    for i in range(4):
        for jj in range(4):
            acc = 0.0
            for a in range(4):
                for b in range(4):
                    acc += um[a, i].conjugate() * sm[a, b] * um[b, jj]
            st[i][jj] = acc
    cross = 0.0
    for i in range(4):
        cross -= st[i][i].real * log(rc[i])
    # kb = G o st elementwise, then K = V kb V^H
    for i in range(4):
        for jj in range(4):
            p = rc[i]
            q = rc[jj]
            d = p - q
            if d < 0.0:
                d = -d
            if d <= 1e-14 * (p + q):
                g = 2.0 / (p + q)
            else:
                g = log1p((p - q) / q) / (p - q)
            kb[i][jj] = g * st[i][jj]
    for a in range(4):
        for b in range(4):
            acc = 0.0
            for i in range(4):
                for jj in range(4):
                    acc += um[a, i] * kb[i][jj] * um[b, jj].conjugate()
            km[a][b] = acc
    grad = np.zeros(79)
    cdef double[::1] gm = grad
    for i in range(16):
        # K v_i once per term, then the four local-angle contractions
        for a in range(4):
            acc = 0.0
            for b in range(4):
                acc += km[a][b] * v[i][b]
            kv[a] = acc
        quad = 0.0
        for a in range(4):
            quad += (v[i][a].conjugate() * kv[a]).real
        for m in range(15):
            gm[m] -= dw[i][m] * quad
        dva[0] = dav[i][0] * bv[i][0]
        dva[1] = dav[i][0] * bv[i][1]
        dva[2] = dav[i][1] * bv[i][0]
        dva[3] = dav[i][1] * bv[i][1]
        dve[0] = dev[i][0] * bv[i][0]
        dve[1] = dev[i][0] * bv[i][1]
        dve[2] = dev[i][1] * bv[i][0]
        dve[3] = dev[i][1] * bv[i][1]
        dvb[0] = av[i][0] * dbv[i][0]
        dvb[1] = av[i][0] * dbv[i][1]
        dvb[2] = av[i][1] * dbv[i][0]
        dvb[3] = av[i][1] * dbv[i][1]
        dvm[0] = av[i][0] * dmv[i][0]
        dvm[1] = av[i][0] * dmv[i][1]
        dvm[2] = av[i][1] * dmv[i][0]
        dvm[3] = av[i][1] * dmv[i][1]
        for a in range(4):
            gm[15 + i] -= 2.0 * w[i] * (dva[a].conjugate() * kv[a]).real
            gm[31 + i] -= 2.0 * w[i] * (dve[a].conjugate() * kv[a]).real
            gm[47 + i] -= 2.0 * w[i] * (dvb[a].conjugate() * kv[a]).real
            gm[63 + i] -= 2.0 * w[i] * (dvm[a].conjugate() * kv[a]).real
    return cross, grad


def bures_value(x, sqrt_sigma):
    """2 - 2 tr sqrt(sqrt_sigma rho(x) sqrt_sigma), the Bures distance."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef const double complex[:, ::1] qm = np.ascontiguousarray(sqrt_sigma, dtype=complex)
    cdef double w[16]
    cdef double complex av[16][2]
    cdef double complex bv[16][2]
    cdef double complex v[16][4]
    cdef double complex rho[4][4]
    cdef double complex mid[4][4]
    cdef double complex mm[4][4]
    cdef double complex acc
    cdef double total
    cdef int a, b, k
    _weights(xv, w)
    _local_vectors(xv, av, bv)
    _kron_terms(av, bv, v)
    _density(w, v, rho)
    for a in range(4):
        for b in range(4):
            acc = 0.0
            for k in range(4):
                acc += qm[a, k] * rho[k][b]
            mid[a][b] = acc
    for a in range(4):
        for b in range(4):
            acc = 0.0
            for k in range(4):
                acc += mid[a][k] * qm[k, b]
            mm[a][b] = acc
    rv = np.empty(4)
    uv = np.empty((4, 4), dtype=complex)
    cdef double[::1] rm = rv
    cdef double complex[:, ::1] um = uv
    _density_eig(mm, rm, um)
    total = 0.0
    for a in range(4):
        if rm[a] > 0.0:
            total += sqrt(rm[a])
    return 2.0 - 2.0 * total
