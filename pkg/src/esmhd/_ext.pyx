# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pencil kernels: reconstruction, interface flux, source and the
per-cell semi-discrete update. Same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, atanh, fabs, isfinite
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double RSQ2 = 0.7071067811865476
cdef double SERIES_SWITCH = 1.0e-4
cdef double DIRECT_SWITCH = 0.25
cdef double PERP_TOL = 1.0e-28
cdef double SOURCE_TOL = 1.0e-12

# error codes
cdef int OK = 0, BAD_RHO = 1, BAD_P = 2, BAD_FINITE = 3, BAD_FACE_RHO = 4, BAD_FACE_P = 5


cdef inline double log_mean(double a, double b) noexcept nogil:
    cdef double f = (a - b) / (a + b)
    cdef double u = f * f
    cdef double F
    if u < SERIES_SWITCH:
        F = 1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0
    elif u >= DIRECT_SWITCH:
        return (a - b) / (log(a) - log(b))
    else:
        F = atanh(f) / f
    return 0.5 * (a + b) / F


cdef inline double dmax(double a, double b) noexcept nogil:
    return a if a > b else b


cdef inline double dmin(double a, double b) noexcept nogil:
    return a if a < b else b


cdef inline void speeds(double a2, double b1s, double bs,
                        double* ca, double* cs, double* cf) noexcept nogil:
    cdef double ab1 = sqrt(a2 * b1s)
    cdef double sp = sqrt(dmax(a2 + bs + 2.0 * ab1, 0.0))
    cdef double sm = sqrt(dmax(a2 + bs - 2.0 * ab1, 0.0))
    ca[0] = sqrt(b1s)
    cf[0] = dmax(0.5 * (sp + sm), ca[0])
    cs[0] = dmin(dmax(0.5 * (sp - sm), 0.0), ca[0])


cdef int cons_to_prim(const double* q, double* w, double gamma) noexcept nogil:
    cdef int k
    for k in range(8):
        if not isfinite(q[k]):
            return BAD_FINITE
    if not (q[0] > 0.0):
        return BAD_RHO
    cdef double rho = q[0]
    w[0] = rho
    w[1] = q[1] / rho
    w[2] = q[2] / rho
    w[3] = q[3] / rho
    w[5] = q[5]
    w[6] = q[6]
    w[7] = q[7]
    w[4] = (gamma - 1.0) * (q[4] - 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / rho
                            - 0.5 * (q[5] * q[5] + q[6] * q[6] + q[7] * q[7]))
    if not (w[4] > 0.0):
        return BAD_P
    return OK


cdef inline double minmod(double a, double b) noexcept nogil:
    if a * b <= 0.0:
        return 0.0
    return a if fabs(a) < fabs(b) else b


cdef void interface_flux(const double* wl, const double* wr, double gamma, int kind,
                         int src, double dx, double* f, double* s) noexcept nogil:
    """Numerical flux ``f`` and interface source ``s`` for primitive face states."""
    cdef double rL = wl[0], uL = wl[1], vL = wl[2], wL = wl[3], pL = wl[4]
    cdef double B1L = wl[5], B2L = wl[6], B3L = wl[7]
    cdef double rR = wr[0], uR = wr[1], vR = wr[2], wR = wr[3], pR = wr[4]
    cdef double B1R = wr[5], B2R = wr[6], B3R = wr[7]
    cdef double gm1 = gamma - 1.0
    cdef double bL = 0.5 * rL / pL, bR = 0.5 * rR / pR

    cdef double rho_avg = 0.5 * (rL + rR)
    cdef double rho_ln = log_mean(rL, rR)
    cdef double beta_avg = 0.5 * (bL + bR)
    cdef double beta_ln = log_mean(bL, bR)
    cdef double u = 0.5 * (uL + uR), v = 0.5 * (vL + vR), w = 0.5 * (wL + wR)
    cdef double B1 = 0.5 * (B1L + B1R), B2 = 0.5 * (B2L + B2R), B3 = 0.5 * (B3L + B3R)
    cdef double vel_sq_avg = 0.5 * (uL * uL + vL * vL + wL * wL + uR * uR + vR * vR + wR * wR)
    cdef double Bsq_avg = 0.5 * (B1L * B1L + B2L * B2L + B3L * B3L
                                 + B1R * B1R + B2R * B2R + B3R * B3R)
    cdef double B1B1 = 0.5 * (B1L * B1L + B1R * B1R)
    cdef double B1B2 = 0.5 * (B1L * B2L + B1R * B2R)
    cdef double B1B3 = 0.5 * (B1L * B3L + B1R * B3R)
    cdef double uBsq = 0.5 * (uL * (B1L * B1L + B2L * B2L + B3L * B3L)
                              + uR * (B1R * B1R + B2R * B2R + B3R * B3R))
    cdef double uB1B1 = 0.5 * (uL * B1L * B1L + uR * B1R * B1R)
    cdef double vB1B2 = 0.5 * (vL * B1L * B2L + vR * B1R * B2R)
    cdef double wB1B3 = 0.5 * (wL * B1L * B3L + wR * B1R * B3R)
    cdef double p_hat = rho_avg / (2.0 * beta_avg)
    cdef double vel_sq_bar = 2.0 * (u * u + v * v + w * w) - vel_sq_avg
    cdef double mass = rho_ln * u

    f[0] = mass
    f[1] = mass * u + p_hat + 0.5 * Bsq_avg - B1B1
    f[2] = mass * v - B1B2
    f[3] = mass * w - B1B3
    f[4] = (0.5 * u * (rho_ln / (beta_ln * gm1) + rho_avg / beta_avg)
            + 0.5 * mass * vel_sq_bar
            + 0.5 * u * (Bsq_avg + 2.0 * (B2 * B2 + B3 * B3))
            - u * B1B1 - v * B1B2 - w * B1B3
            - v * B1 * B2 - w * B1 * B3
            + uB1B1 + vB1B2 + wB1B3
            - 0.5 * uBsq)
    f[5] = 0.0
    f[6] = u * B2 - v * B1
    f[7] = u * B3 - w * B1

    # interface source on a uniform grid
    cdef double dB1 = B1R - B1L
    cdef double Bavg[3]
    cdef double Bl[3]
    cdef double Br[3]
    cdef double vel[3]
    cdef double dxbB[3]
    cdef double scale, ratio, norm2, target, corr, Bmax
    cdef int i
    Bavg[0] = B1; Bavg[1] = B2; Bavg[2] = B3
    Bl[0] = B1L; Bl[1] = B2L; Bl[2] = B3L
    Br[0] = B1R; Br[1] = B2R; Br[2] = B3R
    vel[0] = u; vel[1] = v; vel[2] = w
    for i in range(5):
        s[i] = 0.0
    for i in range(3):
        dxbB[i] = 0.5 * dx * (bL * Bl[i] + bR * Br[i])
    if src == 1:
        for i in range(3):
            scale = SOURCE_TOL * dx * beta_avg * dmax(dmax(fabs(Bl[i]), fabs(Br[i])), 1e-300)
            if fabs(dxbB[i]) <= scale:
                ratio = 1.0 / dx
            else:
                ratio = beta_avg * Bavg[i] / dxbB[i]
            s[5 + i] = -dB1 * vel[i] * ratio
    else:
        norm2 = dxbB[0] * dxbB[0] + dxbB[1] * dxbB[1] + dxbB[2] * dxbB[2]
        Bmax = dmax(sqrt(dmax(B1L * B1L + B2L * B2L + B3L * B3L,
                              B1R * B1R + B2R * B2R + B3R * B3R)), 1e-300)
        scale = SOURCE_TOL * dx * beta_avg * Bmax
        corr = 0.0
        if norm2 > scale * scale:
            target = beta_avg * (u * B1 + v * B2 + w * B3) - (
                u * dxbB[0] + v * dxbB[1] + w * dxbB[2]) / dx
            corr = target / norm2
        for i in range(3):
            s[5 + i] = -dB1 * (vel[i] / dx + corr * dxbB[i])

    if kind == 0:
        return

    # jump in entropy variables
    cdef double dv[8]
    cdef double ds = (log(pR / pL) - gamma * log(rR / rL))
    dv[0] = -ds / gm1 - (bR * (uR * uR + vR * vR + wR * wR) - bL * (uL * uL + vL * vL + wL * wL))
    dv[1] = 2.0 * (bR * uR - bL * uL)
    dv[2] = 2.0 * (bR * vR - bL * vL)
    dv[3] = 2.0 * (bR * wR - bL * wL)
    dv[4] = -2.0 * (bR - bL)
    dv[5] = 2.0 * (bR * B1R - bL * B1L)
    dv[6] = 2.0 * (bR * B2R - bL * B2L)
    dv[7] = 2.0 * (bR * B3R - bL * B3L)

    # mean state under the chosen averaging policy
    cdef double rho, rho_alf, p_ln, ph, tau, usq_bar, a2_eig, b1s_eig, bs_eig
    cdef double pavg = 0.5 * (pL + pR)
    if kind == 1:
        rho = rho_ln
        rho_alf = rho_avg
        p_ln = rho_ln / (2.0 * beta_ln)
        ph = p_hat
        tau = 1.0 / (2.0 * beta_avg)
        usq_bar = vel_sq_bar
        a2_eig = gamma * pavg * 0.5 * (1.0 / rL + 1.0 / rR)
        b1s_eig = dmax(B1 * 0.5 * (B1L / rL + B1R / rR), 0.0)
        bs_eig = (b1s_eig + dmax(B2 * 0.5 * (B2L / rL + B2R / rR), 0.0)
                  + dmax(B3 * 0.5 * (B3L / rL + B3R / rR), 0.0))
    else:
        rho = rho_avg
        rho_alf = rho_avg
        p_ln = pavg
        ph = pavg
        tau = pavg / rho_avg
        usq_bar = u * u + v * v + w * w
        a2_eig = gamma * pavg / rho_avg
        b1s_eig = B1 * B1 / rho_avg
        bs_eig = (B1 * B1 + B2 * B2 + B3 * B3) / rho_avg

    cdef double sq_rho = sqrt(rho)
    cdef double a2 = gamma * ph / rho
    cdef double a_ln2 = gamma * p_ln / rho
    cdef double a_beta = sqrt(gamma * tau)
    cdef double b1 = B1 / sq_rho, b2 = B2 / sq_rho, b3 = B3 / sq_rho
    cdef double b1s = b1 * b1
    cdef double bps = b2 * b2 + b3 * b3
    cdef double bs = b1s + bps
    cdef double b_perp = sqrt(bps)
    cdef double beta2, beta3
    if bps <= PERP_TOL * dmax(a2, bs):
        beta2 = RSQ2
        beta3 = RSQ2
    else:
        beta2 = b2 / b_perp
        beta3 = b3 / b_perp
    cdef double sig = 1.0 if b1 >= 0.0 else -1.0

    cdef double t_ab = a2 - b1s
    cdef double delta = sqrt(t_ab * t_ab + 2.0 * bps * (a2 + b1s) + bps * bps)
    cdef double cf2 = 0.5 * (a2 + bs + delta)
    cdef double cs2 = a2 * b1s / cf2
    cdef double c_f = sqrt(cf2), c_s = sqrt(dmax(cs2, 0.0))
    cdef double d = t_ab - bps
    cdef double num_f, num_s, af, as_
    if not (delta > 1e-14 * (a2 + bs)):
        af = RSQ2
        as_ = RSQ2
    else:
        if d >= 0.0:
            num_f = 0.5 * (d + delta)
        else:
            num_f = 2.0 * a2 * bps / (delta - d)
        if d <= 0.0:
            num_s = 0.5 * (delta - d)
        else:
            num_s = 2.0 * a2 * bps / (delta + d)
        af = sqrt(dmax(num_f, 0.0) / delta)
        as_ = sqrt(dmax(num_s, 0.0) / delta)

    cdef double usq2 = 0.5 * usq_bar
    cdef double enth = a_ln2 / gm1
    cdef double vb = v * beta2 + w * beta3
    cdef double sq_ra = rho * sqrt(rho_alf)

    cdef double R[8][8]
    cdef double Z[8]
    cdef double lam[8]
    cdef double t[8]
    cdef int j, col
    cdef double pm
    for i in range(8):
        for j in range(8):
            R[i][j] = 0.0
    for j in range(2):
        col = 0 if j == 0 else 7
        pm = 1.0 if j == 0 else -1.0
        R[0][col] = af * rho
        R[1][col] = af * rho * (u + pm * c_f)
        R[2][col] = rho * (af * v - pm * as_ * c_s * beta2 * sig)
        R[3][col] = rho * (af * w - pm * as_ * c_s * beta3 * sig)
        R[4][col] = (af * rho * (usq2 + enth) + a_beta * as_ * rho * b_perp
                     + pm * af * c_f * rho * u - pm * as_ * c_s * rho * sig * vb)
        R[6][col] = as_ * a_beta * beta2 * sq_rho
        R[7][col] = as_ * a_beta * beta3 * sq_rho

        col = 2 if j == 0 else 5
        R[0][col] = as_ * rho
        R[1][col] = as_ * rho * (u + pm * c_s)
        R[2][col] = rho * (as_ * v + pm * af * c_f * beta2 * sig)
        R[3][col] = rho * (as_ * w + pm * af * c_f * beta3 * sig)
        R[4][col] = (as_ * rho * (usq2 + enth) - a_beta * af * rho * b_perp
                     + pm * as_ * c_s * rho * u + pm * af * c_f * rho * sig * vb)
        R[6][col] = -af * a_beta * beta2 * sq_rho
        R[7][col] = -af * a_beta * beta3 * sq_rho

        col = 1 if j == 0 else 6
        R[2][col] = pm * sq_ra * beta3
        R[3][col] = -pm * sq_ra * beta2
        R[4][col] = -pm * sq_ra * (beta2 * w - beta3 * v)
        R[6][col] = -rho * beta3
        R[7][col] = rho * beta2
    R[0][3] = 1.0
    R[1][3] = u
    R[2][3] = v
    R[3][3] = w
    R[4][3] = usq2
    R[4][4] = B1
    R[5][4] = 1.0

    Z[0] = Z[2] = Z[5] = Z[7] = 1.0 / (2.0 * gamma * rho)
    Z[1] = Z[6] = tau / (2.0 * rho * rho)
    Z[3] = rho * gm1 / gamma
    Z[4] = tau

    cdef double ca_e, cs_e, cf_e
    speeds(a2_eig, b1s_eig, bs_eig, &ca_e, &cs_e, &cf_e)
    lam[0] = u + cf_e
    lam[1] = u + ca_e
    lam[2] = u + cs_e
    lam[3] = u
    lam[4] = u
    lam[5] = u - cs_e
    lam[6] = u - ca_e
    lam[7] = u - cf_e

    cdef double acc
    for j in range(8):
        acc = 0.0
        for i in range(8):
            acc += R[i][j] * dv[i]
        t[j] = acc * fabs(lam[j]) * Z[j]
    for i in range(8):
        acc = 0.0
        for j in range(8):
            acc += R[i][j] * t[j]
        f[i] -= 0.5 * acc


cdef int line_rhs(const double* Q, int n, double dx, int recon, double alpha, int kind,
                  int src, double gamma, double* out, double* W, double* D, double* F, double* S,
                  int* where) noexcept nogil:
    """Update for one ghosted pencil of ``n + 4`` conserved states."""
    cdef int j, k, c, err
    cdef int m = n + 4
    cdef double back, fwd
    cdef double wl[8]
    cdef double wr[8]
    for j in range(m):
        err = cons_to_prim(&Q[8 * j], &W[8 * j], gamma)
        if err != OK:
            where[0] = j
            return err
    # undivided slopes for cells 1..n+2
    for j in range(1, m - 1):
        for c in range(8):
            if recon == 0:
                D[8 * j + c] = 0.0
            else:
                back = W[8 * j + c] - W[8 * (j - 1) + c]
                fwd = W[8 * (j + 1) + c] - W[8 * j + c]
                if recon == 1:
                    D[8 * j + c] = alpha * back + (1.0 - alpha) * fwd
                else:
                    D[8 * j + c] = minmod(back, fwd)
    # face k sits between ghosted cells k+1 and k+2
    for k in range(n + 1):
        for c in range(8):
            wl[c] = W[8 * (k + 1) + c] + 0.5 * D[8 * (k + 1) + c]
            wr[c] = W[8 * (k + 2) + c] - 0.5 * D[8 * (k + 2) + c]
        if not (wl[0] > 0.0):
            where[0] = k + 1
            return BAD_FACE_RHO
        if not (wr[0] > 0.0):
            where[0] = k + 2
            return BAD_FACE_RHO
        if not (wl[4] > 0.0):
            where[0] = k + 1
            return BAD_FACE_P
        if not (wr[4] > 0.0):
            where[0] = k + 2
            return BAD_FACE_P
        interface_flux(wl, wr, gamma, kind, src, dx, &F[8 * k], &S[8 * k])
    for k in range(n):
        for c in range(8):
            out[8 * k + c] = (-(F[8 * (k + 1) + c] - F[8 * k + c]) / dx
                              + 0.5 * (S[8 * (k + 1) + c] + S[8 * k + c]))
    return OK


cdef class _Scratch:
    cdef double* W
    cdef double* D
    cdef double* F
    cdef double* S

    def __cinit__(self, int n):
        self.W = <double*> malloc(8 * (n + 4) * sizeof(double))
        self.D = <double*> malloc(8 * (n + 4) * sizeof(double))
        self.F = <double*> malloc(8 * (n + 1) * sizeof(double))
        self.S = <double*> malloc(8 * (n + 1) * sizeof(double))
        if not (self.W and self.D and self.F and self.S):
            raise MemoryError()

    def __dealloc__(self):
        free(self.W)
        free(self.D)
        free(self.F)
        free(self.S)


def _raise(int err, int pencil, int where):
    from .eos import NonPositiveDensity, NonPositivePressure, NonFiniteState
    idx = (pencil, where)
    if err == BAD_RHO:
        raise NonPositiveDensity("non-positive density", index=idx)
    if err == BAD_P:
        raise NonPositivePressure("non-positive pressure", index=idx)
    if err == BAD_FINITE:
        raise NonFiniteState("non-finite state component", index=idx)
    if err == BAD_FACE_RHO:
        raise NonPositiveDensity("non-positive reconstructed density", index=idx)
    raise NonPositivePressure("non-positive reconstructed pressure", index=idx)


def pencil_rhs(Q, double dx, int recon, double alpha, int flux, double gamma,
               int source=0):
    cdef double[:, :, ::1] q = np.ascontiguousarray(Q, dtype=np.float64)
    cdef int npen = q.shape[0]
    cdef int n = q.shape[1] - 4
    if n < 1 or q.shape[2] != 8:
        raise ValueError("expected pencils of shape (npencil, n + 4, 8)")
    out_arr = np.empty((npen, n, 8))
    cdef double[:, :, ::1] out = out_arr
    cdef _Scratch sc = _Scratch(n)
    cdef int p, err = OK, where = 0
    with nogil:
        for p in range(npen):
            err = line_rhs(&q[p, 0, 0], n, dx, recon, alpha, flux, source, gamma, &out[p, 0, 0],
                           sc.W, sc.D, sc.F, sc.S, &where)
            if err != OK:
                break
    if err != OK:
        _raise(err, p, where)
    return out_arr


cdef inline void wrap(const double* q, double* g, int n) noexcept nogil:
    cdef int c, j
    for j in range(n):
        for c in range(8):
            g[8 * (j + 2) + c] = q[8 * j + c]
    for c in range(8):
        g[c] = q[8 * (n - 2) + c]
        g[8 + c] = q[8 * (n - 1) + c]
        g[8 * (n + 2) + c] = q[c]
        g[8 * (n + 3) + c] = q[8 + c]


def advance_periodic_1d(q_in, double dx, double dt, long nsteps, int integrator,
                        int recon, double alpha, int flux, double gamma, int source=0):
    q_arr = np.array(q_in, dtype=np.float64, order="C")
    cdef double[:, ::1] q = q_arr
    cdef int n = q.shape[0]
    if n < 2:
        raise ValueError("periodic line needs at least 2 cells")
    cdef _Scratch sc = _Scratch(n)
    cdef double[::1] g = np.empty(8 * (n + 4))
    cdef double[::1] L = np.empty(8 * n)
    cdef double[::1] q1 = np.empty(8 * n)
    cdef double[::1] q2 = np.empty(8 * n)
    cdef double* qp = &q[0, 0]
    cdef long step
    cdef int i, err = OK, where = 0
    cdef int N = 8 * n
    with nogil:
        for step in range(nsteps):
            wrap(qp, &g[0], n)
            err = line_rhs(&g[0], n, dx, recon, alpha, flux, source, gamma, &L[0],
                           sc.W, sc.D, sc.F, sc.S, &where)
            if err != OK:
                break
            for i in range(N):
                q1[i] = qp[i] + dt * L[i]
            if integrator == 0:
                for i in range(N):
                    qp[i] = q1[i]
                continue
            wrap(&q1[0], &g[0], n)
            err = line_rhs(&g[0], n, dx, recon, alpha, flux, source, gamma, &L[0],
                           sc.W, sc.D, sc.F, sc.S, &where)
            if err != OK:
                break
            if integrator == 1:
                for i in range(N):
                    qp[i] = 0.5 * qp[i] + 0.5 * (q1[i] + dt * L[i])
                continue
            for i in range(N):
                q2[i] = 0.75 * qp[i] + 0.25 * (q1[i] + dt * L[i])
            wrap(&q2[0], &g[0], n)
            err = line_rhs(&g[0], n, dx, recon, alpha, flux, source, gamma, &L[0],
                           sc.W, sc.D, sc.F, sc.S, &where)
            if err != OK:
                break
            for i in range(N):
                qp[i] = qp[i] / 3.0 + 2.0 / 3.0 * (q2[i] + dt * L[i])
    if err != OK:
        _raise(err, 0, where)
    return q_arr
