# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled annealing kernel; a line-for-line port of ``_anneal_py``.

Keep the two files in lockstep: the test suite checks that both backends
return bit-identical states for the same seed.
"""

from libc.math cimport atan2, sqrt, exp, log, fabs, M_PI
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.stdint cimport uint64_t, int8_t, int32_t

cdef double TWO_PI = 2.0 * M_PI
cdef double PI = M_PI
cdef int NA = 7  # doubles of arc data per edge


cdef inline uint64_t splitmix64(uint64_t x) noexcept nogil:
    x = x + <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = x
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef struct Rng:
    uint64_t s0, s1, s2, s3


cdef inline void rng_seed(Rng* r, uint64_t seed) noexcept nogil:
    r.s0 = splitmix64(seed)
    r.s1 = splitmix64(seed + <uint64_t>0x9E3779B97F4A7C15)
    r.s2 = splitmix64(seed + <uint64_t>2 * <uint64_t>0x9E3779B97F4A7C15)
    r.s3 = splitmix64(seed + <uint64_t>3 * <uint64_t>0x9E3779B97F4A7C15)


cdef inline uint64_t rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t rng_next(Rng* r) noexcept nogil:
    cdef uint64_t res = rotl(r.s1 * 5, 7) * 9
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = rotl(r.s3, 45)
    return res


cdef inline double rng_uniform(Rng* r) noexcept nogil:
    return <double>(rng_next(r) >> 11) * (1.0 / 9007199254740992.0)


cdef inline void rng_normal_pair(Rng* r, double* a, double* b) noexcept nogil:
    cdef double u, v, s, f
    while True:
        u = 2.0 * rng_uniform(r) - 1.0
        v = 2.0 * rng_uniform(r) - 1.0
        s = u * u + v * v
        if 0.0 < s < 1.0:
            f = sqrt(-2.0 * log(s) / s)
            a[0] = u * f
            b[0] = v * f
            return


cdef inline double relu(double x) noexcept nogil:
    return x if x > 0.0 else 0.0


cdef inline double sdepth(double t, double th) noexcept nogil:
    cdef double a, b
    if t <= th:
        a = th - t
        return t if t < a else a
    a = t - th
    b = TWO_PI - t
    return -(a if a < b else b)


cdef void arc_data(double* P, int u, int v, int is_long, double* out) noexcept nogil:
    cdef double sx = P[3 * u], sy = P[3 * u + 1], sz = P[3 * u + 2]
    cdef double ex = P[3 * v], ey = P[3 * v + 1], ez = P[3 * v + 2]
    cdef double cx = sy * ez - sz * ey
    cdef double cy = sz * ex - sx * ez
    cdef double cz = sx * ey - sy * ex
    cdef double nc = sqrt(cx * cx + cy * cy + cz * cz)
    cdef double th = atan2(nc, sx * ex + sy * ey + sz * ez)
    cdef double px, py, pz, nn
    if nc > 0.0:
        px = cx / nc
        py = cy / nc
        pz = cz / nc
    else:
        if fabs(sx) < 0.9:
            px = 0.0
            py = sz
            pz = -sy
        else:
            px = -sz
            py = 0.0
            pz = sx
        nn = sqrt(px * px + py * py + pz * pz)
        px = px / nn
        py = py / nn
        pz = pz / nn
    if is_long:
        px = -px
        py = -py
        pz = -pz
        th = TWO_PI - th
    out[0] = px
    out[1] = py
    out[2] = pz
    out[3] = py * sz - pz * sy
    out[4] = pz * sx - px * sz
    out[5] = px * sy - py * sx
    out[6] = th


cdef double pair_penalty(double* A, double* P, int32_t* E, int i, int j, int sv,
                         double margin, double eps_circle) noexcept nogil:
    cdef double* a = A + NA * i
    cdef double* b = A + NA * j
    cdef double cx = a[1] * b[2] - a[2] * b[1]
    cdef double cy = a[2] * b[0] - a[0] * b[2]
    cdef double cz = a[0] * b[1] - a[1] * b[0]
    cdef double nc = sqrt(cx * cx + cy * cy + cz * cz)
    cdef double pen = 0.0
    cdef double ti, tj, ti2, tj2, di1, dj1, di2, dj2, lo, lo1, lo2, ca, cb
    cdef double* si
    cdef double* sj
    cdef double* p
    if nc < eps_circle:
        pen += eps_circle - nc
    if nc == 0.0:
        return pen + PI
    cx /= nc
    cy /= nc
    cz /= nc
    si = P + 3 * E[2 * i]
    sj = P + 3 * E[2 * j]
    ti = atan2(cx * a[3] + cy * a[4] + cz * a[5], cx * si[0] + cy * si[1] + cz * si[2])
    if ti < 0.0:
        ti += TWO_PI
    tj = atan2(cx * b[3] + cy * b[4] + cz * b[5], cx * sj[0] + cy * sj[1] + cz * sj[2])
    if tj < 0.0:
        tj += TWO_PI
    ti2 = ti - PI if ti >= PI else ti + PI
    tj2 = tj - PI if tj >= PI else tj + PI
    di1 = sdepth(ti, a[6])
    dj1 = sdepth(tj, b[6])
    di2 = sdepth(ti2, a[6])
    dj2 = sdepth(tj2, b[6])
    if sv >= 0:
        p = P + 3 * sv
        if cx * p[0] + cy * p[1] + cz * p[2] > 0.0:
            lo = di2 if di2 < dj2 else dj2
        else:
            lo = di1 if di1 < dj1 else dj1
        return pen + relu(margin + lo)
    lo1 = di1 if di1 < dj1 else dj1
    lo2 = di2 if di2 < dj2 else dj2
    ca = relu(margin - di1) + relu(margin - dj1) + relu(margin + lo2)
    cb = relu(margin - di2) + relu(margin - dj2) + relu(margin + lo1)
    return pen + (ca if ca < cb else cb)


cdef inline double vertex_penalty(double* p, double* q, double margin) noexcept nogil:
    cdef double cx = p[1] * q[2] - p[2] * q[1]
    cdef double cy = p[2] * q[0] - p[0] * q[2]
    cdef double cz = p[0] * q[1] - p[1] * q[0]
    cdef double ang = atan2(sqrt(cx * cx + cy * cy + cz * cz), p[0] * q[0] + p[1] * q[1] + p[2] * q[2])
    return relu(margin - ang)


cdef inline double medium_penalty(double th, double eps_medium) noexcept nogil:
    return relu(eps_medium - fabs(th - PI))


cdef inline double ordered_pair(double* A, double* P, int32_t* E, int32_t* SH, int m,
                                int i, int j, double margin, double eps_circle) noexcept nogil:
    if i < j:
        return pair_penalty(A, P, E, i, j, SH[i * m + j], margin, eps_circle)
    return pair_penalty(A, P, E, j, i, SH[i * m + j], margin, eps_circle)


cdef double build(int n, int m, double* P, int8_t* L, int32_t* E, int32_t* SH,
                  double* A, double* PE, double* ME, double* VE,
                  double margin, double eps_medium, double eps_circle, int* nbad_out) noexcept nogil:
    cdef int i, j, a, b
    cdef double x, total = 0.0
    cdef int nbad = 0
    for i in range(m):
        arc_data(P, E[2 * i], E[2 * i + 1], L[i], A + NA * i)
    for i in range(m):
        for j in range(i + 1, m):
            x = pair_penalty(A, P, E, i, j, SH[i * m + j], margin, eps_circle)
            PE[i * m + j] = x
            PE[j * m + i] = x
            total += x
            nbad += x > 0.0
    for i in range(m):
        x = medium_penalty(A[NA * i + 6], eps_medium)
        ME[i] = x
        total += x
        nbad += x > 0.0
    for a in range(n):
        for b in range(a + 1, n):
            x = vertex_penalty(P + 3 * a, P + 3 * b, margin)
            VE[a * n + b] = x
            VE[b * n + a] = x
            total += x
            nbad += x > 0.0
    nbad_out[0] = nbad
    return total


def full_energy(double[:, ::1] pos, int8_t[::1] longf, int32_t[:, ::1] edges,
                int32_t[:, ::1] shared, double margin, double eps_medium, double eps_circle):
    cdef int n = pos.shape[0]
    cdef int m = edges.shape[0]
    cdef int nbad = 0
    cdef double total
    cdef double* A = <double*>malloc(sizeof(double) * (NA * m + 1))
    cdef double* PE = <double*>malloc(sizeof(double) * (m * m + 1))
    cdef double* ME = <double*>malloc(sizeof(double) * (m + 1))
    cdef double* VE = <double*>malloc(sizeof(double) * (n * n + 1))
    cdef double* P = <double*>malloc(sizeof(double) * (3 * n + 1))
    try:
        if n:
            memcpy(P, &pos[0, 0], sizeof(double) * 3 * n)
        total = build(n, m, P, &longf[0] if m else NULL, &edges[0, 0] if m else NULL,
                      &shared[0, 0] if m else NULL, A, PE, ME, VE,
                      margin, eps_medium, eps_circle, &nbad)
    finally:
        free(A)
        free(PE)
        free(ME)
        free(VE)
        free(P)
    return total


def anneal(double[:, ::1] pos, int8_t[::1] longf, int32_t[:, ::1] edges, int32_t[:, ::1] shared,
           const unsigned char[::1] free_v, const unsigned char[::1] free_f,
           const unsigned char[::1] randomize, bint reset_flags,
           long steps, double t0, double t1, double s0, double s1, double p_flip,
           double margin, double eps_medium, double eps_circle, uint64_t seed):
    """One annealing restart; returns (best_energy, found_zero, steps_taken)."""
    cdef int n = pos.shape[0]
    cdef int m = edges.shape[0]
    cdef Rng rng
    rng_seed(&rng, seed)
    cdef size_t bytes_p = sizeof(double) * (3 * n + 1)
    cdef double* P = <double*>malloc(bytes_p)
    cdef double* bestP = <double*>malloc(bytes_p)
    cdef int8_t* L = <int8_t*>malloc(m + 1)
    cdef int8_t* bestL = <int8_t*>malloc(m + 1)
    cdef int32_t* E = <int32_t*>malloc(sizeof(int32_t) * (2 * m + 1))
    cdef int32_t* SH = <int32_t*>malloc(sizeof(int32_t) * (m * m + 1))
    cdef double* A = <double*>malloc(sizeof(double) * (NA * m + 1))
    cdef double* savedA = <double*>malloc(sizeof(double) * (NA * m + 1))
    cdef double* PE = <double*>malloc(sizeof(double) * (m * m + 1))
    cdef double* ME = <double*>malloc(sizeof(double) * (m + 1))
    cdef double* VE = <double*>malloc(sizeof(double) * (n * n + 1))
    cdef int* inc_start = <int*>malloc(sizeof(int) * (n + 2))
    cdef int* inc = <int*>malloc(sizeof(int) * (2 * m + 1))
    cdef int* fill = <int*>malloc(sizeof(int) * (n + 1))
    cdef int* fv = <int*>malloc(sizeof(int) * (n + 1))
    cdef int* ff = <int*>malloc(sizeof(int) * (m + 1))
    cdef char* mark = <char*>malloc(m + 1)
    # pending term updates: kind, a, b, value
    cdef int cap = m * m + m + n + 4
    cdef int* upd_kind = <int*>malloc(sizeof(int) * cap)
    cdef int* upd_a = <int*>malloc(sizeof(int) * cap)
    cdef int* upd_b = <int*>malloc(sizeof(int) * cap)
    cdef double* upd_x = <double*>malloc(sizeof(double) * cap)

    cdef int v, w, i, j, q, nfv = 0, nff = 0, nbad = 0, dbad, nu, kind
    cdef long k = 0
    cdef double g0, g1, g2, nn, total, best, delta, x, old, frac, temp, sigma
    cdef double log_t = 0.0, log_s = 0.0, denom
    cdef double ox, oy, oz, nx_, ny_, nz_
    cdef bint found = False, flip
    try:
        for v in range(n):
            P[3 * v] = pos[v, 0]
            P[3 * v + 1] = pos[v, 1]
            P[3 * v + 2] = pos[v, 2]
        for i in range(m):
            L[i] = longf[i]
            E[2 * i] = edges[i, 0]
            E[2 * i + 1] = edges[i, 1]
            mark[i] = 0
            for j in range(m):
                SH[i * m + j] = shared[i, j]
        for v in range(n + 1):
            inc_start[v] = 0
        for i in range(m):
            inc_start[E[2 * i] + 1] += 1
            inc_start[E[2 * i + 1] + 1] += 1
        for v in range(n):
            inc_start[v + 1] += inc_start[v]
            fill[v] = inc_start[v]
        for i in range(m):
            inc[fill[E[2 * i]]] = i
            fill[E[2 * i]] += 1
            inc[fill[E[2 * i + 1]]] = i
            fill[E[2 * i + 1]] += 1

        for v in range(n):
            if randomize[v]:
                rng_normal_pair(&rng, &g0, &g1)
                rng_normal_pair(&rng, &g2, &nn)
                nn = sqrt(g0 * g0 + g1 * g1 + g2 * g2)
                P[3 * v] = g0 / nn
                P[3 * v + 1] = g1 / nn
                P[3 * v + 2] = g2 / nn
        if reset_flags:
            for i in range(m):
                if free_f[i]:
                    L[i] = 0
        total = build(n, m, P, L, E, SH, A, PE, ME, VE, margin, eps_medium, eps_circle, &nbad)
        for v in range(n):
            if free_v[v]:
                fv[nfv] = v
                nfv += 1
        for i in range(m):
            if free_f[i]:
                ff[nff] = i
                nff += 1
        best = total
        memcpy(bestP, P, sizeof(double) * 3 * n)
        memcpy(bestL, L, m)
        found = nbad == 0
        if not found and (nfv or nff):
            log_t = log(t1 / t0)
            log_s = log(s1 / s0)
            denom = <double>(steps - 1) if steps > 1 else 1.0
            with nogil:
                while k < steps:
                    frac = <double>k / denom
                    temp = t0 * exp(frac * log_t)
                    sigma = s0 * exp(frac * log_s)
                    k += 1
                    if nfv == 0:
                        flip = True
                    elif nff == 0:
                        flip = False
                    else:
                        flip = rng_uniform(&rng) < p_flip
                    delta = 0.0
                    dbad = 0
                    nu = 0
                    if flip:
                        i = ff[<int>(rng_uniform(&rng) * nff)]
                        memcpy(savedA, A + NA * i, sizeof(double) * NA)
                        L[i] = 1 - L[i]
                        arc_data(P, E[2 * i], E[2 * i + 1], L[i], A + NA * i)
                        for j in range(m):
                            if j == i:
                                continue
                            x = ordered_pair(A, P, E, SH, m, i, j, margin, eps_circle)
                            old = PE[i * m + j]
                            delta += x - old
                            dbad += (x > 0.0) - (old > 0.0)
                            upd_kind[nu] = 0
                            upd_a[nu] = i
                            upd_b[nu] = j
                            upd_x[nu] = x
                            nu += 1
                        x = medium_penalty(A[NA * i + 6], eps_medium)
                        delta += x - ME[i]
                        dbad += (x > 0.0) - (ME[i] > 0.0)
                        upd_kind[nu] = 1
                        upd_a[nu] = i
                        upd_b[nu] = 0
                        upd_x[nu] = x
                        nu += 1
                        if delta <= 0.0 or rng_uniform(&rng) < exp(-delta / temp):
                            for q in range(nu):
                                if upd_kind[q] == 0:
                                    PE[upd_a[q] * m + upd_b[q]] = upd_x[q]
                                    PE[upd_b[q] * m + upd_a[q]] = upd_x[q]
                                else:
                                    ME[upd_a[q]] = upd_x[q]
                            total += delta
                            nbad += dbad
                        else:
                            L[i] = 1 - L[i]
                            memcpy(A + NA * i, savedA, sizeof(double) * NA)
                    else:
                        v = fv[<int>(rng_uniform(&rng) * nfv)]
                        rng_normal_pair(&rng, &g0, &g1)
                        rng_normal_pair(&rng, &g2, &nn)
                        ox = P[3 * v]
                        oy = P[3 * v + 1]
                        oz = P[3 * v + 2]
                        nx_ = ox + sigma * g0
                        ny_ = oy + sigma * g1
                        nz_ = oz + sigma * g2
                        nn = sqrt(nx_ * nx_ + ny_ * ny_ + nz_ * nz_)
                        if nn == 0.0:
                            continue
                        P[3 * v] = nx_ / nn
                        P[3 * v + 1] = ny_ / nn
                        P[3 * v + 2] = nz_ / nn
                        for q in range(inc_start[v], inc_start[v + 1]):
                            i = inc[q]
                            mark[i] = 1
                            memcpy(savedA + NA * i, A + NA * i, sizeof(double) * NA)
                            arc_data(P, E[2 * i], E[2 * i + 1], L[i], A + NA * i)
                        for q in range(inc_start[v], inc_start[v + 1]):
                            i = inc[q]
                            for j in range(m):
                                if j == i or (mark[j] and j < i):
                                    continue
                                x = ordered_pair(A, P, E, SH, m, i, j, margin, eps_circle)
                                old = PE[i * m + j]
                                delta += x - old
                                dbad += (x > 0.0) - (old > 0.0)
                                upd_kind[nu] = 0
                                upd_a[nu] = i
                                upd_b[nu] = j
                                upd_x[nu] = x
                                nu += 1
                            x = medium_penalty(A[NA * i + 6], eps_medium)
                            delta += x - ME[i]
                            dbad += (x > 0.0) - (ME[i] > 0.0)
                            upd_kind[nu] = 1
                            upd_a[nu] = i
                            upd_b[nu] = 0
                            upd_x[nu] = x
                            nu += 1
                        for w in range(n):
                            if w == v:
                                continue
                            if v < w:
                                x = vertex_penalty(P + 3 * v, P + 3 * w, margin)
                            else:
                                x = vertex_penalty(P + 3 * w, P + 3 * v, margin)
                            old = VE[v * n + w]
                            delta += x - old
                            dbad += (x > 0.0) - (old > 0.0)
                            upd_kind[nu] = 2
                            upd_a[nu] = v
                            upd_b[nu] = w
                            upd_x[nu] = x
                            nu += 1
                        for q in range(inc_start[v], inc_start[v + 1]):
                            mark[inc[q]] = 0
                        if delta <= 0.0 or rng_uniform(&rng) < exp(-delta / temp):
                            for q in range(nu):
                                kind = upd_kind[q]
                                if kind == 0:
                                    PE[upd_a[q] * m + upd_b[q]] = upd_x[q]
                                    PE[upd_b[q] * m + upd_a[q]] = upd_x[q]
                                elif kind == 1:
                                    ME[upd_a[q]] = upd_x[q]
                                else:
                                    VE[upd_a[q] * n + upd_b[q]] = upd_x[q]
                                    VE[upd_b[q] * n + upd_a[q]] = upd_x[q]
                            total += delta
                            nbad += dbad
                        else:
                            P[3 * v] = ox
                            P[3 * v + 1] = oy
                            P[3 * v + 2] = oz
                            for q in range(inc_start[v], inc_start[v + 1]):
                                i = inc[q]
                                memcpy(A + NA * i, savedA + NA * i, sizeof(double) * NA)
                    if nbad == 0:
                        found = True
                        break
                    if total < best:
                        best = total
                        memcpy(bestP, P, sizeof(double) * 3 * n)
                        memcpy(bestL, L, m)
        if found:
            best = 0.0
            memcpy(bestP, P, sizeof(double) * 3 * n)
            memcpy(bestL, L, m)
        for v in range(n):
            pos[v, 0] = bestP[3 * v]
            pos[v, 1] = bestP[3 * v + 1]
            pos[v, 2] = bestP[3 * v + 2]
        for i in range(m):
            longf[i] = bestL[i]
    finally:
        free(P)
        free(bestP)
        free(L)
        free(bestL)
        free(E)
        free(SH)
        free(A)
        free(savedA)
        free(PE)
        free(ME)
        free(VE)
        free(inc_start)
        free(inc)
        free(fill)
        free(fv)
        free(ff)
        free(mark)
        free(upd_kind)
        free(upd_a)
        free(upd_b)
        free(upd_x)
    return best, bool(found), k
