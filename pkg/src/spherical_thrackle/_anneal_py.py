"""Pure-Python annealing kernel.

Mirrors ``_anneal.pyx`` operation for operation (same RNG, same arithmetic
order), so both backends return bit-identical results. This one is the
fallback when the compiled extension is unavailable, and the reference the
extension is tested against.

State layout shared with the extension:
    pos     (n, 3) float64 vertex positions, modified in place
    longf   (m,)   int8 long-edge flags, modified in place
    edges   (m, 2) int32 directed edges
    shared  (m, m) int32 shared vertex of two edges or -1
"""

import math

TWO_PI = 2.0 * math.pi
PI = math.pi
MASK = 0xFFFFFFFFFFFFFFFF


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return (z ^ (z >> 31)) & MASK


class Xoshiro:
    """xoshiro256** seeded through splitmix64."""

    def __init__(self, seed):
        self.s = [splitmix64((seed + k * 0x9E3779B97F4A7C15) & MASK) for k in range(4)]

    def next(self):
        s = self.s
        r = (s[1] * 5) & MASK
        r = ((r << 7) | (r >> 57)) & MASK
        r = (r * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = ((s[3] << 45) | (s[3] >> 19)) & MASK
        return r

    def uniform(self):
        return (self.next() >> 11) * (1.0 / 9007199254740992.0)

    def normal_pair(self):
        # Marsaglia polar method: no trig calls, so the C port rounds identically
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                f = math.sqrt(-2.0 * math.log(s) / s)
                return u * f, v * f


def arc_data(sx, sy, sz, ex, ey, ez, is_long):
    """(pole, pole x start, angle) for the arc from s to e."""
    cx = sy * ez - sz * ey
    cy = sz * ex - sx * ez
    cz = sx * ey - sy * ex
    nc = math.sqrt(cx * cx + cy * cy + cz * cz)
    th = math.atan2(nc, sx * ex + sy * ey + sz * ez)
    if nc > 0.0:
        px, py, pz = cx / nc, cy / nc, cz / nc
    else:
        # coincident or antipodal endpoints: any pole orthogonal to s
        if abs(sx) < 0.9:
            px, py, pz = 0.0, sz, -sy
        else:
            px, py, pz = -sz, 0.0, sx
        nn = math.sqrt(px * px + py * py + pz * pz)
        px, py, pz = px / nn, py / nn, pz / nn
    if is_long:
        px, py, pz = -px, -py, -pz
        th = TWO_PI - th
    wx = py * sz - pz * sy
    wy = pz * sx - px * sz
    wz = px * sy - py * sx
    return [px, py, pz, wx, wy, wz, th]


def sdepth(t, th):
    if t <= th:
        a = th - t
        return t if t < a else a
    a = t - th
    b = TWO_PI - t
    return -(a if a < b else b)


def relu(x):
    return x if x > 0.0 else 0.0


def pair_penalty(A, S, i, j, sv, pos, margin, eps_circle):
    """Penalty of edge pair (i, j); zero iff the pair is certified at ``margin``.

    ``A`` holds per-edge arc data, ``S`` the start vectors, ``sv`` the shared
    vertex or -1.
    """
    a = A[i]
    b = A[j]
    cx = a[1] * b[2] - a[2] * b[1]
    cy = a[2] * b[0] - a[0] * b[2]
    cz = a[0] * b[1] - a[1] * b[0]
    nc = math.sqrt(cx * cx + cy * cy + cz * cz)
    pen = 0.0
    if nc < eps_circle:
        pen += eps_circle - nc
    if nc == 0.0:
        return pen + PI
    cx /= nc
    cy /= nc
    cz /= nc
    si = S[i]
    sj = S[j]
    ti = math.atan2(cx * a[3] + cy * a[4] + cz * a[5], cx * si[0] + cy * si[1] + cz * si[2])
    if ti < 0.0:
        ti += TWO_PI
    tj = math.atan2(cx * b[3] + cy * b[4] + cz * b[5], cx * sj[0] + cy * sj[1] + cz * sj[2])
    if tj < 0.0:
        tj += TWO_PI
    ti2 = ti - PI if ti >= PI else ti + PI
    tj2 = tj - PI if tj >= PI else tj + PI
    di1 = sdepth(ti, a[6])
    dj1 = sdepth(tj, b[6])
    di2 = sdepth(ti2, a[6])
    dj2 = sdepth(tj2, b[6])
    if sv >= 0:
        p = pos[sv]
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


def vertex_penalty(p, q, margin):
    cx = p[1] * q[2] - p[2] * q[1]
    cy = p[2] * q[0] - p[0] * q[2]
    cz = p[0] * q[1] - p[1] * q[0]
    ang = math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), p[0] * q[0] + p[1] * q[1] + p[2] * q[2])
    return relu(margin - ang)


def medium_penalty(th, eps_medium):
    return relu(eps_medium - abs(th - PI))


class _State:
    def __init__(self, pos, longf, edges, shared, margin, eps_medium, eps_circle):
        self.n = len(pos)
        self.m = len(edges)
        self.P = [[float(pos[v][0]), float(pos[v][1]), float(pos[v][2])] for v in range(self.n)]
        self.L = [int(longf[i]) for i in range(self.m)]
        self.E = [(int(edges[i][0]), int(edges[i][1])) for i in range(self.m)]
        self.SH = [[int(shared[i][j]) for j in range(self.m)] for i in range(self.m)]
        self.margin = margin
        self.eps_medium = eps_medium
        self.eps_circle = eps_circle
        self.inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.E):
            self.inc[u].append(i)
            self.inc[v].append(i)

    def arc(self, i):
        u, v = self.E[i]
        s, e = self.P[u], self.P[v]
        return arc_data(s[0], s[1], s[2], e[0], e[1], e[2], self.L[i])

    def build(self):
        self.A = [self.arc(i) for i in range(self.m)]
        self.S = [self.P[u] for u, _ in self.E]
        m, n = self.m, self.n
        self.PE = [[0.0] * m for _ in range(m)]
        self.ME = [0.0] * m
        self.VE = [[0.0] * n for _ in range(n)]
        total = 0.0
        nbad = 0
        for i in range(m):
            for j in range(i + 1, m):
                x = pair_penalty(self.A, self.S, i, j, self.SH[i][j], self.P, self.margin, self.eps_circle)
                self.PE[i][j] = x
                self.PE[j][i] = x
                total += x
                nbad += x > 0.0
        for i in range(m):
            x = medium_penalty(self.A[i][6], self.eps_medium)
            self.ME[i] = x
            total += x
            nbad += x > 0.0
        for a in range(n):
            for b in range(a + 1, n):
                x = vertex_penalty(self.P[a], self.P[b], self.margin)
                self.VE[a][b] = x
                self.VE[b][a] = x
                total += x
                nbad += x > 0.0
        return total, nbad


def full_energy(pos, longf, edges, shared, margin, eps_medium, eps_circle):
    st = _State(pos, longf, edges, shared, margin, eps_medium, eps_circle)
    total, _ = st.build()
    return total


def anneal(pos, longf, edges, shared, free_v, free_f, randomize, reset_flags,
           steps, t0, t1, s0, s1, p_flip, margin, eps_medium, eps_circle, seed):
    """One annealing restart; returns (best_energy, found_zero, steps_taken).

    On return ``pos``/``longf`` hold the first zero-energy state if one was
    reached, otherwise the lowest-energy state seen.
    """
    rng = Xoshiro(seed)
    n = len(pos)
    m = len(edges)
    st = _State(pos, longf, edges, shared, margin, eps_medium, eps_circle)
    P = st.P
    for v in range(n):
        if randomize[v]:
            g0, g1 = rng.normal_pair()
            g2, _ = rng.normal_pair()
            nn = math.sqrt(g0 * g0 + g1 * g1 + g2 * g2)
            P[v][0] = g0 / nn
            P[v][1] = g1 / nn
            P[v][2] = g2 / nn
    if reset_flags:
        for i in range(m):
            if free_f[i]:
                st.L[i] = 0
    total, nbad = st.build()
    fv = [v for v in range(n) if free_v[v]]
    ff = [i for i in range(m) if free_f[i]]
    best = total
    best_P = [list(p) for p in P]
    best_L = list(st.L)
    found = nbad == 0
    k = 0
    if not found and (fv or ff):
        log_t = math.log(t1 / t0)
        log_s = math.log(s1 / s0)
        denom = float(steps - 1) if steps > 1 else 1.0
        A, S, PE, ME, VE, SH = st.A, st.S, st.PE, st.ME, st.VE, st.SH
        mark = [0] * m
        while k < steps:
            frac = k / denom
            temp = t0 * math.exp(frac * log_t)
            sigma = s0 * math.exp(frac * log_s)
            k += 1
            if not fv:
                flip = True
            elif not ff:
                flip = False
            else:
                flip = rng.uniform() < p_flip
            delta = 0.0
            dbad = 0
            upd = []
            if flip:
                i = ff[int(rng.uniform() * len(ff))]
                saved = A[i]
                st.L[i] = 1 - st.L[i]
                A[i] = st.arc(i)
                for j in range(m):
                    if j == i:
                        continue
                    if i < j:
                        x = pair_penalty(A, S, i, j, SH[i][j], P, margin, eps_circle)
                    else:
                        x = pair_penalty(A, S, j, i, SH[i][j], P, margin, eps_circle)
                    old = PE[i][j]
                    delta += x - old
                    dbad += (x > 0.0) - (old > 0.0)
                    upd.append((0, i, j, x))
                x = medium_penalty(A[i][6], eps_medium)
                delta += x - ME[i]
                dbad += (x > 0.0) - (ME[i] > 0.0)
                upd.append((1, i, 0, x))
                if delta <= 0.0 or rng.uniform() < math.exp(-delta / temp):
                    for kind, a_, b_, x in upd:
                        if kind == 0:
                            PE[a_][b_] = x
                            PE[b_][a_] = x
                        else:
                            ME[a_] = x
                    total += delta
                    nbad += dbad
                else:
                    st.L[i] = 1 - st.L[i]
                    A[i] = saved
            else:
                v = fv[int(rng.uniform() * len(fv))]
                g0, g1 = rng.normal_pair()
                g2, _ = rng.normal_pair()
                old_p = P[v]
                nx_ = old_p[0] + sigma * g0
                ny_ = old_p[1] + sigma * g1
                nz_ = old_p[2] + sigma * g2
                nn = math.sqrt(nx_ * nx_ + ny_ * ny_ + nz_ * nz_)
                if nn == 0.0:
                    continue
                new_p = [nx_ / nn, ny_ / nn, nz_ / nn]
                P[v] = new_p
                inc = st.inc[v]
                saved = [A[i] for i in inc]
                saved_s = [S[i] for i in inc]
                for i in inc:
                    mark[i] = 1
                    A[i] = st.arc(i)
                    S[i] = P[st.E[i][0]]
                for i in inc:
                    for j in range(m):
                        if j == i or (mark[j] and j < i):
                            continue
                        if i < j:
                            x = pair_penalty(A, S, i, j, SH[i][j], P, margin, eps_circle)
                        else:
                            x = pair_penalty(A, S, j, i, SH[i][j], P, margin, eps_circle)
                        old = PE[i][j]
                        delta += x - old
                        dbad += (x > 0.0) - (old > 0.0)
                        upd.append((0, i, j, x))
                    x = medium_penalty(A[i][6], eps_medium)
                    delta += x - ME[i]
                    dbad += (x > 0.0) - (ME[i] > 0.0)
                    upd.append((1, i, 0, x))
                for w in range(n):
                    if w == v:
                        continue
                    if v < w:
                        x = vertex_penalty(new_p, P[w], margin)
                    else:
                        x = vertex_penalty(P[w], new_p, margin)
                    old = VE[v][w]
                    delta += x - old
                    dbad += (x > 0.0) - (old > 0.0)
                    upd.append((2, v, w, x))
                for i in inc:
                    mark[i] = 0
                if delta <= 0.0 or rng.uniform() < math.exp(-delta / temp):
                    for kind, a_, b_, x in upd:
                        if kind == 0:
                            PE[a_][b_] = x
                            PE[b_][a_] = x
                        elif kind == 1:
                            ME[a_] = x
                        else:
                            VE[a_][b_] = x
                            VE[b_][a_] = x
                    total += delta
                    nbad += dbad
                else:
                    P[v] = old_p
                    for idx, i in enumerate(inc):
                        A[i] = saved[idx]
                        S[i] = saved_s[idx]
            if nbad == 0:
                found = True
                break
            if total < best:
                best = total
                best_P = [list(p) for p in P]
                best_L = list(st.L)
    if found:
        best = 0.0
        best_P = [list(p) for p in P]
        best_L = list(st.L)
    for v in range(n):
        pos[v][0] = best_P[v][0]
        pos[v][1] = best_P[v][1]
        pos[v][2] = best_P[v][2]
    for i in range(m):
        longf[i] = best_L[i]
    return best, found, k
