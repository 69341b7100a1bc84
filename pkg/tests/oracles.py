"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written from definitions (dense algebra,
exhaustive enumeration, projected-gradient optimization) and shares no code
with the implementations under test.
"""

import numpy as np


# ---------------------------------------------------------------------------
# dense QP oracle for SVM duals:  min 0.5 a'Qa + p'a,  y'a = 0,  0 <= a <= C

def project_box_hyperplane(v, y, c):
    """Exact Euclidean projection of v onto {0 <= a <= C, y'a = 0}, y in {+-1}."""
    # a(t) = clip(v - t*y, 0, C); f(t) = y'a(t) is piecewise linear, non-increasing
    breaks = np.unique(np.concatenate([(v * y), (v - c) * y]))
    grid = np.concatenate([[breaks[0] - 1.0], breaks, [breaks[-1] + 1.0]])
    clipped = np.clip(v[None, :] - grid[:, None] * y[None, :], 0.0, c)
    vals = clipped @ y
    assert vals[0] >= 0 >= vals[-1]
    if vals[0] == 0:
        return clipped[0]
    pos = int(np.argmax(vals <= 0))  # first grid point at or past the root
    t_hi, f_hi = grid[pos], vals[pos]
    t_lo, f_lo = grid[pos - 1], vals[pos - 1]
    t = t_lo if f_lo == f_hi else t_lo + (t_hi - t_lo) * f_lo / (f_lo - f_hi)
    return np.clip(v - t * y, 0.0, c)


def _fista(q, y, p, c, a, iterations, tol):
    lam_max = float(np.linalg.eigvalsh(q).max())
    step = 1.0 / max(lam_max, 1e-12)

    def objective(v):
        return 0.5 * float(v @ q @ v) + float(p @ v)

    z = a.copy()
    t_prev = 1.0
    obj_prev = objective(a)
    for it in range(iterations):
        grad = q @ z + p
        a_new = project_box_hyperplane(z - step * grad, y, c)
        obj_new = objective(a_new)
        if obj_new > obj_prev:  # momentum overshoot: restart at the last point
            z = a.copy()
            t_prev = 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_prev * t_prev))
        z = a_new + (t_prev - 1.0) / t_new * (a_new - a)
        a, t_prev, obj_prev = a_new, t_new, obj_new
        if it % 50 == 0:
            resid = project_box_hyperplane(a - step * (q @ a + p), y, c) - a
            if np.max(np.abs(resid)) < tol * max(1.0, c):
                break
    return a


def _polish_active_set(q, y, p, c, a):
    """Solve the equality-constrained QP on the free set guessed from ``a``.

    Returns the polished point when it is feasible and satisfies the KKT
    sign conditions (certifying optimality for this convex QP), else None.
    """
    scale = max(1.0, c)
    kappa = 1e-6 * scale
    lower = a <= kappa
    upper = a >= c - kappa
    free = ~(lower | upper)
    x = np.where(upper, c, 0.0)
    nu = None
    if free.any():
        yf = y[free]
        kkt = np.zeros((int(free.sum()) + 1, int(free.sum()) + 1))
        kkt[:-1, :-1] = q[np.ix_(free, free)]
        kkt[:-1, -1] = yf
        kkt[-1, :-1] = yf
        rhs = np.concatenate(
            [-p[free] - q[np.ix_(free, ~free)] @ x[~free], [-float(y[~free] @ x[~free])]]
        )
        sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        if np.max(np.abs(kkt @ sol - rhs)) > 1e-8 * scale:
            return None
        x[free] = sol[:-1]
        nu = float(sol[-1])
    if abs(float(y @ x)) > 1e-8 * scale or np.any(x < -1e-9) or np.any(x > c + 1e-9):
        return None
    grad = q @ x + p
    if nu is None:
        # feasible multiplier interval from the sign conditions below
        nu_lo, nu_hi = -np.inf, np.inf
        for i in range(x.size):
            bound = -y[i] * grad[i]
            if (lower[i] and y[i] > 0) or (upper[i] and y[i] < 0):
                nu_lo = max(nu_lo, bound)
            else:
                nu_hi = min(nu_hi, bound)
        if nu_lo > nu_hi + 1e-7 * scale:
            return None
        nu = float(np.clip(0.0, nu_lo, nu_hi))
    # KKT signs: grad + nu*y must be >= 0 at lower bounds, <= 0 at upper bounds
    slack = grad + nu * y
    if np.any(slack[lower] < -1e-7 * scale) or np.any(slack[upper] > 1e-7 * scale):
        return None
    return np.clip(x, 0.0, c)


def qp_solve(kmat, y, p, c, iterations=60000):
    """Dense QP oracle: FISTA warm start plus certified active-set polish."""
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    q = np.outer(y, y) * kmat

    def objective(v):
        return 0.5 * float(v @ q @ v) + float(p @ v)

    a = project_box_hyperplane(np.zeros_like(p), y, c)
    a = _fista(q, y, p, c, a, 2000, 1e-12)
    polished = _polish_active_set(q, y, p, c, a)
    if polished is not None and objective(polished) <= objective(a) + 1e-12:
        return polished, objective(polished)
    a = _fista(q, y, p, c, a, iterations, 1e-13)
    polished = _polish_active_set(q, y, p, c, a)
    if polished is not None and objective(polished) <= objective(a):
        return polished, objective(polished)
    return a, objective(a)


# ---------------------------------------------------------------------------
# naive agglomerative clustering recomputed from the original condensed input

def _square_from_condensed(d, n):
    m = np.zeros((n, n))
    pos = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = d[pos]
            pos += 1
    return m


def _cluster_dist_from_d(dmat, a, b, method):
    cross = dmat[np.ix_(a, b)]
    if method == "single":
        return float(cross.min())
    if method == "complete":
        return float(cross.max())
    if method == "average":
        return float(cross.mean())
    # ward from squared distances via the scatter identity
    na, nb = len(a), len(b)
    sa = dmat[np.ix_(a, a)].sum() / (2 * na) if na > 1 else 0.0
    sb = dmat[np.ix_(b, b)].sum() / (2 * nb) if nb > 1 else 0.0
    cent2 = cross.sum() / (na * nb) - sa / na - sb / nb
    return float(2.0 * na * nb / (na + nb) * cent2)


def naive_linkage(d, n, method):
    """O(n^3)-ish re-scan linkage computed from definitions each round.

    Returns merge records (id_a, id_b, height, size) with the same id scheme
    as the library (leaves 0..n-1, internal n..2n-2) and smallest-pair tie
    breaking.
    """
    dmat = _square_from_condensed(np.asarray(d, dtype=np.float64), n)
    clusters = {i: [i] for i in range(n)}
    merges = []
    next_id = n
    while len(clusters) > 1:
        best = None
        for a in sorted(clusters):
            for b in sorted(clusters):
                if a >= b:
                    continue
                h = _cluster_dist_from_d(dmat, clusters[a], clusters[b], method)
                if best is None or h < best[0] or (h == best[0] and (a, b) < best[1:]):
                    best = (h, a, b)
        h, a, b = best
        members = clusters.pop(a) + clusters.pop(b)
        clusters[next_id] = members
        merges.append((a, b, h, len(members)))
        next_id += 1
    return merges


# ---------------------------------------------------------------------------
# exhaustive DTW

def dtw_brute_force(x, y):
    """Minimal alignment cost over all monotone step-(1,0)/(0,1)/(1,1) paths."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, m = len(x), len(y)
    best = [np.inf]

    def walk(i, j, acc):
        acc = acc + abs(x[i] - y[j])
        if acc >= best[0]:
            return
        if i == n - 1 and j == m - 1:
            best[0] = acc
            return
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)

    walk(0, 0, 0.0)
    return best[0]


# ---------------------------------------------------------------------------
# miscellaneous small oracles

def normal_equations(x, y):
    """OLS with intercept via the textbook normal equations."""
    xa = np.hstack([x, np.ones((x.shape[0], 1))])
    coef = np.linalg.solve(xa.T @ xa, xa.T @ y)
    return coef[:-1], coef[-1]


def finite_difference_gradient(f, w, eps=1e-6):
    g = np.zeros_like(w)
    for i in range(w.size):
        up = w.copy()
        dn = w.copy()
        up[i] += eps
        dn[i] -= eps
        g[i] = (f(up) - f(dn)) / (2 * eps)
    return g


def knn_brute(x_train, y_train, query, k):
    d = np.sum((x_train - query) ** 2, axis=1)
    order = sorted(range(len(d)), key=lambda i: (d[i], i))[:k]
    labels = sorted(set(y_train))
    votes = {c: 0 for c in labels}
    for i in order:
        votes[y_train[i]] += 1
    return max(labels, key=lambda c: (votes[c], -labels.index(c)))


def enumerate_monotone_paths(n, m):
    """All monotone index paths from (0,0) to (n-1,m-1); test-size inputs only."""
    paths = []

    def walk(i, j, acc):
        acc = acc + [(i, j)]
        if (i, j) == (n - 1, m - 1):
            paths.append(acc)
            return
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)

    walk(0, 0, [])
    return paths
