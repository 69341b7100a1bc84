"""k-means and agglomerative hierarchical clustering.

``linkage`` consumes a condensed distance vector (upper triangle, row major)
and merges greedily with Lance-Williams updates; ``linkage_memory_saving``
runs the nearest-neighbor-chain algorithm computing cluster distances on
demand from the data, using O(n) memory beyond the input, and canonically
reorders its merges so the result matches ``linkage``.

Distance conventions: single/complete/average operate on Euclidean
distances; ward operates on squared Euclidean distances and reports heights
as the Lance-Williams values in those squared units. ``pdist`` produces
either layout.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix
from .errors import InvalidParameter, ShapeMismatch
from .linear import _frozen
from .rng import make_rng

METHODS = ("single", "complete", "average", "ward")


@dataclass(frozen=True)
class KmeansResult:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int
    inertia_history: tuple


def _assign(x, centroids):
    d2 = (
        np.sum(x * x, axis=1)[:, None]
        - 2.0 * x @ centroids.T
        + np.sum(centroids * centroids, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return np.argmin(d2, axis=1), d2


def kmeans(x, k, seed, max_iter=300, tol=1e-9):
    """Lloyd iterations from k distinct seeded starting points.

    Empty clusters are re-seeded to the sample farthest from its centroid.
    Stops when the largest centroid shift falls below ``tol``.
    """
    x = as_sample_matrix(x)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise InvalidParameter(f"k must be in [1, {n}], got {k}")
    gen = make_rng(seed, "kmeans")
    centroids = x[np.sort(gen.choice(n, size=k, replace=False))].copy()
    assignments, d2 = _assign(x, centroids)
    rows = np.arange(n)
    history = [float(d2[rows, assignments].sum())]
    iterations = 0
    for iterations in range(1, int(max_iter) + 1):
        nearest = d2[rows, assignments]
        new_centroids = centroids.copy()
        for c in range(k):
            members = assignments == c
            if members.any():
                new_centroids[c] = x[members].mean(axis=0)
            else:
                new_centroids[c] = x[np.argmax(nearest)]
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        assignments, d2 = _assign(x, centroids)
        history.append(float(d2[rows, assignments].sum()))
        if shift < tol:
            break
    return KmeansResult(
        _frozen(centroids), _frozen(assignments.astype(np.int64)), history[-1],
        iterations, tuple(history),
    )


def pdist(x, squared=False):
    """Condensed pairwise Euclidean distances (row-major upper triangle)."""
    x = as_sample_matrix(x)
    n = x.shape[0]
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        diff = x[i + 1 :] - x[i]
        d2 = np.sum(diff * diff, axis=1)
        out[pos : pos + n - 1 - i] = d2 if squared else np.sqrt(d2)
        pos += n - 1 - i
    return out


@dataclass(frozen=True)
class Dendrogram:
    """n-1 merge records (id_a, id_b, height, size); leaves 0..n-1, internal n..2n-2."""

    n_leaves: int
    merges: tuple  # of (id_a, id_b, height, size) with id_a < id_b

    def heights(self):
        return np.asarray([m[2] for m in self.merges])


def _condensed_n(d):
    m = d.shape[0]
    n = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    if n * (n - 1) // 2 != m:
        raise ShapeMismatch(f"condensed vector of length {m} fits no n")
    return n


def _lance_williams(method, d_ac, d_bc, d_ab, na, nb, nc):
    if method == "single":
        return min(d_ac, d_bc)
    if method == "complete":
        return max(d_ac, d_bc)
    if method == "average":
        return (na * d_ac + nb * d_bc) / (na + nb)
    # ward on squared distances
    t = na + nb + nc
    return ((na + nc) * d_ac + (nb + nc) * d_bc - nc * d_ab) / t


def linkage(d, method):
    """Greedy agglomerative clustering of a condensed distance vector.

    Ties on the minimal distance break toward the smallest (id_a, id_b) pair.
    """
    if method not in METHODS:
        raise InvalidParameter(f"unknown linkage method {method!r}")
    d = np.asarray(d, dtype=np.float64).ravel()
    n = _condensed_n(d)
    # dist[a][b]: current distance between active clusters a < b (by id)
    dist = {}
    pos = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            dist[(i, j)] = float(d[pos])
            pos += 1
    active = set(range(n))
    sizes = {i: 1 for i in range(n)}
    merges = []
    next_id = n
    for _ in range(n - 1):
        best = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        (a, b), height = best
        new_size = sizes[a] + sizes[b]
        merges.append((a, b, height, new_size))
        active.discard(a)
        active.discard(b)
        d_ab = dist.pop((a, b))
        for c in sorted(active):
            d_ac = dist.pop((min(a, c), max(a, c)))
            d_bc = dist.pop((min(b, c), max(b, c)))
            dist[(c, next_id)] = _lance_williams(
                method, d_ac, d_bc, d_ab, sizes[a], sizes[b], sizes[c]
            )
        sizes[next_id] = new_size
        active.add(next_id)
        next_id += 1
    return Dendrogram(n, tuple(merges))


def _cluster_distance(method, x, members_a, members_b, cent_a, cent_b):
    if method == "ward":
        na, nb = len(members_a), len(members_b)
        diff = cent_a - cent_b
        return 2.0 * na * nb / (na + nb) * float(diff @ diff)
    xa = x[members_a]
    xb = x[members_b]
    d2 = (
        np.sum(xa * xa, axis=1)[:, None]
        - 2.0 * xa @ xb.T
        + np.sum(xb * xb, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    dmat = np.sqrt(d2)
    if method == "single":
        return float(dmat.min())
    if method == "complete":
        return float(dmat.max())
    return float(dmat.mean())


def linkage_memory_saving(x, method):
    """Nearest-neighbor-chain clustering with distances computed on demand.

    Produces the same dendrogram as ``linkage`` on the matching condensed
    input (Euclidean distances, squared for ward) up to the canonical
    height-sorted ordering of merges.
    """
    if method not in METHODS:
        raise InvalidParameter(f"unknown linkage method {method!r}")
    x = as_sample_matrix(x)
    n = x.shape[0]
    members = {i: [i] for i in range(n)}
    cents = {i: x[i].copy() for i in range(n)}
    raw_merges = []  # (rep_a, rep_b, height) with reps = current cluster keys
    chain = []
    while len(members) > 1:
        if not chain:
            chain.append(min(members))
        a = chain[-1]
        # nearest active neighbor of a, smallest key on ties
        best_key, best_d = None, np.inf
        for b in sorted(members):
            if b == a:
                continue
            dd = _cluster_distance(method, x, members[a], members[b], cents[a], cents[b])
            if dd < best_d:
                best_key, best_d = b, dd
        if len(chain) >= 2 and best_key == chain[-2]:
            b = chain.pop()
            a = chain.pop()
            lo, hi = min(a, b), max(a, b)
            raw_merges.append((lo, hi, best_d))
            merged = members.pop(lo) + members.pop(hi)
            cent = x[merged].mean(axis=0)
            key = lo  # reuse the smaller key for the merged cluster
            members[key] = merged
            cents[key] = cent
            cents.pop(hi, None)
        else:
            chain.append(best_key)
    return _canonicalize(n, raw_merges)


def _canonicalize(n, raw_merges):
    """Sort merges by height and relabel clusters 0..2n-2 as linkage does."""
    order = sorted(range(len(raw_merges)), key=lambda i: (raw_merges[i][2], i))
    parent = list(range(n))
    label = {i: i for i in range(n)}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # reconstruct membership by replaying in height order; raw keys are leaf
    # anchors, so map each anchor to its current root's label
    merges = []
    sizes = {i: 1 for i in range(n)}
    next_id = n
    for t, oi in enumerate(order):
        lo, hi, height = raw_merges[oi]
        ra, rb = find(lo), find(hi)
        la, lb = label[ra], label[rb]
        a, b = (la, lb) if la < lb else (lb, la)
        size = sizes[la] + sizes[lb]
        parent[rb] = ra
        label[ra] = next_id
        sizes[next_id] = size
        merges.append((a, b, height, size))
        next_id += 1
    return Dendrogram(n, tuple(merges))


def cut(dendrogram, k):
    """Cluster assignments after undoing the last k-1 merges.

    Components are labeled 0..k-1 in order of their smallest contained leaf.
    """
    n = dendrogram.n_leaves
    if not 1 <= k <= n:
        raise InvalidParameter(f"k must be in [1, {n}], got {k}")
    parent = list(range(2 * n - 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for t, (a, b, _h, _s) in enumerate(dendrogram.merges[: n - k]):
        node = n + t
        parent[find(a)] = node
        parent[find(b)] = node
    roots = {}
    assignments = np.empty(n, dtype=np.int64)
    for leaf in range(n):
        r = find(leaf)
        if r not in roots:
            roots[r] = len(roots)  # leaves scanned ascending: label by smallest leaf
        assignments[leaf] = roots[r]
    return _frozen(assignments)
