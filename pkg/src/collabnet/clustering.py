"""k-means (Lloyd) with k-means++ seeding and seeded restarts.

Points are two-dimensional. Every run works on a canonical ordering of the
input (sorted by coordinates, then country label), and restart ``i`` draws
from a random stream derived only from ``(seed, i)``, so the result does not
depend on input order or on whether restarts run concurrently.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyPointList,
    InvalidK,
    InvalidParameter,
    NoCentroids,
    TooFewDistinctPoints,
)

DEFAULT_K = 3
DEFAULT_RESTARTS = 10
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class FeaturePoint:
    country: str
    coords: tuple[float, float]

    def __post_init__(self):
        if not np.all(np.isfinite(self.coords)):
            raise ValueError(f"non-finite coordinates for {self.country!r}: {self.coords}")


@dataclass(frozen=True)
class StandardizationStats:
    mean: tuple[float, float]
    sd: tuple[float, float]

    def apply(self, raw) -> np.ndarray:
        raw = np.asarray(raw, dtype=float)
        mean = np.asarray(self.mean)
        sd = np.asarray(self.sd)
        safe = np.where(sd > 0, sd, 1.0)
        return np.where(sd > 0, (raw - mean) / safe, 0.0)


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: dict[str, int]
    wcss: float
    iterations: int
    seed: int
    wcss_history: list[float] = field(default_factory=list)
    restart: int = 0

    def members(self, cluster: int) -> list[str]:
        return sorted(c for c, j in self.assignments.items() if j == cluster)

    def partition(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(self.members(j)) for j in range(self.k))

    def summary(self) -> str:
        return f"k={self.k} wcss={self.wcss:.6f} iterations={self.iterations}"


def standardize(points) -> tuple[np.ndarray, StandardizationStats]:
    """z-score each axis with the population sd; zero-variance axes map to 0."""
    raw = np.asarray(points, dtype=float)
    if raw.size == 0:
        raise EmptyPointList("nothing to standardize")
    raw = raw.reshape(len(raw), -1)
    stats = StandardizationStats(
        mean=tuple(float(v) for v in raw.mean(axis=0)),
        sd=tuple(float(v) for v in raw.std(axis=0)),
    )
    return stats.apply(raw), stats


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def assign(points, centroids) -> np.ndarray:
    """Index of the nearest centroid for each point (ties -> lowest index)."""
    C = np.asarray(centroids, dtype=float)
    if C.size == 0:
        raise NoCentroids("no centroids to assign to")
    X = np.asarray(points, dtype=float).reshape(-1, C.shape[1])
    return np.argmin(_sq_dists(X, C), axis=1)


def wcss(points, centroids, labels) -> float:
    X = np.asarray(points, dtype=float)
    C = np.asarray(centroids, dtype=float)
    d = X - C[np.asarray(labels)]
    return float(np.einsum("ij,ij->", d, d))


def n_distinct(points) -> int:
    X = np.asarray(points, dtype=float)
    return len(np.unique(X.reshape(len(X), -1), axis=0))


def kmeans_pp_seed(points, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: uniform first pick, then D^2-weighted picks."""
    X = np.asarray(points, dtype=float)
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    if n_distinct(X) < k:
        raise TooFewDistinctPoints(f"need {k} distinct points, have {n_distinct(X)}")
    n = len(X)
    chosen = [int(rng.integers(n))]
    d2 = _sq_dists(X, X[chosen[0]][None, :])[:, 0]
    for _ in range(1, k):
        cum = np.cumsum(d2)
        # side="right" never lands on a zero-weight (already covered) point
        idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        idx = min(idx, n - 1)
        chosen.append(idx)
        d2 = np.minimum(d2, _sq_dists(X, X[idx][None, :])[:, 0])
    return X[chosen].copy()


def _repair_empty(X, C, labels, k):
    """Move the point farthest from its centroid into each empty cluster."""
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        dist = np.einsum("ij,ij->i", X - C[labels], X - C[labels])
        dist[counts[labels] < 2] = -1.0
        p = int(np.argmax(dist))
        counts[labels[p]] -= 1
        labels[p] = j
        counts[j] = 1
        C[j] = X[p]
    return labels


def _update(X, labels, k):
    C = np.zeros((k, X.shape[1]))
    np.add.at(C, labels, X)
    return C / np.bincount(labels, minlength=k)[:, None]


def lloyd(X: np.ndarray, centroids: np.ndarray, tol: float, max_iter: int):
    """Run Lloyd iterations from ``centroids``.

    Stops when assignments stop changing (an exact fixed point), when the
    relative WCSS improvement drops below ``tol``, or after ``max_iter``
    iterations. Returns ``(centroids, labels, wcss_history)``.
    """
    k = len(centroids)
    C = np.array(centroids, dtype=float)
    labels = None
    history: list[float] = []
    for _ in range(max_iter):
        new = assign(X, C)
        if labels is not None and np.array_equal(new, labels):
            break
        new = _repair_empty(X, C, new, k)
        labels = new
        C = _update(X, labels, k)
        w = wcss(X, C, labels)
        history.append(w)
        if len(history) > 1:
            prev = history[-2]
            if prev == 0.0 or (prev - w) / prev < tol:
                break
    return C, labels, history


def transfer_refine(X: np.ndarray, labels: np.ndarray, k: int) -> tuple[np.ndarray, bool]:
    """Single-point transfers (Hartigan) from a Lloyd solution.

    Moving point ``x`` from cluster ``a`` to ``b`` changes the WCSS by
    ``n_b/(n_b+1)*|x-c_b|^2 - n_a/(n_a-1)*|x-c_a|^2``; apply the best strictly
    improving move per point until none is left. Every Lloyd fixed point that
    admits such a move is escaped, and the result is again a Lloyd fixed point.
    """
    labels = labels.copy()
    C = _update(X, labels, k)
    cnt = np.bincount(labels, minlength=k).astype(float)
    moved_any = False
    moved = True
    while moved:
        moved = False
        for i in range(len(X)):
            a = labels[i]
            if cnt[a] < 2:
                continue
            d = np.einsum("ij,ij->i", X[i] - C, X[i] - C)
            cost = cnt / (cnt + 1.0) * d
            cost[a] = cnt[a] / (cnt[a] - 1.0) * d[a]
            b = int(np.argmin(cost))
            # relative margin stops cycling on rounding noise
            if b != a and cost[b] < cost[a] * (1.0 - 1e-12):
                C[a] = (C[a] * cnt[a] - X[i]) / (cnt[a] - 1.0)
                C[b] = (C[b] * cnt[b] + X[i]) / (cnt[b] + 1.0)
                cnt[a] -= 1.0
                cnt[b] += 1.0
                labels[i] = b
                moved = moved_any = True
    return labels, moved_any


def _restart(X, start, tol, max_iter):
    C, labels, history = lloyd(X, start, tol, max_iter)
    refined, moved = transfer_refine(X, labels, len(start))
    if moved:
        C, labels, more = lloyd(X, _update(X, refined, len(start)), tol, max_iter)
        history = history + more
    return C, labels, history


def kmeans(
    points: Sequence[FeaturePoint],
    k: int = DEFAULT_K,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: int = 1,
) -> ClusterModel:
    """Best-of-``restarts`` k-means; ties in WCSS go to the lowest restart.

    Each restart seeds with k-means++, runs Lloyd to convergence, then
    polishes with :func:`transfer_refine` (and Lloyd again if it moved
    anything).
    """
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    if restarts < 1 or max_iter < 1 or not tol > 0:
        raise InvalidParameter("restarts and max_iter must be >= 1 and tol > 0")
    if not points:
        raise EmptyPointList("no points to cluster")

    ordered = sorted(points, key=lambda p: (p.coords[0], p.coords[1], p.country))
    X = np.array([p.coords for p in ordered], dtype=float)
    if n_distinct(X) < k:
        raise TooFewDistinctPoints(f"k={k} but only {n_distinct(X)} distinct points")

    streams = np.random.SeedSequence(seed).spawn(restarts)

    def run(r):
        start = kmeans_pp_seed(X, k, np.random.default_rng(streams[r]))
        return _restart(X, start, tol, max_iter)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(restarts)))
    else:
        runs = [run(r) for r in range(restarts)]

    best = 0
    for r in range(1, restarts):
        if runs[r][2][-1] < runs[best][2][-1]:
            best = r
    C, labels, history = runs[best]
    return ClusterModel(
        k=k,
        centroids=C,
        assignments={p.country: int(j) for p, j in zip(ordered, labels)},
        wcss=history[-1],
        iterations=len(history),
        seed=seed,
        wcss_history=history,
        restart=best,
    )


def feature_points(countries: Sequence[str], coords) -> list[FeaturePoint]:
    return [FeaturePoint(c, (float(x), float(y))) for c, (x, y) in zip(countries, np.asarray(coords))]


def raw_centroids(model: ClusterModel, raw: dict[str, tuple[float, float]]) -> np.ndarray:
    """Cluster means in the original (unstandardized) units.

    Computed from the members' raw coordinates rather than by inverting the
    z-score, so a cluster whose members share a value reproduces it exactly.
    """
    out = np.zeros((model.k, 2))
    for j in range(model.k):
        out[j] = np.mean([raw[c] for c in model.members(j)], axis=0)
    return out
