"""Correlation distances, Ward agglomeration and pairing diagnostics.

Ward linkage is run on the correlation-distance matrix as though the
distances were Euclidean, updating with the square-root Lance-Williams form::

    d(k, i+j) = sqrt(((n_i + n_k) d(k,i)^2 + (n_j + n_k) d(k,j)^2 - n_k d(i,j)^2)
                     / (n_i + n_j + n_k))

Leaves have ids ``0..n-1`` and merge ``m`` creates cluster ``n + m``. The
closest pair is merged each step; distances equal within a relative
``1e-12`` count as ties, resolved by the lexicographically smallest
``(left_id, right_id)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .prep import DataError

TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValueError(f"matrix shape {d.shape} does not match {n} labels")
        if not np.all(np.isfinite(d)):
            raise ValueError("distance matrix has non-finite entries")
        if not np.allclose(d, d.T, rtol=0, atol=1e-12):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix has a nonzero diagonal")
        if np.any(d < 0):
            raise ValueError("distance matrix has negative entries")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    n: int
    merges: tuple[Merge, ...]
    labels: tuple = ()

    def to_dict(self) -> dict:
        return {
            "n_leaves": self.n,
            "labels": [str(lab) for lab in self.labels],
            "merges": [
                {"left_id": m.left, "right_id": m.right, "height": m.height, "size": m.size}
                for m in self.merges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, obj: dict) -> "Dendrogram":
        merges = tuple(Merge(int(m["left_id"]), int(m["right_id"]), float(m["height"]),
                             int(m["size"])) for m in obj["merges"])
        return cls(int(obj["n_leaves"]), merges, tuple(obj.get("labels", ())))

    def leaf_order(self) -> list[int]:
        """Leaves left to right as drawn."""
        if self.n == 1:
            return [0]
        children = {self.n + k: (m.left, m.right) for k, m in enumerate(self.merges)}
        order, stack = [], [self.n + len(self.merges) - 1]
        while stack:
            node = stack.pop()
            if node < self.n:
                order.append(node)
            else:
                left, right = children[node]
                stack.extend((right, left))
        return order

    def to_newick(self) -> str:
        """Newick tree; branch length = parent height minus child height."""
        heights = {i: 0.0 for i in range(self.n)}
        children = {}
        for k, m in enumerate(self.merges):
            heights[self.n + k] = m.height
            children[self.n + k] = (m.left, m.right)

        def name(i):
            lab = str(self.labels[i]) if self.labels else str(i)
            if any(c in lab for c in " ,:;()[]'"):
                lab = "'" + lab.replace("'", "''") + "'"
            return lab

        def render(node, parent_h):
            bl = repr(float(parent_h - heights[node]))
            if node < self.n:
                return f"{name(node)}:{bl}"
            left, right = children[node]
            h = heights[node]
            return f"({render(left, h)},{render(right, h)}):{bl}"

        if not self.merges:
            return f"{name(0)};"
        root = self.n + len(self.merges) - 1
        left, right = children[root]
        h = heights[root]
        return f"({render(left, h)},{render(right, h)});"


def correlation_distance(x, y) -> float:
    """One minus the Pearson correlation, in [0, 2]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least two samples for a correlation")
    xc, yc = x - x.mean(), y - y.mean()
    sx, sy = math.sqrt(float(xc @ xc)), math.sqrt(float(yc @ yc))
    if sx == 0 or sy == 0:
        raise DataError("zero variance, correlation distance undefined")
    r = float(xc @ yc) / (sx * sy)
    return min(2.0, max(0.0, 1.0 - r))


def distance_matrix(series) -> DistanceMatrix:
    """Pairwise correlation distances over ``(key, vector)`` pairs or a mapping."""
    items = list(series.items()) if isinstance(series, dict) else list(series)
    if len(items) < 2:
        raise ValueError("need at least two series")
    labels = [k for k, _ in items]
    vecs = [np.asarray(v, dtype=float) for _, v in items]
    if len({v.shape for v in vecs}) != 1:
        raise ValueError("series have different lengths")
    n = len(vecs)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = correlation_distance(vecs[i], vecs[j])
    return DistanceMatrix(tuple(labels), d)


def _as_matrix(dm) -> tuple[np.ndarray, tuple]:
    if isinstance(dm, DistanceMatrix):
        return dm.d, dm.labels
    d = np.asarray(dm, dtype=float)
    return DistanceMatrix(tuple(range(len(d))), d).d, ()


def ward_linkage(dm) -> Dendrogram:
    """Agglomerate with Ward's criterion via Lance-Williams updates."""
    d0, labels = _as_matrix(dm)
    n = len(d0)
    if n < 2:
        raise ValueError("need at least two items to cluster")
    dist: dict[tuple[int, int], float] = {
        (i, j): float(d0[i, j]) for i in range(n) for j in range(i + 1, n)
    }
    size = {i: 1 for i in range(n)}
    merges = []
    for step in range(n - 1):
        best = min(dist.values())
        tol = TIE_RTOL * max(best, 1e-300)
        i, j = min(pair for pair, v in dist.items() if v - best <= tol)
        dij = dist[(i, j)]
        new = n + step
        ni, nj = size.pop(i), size.pop(j)
        del dist[(i, j)]
        for k in list(size):
            dki = dist.pop((min(i, k), max(i, k)))
            dkj = dist.pop((min(j, k), max(j, k)))
            nk = size[k]
            val = ((ni + nk) * dki * dki + (nj + nk) * dkj * dkj - nk * dij * dij) / (ni + nj + nk)
            dist[(k, new)] = math.sqrt(max(val, 0.0))
        size[new] = ni + nj
        merges.append(Merge(i, j, dij, ni + nj))
    return Dendrogram(n, tuple(merges), labels)


def _leaf_sets(dend: Dendrogram, n_merges: int) -> dict[int, list[int]]:
    members = {i: [i] for i in range(dend.n)}
    for k, m in enumerate(dend.merges[:n_merges]):
        members[dend.n + k] = members.pop(m.left) + members.pop(m.right)
    return members


def cut(dend: Dendrogram, k: int) -> np.ndarray:
    """Flat labels after undoing the last ``k - 1`` merges.

    Labels are numbered by first appearance in leaf-index order.
    """
    if not 1 <= k <= dend.n:
        raise ValueError(f"k must be in 1..{dend.n}, got {k}")
    owner = np.empty(dend.n, dtype=int)
    for cid, leaves in _leaf_sets(dend, dend.n - k).items():
        owner[leaves] = cid
    relabel: dict[int, int] = {}
    return np.array([relabel.setdefault(c, len(relabel)) for c in owner])


def pairing_purity(dend: Dendrogram, site_of) -> float:
    """Share of sites whose two leaves merge with each other before anything else.

    ``site_of`` maps leaf index to site, as a mapping or a sequence.
    """
    sites = [site_of[i] for i in range(dend.n)]
    leaves_by_site: dict = {}
    for leaf, site in enumerate(sites):
        leaves_by_site.setdefault(site, []).append(leaf)
    bad = {s: len(v) for s, v in leaves_by_site.items() if len(v) != 2}
    if bad:
        raise ValueError(f"each site needs exactly two leaves; got {bad}")
    leaf_pairs = {(m.left, m.right) for m in dend.merges if m.right < dend.n}
    paired = sum(tuple(sorted(v)) in leaf_pairs for v in leaves_by_site.values())
    return paired / len(leaves_by_site)


@dataclass(frozen=True, eq=False)
class ClusterResult:
    variant: str
    matrix: DistanceMatrix
    dendrogram: Dendrogram
    purity: float

    @property
    def keys(self) -> tuple:
        return self.matrix.labels

    def city_cut(self) -> np.ndarray:
        n_sites = len({k[0] for k in self.keys})
        return cut(self.dendrogram, n_sites)

    def summary(self) -> dict:
        return {
            "variant": self.variant,
            "purity": self.purity,
            "k_city_cut_labels": [int(v) for v in self.city_cut()],
        }


def parse_variant(variant: str, level: int) -> tuple[str, object]:
    """Split ``"raw"``, ``"S2"``, ``"coeff:cD1"``, ``"coeff:cA3"`` into (kind, arg)."""
    v = variant.strip()
    if v == "raw":
        return "smooth", 0
    if v[:1] == "S" and v[1:].isdigit():
        l = int(v[1:])
        if not 1 <= l <= level:
            raise ValueError(f"variant {v} needs 1 <= l <= {level}")
        return "smooth", l
    if v.startswith("coeff:"):
        band = v[len("coeff:"):]
        if band == f"cA{level}":
            return "coeff", band
        if band.startswith("cD") and band[2:].isdigit() and 1 <= int(band[2:]) <= level:
            return "coeff", band
        raise ValueError(f"variant {v} is not a band of a level-{level} decomposition")
    raise ValueError(f"unknown variant {variant!r}")


def default_variants(level: int) -> list[str]:
    return ["raw"] + [f"S{l}" for l in range(1, level + 1)]


def transform_series(vec, variant: str, wavelet="db4", level: int = 3,
                     mode: str = "periodization") -> np.ndarray:
    """The vector actually clustered for ``variant``."""
    from .progressive import smooth
    from .prep import zscore
    from .wavelets import wavedec

    kind, arg = parse_variant(variant, level)
    if kind == "smooth":
        if arg == 0:
            return np.asarray(vec, dtype=float)
        return smooth(vec, wavelet, level, arg, mode).signal
    return zscore(wavedec(vec, wavelet, level, mode).bands()[arg])


def cluster_run(series, variant: str = "raw", wavelet="db4", level: int = 3,
                mode: str = "periodization") -> ClusterResult:
    """Prepare, transform, then Ward-cluster a set of paired series.

    ``series`` is a list of imputed :class:`~wavecluster.prep.TimeSeries` or
    ``((site, sample_type), vector)`` pairs.
    """
    from .prep import TimeSeries, prepare_for_clustering

    items = [(s.key, s.values) if isinstance(s, TimeSeries) else (tuple(s[0]), s[1])
             for s in series]
    vectors = [(key, transform_series(prepare_for_clustering(v), variant, wavelet, level, mode))
               for key, v in items]
    dm = distance_matrix(vectors)
    dend = ward_linkage(dm)
    purity = pairing_purity(dend, [key[0] for key, _ in items])
    return ClusterResult(variant, dm, dend, purity)
