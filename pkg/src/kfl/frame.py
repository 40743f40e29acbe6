"""Finite Kripke frames: relation algebra, clusters, skeleton, height.

Point sets are Python ints used as bitmasks over points 0..n-1; a relation
stores one successor mask per point.
"""

from dataclasses import dataclass

from . import _kernel

__all__ = [
    "bits", "mask_of", "Relation", "Frame", "ClusterDecomposition",
    "pretransitivity_index", "is_m_transitive", "is_mn_frame",
    "cluster_decomposition", "generated_subframe", "restriction",
]


def bits(mask):
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


class Relation:
    """Binary relation on points 0..n-1 stored as successor bit rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n, rows):
        if n < 0:
            raise ValueError("negative point count")
        rows = tuple(rows)
        if len(rows) != n:
            raise ValueError("expected %d rows, got %d" % (n, len(rows)))
        full = (1 << n) - 1
        for r in rows:
            if r & ~full:
                raise ValueError("row exceeds point range")
        self.n = n
        self.rows = rows

    @classmethod
    def from_pairs(cls, n, pairs):
        rows = [0] * n
        for u, v in pairs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("pair (%r, %r) out of range" % (u, v))
            rows[u] |= 1 << v
        return cls(n, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, [1 << u for u in range(n)])

    @classmethod
    def empty(cls, n):
        return cls(n, [0] * n)

    def pairs(self):
        return tuple((u, v) for u in range(self.n) for v in bits(self.rows[u]))

    def has(self, u, v) -> bool:
        return bool(self.rows[u] >> v & 1)

    def compose(self, other):
        if self.n != other.n:
            raise ValueError("mismatched point counts")
        return Relation(self.n, _kernel.compose_rows(self.rows, other.rows, self.n))

    def union(self, other):
        if self.n != other.n:
            raise ValueError("mismatched point counts")
        return Relation(self.n, [a | b for a, b in zip(self.rows, other.rows)])

    def power(self, i):
        if i < 0:
            raise ValueError("negative power")
        acc = Relation.identity(self.n)
        for _ in range(i):
            acc = acc.compose(self)
        return acc

    def bounded_union(self, m):
        """Union of powers 0..m."""
        if m < 0:
            raise ValueError("negative bound")
        acc = Relation.identity(self.n)
        p = acc
        for _ in range(m):
            p = p.compose(self)
            acc = acc.union(p)
        return acc

    def rt_closure(self):
        """Reflexive-transitive closure."""
        return Relation(self.n, _kernel.closure_rows(self.rows, self.n))

    def transpose(self):
        rows = [0] * self.n
        for u in range(self.n):
            for v in bits(self.rows[u]):
                rows[v] |= 1 << u
        return Relation(self.n, rows)

    def is_subset(self, other) -> bool:
        if self.n != other.n:
            raise ValueError("mismatched point counts")
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __eq__(self, other):
        return isinstance(other, Relation) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return "Relation(%d, pairs=%r)" % (self.n, list(self.pairs()))


class Frame:
    """Kripke frame: n points and an accessibility relation."""

    __slots__ = ("n", "rel")

    def __init__(self, n, edges=()):
        if n < 1:
            raise ValueError("a frame needs at least one point")
        self.n = n
        self.rel = Relation.from_pairs(n, edges)

    @classmethod
    def from_relation(cls, rel):
        f = cls.__new__(cls)
        if rel.n < 1:
            raise ValueError("a frame needs at least one point")
        f.n = rel.n
        f.rel = rel
        return f

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValueError("frame document must be a JSON object")
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError("'n' must be a positive integer")
        edges = data.get("edges")
        if not isinstance(edges, list):
            raise ValueError("'edges' must be a list of pairs")
        seen = set()
        for e in edges:
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
                raise ValueError("edge %r is not a pair of integers" % (e,))
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("edge %r out of range" % (e,))
            if (u, v) in seen:
                raise ValueError("duplicate edge %r" % (e,))
            seen.add((u, v))
        return cls(n, seen)

    def to_dict(self):
        return {"n": self.n, "edges": [[u, v] for u, v in self.rel.pairs()]}

    def successors(self, u) -> int:
        return self.rel.rows[u]

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rel.rows)

    def __eq__(self, other):
        return isinstance(other, Frame) and self.n == other.n and self.rel == other.rel

    def __hash__(self):
        return hash((self.n, self.rel))

    def __repr__(self):
        return "Frame(%d, edges=%r)" % (self.n, list(self.rel.pairs()))


def pretransitivity_index(F: Frame) -> int:
    """Least m with R^{m+1} included in the union of powers 0..m.

    Found as the first fixpoint of the bounded-union chain: once
    bounded_union(R, m+1) = bounded_union(R, m), no new pairs ever appear.
    """
    rel = F.rel
    acc = Relation.identity(F.n)
    p = acc
    m = 0
    while True:
        p = p.compose(rel)
        nxt = acc.union(p)
        if nxt == acc:
            return m
        acc = nxt
        m += 1


def is_m_transitive(F: Frame, m: int) -> bool:
    """R^{m+1} included in the union of powers 0..m."""
    return F.rel.power(m + 1).is_subset(F.rel.bounded_union(m))


def is_mn_frame(F: Frame, m: int, n: int) -> bool:
    """R^n included in R^m."""
    return F.rel.power(n).is_subset(F.rel.power(m))


@dataclass(frozen=True)
class ClusterDecomposition:
    """Clusters (mutual-reachability classes), their partial order, and depths."""

    clusters: "Partition"
    skeleton: Relation  # reflexive partial order on cluster indices
    depth: tuple  # per point; depth 1 = final clusters
    height: int

    def cluster_of(self, x) -> int:
        return self.clusters.block_of[x]

    def layer_mask(self, i) -> int:
        """Points of depth exactly i."""
        return mask_of(x for x, d in enumerate(self.depth) if d == i)

    def upper_mask(self, i) -> int:
        """Points of depth strictly below i."""
        return mask_of(x for x, d in enumerate(self.depth) if d < i)


def cluster_decomposition(F: Frame) -> ClusterDecomposition:
    from .partition import Partition  # deferred: partition imports this module

    n = F.n
    closure = F.rel.rt_closure()
    tclosure = closure.transpose()
    block_masks = []
    assigned = 0
    for u in range(n):
        if assigned >> u & 1:
            continue
        c = closure.rows[u] & tclosure.rows[u]
        block_masks.append(c)
        assigned |= c
    clusters = Partition.from_masks(n, block_masks)
    c = len(clusters.blocks)
    reps = [(b & -b).bit_length() - 1 for b in clusters.blocks]
    skel_rows = []
    for i in range(c):
        row = 0
        for j in range(c):
            if closure.rows[reps[i]] & clusters.blocks[j]:
                row |= 1 << j
        skel_rows.append(row)
    skeleton = Relation(c, skel_rows)
    # longest chain above each cluster; successors have strictly smaller
    # reachable sets, so increasing popcount order is a valid processing order
    cdepth = [0] * c
    for i in sorted(range(c), key=lambda i: skel_rows[i].bit_count()):
        best = 0
        for j in bits(skel_rows[i]):
            if j != i and cdepth[j] > best:
                best = cdepth[j]
        cdepth[i] = best + 1
    depth = tuple(cdepth[clusters.block_of[x]] for x in range(n))
    return ClusterDecomposition(clusters, skeleton, depth, max(cdepth))


def restriction(F: Frame, V):
    """Subframe on the points V; returns (frame, map new index -> old point)."""
    pts = sorted(set(V))
    if not pts:
        raise ValueError("restriction to an empty point set")
    if pts[0] < 0 or pts[-1] >= F.n:
        raise ValueError("point out of range")
    index = {p: i for i, p in enumerate(pts)}
    rows = []
    for p in pts:
        row = 0
        for q in bits(F.rel.rows[p]):
            if q in index:
                row |= 1 << index[q]
        rows.append(row)
    return Frame.from_relation(Relation(len(pts), rows)), tuple(pts)


def generated_subframe(F: Frame, x: int):
    """Restriction to the closure cone of x; returns (frame, point map)."""
    if not (0 <= x < F.n):
        raise ValueError("point %r out of range" % (x,))
    cone = F.rel.rt_closure().rows[x]
    return restriction(F, bits(cone))
