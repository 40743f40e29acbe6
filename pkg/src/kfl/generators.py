"""Seeded random inputs: frames, layered cluster towers, class-constrained
towers, formulas, models, partitions.

Uniform random digraphs almost never have interesting cluster structure, so
the tower generators build frames cluster-first: pick a layered skeleton,
fill each cluster, then add full cross edges along the transitively closed
skeleton.  That last step is what keeps the constructions inside their frame
class (any cross pair is then reachable at every path length, because every
cluster is serial).
"""

from .formula import And, Bot, Box, Dia, Iff, Imp, Not, Or, Top, Var
from .frame import Frame, Relation, bits
from .model import Model
from .oracle import ClassSpec
from .partition import Partition

__all__ = [
    "random_frame", "random_partition", "random_refinement", "random_formula",
    "random_model", "layered_frame", "tower_frame", "repair_m_transitive",
]


def random_frame(rng, n: int, density: float = 0.25) -> Frame:
    rows = []
    for _ in range(n):
        row = 0
        for v in range(n):
            if rng.random() < density:
                row |= 1 << v
        rows.append(row)
    return Frame.from_relation(Relation(n, rows))


def random_partition(rng, n: int, max_blocks: int = 0) -> Partition:
    k = rng.randint(1, max_blocks or n)
    masks = [0] * k
    for x in range(n):
        masks[rng.randrange(k)] |= 1 << x
    return Partition.from_masks(n, [m for m in masks if m])


def random_refinement(rng, P: Partition) -> Partition:
    """Split each block of P into random sub-blocks."""
    out = []
    for b in P.blocks:
        pts = list(bits(b))
        k = rng.randint(1, len(pts))
        sub = [0] * k
        for x in pts:
            sub[rng.randrange(k)] |= 1 << x
        out.extend(m for m in sub if m)
    return Partition.from_masks(P.n, out)


def random_formula(rng, max_var: int = 3, size: int = 8):
    """A random formula with at most `size` connectives and variables."""
    if size <= 1:
        r = rng.random()
        if r < 0.8:
            return Var(rng.randint(1, max_var))
        return Top() if r < 0.9 else Bot()
    if size == 2 or rng.random() < 0.5:
        sub = random_formula(rng, max_var, size - 1)
        return rng.choice((Not, Dia, Box))(sub)
    ls = rng.randint(1, size - 2)
    left = random_formula(rng, max_var, ls)
    right = random_formula(rng, max_var, size - 1 - ls)
    return rng.choice((And, Or, Imp, Iff))(left, right)


def random_model(rng, F: Frame, max_var: int = 3) -> Model:
    full = (1 << F.n) - 1
    return Model(F, {i: rng.randint(0, full) for i in range(1, max_var + 1)})


def _closed_level_order(rng, nc: int, max_height: int, density: float = 0.5):
    """A transitively closed strict order on nc cluster slots, chains capped
    by max_height because edges only descend between distinct levels."""
    levels = [rng.randint(1, max_height) for _ in range(nc)]
    below = [[False] * nc for _ in range(nc)]
    for i in range(nc):
        for j in range(nc):
            if levels[i] > levels[j] and rng.random() < density:
                below[i][j] = True
    for k in range(nc):
        for i in range(nc):
            if below[i][k]:
                for j in range(nc):
                    if below[k][j]:
                        below[i][j] = True
    return below


def _cycle_groups(rng, size: int, c: int):
    """Split range(size) into c consecutive nonempty groups."""
    cuts = sorted(rng.sample(range(1, size), c - 1)) if c > 1 else []
    bounds = [0] + cuts + [size]
    return [range(bounds[i], bounds[i + 1]) for i in range(c)]


def _assemble_tower(rng, sizes, internals, below) -> Frame:
    """Clusters with given internal rows, full cross edges along `below`."""
    offsets = []
    n = 0
    for s in sizes:
        offsets.append(n)
        n += s
    rows = [0] * n
    masks = []
    for ci, s in enumerate(sizes):
        off = offsets[ci]
        for p, row in enumerate(internals[ci]):
            rows[off + p] = row << off
        masks.append(((1 << s) - 1) << off)
    for i in range(len(sizes)):
        for j in range(len(sizes)):
            if below[i][j]:
                for u in bits(masks[i]):
                    rows[u] |= masks[j]
    return Frame.from_relation(Relation(n, rows))


def _thickened_cycle(rng, size: int, c: int):
    """Internal rows of a cluster: groups arranged in a c-cycle, every point
    of one group pointing to every point of the next.  Strongly connected and
    serial; all loop lengths are multiples of c."""
    groups = _cycle_groups(rng, size, c)
    rows = [0] * size
    for t, g in enumerate(groups):
        tgt = 0
        for p in groups[(t + 1) % c]:
            tgt |= 1 << p
        for p in g:
            rows[p] = tgt
    return rows


def _connected_cluster(rng, size: int, density: float = 0.3):
    """Strongly connected internal rows: a random Hamiltonian cycle plus
    random extra edges."""
    perm = list(range(size))
    rng.shuffle(perm)
    rows = [0] * size
    for i, p in enumerate(perm):
        rows[p] |= 1 << perm[(i + 1) % size]
    for u in range(size):
        for v in range(size):
            if rng.random() < density:
                rows[u] |= 1 << v
    return rows


def layered_frame(rng, max_clusters: int = 4, max_cluster_size: int = 4,
                  max_height: int = 3) -> Frame:
    """A frame with guaranteed cluster structure but unconstrained class."""
    nc = rng.randint(1, max_clusters)
    below = _closed_level_order(rng, nc, max_height)
    sizes, internals = [], []
    for _ in range(nc):
        s = rng.randint(1, max_cluster_size)
        sizes.append(s)
        if s == 1 and rng.random() < 0.4:
            internals.append([0])  # an irreflexive singleton cluster
        else:
            internals.append(_connected_cluster(rng, s))
    return _assemble_tower(rng, sizes, internals, below)


def tower_frame(rng, spec: ClassSpec, max_clusters: int = 4,
                max_cluster_size: int = 12, max_height: int = 3) -> Frame:
    """A random frame guaranteed to lie in the given mn or pretrans class.

    Clusters are thickened cycles; the cycle length divides n-m in the mn
    case and stays <= m in the pretransitive case, which is exactly what the
    class condition needs once cross edges are full.
    """
    if spec.kind == "mn":
        if spec.m < 1 or spec.n <= spec.m:
            raise ValueError("tower generator needs n > m >= 1")
        k = spec.n - spec.m
        allowed = [c for c in range(1, k + 1) if k % c == 0]
    elif spec.kind == "pretrans":
        if spec.m == 0:
            # 0-transitive means R inside the identity
            n = rng.randint(1, max_clusters * 2)
            rows = [(1 << u) * rng.randint(0, 1) for u in range(n)]
            return Frame.from_relation(Relation(n, rows))
        allowed = list(range(1, spec.m + 1))
    else:
        raise ValueError("tower generator needs an mn or pretrans class")
    nc = rng.randint(1, max_clusters)
    below = _closed_level_order(rng, nc, max_height)
    sizes, internals = [], []
    for _ in range(nc):
        c = rng.choice([c for c in allowed if c <= max_cluster_size])
        s = rng.randint(c, max_cluster_size)
        sizes.append(s)
        internals.append(_thickened_cycle(rng, s, c))
    return _assemble_tower(rng, sizes, internals, below)


def repair_m_transitive(F: Frame, m: int) -> Frame:
    """Saturate the relation until it is m-transitive (adds edges only)."""
    if m < 0:
        raise ValueError("need m >= 0")
    rel = F.rel
    while True:
        hi = rel.power(m + 1)
        lo = rel.bounded_union(m)
        extra = [h & ~l for h, l in zip(hi.rows, lo.rows)]
        if not any(extra):
            return Frame.from_relation(rel)
        rel = Relation(rel.n, [r | e for r, e in zip(rel.rows, extra)])
