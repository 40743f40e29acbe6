"""Shared test helpers: independent brute-force oracles and hypothesis strategies.

The oracles here work on explicit pair sets / adjacency dicts, deliberately
avoiding the bitmask code paths they are used to check.
"""

from hypothesis import strategies as st

from kfl.formula import And, Bot, Box, Dia, Iff, Imp, Not, Or, Top, Var
from kfl.frame import Frame
from kfl.model import Model
from kfl.partition import Partition


def compose_pairs(p1, p2):
    return {(x, z) for (x, y) in p1 for (y2, z) in p2 if y == y2}


def power_pairs(pairs, n, i):
    acc = {(x, x) for x in range(n)}
    for _ in range(i):
        acc = compose_pairs(acc, pairs)
    return acc


def closure_pairs(pairs, n):
    succ = {x: set() for x in range(n)}
    for u, v in pairs:
        succ[u].add(v)
    out = set()
    for src in range(n):
        seen = {src}
        todo = [src]
        while todo:
            u = todo.pop()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        out |= {(src, v) for v in seen}
    return out


def sat_naive(M: Model, x: int, f) -> bool:
    """Pointwise recursive satisfaction, the slow way."""
    cls = type(f)
    if cls is Var:
        return bool(M.val_mask(f.index) >> x & 1)
    if cls is Bot:
        return False
    if cls is Top:
        return True
    if cls is Not:
        return not sat_naive(M, x, f.sub)
    if cls is And:
        return sat_naive(M, x, f.left) and sat_naive(M, x, f.right)
    if cls is Or:
        return sat_naive(M, x, f.left) or sat_naive(M, x, f.right)
    if cls is Imp:
        return not sat_naive(M, x, f.left) or sat_naive(M, x, f.right)
    if cls is Iff:
        return sat_naive(M, x, f.left) == sat_naive(M, x, f.right)
    succs = [v for (u, v) in M.frame.rel.pairs() if u == x]
    if cls is Dia:
        return any(sat_naive(M, v, f.sub) for v in succs)
    return all(sat_naive(M, v, f.sub) for v in succs)


def all_partitions(n):
    """Every set partition of range(n), via restricted-growth strings."""
    out = []

    def rec(x, groups):
        if x == n:
            out.append(Partition(n, [set(g) for g in groups]))
            return
        for g in groups:
            g.append(x)
            rec(x + 1, groups)
            g.pop()
        groups.append([x])
        rec(x + 1, groups)
        groups.pop()

    rec(0, [])
    return out


def skeletons_isomorphic(F: Frame, P: Partition, G: Frame) -> bool:
    """Does C -> {blocks inside C} carry F's skeleton onto G's, order and all?"""
    from kfl.frame import cluster_decomposition

    df, dg = cluster_decomposition(F), cluster_decomposition(G)
    if len(df.clusters.blocks) != len(dg.clusters.blocks):
        return False
    mapping = []
    for c in df.clusters.blocks:
        x = (c & -c).bit_length() - 1
        img = {P.block_of[y] for y in _points(c)}
        # the image must be exactly one cluster of G
        tgt = dg.clusters.block_of[min(img)]
        if img != set(_points(dg.clusters.blocks[tgt])):
            return False
        mapping.append(tgt)
    if len(set(mapping)) != len(mapping):
        return False
    kf, kg = df.skeleton, dg.skeleton
    for i in range(len(mapping)):
        for j in range(len(mapping)):
            if kf.has(i, j) != kg.has(mapping[i], mapping[j]):
                return False
    return True


def _points(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@st.composite
def frames(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    return Frame(n, edges)


@st.composite
def partitions_of(draw, n):
    ids = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    groups = {}
    for x, g in enumerate(ids):
        groups.setdefault(g, set()).add(x)
    return Partition(n, list(groups.values()))


@st.composite
def models(draw, max_n=6, max_var=3):
    F = draw(frames(max_n))
    val = {i: draw(st.integers(0, 2 ** F.n - 1)) for i in range(1, max_var + 1)}
    return Model(F, val)


formulas3 = st.recursive(
    st.one_of(st.just(Bot()), st.just(Top()), st.integers(1, 3).map(Var)),
    lambda sub: st.one_of(
        sub.map(Not), sub.map(Dia), sub.map(Box),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Imp(*t)),
        st.tuples(sub, sub).map(lambda t: Iff(*t)),
    ),
    max_leaves=12,
)
