"""Partitions of frame points, minimal filtration, properness, composition."""

from .frame import Frame, Relation, bits, mask_of

__all__ = [
    "Partition", "minimal_filtration", "filtrate_model", "is_refinement",
    "meet", "is_proper", "compose_partitions",
]


class Partition:
    """Disjoint nonempty blocks covering points 0..n-1.

    Blocks are bitmasks kept sorted by least element, so block indices are
    canonical and filtration outputs are deterministic.
    """

    __slots__ = ("n", "blocks", "block_of")

    def __init__(self, n, block_sets):
        masks = [mask_of(b) if not isinstance(b, int) else b for b in block_sets]
        self._init_from_masks(n, masks)

    @classmethod
    def from_masks(cls, n, masks):
        p = cls.__new__(cls)
        p._init_from_masks(n, list(masks))
        return p

    def _init_from_masks(self, n, masks):
        if n < 0:
            raise ValueError("negative point count")
        full = (1 << n) - 1
        union = 0
        for m in masks:
            if m == 0:
                raise ValueError("empty block")
            if m & ~full:
                raise ValueError("block exceeds point range")
            if m & union:
                raise ValueError("blocks overlap")
            union |= m
        if union != full:
            raise ValueError("blocks do not cover all points")
        masks.sort(key=lambda m: m & -m)
        block_of = [0] * n
        for i, m in enumerate(masks):
            for x in bits(m):
                block_of[x] = i
        self.n = n
        self.blocks = tuple(masks)
        self.block_of = tuple(block_of)

    @classmethod
    def singletons(cls, n):
        return cls.from_masks(n, [1 << x for x in range(n)])

    @classmethod
    def one_block(cls, n):
        return cls.from_masks(n, [(1 << n) - 1])

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValueError("partition document must be a JSON object")
        blocks = data.get("blocks")
        if not isinstance(blocks, list) or not blocks:
            raise ValueError("'blocks' must be a nonempty list of point lists")
        pts = []
        for b in blocks:
            if not isinstance(b, list):
                raise ValueError("block %r is not a list" % (b,))
            for x in b:
                if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                    raise ValueError("point %r is not a valid index" % (x,))
                pts.append(x)
        n = max(pts) + 1 if pts else 0
        return cls(n, [mask_of(b) for b in blocks])

    def to_dict(self):
        return {"blocks": [list(bits(m)) for m in self.blocks]}

    def block_sets(self):
        return tuple(frozenset(bits(m)) for m in self.blocks)

    def block_count(self) -> int:
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __repr__(self):
        return "Partition(%d, %r)" % (self.n, [sorted(bits(m)) for m in self.blocks])


def minimal_filtration(F: Frame, P: Partition):
    """Quotient frame relating blocks iff some members are related.

    Returns (frame, projection) with projection[x] = block index of x.
    """
    if P.n != F.n:
        raise ValueError("partition does not match frame")
    k = len(P.blocks)
    reach = []
    for b in P.blocks:
        acc = 0
        for u in bits(b):
            acc |= F.rel.rows[u]
        reach.append(acc)
    rows = []
    for i in range(k):
        row = 0
        for j in range(k):
            if reach[i] & P.blocks[j]:
                row |= 1 << j
        rows.append(row)
    return Frame.from_relation(Relation(k, rows)), P.block_of


def filtrate_model(M, P: Partition, f):
    """Minimal filtration of a model through a partition respecting f.

    P must refine the subformula partition of (M, f); the result preserves
    the truth of every subformula of f pointwise under the projection.
    """
    from .model import Model, formula_partition  # deferred: model imports this module
    from .formula import variables

    if not is_refinement(P, formula_partition(M, f)):
        raise ValueError("partition does not refine the subformula partition")
    G, proj = minimal_filtration(M.frame, P)
    val = {}
    for i in variables(f):
        img = 0
        for x in bits(M.val_mask(i)):
            img |= 1 << proj[x]
        val[i] = img
    return Model(G, val), proj


def is_refinement(fine: Partition, coarse: Partition) -> bool:
    """Every block of fine lies inside some block of coarse."""
    if fine.n != coarse.n:
        raise ValueError("mismatched point counts")
    for b in fine.blocks:
        x = (b & -b).bit_length() - 1
        if b & ~coarse.blocks[coarse.block_of[x]]:
            return False
    return True


def meet(P1: Partition, P2: Partition) -> Partition:
    """Coarsest common refinement: nonempty pairwise block intersections."""
    if P1.n != P2.n:
        raise ValueError("mismatched point counts")
    masks = []
    for a in P1.blocks:
        for b in P2.blocks:
            m = a & b
            if m:
                masks.append(m)
    return Partition.from_masks(P1.n, masks)


def is_proper(F: Frame, P: Partition) -> bool:
    """If one member of a block reaches a block, every member must."""
    if P.n != F.n:
        raise ValueError("partition does not match frame")
    k = len(P.blocks)
    reaches = []  # per point: mask over block indices it has a successor in
    for x in range(F.n):
        row = F.rel.rows[x]
        m = 0
        for j in range(k):
            if row & P.blocks[j]:
                m |= 1 << j
        reaches.append(m)
    for b in P.blocks:
        some = 0
        every = (1 << k) - 1
        for x in bits(b):
            some |= reaches[x]
            every &= reaches[x]
        if some != every:
            return False
    return True


def compose_partitions(F: Frame, A: Partition, B_over_A: Partition) -> Partition:
    """Union the A-blocks grouped by a partition of A's block indices."""
    if A.n != F.n:
        raise ValueError("partition does not match frame")
    if B_over_A.n != len(A.blocks):
        raise ValueError("outer partition must cover A's block indices")
    masks = []
    for group in B_over_A.blocks:
        m = 0
        for j in bits(group):
            m |= A.blocks[j]
        masks.append(m)
    return Partition.from_masks(F.n, masks)
