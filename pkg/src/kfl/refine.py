"""Cluster finitization via loop residues, layered proper refinement, and the
end-to-end small-model pipeline.

The pipeline turns a satisfying model over an (m,n)-frame or an m-transitive
frame into a finite quotient model in the same class: first each cluster is
finitized (loop-residue classes met with the subformula partition), then the
quotient is refined layer by layer until the partition is proper.
"""

from dataclasses import asdict, dataclass
from itertools import product

from .formula import length as formula_length
from .frame import (
    Frame, bits, cluster_decomposition, is_m_transitive, is_mn_frame, mask_of,
)
from .model import Model, formula_partition, truth_sets
from .oracle import ClassSpec
from .partition import (
    Partition, compose_partitions, filtrate_model, is_refinement, meet,
)

__all__ = [
    "ResidueSubgroup", "OmegaStructure", "PipelineReport",
    "UnsatisfiableFormulaError", "ClassMembershipError",
    "loop_residues", "choose_d", "mod_d_partition",
    "finitize_clusters_mn", "finitize_clusters_pretrans",
    "omega_signature", "proper_refinement", "filtration_pipeline",
]

SIGNATURE_CAP = 16
ORDERING_BUDGET = 100_000


class UnsatisfiableFormulaError(ValueError):
    """The pipeline needs a satisfiable formula."""


class ClassMembershipError(ValueError):
    """The input frame is not in the requested class."""


@dataclass(frozen=True)
class ResidueSubgroup:
    """Loop lengths at a point, modulo k."""

    k: int
    elements: frozenset

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("modulus must be >= 1")
        if not all(isinstance(r, int) and 0 <= r < self.k for r in self.elements):
            raise ValueError("elements must lie in 0..k-1")
        if 0 not in self.elements:
            raise ValueError("the empty loop is always present")

    def is_subgroup(self) -> bool:
        els = self.elements
        return all((a + b) % self.k in els for a in els for b in els) and \
            all((self.k - a) % self.k in els for a in els)


def loop_residues(F: Frame, u: int, k: int) -> ResidueSubgroup:
    """Residues mod k of the lengths of all u-to-u paths.

    Reachability on the product of the frame with Z_k; the loop monoid itself
    stays implicit.
    """
    if k < 1:
        raise ValueError("modulus must be >= 1")
    if not (0 <= u < F.n):
        raise ValueError("point %r out of range" % (u,))
    visited = [0] * k
    visited[0] = 1 << u
    stack = [(u, 0)]
    while stack:
        x, r = stack.pop()
        nr = (r + 1) % k
        new = F.rel.rows[x] & ~visited[nr]
        if new:
            visited[nr] |= new
            stack.extend((y, nr) for y in bits(new))
    return ResidueSubgroup(k, frozenset(r for r in range(k) if visited[r] >> u & 1))


def _cluster_mask(F: Frame, cluster) -> int:
    """Validate that the points form one mutual-reachability class."""
    m = mask_of(cluster) if not isinstance(cluster, int) else cluster
    if m == 0 or m >> F.n:
        raise ValueError("cluster must be a nonempty set of frame points")
    closure = F.rel.rt_closure()
    x0 = (m & -m).bit_length() - 1
    actual = closure.rows[x0]
    for v in bits(actual):
        if not closure.has(v, x0):
            actual &= ~(1 << v)
    if actual != m:
        raise ValueError("points %r are not a cluster" % (sorted(bits(m)),))
    return m


def choose_d(F: Frame, cluster, k: int) -> int:
    """The least nonzero loop residue mod k in the cluster, or k if none.

    The result divides k and divides every loop length in the cluster; it does
    not depend on the evaluation point, which we spot-check in debug mode.
    """
    cmask = _cluster_mask(F, cluster)
    pts = list(bits(cmask))
    res = loop_residues(F, pts[0], k)
    if __debug__ and len(pts) > 1:
        # the residue set is a cluster invariant; compare one other point
        assert loop_residues(F, pts[-1], k).elements == res.elements
    nonzero = [r for r in sorted(res.elements) if r]
    return nonzero[0] if nonzero else k


def mod_d_partition(F: Frame, cluster, d: int):
    """Classes of 'joined by a path of length divisible by d' within a cluster.

    Requires d to divide every loop length in the cluster (choose_d guarantees
    it); then the relation is an equivalence with at most d classes.  Returns a
    tuple of frozensets.
    """
    if d < 1:
        raise ValueError("divisor must be >= 1")
    cmask = _cluster_mask(F, cluster)
    reach0 = {}
    for w in bits(cmask):
        visited = [0] * d
        visited[0] = 1 << w
        stack = [(w, 0)]
        while stack:
            x, r = stack.pop()
            nr = (r + 1) % d
            new = F.rel.rows[x] & cmask & ~visited[nr]
            if new:
                visited[nr] |= new
                stack.extend((y, nr) for y in bits(new))
        reach0[w] = visited[0]
    for w, m in reach0.items():
        for v in bits(m):
            if reach0[v] != m:
                raise RuntimeError(
                    "mod-%d reachability is not an equivalence on the cluster; "
                    "this signals a bad divisor from choose_d" % d)
    classes = []
    seen = 0
    for w in bits(cmask):
        if not seen >> w & 1:
            classes.append(frozenset(bits(reach0[w])))
            seen |= reach0[w]
    if len(classes) > d:
        raise RuntimeError("more than d classes; this signals a choose_d bug")
    return tuple(classes)


def finitize_clusters_mn(F: Frame, A: Partition, m: int, n: int) -> Partition:
    """Refine A inside each cluster by loop-residue classes mod the chosen d.

    On an (m,n)-frame the quotient by the result keeps the skeleton, bounds
    every cluster by (n-m)*|A|, and stays an (m,n)-frame.
    """
    if A.n != F.n:
        raise ValueError("partition does not match frame")
    if m < 1 or n <= m:
        raise ValueError("need n > m >= 1")
    if not is_mn_frame(F, m, n):
        raise ValueError("frame is not an (%d,%d)-frame" % (m, n))
    k = n - m
    blocks = []
    for cmask in cluster_decomposition(F).clusters.blocks:
        pts = tuple(bits(cmask))
        d = choose_d(F, pts, k)
        for cls in mod_d_partition(F, pts, d):
            clsmask = mask_of(cls)
            for a in A.blocks:
                inter = clsmask & a
                if inter:
                    blocks.append(inter)
    return Partition.from_masks(F.n, blocks)


def finitize_clusters_pretrans(F: Frame, A: Partition, m: int) -> Partition:
    """Refine A by whole clusters; on an m-transitive frame the quotient keeps
    the skeleton, bounds clusters by |A|, and stays m-transitive.
    """
    if A.n != F.n:
        raise ValueError("partition does not match frame")
    if m < 0:
        raise ValueError("need m >= 0")
    if not is_m_transitive(F, m):
        raise ValueError("frame is not %d-transitive" % m)
    return meet(A, cluster_decomposition(F).clusters)


@dataclass(frozen=True)
class OmegaStructure:
    """One cluster with its internal relation, upper-part reach flags, block
    tags, and a designated point."""

    carrier: tuple  # sorted cluster points
    rel: frozenset  # pairs within the carrier
    p_flags: tuple  # per carrier point: bitmask over upper blocks it reaches
    t_flags: tuple  # per carrier point: index of its block in the base partition
    designated: int

    def __post_init__(self):
        pts = set(self.carrier)
        if self.designated not in pts:
            raise ValueError("designated point must lie in the carrier")
        if len(self.p_flags) != len(self.carrier) or len(self.t_flags) != len(self.carrier):
            raise ValueError("flag vectors must align with the carrier")
        if not all(u in pts and v in pts for u, v in self.rel):
            raise ValueError("relation must stay within the carrier")


def _distinct_sequences(items):
    """Distinct orderings of a multiset, lexicographically."""
    from collections import Counter

    counter = Counter(items)
    seq = []

    def rec():
        if len(seq) == len(items):
            yield tuple(seq)
            return
        for key in sorted(counter):
            if counter[key]:
                counter[key] -= 1
                seq.append(key)
                yield from rec()
                seq.pop()
                counter[key] += 1

    return list(rec())


def omega_signature(s: OmegaStructure, cap: int = SIGNATURE_CAP) -> bytes:
    """Canonical byte string; equal for two structures iff they are isomorphic
    (a bijection preserving rel, both flag vectors, and the designated point).

    Minimizes the adjacency matrix over carrier orderings, after color
    refinement and after collapsing transposition-equivalent points, so the
    search space stays tiny for the clusters the refinement produces.
    """
    size = len(s.carrier)
    if size > cap:
        raise ValueError("carrier of size %d exceeds the signature cap %d" % (size, cap))
    idx = {p: i for i, p in enumerate(s.carrier)}
    des = idx[s.designated]
    adj = [[False] * size for _ in range(size)]
    for u, v in s.rel:
        adj[idx[u]][idx[v]] = True
    out_nb = [[j for j in range(size) if adj[i][j]] for i in range(size)]
    in_nb = [[j for j in range(size) if adj[j][i]] for i in range(size)]

    init_colors = [(i == des, s.t_flags[i], s.p_flags[i]) for i in range(size)]
    order = {c: r for r, c in enumerate(sorted(set(init_colors)))}
    ranks = [order[c] for c in init_colors]
    while True:
        desc = [
            (ranks[i],
             tuple(sorted(ranks[j] for j in out_nb[i])),
             tuple(sorted(ranks[j] for j in in_nb[i])))
            for i in range(size)
        ]
        order = {c: r for r, c in enumerate(sorted(set(desc)))}
        new_ranks = [order[c] for c in desc]
        if new_ranks == ranks:
            break
        ranks = new_ranks

    classes = {}
    for i in range(size):
        classes.setdefault(ranks[i], []).append(i)
    class_list = [classes[r] for r in sorted(classes)]
    class_info = tuple((init_colors[ms[0]], len(ms)) for ms in class_list)

    def transposable(u, v):
        # is swapping u and v an automorphism of the adjacency matrix?
        for a in range(size):
            ta = v if a == u else u if a == v else a
            for b in range(size):
                tb = v if b == u else u if b == v else b
                if adj[a][b] != adj[ta][tb]:
                    return False
        return True

    from math import factorial

    per_class = []
    total = 1
    for members in class_list:
        groups = []  # lists of pairwise transposable members
        gid_of = {}
        for p in members:
            for gi, g in enumerate(groups):
                if all(transposable(p, q) for q in g):
                    g.append(p)
                    gid_of[p] = gi
                    break
            else:
                gid_of[p] = len(groups)
                groups.append([p])
        count = factorial(len(members))
        for g in groups:
            count //= factorial(len(g))
        total *= count
        if total > ORDERING_BUDGET:
            raise RuntimeError(
                "signature search over %d orderings exceeds the budget; "
                "the cluster is too symmetric for exhaustive minimization" % total)
        orderings = []
        for gid_seq in _distinct_sequences([gid_of[p] for p in members]):
            queues = {gi: list(g) for gi, g in enumerate(groups)}
            orderings.append(tuple(queues[g].pop(0) for g in gid_seq))
        per_class.append(orderings)

    best = None
    for combo in product(*per_class):
        ordering = [p for part in combo for p in part]
        m = 0
        bit = 0
        for i in ordering:
            row = adj[i]
            for j in ordering:
                if row[j]:
                    m |= 1 << bit
                bit += 1
        if best is None or m < best:
            best = m
    key = (size, class_info, best)
    return repr(key).encode()


def proper_refinement(F: Frame, A: Partition, signature_cap: int = SIGNATURE_CAP) -> Partition:
    """Refine A to a proper partition, layer by layer from the final clusters.

    Layer i keeps all blocks already settled strictly above (depths < i),
    groups layer-i points whose cluster structures (with reach flags into the
    settled blocks and A-block tags) are isomorphic, and leaves deeper points
    as singletons for later rounds.
    """
    if A.n != F.n:
        raise ValueError("partition does not match frame")
    dec = cluster_decomposition(F)
    blocks = [1 << x for x in range(F.n)]
    for i in range(1, dec.height + 1):
        settled = dec.upper_mask(i)
        upper = sorted((b for b in blocks if b & ~settled == 0), key=lambda b: b & -b)
        layer = dec.layer_mask(i)
        groups = {}
        for cmask in dec.clusters.blocks:
            if not cmask & layer:
                continue
            carrier = tuple(bits(cmask))
            rel = frozenset((u, v) for u in carrier for v in bits(F.rel.rows[u] & cmask))
            p_flags = tuple(
                sum(1 << j for j, b in enumerate(upper) if F.rel.rows[u] & b)
                for u in carrier)
            t_flags = tuple(A.block_of[u] for u in carrier)
            for u in carrier:
                sig = omega_signature(
                    OmegaStructure(carrier, rel, p_flags, t_flags, u), signature_cap)
                groups[sig] = groups.get(sig, 0) | (1 << u)
        blocks = [b for b in blocks if not b & layer] + list(groups.values())
    result = Partition.from_masks(F.n, blocks)
    assert is_refinement(result, A)
    return result


@dataclass(frozen=True)
class PipelineReport:
    """Sizes and verdicts of the three pipeline stages."""

    class_text: str
    input_points: int
    input_height: int
    input_max_cluster: int
    formula_subformulas: int
    blocks_formula: int
    blocks_finitized: int
    blocks_refined: int
    output_points: int
    class_ok: bool
    satisfied: bool
    bound: object  # f(2^length) when it fits in 64 bits, else "overflow"

    def stage_sizes(self):
        return (self.input_points, self.blocks_finitized, self.blocks_refined)

    def to_dict(self):
        return asdict(self)


def _tower_bound(spec: ClassSpec, ell: int, h: int):
    x = 2 ** ell
    if spec.kind == "mn":
        k = spec.n - spec.m
        v = (k * x + h + 1) * (k * x + ell)
    else:
        v = (x + h + 1) * (x + ell)
    for _ in range(h):
        if v > 63:
            return "overflow"
        v = 2 ** v
    return v if v < 2 ** 64 else "overflow"


def filtration_pipeline(M: Model, f, spec: ClassSpec):
    """Quotient a satisfying model down to a finite model in the same class.

    Stages: subformula partition, per-cluster finitization, proper refinement
    of the quotient.  Returns (model, report); the output is re-validated for
    class membership and satisfaction before returning.
    """
    F = M.frame
    if spec.kind == "mn":
        if spec.m < 1 or spec.n <= spec.m:
            raise ClassMembershipError("pipeline needs n > m >= 1 for the mn class")
        if not is_mn_frame(F, spec.m, spec.n):
            raise ClassMembershipError("frame is not an (%d,%d)-frame" % (spec.m, spec.n))
    elif spec.kind == "pretrans":
        if not is_m_transitive(F, spec.m):
            raise ClassMembershipError("frame is not %d-transitive" % spec.m)
    else:
        raise ClassMembershipError("pipeline needs an mn or pretrans class")

    sat0 = truth_sets(M, f)[f]
    if not sat0:
        raise UnsatisfiableFormulaError("formula holds nowhere in the model")
    x0 = (sat0 & -sat0).bit_length() - 1

    dec = cluster_decomposition(F)
    A = formula_partition(M, f)
    if spec.kind == "mn":
        B = finitize_clusters_mn(F, A, spec.m, spec.n)
    else:
        B = finitize_clusters_pretrans(F, A, spec.m)
    M1, proj1 = filtrate_model(M, B, f)

    # image of A on the quotient points; each B-block sits inside one A-block
    img = {}
    for g_idx, b in enumerate(B.blocks):
        aid = A.block_of[(b & -b).bit_length() - 1]
        img[aid] = img.get(aid, 0) | (1 << g_idx)
    A_img = Partition.from_masks(M1.frame.n, list(img.values()))

    C = proper_refinement(M1.frame, A_img)
    M2, proj2 = filtrate_model(M1, C, f)
    composed = compose_partitions(F, B, C)
    assert len(composed.blocks) == M2.frame.n

    sat2 = truth_sets(M2, f)[f]
    satisfied = bool(sat2 >> proj2[proj1[x0]] & 1)
    class_ok = spec.contains(M2.frame)
    if not (satisfied and class_ok):
        raise RuntimeError("pipeline postcondition failed; this is a bug")

    out_dec = cluster_decomposition(M2.frame)
    assert out_dec.height <= dec.height
    ell = formula_length(f)
    report = PipelineReport(
        class_text=spec.describe(),
        input_points=F.n,
        input_height=dec.height,
        input_max_cluster=max(b.bit_count() for b in dec.clusters.blocks),
        formula_subformulas=ell,
        blocks_formula=len(A.blocks),
        blocks_finitized=len(B.blocks),
        blocks_refined=len(C.blocks),
        output_points=M2.frame.n,
        class_ok=class_ok,
        satisfied=satisfied,
        bound=_tower_bound(spec, ell, dec.height),
    )
    return M2, report
