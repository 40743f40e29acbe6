"""Randomized invariant suites behind `kfl verify`.

Each suite runs `cases` seeded checks and returns a list of failure strings;
an empty list means the suite passed.  Every check is exact: any failure is a
bug, not statistical noise.
"""

import random

from . import generators
from .formula import glivenko_translate, mn_axiom, pretrans_axiom
from .frame import bits, cluster_decomposition, is_m_transitive, is_mn_frame
from .model import formula_partition, truth_sets
from .oracle import ClassSpec, frame_valid
from .partition import (
    Partition, filtrate_model, is_proper, is_refinement, minimal_filtration,
)
from .refine import (
    finitize_clusters_mn, finitize_clusters_pretrans, proper_refinement,
)

__all__ = ["SUITES", "run_suite"]

MN_CASES = ((1, 2), (1, 3), (2, 3))


def _suite_filtration(cases, seed):
    """Subformula truth is invariant under filtration by refinements of ~_f."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        F = generators.random_frame(rng, rng.randint(1, 30), rng.uniform(0.05, 0.4))
        M = generators.random_model(rng, F)
        f = generators.random_formula(rng, 3, rng.randint(1, 12))
        P = generators.random_refinement(rng, formula_partition(M, f))
        out, proj = filtrate_model(M, P, f)
        sat = truth_sets(M, f)[f]
        sat2 = truth_sets(out, f)[f]
        for x in range(F.n):
            if sat >> x & 1 != sat2 >> proj[x] & 1:
                failures.append("case %d: truth changed at point %d" % (case, x))
                break
    return failures


def _suite_proper(cases, seed):
    """proper_refinement output is a proper refinement; validity transfers."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        F = generators.layered_frame(rng)
        A = generators.random_partition(rng, F.n)
        B = proper_refinement(F, A)
        if not is_proper(F, B):
            failures.append("case %d: output not proper" % case)
        if not is_refinement(B, A):
            failures.append("case %d: output does not refine the input" % case)
        # validity transfer through a proper quotient of a small frame
        S = generators.random_frame(rng, rng.randint(1, 4), rng.uniform(0.1, 0.6))
        C = proper_refinement(S, generators.random_partition(rng, S.n))
        G, _ = minimal_filtration(S, C)
        for _ in range(50):
            f = generators.random_formula(rng, 2, rng.randint(1, 8))
            if frame_valid(S, f) and not frame_valid(G, f):
                failures.append("case %d: validity lost in the quotient" % case)
                break
    return failures


def _skeleton_preserved(F, P: Partition, G) -> bool:
    """Blocks-inside-cluster map is an order isomorphism of the skeletons."""
    fdec = cluster_decomposition(F)
    gdec = cluster_decomposition(G)
    image = []
    for cmask in fdec.clusters.blocks:
        targets = {gdec.cluster_of(P.block_of[x]) for x in bits(cmask)}
        if len(targets) != 1:
            return False
        image.append(targets.pop())
    if len(set(image)) != len(image) or len(set(image)) != len(gdec.clusters.blocks):
        return False
    for a in range(len(image)):
        for b in range(len(image)):
            if fdec.skeleton.has(a, b) != gdec.skeleton.has(image[a], image[b]):
                return False
    return True


def _suite_finitize(cases, seed):
    """Cluster finitization keeps the class, the skeleton, and the size bound."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        m, n = MN_CASES[rng.randrange(len(MN_CASES))]
        F = generators.tower_frame(rng, ClassSpec("mn", m, n))
        A = generators.random_partition(rng, F.n, max_blocks=4)
        B = finitize_clusters_mn(F, A, m, n)
        G, _ = minimal_filtration(F, B)
        sizes = [c.bit_count() for c in cluster_decomposition(G).clusters.blocks]
        if not is_refinement(B, A):
            failures.append("case %d mn: not a refinement" % case)
        if not is_mn_frame(G, m, n):
            failures.append("case %d mn: quotient left the class" % case)
        if max(sizes) > (n - m) * len(A.blocks):
            failures.append("case %d mn: cluster bound exceeded" % case)
        if not _skeleton_preserved(F, B, G):
            failures.append("case %d mn: skeleton changed" % case)

        mt = rng.choice((1, 2))
        FT = generators.tower_frame(rng, ClassSpec("pretrans", mt))
        AT = generators.random_partition(rng, FT.n, max_blocks=4)
        BT = finitize_clusters_pretrans(FT, AT, mt)
        GT, _ = minimal_filtration(FT, BT)
        tsizes = [c.bit_count() for c in cluster_decomposition(GT).clusters.blocks]
        if not is_refinement(BT, AT):
            failures.append("case %d pretrans: not a refinement" % case)
        if not is_m_transitive(GT, mt):
            failures.append("case %d pretrans: quotient left the class" % case)
        if max(tsizes) > len(AT.blocks):
            failures.append("case %d pretrans: cluster bound exceeded" % case)
        if not _skeleton_preserved(FT, BT, GT):
            failures.append("case %d pretrans: skeleton changed" % case)
    return failures


def _suite_definability(cases, seed):
    """Axiom validity coincides with the relational class condition."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        F = generators.random_frame(rng, rng.randint(1, 4), rng.uniform(0.1, 0.7))
        for m, n in ((0, 1),) + MN_CASES:
            if frame_valid(F, mn_axiom(m, n)) != is_mn_frame(F, m, n):
                failures.append("case %d: mn axiom (%d,%d) disagrees" % (case, m, n))
        for m in (0, 1, 2):
            if frame_valid(F, pretrans_axiom(m)) != is_m_transitive(F, m):
                failures.append("case %d: pretransitivity axiom m=%d disagrees" % (case, m))
    return failures


def _suite_glivenko(cases, seed):
    """At depth-1 points of m-transitive models the translation implies f."""
    rng = random.Random(seed)
    failures = []
    for case in range(cases):
        m = rng.choice((1, 2))
        if rng.random() < 0.5:
            F = generators.tower_frame(rng, ClassSpec("pretrans", m), max_cluster_size=5)
        else:
            F = generators.repair_m_transitive(
                generators.random_frame(rng, rng.randint(1, 12), rng.uniform(0.05, 0.4)), m)
        M = generators.random_model(rng, F)
        f = generators.random_formula(rng, 3, rng.randint(1, 8))
        g = glivenko_translate(f, m)
        tf = truth_sets(M, f)[f]
        tg = truth_sets(M, g)[g]
        depth = cluster_decomposition(F).depth
        for x in range(F.n):
            if depth[x] == 1 and tg >> x & 1 and not tf >> x & 1:
                failures.append("case %d: translation held but the formula "
                                "failed at depth-1 point %d" % (case, x))
                break
    return failures


SUITES = {
    "filtration": _suite_filtration,
    "proper": _suite_proper,
    "finitize": _suite_finitize,
    "definability": _suite_definability,
    "glivenko": _suite_glivenko,
}


def run_suite(name: str, cases: int, seed: int):
    if name not in SUITES:
        raise ValueError("unknown suite %r; pick one of %s"
                         % (name, ", ".join(sorted(SUITES))))
    if cases < 1:
        raise ValueError("cases must be >= 1")
    return SUITES[name](cases, seed)
