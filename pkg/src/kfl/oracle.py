"""Brute-force ground truth: frame enumeration, exhaustive-valuation validity,
and loop-length enumeration.  Everything here fails loudly when a cap would be
exceeded instead of starting an unbounded job.
"""

import os
from dataclasses import dataclass
from typing import Optional

from . import _kernel
from .formula import (
    And, Bot, Box, Dia, Iff, Imp, Not, Or, Top, Var, subformulas, variables,
)
from .frame import (
    Frame, Relation, bits, cluster_decomposition, is_m_transitive, is_mn_frame,
)

__all__ = [
    "ClassSpec", "ClassValidity", "enumerate_frames", "frame_valid",
    "frame_valid_witness", "class_valid", "loop_lengths_brute",
]

FRAME_CAP_BITS = 25  # enumerate_frames considers 2^(n*n) candidates: n <= 5
VALUATION_CAP_BITS = 20  # frame_valid enumerates 2^(|vars|*n) valuations


def _cap_bits(default: int) -> int:
    env = os.environ.get("KFL_MAX_ENUM")
    if env is None:
        return default
    try:
        cap = int(env)
    except ValueError:
        raise ValueError("KFL_MAX_ENUM must be an integer, got %r" % env) from None
    if cap < 1:
        raise ValueError("KFL_MAX_ENUM must be positive")
    return cap


@dataclass(frozen=True)
class ClassSpec:
    """A frame class: (m,n)-frames, m-transitive frames, or all frames."""

    kind: str  # "mn" | "pretrans" | "any"
    m: Optional[int] = None
    n: Optional[int] = None
    height_cap: Optional[int] = None

    def __post_init__(self):
        if self.kind == "mn":
            if self.m is None or self.n is None or self.m < 0 or self.n < 0:
                raise ValueError("mn class needs m >= 0 and n >= 0")
        elif self.kind == "pretrans":
            if self.m is None or self.m < 0 or self.n is not None:
                raise ValueError("pretrans class needs m >= 0 and no n")
        elif self.kind == "any":
            if self.m is not None or self.n is not None:
                raise ValueError("'any' class takes no parameters")
        else:
            raise ValueError("unknown class kind %r" % (self.kind,))
        if self.height_cap is not None and self.height_cap < 1:
            raise ValueError("height cap must be >= 1")

    @classmethod
    def from_text(cls, text: str) -> "ClassSpec":
        """Parse 'mn:M,N', 'g:M' or 'any'."""
        if text == "any":
            return cls("any")
        head, sep, rest = text.partition(":")
        if sep and head == "mn":
            parts = rest.split(",")
            if len(parts) == 2 and all(p.lstrip("-").isdigit() for p in parts):
                return cls("mn", int(parts[0]), int(parts[1]))
        elif sep and head == "g" and rest.lstrip("-").isdigit():
            return cls("pretrans", int(rest))
        raise ValueError("bad class %r; expected mn:M,N or g:M or any" % (text,))

    def contains(self, F: Frame) -> bool:
        if self.kind == "mn":
            ok = is_mn_frame(F, self.m, self.n)
        elif self.kind == "pretrans":
            ok = is_m_transitive(F, self.m)
        else:
            ok = True
        if ok and self.height_cap is not None:
            ok = cluster_decomposition(F).height <= self.height_cap
        return ok

    def describe(self) -> str:
        if self.kind == "mn":
            base = "mn:%d,%d" % (self.m, self.n)
        elif self.kind == "pretrans":
            base = "g:%d" % self.m
        else:
            base = "any"
        if self.height_cap is not None:
            base += " (height <= %d)" % self.height_cap
        return base


def frame_from_index(n: int, idx: int) -> Frame:
    """Frame number idx in the enumeration order: bit u*n+v encodes edge (u,v)."""
    full = (1 << n) - 1
    rows = [(idx >> (u * n)) & full for u in range(n)]
    return Frame.from_relation(Relation(n, rows))


def enumerate_frames(n: int, spec: ClassSpec = ClassSpec("any")):
    """All frames on n labeled points in the class, ascending relation index."""
    if n < 1:
        raise ValueError("need at least one point")
    cap = _cap_bits(FRAME_CAP_BITS)
    if n * n > cap:
        raise ValueError("enumeration of 2^%d frames exceeds the cap of 2^%d "
                         "(set KFL_MAX_ENUM to raise it)" % (n * n, cap))
    for idx in range(1 << (n * n)):
        F = frame_from_index(n, idx)
        if spec.contains(F):
            yield F


_UNARY_OPS = {Not: _kernel.OP_NOT, Dia: _kernel.OP_DIA, Box: _kernel.OP_BOX}
_BINARY_OPS = {And: _kernel.OP_AND, Or: _kernel.OP_OR,
               Imp: _kernel.OP_IMP, Iff: _kernel.OP_IFF}


def _program(f, slot_of):
    """Compile a formula to the register program arrays the kernel runs.

    One instruction per distinct subformula; repeated subterms share a register.
    """
    subs = subformulas(f)
    reg = {g: i for i, g in enumerate(subs)}
    ops, arga, argb = [], [], []
    for g in subs:
        cls = type(g)
        if cls is Var:
            ops.append(_kernel.OP_VAR)
            arga.append(slot_of[g.index])
            argb.append(0)
        elif cls is Bot:
            ops.append(_kernel.OP_BOT)
            arga.append(0)
            argb.append(0)
        elif cls is Top:
            ops.append(_kernel.OP_TOP)
            arga.append(0)
            argb.append(0)
        elif cls in _UNARY_OPS:
            ops.append(_UNARY_OPS[cls])
            arga.append(reg[g.sub])
            argb.append(0)
        else:
            ops.append(_BINARY_OPS[cls])
            arga.append(reg[g.left])
            argb.append(reg[g.right])
    return ops, arga, argb


def frame_valid_witness(F: Frame, f):
    """(valid, witness): witness is a falsifying valuation {index: points}."""
    vars_ = variables(f)
    cap = _cap_bits(VALUATION_CAP_BITS)
    if len(vars_) * F.n > cap:
        raise ValueError("valuation enumeration of 2^%d exceeds the cap of 2^%d "
                         "(set KFL_MAX_ENUM to raise it)" % (len(vars_) * F.n, cap))
    ops, arga, argb = _program(f, {v: j for j, v in enumerate(vars_)})
    r = _kernel.valid_on_frame(ops, arga, argb, F.rel.rows, F.n, len(vars_))
    if r == -1:
        return True, None
    full = (1 << F.n) - 1
    witness = {v: tuple(bits(r >> (j * F.n) & full)) for j, v in enumerate(vars_)}
    return False, witness


def frame_valid(F: Frame, f) -> bool:
    """True iff f holds at every point under every valuation of its variables."""
    return frame_valid_witness(F, f)[0]


@dataclass(frozen=True)
class ClassValidity:
    valid: bool
    frame: Optional[Frame] = None
    valuation: Optional[dict] = None


def class_valid(spec: ClassSpec, f, max_n: int) -> ClassValidity:
    """Validity over all class frames up to max_n points, with least counterexample."""
    for n in range(1, max_n + 1):
        for F in enumerate_frames(n, spec):
            ok, witness = frame_valid_witness(F, f)
            if not ok:
                return ClassValidity(False, F, witness)
    return ClassValidity(True)


def loop_lengths_brute(F: Frame, u: int, max_len: int):
    """All lengths <= max_len of u-to-u paths, by iterated composition."""
    if not (0 <= u < F.n):
        raise ValueError("point %r out of range" % (u,))
    out = set()
    p = Relation.identity(F.n)
    for length in range(max_len + 1):
        if p.has(u, u):
            out.add(length)
        if length < max_len:
            p = p.compose(F.rel)
    return frozenset(out)
