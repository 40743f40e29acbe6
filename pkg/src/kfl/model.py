"""Models over frames: valuations, satisfaction, the subformula partition."""

from .formula import And, Bot, Box, Dia, Iff, Imp, Not, Or, Top, Var, subformulas
from .frame import Frame, bits, mask_of
from .partition import Partition

__all__ = ["Model", "model_check", "truth_sets", "formula_partition"]


class Model:
    """A frame plus a valuation; variables absent from the map are empty."""

    __slots__ = ("frame", "valuation")

    def __init__(self, frame: Frame, valuation=None):
        full = (1 << frame.n) - 1
        val = {}
        for i, pts in (valuation or {}).items():
            if not isinstance(i, int) or i < 1:
                raise ValueError("variable index %r must be a positive integer" % (i,))
            m = pts if isinstance(pts, int) else mask_of(pts)
            if m & ~full:
                raise ValueError("valuation of p%d exceeds point range" % i)
            if m:
                val[i] = m
        self.frame = frame
        self.valuation = val

    def val_mask(self, i) -> int:
        return self.valuation.get(i, 0)

    @classmethod
    def from_dict(cls, data):
        frame = Frame.from_dict(data)
        raw = data.get("val", {})
        if not isinstance(raw, dict):
            raise ValueError("'val' must be an object mapping variables to point lists")
        val = {}
        for key, pts in raw.items():
            if not (isinstance(key, str) and key[:1] == "p" and key[1:].isdigit() and int(key[1:]) >= 1):
                raise ValueError("bad variable name %r" % (key,))
            if not isinstance(pts, list) or not all(
                    isinstance(x, int) and not isinstance(x, bool) and 0 <= x < frame.n for x in pts):
                raise ValueError("valuation of %s must be a list of points" % key)
            val[int(key[1:])] = mask_of(pts)
        return cls(frame, val)

    def to_dict(self):
        d = self.frame.to_dict()
        d["val"] = {"p%d" % i: list(bits(m)) for i, m in sorted(self.valuation.items())}
        return d

    def __eq__(self, other):
        return (isinstance(other, Model) and self.frame == other.frame
                and self.valuation == other.valuation)

    def __repr__(self):
        return "Model(%r, %r)" % (self.frame, self.valuation)


def truth_sets(M: Model, f):
    """Truth set of every subformula of f, computed bottom-up as bitmasks."""
    n = M.frame.n
    rows = M.frame.rel.rows
    full = (1 << n) - 1
    out = {}
    for g in subformulas(f):
        cls = type(g)
        if cls is Var:
            v = M.val_mask(g.index)
        elif cls is Bot:
            v = 0
        elif cls is Top:
            v = full
        elif cls is Not:
            v = full & ~out[g.sub]
        elif cls is And:
            v = out[g.left] & out[g.right]
        elif cls is Or:
            v = out[g.left] | out[g.right]
        elif cls is Imp:
            v = (full & ~out[g.left]) | out[g.right]
        elif cls is Iff:
            v = full & ~(out[g.left] ^ out[g.right])
        else:
            target = out[g.sub]
            if cls is Box:
                target = full & ~target
            v = 0
            for x in range(n):
                if rows[x] & target:
                    v |= 1 << x
            if cls is Box:
                v = full & ~v
        out[g] = v
    return out


def model_check(M: Model, x: int, f) -> bool:
    """Does f hold at point x?"""
    if not (0 <= x < M.frame.n):
        raise ValueError("point %r out of range" % (x,))
    return bool(truth_sets(M, f)[f] >> x & 1)


def formula_partition(M: Model, f) -> Partition:
    """Points grouped by agreement on every subformula of f."""
    sets = list(truth_sets(M, f).values())
    groups = {}
    for x in range(M.frame.n):
        key = tuple(ts >> x & 1 for ts in sets)
        groups[key] = groups.get(key, 0) | (1 << x)
    return Partition.from_masks(M.frame.n, list(groups.values()))
