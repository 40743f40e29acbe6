"""Modal formulas: AST, parser, printer and the standard schema builders.

Concrete syntax (ASCII): variables p1, p2, ...; constants true, false;
unary ~ <> []; binary & | -> <->.  Unary binds tightest, then &, |, ->
(right associative), <-> loosest; parentheses override; whitespace is
insignificant.
"""

from dataclasses import dataclass

__all__ = [
    "Formula", "Var", "Bot", "Top", "Not", "And", "Or", "Imp", "Iff",
    "Dia", "Box", "FormulaSyntaxError", "parse", "unparse", "subformulas",
    "variables", "length", "dia_iter", "box_iter", "dia_leq", "box_leq",
    "mn_axiom", "pretrans_axiom", "build_Bh", "glivenko_translate",
]


class Formula:
    """Base class for formula AST nodes; instances are immutable."""

    __slots__ = ()

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Var(Formula):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable index must be >= 1, got %r" % (self.index,))


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    sub: Formula


@dataclass(frozen=True)
class Box(Formula):
    sub: Formula


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


_SYMBOLS = ("<->", "->", "<>", "[]", "~", "&", "|", "(", ")")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "p" and i + 1 < n and text[i + 1].isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("VAR", int(text[i + 1:j]), i))
            i = j
            continue
        if text.startswith("true", i):
            tokens.append(("TRUE", None, i))
            i += 4
            continue
        if text.startswith("false", i):
            tokens.append(("FALSE", None, i))
            i += 5
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append((sym, None, i))
                i += len(sym)
                break
        else:
            raise FormulaSyntaxError("unexpected character %r" % c, i)
    tokens.append(("END", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise FormulaSyntaxError("expected %r, got %r" % (kind, tok[0]), tok[2])
        return tok

    def parse_iff(self):
        f = self.parse_imp()
        while self.peek() == "<->":
            self.next()
            f = Iff(f, self.parse_imp())
        return f

    def parse_imp(self):
        f = self.parse_or()
        if self.peek() == "->":
            self.next()
            return Imp(f, self.parse_imp())
        return f

    def parse_or(self):
        f = self.parse_and()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self):
        f = self.parse_unary()
        while self.peek() == "&":
            self.next()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "~":
            self.next()
            return Not(self.parse_unary())
        if kind == "<>":
            self.next()
            return Dia(self.parse_unary())
        if kind == "[]":
            self.next()
            return Box(self.parse_unary())
        if kind == "VAR":
            self.next()
            if value < 1:
                raise FormulaSyntaxError("variable index must be >= 1", pos)
            return Var(value)
        if kind == "TRUE":
            self.next()
            return Top()
        if kind == "FALSE":
            self.next()
            return Bot()
        if kind == "(":
            self.next()
            f = self.parse_iff()
            self.expect(")")
            return f
        raise FormulaSyntaxError("unexpected token %r" % kind, pos)


def parse(text: str) -> Formula:
    """Parse formula text into an AST."""
    parser = _Parser(_tokenize(text))
    f = parser.parse_iff()
    kind, _, pos = parser.tokens[parser.i]
    if kind != "END":
        raise FormulaSyntaxError("trailing input %r" % kind, pos)
    return f


# precedence levels: <-> 1, -> 2, | 3, & 4, unary 5, atoms 6
_BIN = {Iff: (1, "<->", 1, 2), Imp: (2, "->", 3, 2), Or: (3, "|", 3, 4), And: (4, "&", 4, 5)}
_UN = {Not: "~", Dia: "<>", Box: "[]"}


def _unparse(f, ctx):
    cls = type(f)
    if cls is Var:
        return "p%d" % f.index
    if cls is Top:
        return "true"
    if cls is Bot:
        return "false"
    if cls in _UN:
        return _UN[cls] + _unparse(f.sub, 5)
    prec, sym, lctx, rctx = _BIN[cls]
    s = "%s %s %s" % (_unparse(f.left, lctx), sym, _unparse(f.right, rctx))
    return "(" + s + ")" if prec < ctx else s


def unparse(f: Formula) -> str:
    """Render a formula with minimal parentheses; parse(unparse(f)) == f."""
    return _unparse(f, 0)


def subformulas(f: Formula):
    """All distinct subformulas in post order (operands before operators)."""
    seen = set()
    out = []

    def walk(g):
        if g in seen:
            return
        cls = type(g)
        if cls in _UN:
            walk(g.sub)
        elif cls in _BIN:
            walk(g.left)
            walk(g.right)
        if g not in seen:
            seen.add(g)
            out.append(g)

    walk(f)
    return tuple(out)


def variables(f: Formula):
    """Sorted indices of the variables occurring in f."""
    return tuple(sorted(g.index for g in subformulas(f) if type(g) is Var))


def length(f: Formula) -> int:
    """Number of distinct subformulas."""
    return len(subformulas(f))


def dia_iter(f: Formula, i: int) -> Formula:
    """i-fold <> prefix."""
    if i < 0:
        raise ValueError("negative iteration count")
    for _ in range(i):
        f = Dia(f)
    return f


def box_iter(f: Formula, i: int) -> Formula:
    """i-fold [] prefix."""
    if i < 0:
        raise ValueError("negative iteration count")
    for _ in range(i):
        f = Box(f)
    return f


def dia_leq(f: Formula, m: int) -> Formula:
    """Disjunction f | <>f | ... | <>^m f, nested to the left."""
    if m < 0:
        raise ValueError("negative bound")
    out = f
    for i in range(1, m + 1):
        out = Or(out, dia_iter(f, i))
    return out


def box_leq(f: Formula, m: int) -> Formula:
    """Conjunction f & []f & ... & []^m f, nested to the left."""
    if m < 0:
        raise ValueError("negative bound")
    out = f
    for i in range(1, m + 1):
        out = And(out, box_iter(f, i))
    return out


def mn_axiom(m: int, n: int) -> Formula:
    """<>^n p1 -> <>^m p1, the axiom whose frames satisfy R^n included in R^m."""
    if m < 0 or n < 0:
        raise ValueError("negative power")
    return Imp(dia_iter(Var(1), n), dia_iter(Var(1), m))


def pretrans_axiom(m: int) -> Formula:
    """<>^(m+1) p1 -> (p1 | ... | <>^m p1), defining m-transitivity."""
    if m < 0:
        raise ValueError("negative power")
    return Imp(dia_iter(Var(1), m + 1), dia_leq(Var(1), m))


def build_Bh(h: int, m: int) -> Formula:
    """Height-h bound schema over variables p1..ph for m-transitive frames.

    An m-transitive frame validates build_Bh(h, m) iff its height is <= h.
    """
    if h < 1:
        raise ValueError("height must be >= 1")
    if m < 0:
        raise ValueError("negative power")
    f = Imp(Var(1), box_leq(dia_leq(Var(1), m), m))
    for i in range(2, h + 1):
        f = Imp(Var(i), box_leq(Or(dia_leq(Var(i), m), f), m))
    return f


def glivenko_translate(f: Formula, m: int) -> Formula:
    """Bounded possibility of bounded necessity: dia_leq(box_leq(f, m), m)."""
    return dia_leq(box_leq(f, m), m)
