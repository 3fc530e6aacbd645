"""Modal formulas over Kripke frames: evaluation, frame validity, Geach schemes.

Formulas are evaluated by extension: every subformula is turned into the
bitmask of worlds where it holds, so a single pass over the tree answers the
question for every world at once.

Text syntax (used by the CLI)::

    formula := implication
    implication := disjunction [ "->" implication ]      (right associative)
    disjunction := conjunction { "|" conjunction }
    conjunction := unary { "&" unary }
    unary := "~" unary
           | "[]" [ "^" INT ] unary
           | "<>" [ "^" INT ] unary
           | IDENT
           | "(" formula ")"

``[]^3 p`` abbreviates ``[][][] p``; ``[]^0 p`` is just ``p``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

from modalcount.errors import InputError, LimitError
from modalcount.relations import Frame, has_property, relation_power

#: Default cap on the number of valuations :func:`frame_validates` enumerates.
VALUATION_BUDGET = 1 << 24


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"~{_wrap(self.arg)}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Box:
    arg: "Formula"

    def __str__(self):
        return f"[]{_wrap(self.arg)}"


@dataclass(frozen=True)
class Diamond:
    arg: "Formula"

    def __str__(self):
        return f"<>{_wrap(self.arg)}"


Formula = Union[Atom, Not, And, Or, Implies, Box, Diamond]


def _wrap(f: Formula) -> str:
    s = str(f)
    return s if isinstance(f, (Atom, Not, Box, Diamond)) or s.startswith("(") else f"({s})"


def box_pow(m: int, f: Formula) -> Formula:
    if m < 0:
        raise InputError(f"modal power must be non-negative, got {m}")
    for _ in range(m):
        f = Box(f)
    return f


def diamond_pow(m: int, f: Formula) -> Formula:
    if m < 0:
        raise InputError(f"modal power must be non-negative, got {m}")
    for _ in range(m):
        f = Diamond(f)
    return f


def atoms(f: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            seen.setdefault(g.name)
        elif isinstance(g, (Not, Box, Diamond)):
            stack.append(g.arg)
        else:
            stack.append(g.right)
            stack.append(g.left)
    return list(seen)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|(\[\])|(<>)|([~&|()^])|([A-Za-z_][A-Za-z0-9_]*)|(\d+))")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"unexpected character at offset {pos} in {text!r}")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise InputError(f"expected {want} in {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("[]", "<>"):
            self.take()
            m = 1
            if self.peek() == "^":
                self.take()
                num = self.take()
                if not num.isdigit():
                    raise InputError(f"expected a repetition count after '^' in {self.text!r}")
                m = int(num)
            arg = self.unary()
            return box_pow(m, arg) if tok == "[]" else diamond_pow(m, arg)
        if tok == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if tok is not None and re.fullmatch(r"[A-Za-z_]\w*", tok):
            self.take()
            return Atom(tok)
        raise InputError(f"unexpected token {tok!r} in {self.text!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.implication()
    if p.peek() is not None:
        raise InputError(f"trailing input {p.peek()!r} in {text!r}")
    return f


# -- semantics ---------------------------------------------------------------


@dataclass(frozen=True)
class Model:
    frame: Frame
    valuation: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        for name, worlds in self.valuation.items():
            for w in worlds:
                if not 0 <= w < self.frame.n:
                    raise InputError(f"atom {name!r} true at world {w}, outside [0, {self.frame.n})")

    def masks(self) -> dict[str, int]:
        return {name: sum(1 << w for w in worlds) for name, worlds in self.valuation.items()}


def extension(frame: Frame, masks: Mapping[str, int], f: Formula) -> int:
    """Bitmask of the worlds where ``f`` holds; unknown atoms are false everywhere."""
    n = frame.n
    full = (1 << n) - 1
    rows = frame.rows

    def ext(g) -> int:
        if isinstance(g, Atom):
            return masks.get(g.name, 0) & full
        if isinstance(g, Not):
            return full & ~ext(g.arg)
        if isinstance(g, And):
            return ext(g.left) & ext(g.right)
        if isinstance(g, Or):
            return ext(g.left) | ext(g.right)
        if isinstance(g, Implies):
            return (full & ~ext(g.left)) | ext(g.right)
        if isinstance(g, Box):
            inner = ext(g.arg)
            return sum(1 << w for w in range(n) if not rows[w] & ~inner)
        if isinstance(g, Diamond):
            inner = ext(g.arg)
            return sum(1 << w for w in range(n) if rows[w] & inner)
        raise TypeError(f"not a formula: {g!r}")

    return ext(f)


def eval_formula(m: Model, w: int, f: Formula) -> bool:
    if not 0 <= w < m.frame.n:
        raise InputError(f"world {w} outside [0, {m.frame.n})")
    return bool(extension(m.frame, m.masks(), f) >> w & 1)


def frame_validates(f: Frame, phi: Formula, budget: int = VALUATION_BUDGET) -> bool:
    """True iff ``phi`` holds at every world under every valuation of its atoms."""
    names = atoms(phi)
    required = 1 << (len(names) * f.n)
    if required > budget:
        raise LimitError(f"validity check needs {required} valuations, budget is {budget}")
    full = (1 << f.n) - 1
    for combo in itertools.product(range(1 << f.n), repeat=len(names)):
        if extension(f, dict(zip(names, combo)), phi) != full:
            return False
    return True


# -- Geach schemes and their frame conditions ---------------------------------


@dataclass(frozen=True)
class GeachIndex:
    h: int
    i: int
    j: int
    k: int

    def __post_init__(self):
        if min(self.h, self.i, self.j, self.k) < 0:
            raise InputError(f"Geach indices must be non-negative: {self}")


def geach_formula(g: GeachIndex) -> Formula:
    """``<>^h []^i p -> []^j <>^k p``."""
    p = Atom("p")
    return Implies(diamond_pow(g.h, box_pow(g.i, p)), box_pow(g.j, diamond_pow(g.k, p)))


def geach_property(f: Frame, g: GeachIndex) -> bool:
    """(h,i,j,k)-confluence: w R^h v and w R^j u imply v R^i x and u R^k x for some x."""
    rh = relation_power(f, g.h).rows
    ri = relation_power(f, g.i).rows
    rj = relation_power(f, g.j).rows
    rk = relation_power(f, g.k).rows
    for w in range(f.n):
        for v in range(f.n):
            if not rh[w] >> v & 1:
                continue
            for u in range(f.n):
                if rj[w] >> u & 1 and not ri[v] & rk[u]:
                    return False
    return True


_p, _q = Atom("p"), Atom("q")

AXIOMS: dict[str, Formula] = {
    "K": Implies(Box(Implies(_p, _q)), Implies(Box(_p), Box(_q))),
    "T": geach_formula(GeachIndex(0, 1, 0, 0)),
    "4": geach_formula(GeachIndex(0, 1, 2, 0)),
    "5": geach_formula(GeachIndex(1, 0, 1, 1)),
    "B": geach_formula(GeachIndex(0, 0, 1, 1)),
}


def is_s5(f: Frame) -> bool:
    """Whether ``f`` is an equivalence relation.

    On finite frames this coincides with validating both T and 5 (checked
    exhaustively in the test suite rather than assumed here).
    """
    return has_property(f, "equivalence")
