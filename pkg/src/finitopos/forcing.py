"""Intuitionistic propositional formulas evaluated in the opens of finite spaces.

Grammar, loosest to tightest binding::

    imp  := or ('->' imp)?          right associative
    or   := and ('|' and)*
    and  := not ('&' not)*
    not  := '~' not | atom
    atom := IDENT | 'true' | 'false' | '(' imp ')'

Unicode ¬ ∧ ∨ → ⊤ ⊥ are accepted as well. Negation is sugar: ``~p`` parses
to ``Imp(p, Bot())`` and every ``Imp(p, Bot())`` prints as ``~p``.
"""

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import permutations, product
from typing import NamedTuple

import numpy as np

from .errors import BudgetExceeded, FormatError, PreconditionError
from .finspace import FiniteSpace, OpenSet


class Formula:
    __slots__ = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        if isinstance(self.right, Bot):
            return f"Not({self.left!r})"
        return f"Imp({self.left!r}, {self.right!r})"


def Not(p):
    return Imp(p, Bot())


def is_negation(p):
    return isinstance(p, Imp) and isinstance(p.right, Bot)


def atoms(p):
    """Atom names in order of first occurrence."""
    seen = {}

    def walk(q):
        if isinstance(q, Atom):
            seen.setdefault(q.name, None)
        elif isinstance(q, (And, Or, Imp)):
            walk(q.left)
            walk(q.right)

    walk(p)
    return list(seen)


def depth(p):
    if isinstance(p, (And, Or, Imp)):
        return 1 + max(depth(p.left), depth(p.right))
    return 0


# -- parsing


class ParseError(FormatError):
    def __init__(self, message, position, expected):
        self.position = position
        self.expected = tuple(sorted(expected))
        super().__init__(f"{message} at position {position}; expected one of: "
                         + ", ".join(self.expected))


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<imp>->|→|=>)
  | (?P<and>&|∧|/\\)
  | (?P<or>\||∨|\\/)
  | (?P<not>~|¬|!)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<top>⊤)
  | (?P<bot>⊥)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_KEYWORDS = {"true": "top", "false": "bot"}
_ATOM_START = {"identifier", "'true'", "'false'", "'('", "'~'"}


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, _ATOM_START | {"'->'", "'&'", "'|'", "')'"})
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident" and value in _KEYWORDS:
                kind = _KEYWORDS[value]
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.toks[self.i]
        what = "end of input" if kind == "end" else f"{value!r}"
        raise ParseError(f"unexpected {what}", pos, expected)

    def parse(self):
        p = self.imp()
        if self.peek() != "end":
            self.fail({"'->'", "'&'", "'|'", "end of input"})
        return p

    def imp(self):
        left = self.disj()
        if self.peek() == "imp":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "or":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.neg()
        while self.peek() == "and":
            self.take()
            left = And(left, self.neg())
        return left

    def neg(self):
        if self.peek() == "not":
            self.take()
            return Not(self.neg())
        return self.atom()

    def atom(self):
        kind = self.peek()
        if kind == "ident":
            return Atom(self.take()[1])
        if kind == "top":
            self.take()
            return Top()
        if kind == "bot":
            self.take()
            return Bot()
        if kind == "lp":
            self.take()
            p = self.imp()
            if self.peek() != "rp":
                self.fail({"')'", "'->'", "'&'", "'|'"})
            self.take()
            return p
        self.fail(_ATOM_START)


def parse_formula(text):
    return _Parser(text).parse()


# -- printing

_PREC = {Imp: 1, Or: 2, And: 3}
_ASCII = {Imp: " -> ", Or: " | ", And: " & ", "not": "~", Top: "true", Bot: "false"}
_UNICODE = {Imp: " → ", Or: " ∨ ", And: " ∧ ", "not": "¬", Top: "⊤", Bot: "⊥"}


def _prec(p):
    if is_negation(p):
        return 4
    return _PREC.get(type(p), 5)


def show(p, unicode=False):
    """Canonical text with minimal parentheses; parse(show(p)) == p."""
    sym = _UNICODE if unicode else _ASCII

    def wrap(q, need):
        s = go(q)
        return f"({s})" if _prec(q) < need else s

    def go(q):
        if isinstance(q, Atom):
            return q.name
        if isinstance(q, (Top, Bot)):
            return sym[type(q)]
        if is_negation(q):
            return sym["not"] + wrap(q.left, 4)
        k = _PREC[type(q)]
        if isinstance(q, Imp):
            return wrap(q.left, k + 1) + sym[Imp] + wrap(q.right, k)
        return wrap(q.left, k) + sym[type(q)] + wrap(q.right, k + 1)

    return go(p)


# -- Heyting semantics


def _valuation_masks(space, valuation, names):
    masks = {}
    for name in names:
        if name not in valuation:
            raise PreconditionError(f"atom {name!r} has no value")
        u = valuation[name]
        if isinstance(u, OpenSet):
            if u.space is not space and u.space != space:
                raise PreconditionError("valuation uses opens of a different space")
            masks[name] = u.mask
        else:
            m = space.mask(u)
            if not space.is_open(m):
                raise PreconditionError(f"value of {name!r} is not open")
            masks[name] = m
    return masks


def _eval_mask(space, masks, p):
    if isinstance(p, Atom):
        return masks[p.name]
    if isinstance(p, Top):
        return space.full
    if isinstance(p, Bot):
        return 0
    a = _eval_mask(space, masks, p.left)
    b = _eval_mask(space, masks, p.right)
    if isinstance(p, And):
        return a & b
    if isinstance(p, Or):
        return a | b
    return space.implies(a, b)


def eval_open(space, valuation, p):
    """Open set where p holds: ∧ ∩, ∨ ∪, → relative pseudo-complement, ⊥ ∅."""
    masks = _valuation_masks(space, valuation, atoms(p))
    return OpenSet(space, _eval_mask(space, masks, p))


def valuations(space, names):
    """Every assignment of opens to the given atom names, in product order."""
    opens = space.open_sets()
    for combo in product(opens, repeat=len(names)):
        yield dict(zip(names, combo))


def is_valid_on(space, p):
    names = atoms(p)
    return all(eval_open(space, v, p).mask == space.full for v in valuations(space, names))


def _region(space, U):
    if isinstance(U, OpenSet):
        if U.space is not space and U.space != space:
            raise PreconditionError("region belongs to a different space")
        return U.mask
    m = space.mask(U)
    if not space.is_open(m):
        raise PreconditionError("region is not open")
    return m


def forces(space, valuation, U, p):
    """U ⊩ p: the region U lies inside the open where p holds."""
    u = _region(space, U)
    return u & ~eval_open(space, valuation, p).mask == 0


def forces_by_clauses(space, valuation, U, p):
    """U ⊩ p computed by the recursive forcing clauses, without eval_open.

    ⊥ is forced only by ∅; U forces a disjunction when the opens inside U
    forcing one of the disjuncts cover U; U forces p → q when every open
    V ⊆ U forcing p forces q.
    """
    masks = _valuation_masks(space, valuation, atoms(p))
    below = {u: [v for v in space.opens if v & ~u == 0] for u in space.opens}
    memo = {}

    def f(u, q):
        key = (u, q)
        if key in memo:
            return memo[key]
        if isinstance(q, Atom):
            r = u & ~masks[q.name] == 0
        elif isinstance(q, Top):
            r = True
        elif isinstance(q, Bot):
            r = u == 0
        elif isinstance(q, And):
            r = f(u, q.left) and f(u, q.right)
        elif isinstance(q, Or):
            cover = 0
            for v in below[u]:
                if f(v, q.left) or f(v, q.right):
                    cover |= v
            r = cover == u
        else:
            r = all(f(v, q.right) for v in below[u] if f(v, q.left))
        memo[key] = r
        return r

    return f(_region(space, U), p)


def forces_notnot_unfolded(space, valuation, U, p):
    """U ⊩ ¬¬p read as: every nonempty subregion V of U contains a nonempty
    subregion W with W ⊩ p."""
    u = _region(space, U)
    good = eval_open(space, valuation, p).mask
    inside = [v for v in space.opens if v and v & ~u == 0]
    return all(any(w and w & ~v == 0 and w & ~good == 0 for w in space.opens) for v in inside)


# -- translations and classical semantics


def kolmogorov(p):
    """Prefix ¬¬ to every subformula."""
    if isinstance(p, (Atom, Top, Bot)):
        return Not(Not(p))
    return Not(Not(type(p)(kolmogorov(p.left), kolmogorov(p.right))))


def _truth_table(p, names):
    k = len(names)
    rows = np.arange(1 << k, dtype=np.int64)
    cols = {name: ((rows >> (k - 1 - i)) & 1).astype(bool) for i, name in enumerate(names)}

    def go(q):
        if isinstance(q, Atom):
            return cols[q.name]
        if isinstance(q, Top):
            return np.ones(len(rows), dtype=bool)
        if isinstance(q, Bot):
            return np.zeros(len(rows), dtype=bool)
        a, b = go(q.left), go(q.right)
        if isinstance(q, And):
            return a & b
        if isinstance(q, Or):
            return a | b
        return ~a | b

    return go(p)


def classical_validity(p, max_atoms=20):
    """Two-valued validity by full truth table."""
    names = atoms(p)
    if len(names) > max_atoms:
        raise BudgetExceeded("truth table", f"{max_atoms} atoms")
    return bool(_truth_table(p, names).all())


def falsifying_row(p, max_atoms=20):
    names = atoms(p)
    if len(names) > max_atoms:
        raise BudgetExceeded("truth table", f"{max_atoms} atoms")
    table = _truth_table(p, names)
    bad = np.flatnonzero(~table)
    if len(bad) == 0:
        return None
    row = int(bad[0])
    k = len(names)
    return {name: bool(row >> (k - 1 - i) & 1) for i, name in enumerate(names)}


# -- finite spaces up to homeomorphism


@lru_cache(maxsize=None)
def _perms(n):
    return np.array(list(permutations(range(n))), dtype=np.intp).reshape(-1, n)


def _canonical(M):
    n = M.shape[0]
    P = _perms(n)
    relabelled = M[P[:, :, None], P[:, None, :]].reshape(len(P), -1).astype(np.int64)
    weights = np.left_shift(np.int64(1), np.arange(n * n - 1, -1, -1, dtype=np.int64))
    codes = relabelled @ weights
    best = int(np.argmin(codes))
    return int(codes[best]), M[np.ix_(P[best], P[best])]


def canonical_code(M):
    """Isomorphism invariant of a relation matrix: its least code over relabellings."""
    return _canonical(np.asarray(M, dtype=bool))[0]


@lru_cache(maxsize=None)
def preorders_up_to_iso(n):
    """One canonical relation matrix per isomorphism class of preorders on n
    points, sorted by canonical code. ``M[i, j]`` means point i ≤ point j."""
    if n == 0:
        return (np.zeros((0, 0), dtype=bool),)
    found = {}
    for R in preorders_up_to_iso(n - 1):
        m = n - 1
        idx = range(m)
        downs = [S for S in _subsets(m) if all(R[a, b] <= (a in S) for b in S for a in idx)]
        ups = [S for S in _subsets(m) if all(R[a, b] <= (b in S) for a in S for b in idx)]
        for B in downs:
            for A in ups:
                if not all(R[b, a] for b in B for a in A):
                    continue
                M = np.zeros((n, n), dtype=bool)
                M[:m, :m] = R
                M[m, m] = True
                for b in B:
                    M[b, m] = True
                for a in A:
                    M[m, a] = True
                code, canon = _canonical(M)
                found.setdefault(code, canon)
    return tuple(found[c] for c in sorted(found))


def _subsets(m):
    return [frozenset(i for i in range(m) if bits >> i & 1) for bits in range(1 << m)]


def space_from_matrix(M):
    n = M.shape[0]
    points = [f"p{i}" for i in range(n)]
    pairs = [(points[i], points[j]) for i in range(n) for j in range(n) if M[i, j]]
    from .finspace import from_preorder
    return from_preorder(points, pairs)


@lru_cache(maxsize=None)
def spaces_up_to_homeomorphism(n):
    return tuple(space_from_matrix(M) for M in preorders_up_to_iso(n))


# -- countermodel search

_CHUNK = 1 << 18


class Countermodel(NamedTuple):
    space: FiniteSpace
    valuation: dict
    value: OpenSet


def _eval_vector(space, table, columns, p):
    if isinstance(p, Atom):
        return columns[p.name]
    if isinstance(p, Top):
        return np.int64(space.full)
    if isinstance(p, Bot):
        return np.int64(0)
    a = _eval_vector(space, table, columns, p.left)
    b = _eval_vector(space, table, columns, p.right)
    if isinstance(p, And):
        return a & b
    if isinstance(p, Or):
        return a | b
    return table[(~a | b) & space.full]


def find_countermodel_on(space, p):
    """First valuation (product order over atoms) where p is not total, or None."""
    names = atoms(p)
    opens = np.array(space.opens, dtype=np.int64)
    table = np.array(space.interior_table(), dtype=np.int64)
    k = len(names)
    total = len(opens) ** k
    for start in range(0, max(total, 1), _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64) if k else np.zeros(1, np.int64)
        columns = {}
        rest = idx
        for i in range(k - 1, -1, -1):
            columns[names[i]] = opens[rest % len(opens)]
            rest = rest // len(opens)
        value = np.broadcast_to(_eval_vector(space, table, columns, p), idx.shape)
        bad = np.flatnonzero(value != space.full)
        if len(bad):
            j = int(bad[0])
            val = {name: OpenSet(space, int(columns[name][j])) for name in names}
            return Countermodel(space, val, OpenSet(space, int(value[j])))
    return None


def countermodel_search(p, max_points=5):
    """Smallest finite space (by point count, then canonical order) and valuation
    where p fails to hold everywhere, or None within the bound."""
    if max_points < 1:
        raise PreconditionError("max_points must be at least 1")
    for n in range(1, max_points + 1):
        for space in spaces_up_to_homeomorphism(n):
            found = find_countermodel_on(space, p)
            if found is not None:
                return found
    return None


# -- bundled corpus


class CorpusEntry(NamedTuple):
    name: str
    formula: Formula
    classical: bool | None
    intuitionistic: bool | None


def load_formula_corpus(path=None):
    """Named formulas from a JSON list of {"name", "formula"} records.

    The bundled corpus also records each formula's classical and
    intuitionistic status.
    """
    if path is None:
        text = resources.files("finitopos").joinpath("data/formulas.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
        return [CorpusEntry(r["name"], parse_formula(r["formula"]),
                            r.get("classical"), r.get("intuitionistic")) for r in raw]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"malformed formula corpus: {exc}") from None
