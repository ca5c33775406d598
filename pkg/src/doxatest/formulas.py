"""Propositional language over named atoms.

Formulas are immutable ASTs.  Negation and disjunction are the primitive
connectives; conjunction, implication and equivalence are evaluated through
their usual definitions in terms of those two, and a test pins the
definitional identities down extensionally.  Semantic questions (tautology,
contradiction, finite-premise consequence) are decided by exhaustive truth
tables, which is exact at the intended scale and guarded by an atom limit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import MissingAtomError, ParseError, SizeLimitError

DEFAULT_ATOM_LIMIT = 20

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class Formula:
    """Base class for formula nodes.  ``~``, ``&``, ``|`` and ``>>`` build
    negation, conjunction, disjunction and implication."""

    __slots__ = ()

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


TRUE = TrueConst()
FALSE = FalseConst()


class Classification(str, Enum):
    TAUTOLOGY = "tautology"
    CONTRADICTION = "contradiction"
    CONTINGENT = "contingent"


def atoms(formula: Formula) -> frozenset[str]:
    """The set of atom names occurring in the formula."""
    if isinstance(formula, Atom):
        return frozenset((formula.name,))
    if isinstance(formula, Not):
        return atoms(formula.child)
    if isinstance(formula, (And, Or, Implies, Iff)):
        return atoms(formula.left) | atoms(formula.right)
    return frozenset()


def eval_formula(formula: Formula, assignment: Mapping[str, bool]) -> bool:
    """Evaluate under a total truth assignment.

    Negation and disjunction are primitive; the remaining connectives are
    evaluated so that the definitional identities
    a & b == !(!a | !b), a -> b == !a | b, a <-> b == (a -> b) & (b -> a)
    hold extensionally.
    """
    if isinstance(formula, Atom):
        try:
            return bool(assignment[formula.name])
        except KeyError:
            raise MissingAtomError(
                f"assignment does not cover atom {formula.name!r}"
            ) from None
    if isinstance(formula, Not):
        return not eval_formula(formula.child, assignment)
    if isinstance(formula, Or):
        return eval_formula(formula.left, assignment) or eval_formula(formula.right, assignment)
    if isinstance(formula, And):
        return eval_formula(formula.left, assignment) and eval_formula(formula.right, assignment)
    if isinstance(formula, Implies):
        return (not eval_formula(formula.left, assignment)) or eval_formula(formula.right, assignment)
    if isinstance(formula, Iff):
        return eval_formula(formula.left, assignment) is eval_formula(formula.right, assignment)
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, FalseConst):
        return False
    raise TypeError(f"not a formula: {formula!r}")


def assignments(names: Sequence[str]) -> Iterator[dict[str, bool]]:
    """All truth assignments over ``names``, in binary counting order with the
    first name as the most significant bit."""
    n = len(names)
    for word in range(1 << n):
        yield {name: bool((word >> (n - 1 - i)) & 1) for i, name in enumerate(names)}


def _check_limit(count: int, limit: int) -> None:
    if count > limit:
        raise SizeLimitError(f"{count} atoms exceeds the truth-table limit of {limit}")


def classify(formula: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> Classification:
    """Decide tautology / contradiction / contingent by truth table."""
    names = sorted(atoms(formula))
    _check_limit(len(names), atom_limit)
    seen_true = seen_false = False
    for a in assignments(names):
        if eval_formula(formula, a):
            seen_true = True
        else:
            seen_false = True
        if seen_true and seen_false:
            return Classification.CONTINGENT
    return Classification.TAUTOLOGY if seen_true else Classification.CONTRADICTION


def is_tautology(formula: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    return classify(formula, atom_limit) is Classification.TAUTOLOGY


def is_contradiction(formula: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    return classify(formula, atom_limit) is Classification.CONTRADICTION


def cn_member(
    premises: Iterable[Formula],
    conclusion: Formula,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> bool:
    """Classical consequence over finite premise sets, decided semantically.

    Inconsistent premises entail everything; an empty premise set reduces to a
    tautology test on the conclusion.
    """
    premises = list(premises)
    names: set[str] = set(atoms(conclusion))
    for p in premises:
        names |= atoms(p)
    ordered = sorted(names)
    _check_limit(len(ordered), atom_limit)
    for a in assignments(ordered):
        if all(eval_formula(p, a) for p in premises) and not eval_formula(conclusion, a):
            return False
    return True


# ---------------------------------------------------------------------------
# parsing and rendering
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<iff><->)"
    r"|(?P<imp>->)"
    r"|(?P<not>!)"
    r"|(?P<and>&)"
    r"|(?P<or>\|)"
    r"|(?P<lp>\()"
    r"|(?P<rp>\))"
    r"|(?P<word>[a-z][a-zA-Z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def _peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def _advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self._iff()
        if self.i < len(self.tokens):
            raise ParseError(f"unexpected {self.tokens[self.i][1]!r}", self._pos())
        return f

    def _iff(self) -> Formula:
        left = self._imp()
        while self._peek() == "iff":
            self._advance()
            left = Iff(left, self._imp())
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self._peek() == "imp":
            self._advance()
            return Implies(left, self._imp())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self._peek() == "or":
            self._advance()
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._peek() == "and":
            self._advance()
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        kind = self._peek()
        if kind == "not":
            self._advance()
            return Not(self._unary())
        if kind == "lp":
            self._advance()
            f = self._iff()
            if self._peek() != "rp":
                raise ParseError("expected ')'", self._pos())
            self._advance()
            return f
        if kind == "word":
            _, word, _ = self._advance()
            if word == "true":
                return TRUE
            if word == "false":
                return FALSE
            return Atom(word)
        raise ParseError("expected a formula", self._pos())


def parse_formula(text: str) -> Formula:
    """Parse formula text.

    Precedence, loosest first: ``<->``, ``->``, ``|``, ``&``, ``!``;
    implication associates to the right, ``<->``/``|``/``&`` fold to the
    left; whitespace is insignificant; ``true``/``false`` are reserved.
    """
    return _Parser(_tokenize(text), text).parse()


_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OP = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def render(formula: Formula) -> str:
    """Render with minimal parentheses; ``parse_formula(render(f)) == f``."""
    return _render(formula, 0)


def _render(formula: Formula, min_level: int) -> str:
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, TrueConst):
        return "true"
    if isinstance(formula, FalseConst):
        return "false"
    if isinstance(formula, Not):
        return "!" + _render(formula.child, 5)
    level = _LEVEL[type(formula)]
    if isinstance(formula, Implies):
        left, right = _render(formula.left, level + 1), _render(formula.right, level)
    else:
        left, right = _render(formula.left, level), _render(formula.right, level + 1)
    text = f"{left} {_OP[type(formula)]} {right}"
    return f"({text})" if level < min_level else text


# ---------------------------------------------------------------------------
# formula pools for exhaustive and randomized sweeps
# ---------------------------------------------------------------------------

def truth_vector(formula: Formula, names: Sequence[str]) -> int:
    """Truth table of the formula over ``names`` packed into an int, one bit
    per assignment in `assignments` order."""
    vec = 0
    for i, a in enumerate(assignments(names)):
        if eval_formula(formula, a):
            vec |= 1 << i
    return vec


def semantic_pool(
    atom_names: Sequence[str], depth: int = 3, per_class: int = 1
) -> list[Formula]:
    """Representatives of every Boolean function over ``atom_names`` reachable
    by connective nesting up to ``depth``, at most ``per_class`` syntactic
    variants per semantic class.  Enumeration order is deterministic, so the
    pool can serve as a frozen quantification domain in tests.
    """
    names = sorted(atom_names)
    classes: dict[int, list[Formula]] = {}

    def add(f: Formula) -> None:
        v = truth_vector(f, names)
        bucket = classes.setdefault(v, [])
        if len(bucket) < per_class:
            bucket.append(f)

    for f in [TRUE, FALSE, *(Atom(n) for n in names)]:
        add(f)
    for _ in range(depth):
        reps = [bucket[0] for bucket in classes.values()]
        stored = [f for bucket in classes.values() for f in bucket]
        for f in stored:
            add(Not(f))
        for f, g in itertools.product(reps, reps):
            add(And(f, g))
            add(Or(f, g))
            add(Implies(f, g))
            add(Iff(f, g))
    return [f for bucket in classes.values() for f in bucket]


def random_formula(rng, atom_names: Sequence[str], max_depth: int = 3) -> Formula:
    """A random formula over ``atom_names``; deterministic under a seeded rng."""
    if max_depth == 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.05:
            return TRUE
        if roll < 0.1:
            return FALSE
        return Atom(rng.choice(list(atom_names)))
    op = rng.choice(("not", "and", "or", "imp", "iff"))
    if op == "not":
        return Not(random_formula(rng, atom_names, max_depth - 1))
    left = random_formula(rng, atom_names, max_depth - 1)
    right = random_formula(rng, atom_names, max_depth - 1)
    ctor = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op]
    return ctor(left, right)
