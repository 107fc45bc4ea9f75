"""First-order logic over the matroid language and Stone pairings.

The language has one relation ``I_k`` per arity: ``I_k(x_1, ..., x_k)``
holds when the elements are pairwise distinct and independent.  A tuple with
a repeated element has rank below ``k``, so it is dependent.

Formula syntax::

    phi ::= phi -> phi | phi '|' phi | phi & phi | !phi
          | exists x . phi | forall x . phi | ( phi )
          | Ik(x1, ..., xk) | x = y | true | false

``->`` associates to the right, quantifier bodies extend as far right as
possible, and precedence runs ``!`` > ``&`` > ``|`` > ``->``.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .errors import FormulaError, GuardExceeded, PreconditionError
from .matroid import Matroid, popcount

DEFAULT_TUPLE_BUDGET = 10**7
BUDGET_ENV = "BRANCHDEPTH_TUPLE_BUDGET"


def tuple_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_TUPLE_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise PreconditionError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


# -- syntax tree -----------------------------------------------------------


@dataclass(frozen=True)
class Formula:
    def free_vars(self) -> tuple[str, ...]:
        out: list[str] = []
        self._collect(frozenset(), out)
        return tuple(out)

    def _collect(self, bound, out):
        raise NotImplementedError

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


def _note(v, bound, out):
    if v not in bound and v not in out:
        out.append(v)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def _collect(self, bound, out):
        pass

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Indep(Formula):
    args: tuple[str, ...]

    def _collect(self, bound, out):
        for v in self.args:
            _note(v, bound, out)

    def __str__(self):
        return f"I{len(self.args)}({', '.join(self.args)})"


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str

    def _collect(self, bound, out):
        _note(self.left, bound, out)
        _note(self.right, bound, out)

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def _collect(self, bound, out):
        self.body._collect(bound, out)

    def __str__(self):
        body = self.body
        return f"!{body}" if isinstance(body, (Const, Indep, Not)) else f"!({body})"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def _collect(self, bound, out):
        self.left._collect(bound, out)
        self.right._collect(bound, out)

    def __str__(self):
        return f"{_wrap(self.left)} & {_wrap(self.right)}"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def _collect(self, bound, out):
        self.left._collect(bound, out)
        self.right._collect(bound, out)

    def __str__(self):
        return f"{_wrap(self.left)} | {_wrap(self.right)}"


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def _collect(self, bound, out):
        self.left._collect(bound, out)
        self.right._collect(bound, out)

    def __str__(self):
        return f"{_wrap(self.left)} -> {_wrap(self.right)}"


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula

    def _collect(self, bound, out):
        self.body._collect(bound | {self.var}, out)

    def __str__(self):
        return f"exists {self.var} . {self.body}"


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula

    def _collect(self, bound, out):
        self.body._collect(bound | {self.var}, out)

    def __str__(self):
        return f"forall {self.var} . {self.body}"


def _wrap(phi):
    return str(phi) if isinstance(phi, (Const, Indep, Eq, Not)) else f"({phi})"


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Const(True)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# -- parser ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|(!=)|([!&|=().,])|(\d+)|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"exists", "forall", "true", "false"}


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, p = self.toks[self.i]
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise FormulaError(f"expected {expected!r}, found {shown}", p)
        self.i += 1
        return tok

    def variable(self):
        tok, p = self.toks[self.i]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok or "") or tok in _KEYWORDS \
                or re.fullmatch(r"I\d+", tok):
            shown = repr(tok) if tok else "end of input"
            raise FormulaError(f"expected a variable, found {shown}", p)
        self.i += 1
        return tok

    def formula(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            self.take()
            v = self.variable()
            self.take(".")
            body = self.formula()
            return Exists(v, body) if tok == "exists" else Forall(v, body)
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if re.fullmatch(r"I\d+", tok or ""):
            p = self.pos()
            k = int(tok[1:])
            self.take()
            self.take("(")
            args = []
            if self.peek() != ")":
                args.append(self.variable())
                while self.peek() == ",":
                    self.take()
                    args.append(self.variable())
            self.take(")")
            if len(args) != k:
                raise FormulaError(f"I{k} applied to {len(args)} arguments", p)
            return Indep(tuple(args))
        left = self.variable()
        op = self.peek()
        if op == "=":
            self.take()
            return Eq(left, self.variable())
        if op == "!=":
            self.take()
            return Not(Eq(left, self.variable()))
        raise FormulaError(f"expected '=' after variable {left!r}", self.pos())


def parse(text: str) -> Formula:
    """Parse formula text, or a built-in name such as ``theta0``."""
    stripped = text.strip()
    m = re.fullmatch(r"([A-Za-z_]\w*)\s*(?:\(\s*(\d+)\s*\))?", stripped)
    if m and m.group(1) in BUILTINS:
        return builtin(m.group(1), None if m.group(2) is None else int(m.group(2)))
    p = _Parser(text)
    if p.peek() == "":
        raise FormulaError("empty formula", 0)
    phi = p.formula()
    if p.peek() != "":
        raise FormulaError(f"unexpected {p.peek()!r}", p.pos())
    return phi


# -- built-in formulas -----------------------------------------------------


def theta0() -> Formula:
    """``x`` has a parallel partner: some other ``y`` makes ``{x, y}`` dependent."""
    return Exists("y", And(Not(Eq("x", "y")), Not(Indep(("x", "y")))))


def thetaE() -> Formula:
    return Not(Indep(("x", "y")))


def theta1() -> Formula:
    """Edge relation: a third element independent of each lies on their line."""
    return And(Indep(("x", "y")), Exists("z", conj([
        Indep(("x", "z")), Indep(("y", "z")), Not(Indep(("x", "y", "z")))])))


def no_circuit_longer_than(K: int) -> Formula:
    """Sentence saying no ``K + 1`` distinct elements form a circuit.

    It holds whenever every circuit has at most ``K`` elements.  (A bounded
    number of variables cannot exclude arbitrarily long circuits, so only the
    next length is forbidden.)
    """
    if K < 0:
        raise FormulaError("circuit length bound must be non-negative")
    xs = tuple(f"x{i}" for i in range(1, K + 2))
    parts = [Not(Eq(a, b)) for i, a in enumerate(xs) for b in xs[i + 1:]]
    parts.append(Not(Indep(xs)))
    if K >= 1:
        parts += [Indep(xs[:i] + xs[i + 1:]) for i in range(len(xs))]
    body: Formula = conj(parts)
    for v in reversed(xs):
        body = Exists(v, body)
    return Not(body)


BUILTINS = {
    "theta0": lambda K: theta0(),
    "theta1": lambda K: theta1(),
    "thetaE": lambda K: thetaE(),
    "no_circuit_longer_than": no_circuit_longer_than,
}


def builtin(name: str, K: int | None = None) -> Formula:
    if name not in BUILTINS:
        raise FormulaError(f"unknown built-in formula {name!r}")
    if name == "no_circuit_longer_than" and K is None:
        raise FormulaError("no_circuit_longer_than needs a bound, e.g. no_circuit_longer_than(3)")
    return BUILTINS[name](K)


# -- evaluation ------------------------------------------------------------


def compile_formula(M: Matroid, phi: Formula, free: tuple[str, ...]):
    """Turn ``phi`` into a predicate on an environment list.

    Slots ``0..len(free)-1`` hold the free variables; quantified variables get
    fresh slots, so shadowing is handled by position.
    """
    n = M.n
    rank = M.rank_mask
    nslots = [len(free)]

    def build(node, scope):
        if isinstance(node, Const):
            val = node.value
            return lambda env: val
        if isinstance(node, Indep):
            slots = []
            for v in node.args:
                if v not in scope:
                    raise FormulaError(f"unbound variable {v!r}")
                slots.append(scope[v])
            k = len(slots)
            if k == 0:
                return lambda env: True

            def indep(env):
                m = 0
                for s in slots:
                    m |= 1 << env[s]
                return popcount(m) == k and rank(m) == k
            return indep
        if isinstance(node, Eq):
            for v in (node.left, node.right):
                if v not in scope:
                    raise FormulaError(f"unbound variable {v!r}")
            a, b = scope[node.left], scope[node.right]
            return lambda env: env[a] == env[b]
        if isinstance(node, Not):
            f = build(node.body, scope)
            return lambda env: not f(env)
        if isinstance(node, And):
            f, g = build(node.left, scope), build(node.right, scope)
            return lambda env: f(env) and g(env)
        if isinstance(node, Or):
            f, g = build(node.left, scope), build(node.right, scope)
            return lambda env: f(env) or g(env)
        if isinstance(node, Implies):
            f, g = build(node.left, scope), build(node.right, scope)
            return lambda env: (not f(env)) or g(env)
        if isinstance(node, (Exists, Forall)):
            slot = nslots[0]
            nslots[0] += 1
            f = build(node.body, {**scope, node.var: slot})
            if isinstance(node, Exists):
                def ex(env):
                    for x in range(n):
                        env[slot] = x
                        if f(env):
                            return True
                    return False
                return ex

            def fa(env):
                for x in range(n):
                    env[slot] = x
                    if not f(env):
                        return False
                return True
            return fa
        raise FormulaError(f"unknown formula node {type(node).__name__}")

    pred = build(phi, {v: i for i, v in enumerate(free)})
    return pred, nslots[0]


def evaluate(M: Matroid, phi: Formula, assignment: dict | None = None) -> bool:
    """Truth of ``phi`` in ``M`` under ``assignment`` (free variable -> element)."""
    assignment = dict(assignment or {})
    free = phi.free_vars()
    if set(assignment) != set(free):
        missing = sorted(set(free) - set(assignment))
        extra = sorted(set(assignment) - set(free))
        raise FormulaError(f"assignment mismatch: missing {missing}, unexpected {extra}")
    for v, e in assignment.items():
        if not 0 <= e < M.n:
            raise FormulaError(f"variable {v!r} assigned to {e}, outside the ground set")
    pred, size = compile_formula(M, phi, free)
    env = [0] * size
    for i, v in enumerate(free):
        env[i] = assignment[v]
    return bool(pred(env))


# -- Stone pairings --------------------------------------------------------


@dataclass(frozen=True)
class StoneValue:
    """Exact fraction, or a Monte Carlo estimate with its standard error."""

    value: Fraction | float
    exact: bool
    stderr: float = 0.0
    samples: int = 0
    seed: int | None = None

    def __float__(self):
        return float(self.value)

    def __str__(self):
        if self.exact:
            return f"{self.value} ({float(self.value):.6f})"
        return f"{self.value:.6f} +- {self.stderr:.6f} (samples={self.samples}, seed={self.seed})"


def _check_domain(M, k):
    if M.n == 0 and k > 0:
        raise PreconditionError("the pairing of a formula with free variables needs a non-empty ground set")


def stone_pairing_exact(M: Matroid, phi: Formula, budget: int | None = None) -> StoneValue:
    """Fraction of all ``n^k`` tuples (repeats included) that satisfy ``phi``."""
    free = phi.free_vars()
    k = len(free)
    _check_domain(M, k)
    budget = tuple_budget() if budget is None else budget
    total = M.n**k
    if total > budget:
        raise GuardExceeded(f"{total} tuples exceed the enumeration budget {budget}; use Monte Carlo")
    pred, size = compile_formula(M, phi, free)
    env = [0] * size
    count = 0
    if k == 0:
        count = int(bool(pred(env)))
    else:
        idx = [0] * k
        while True:
            env[:k] = idx
            if pred(env):
                count += 1
            j = k - 1
            while j >= 0:
                idx[j] += 1
                if idx[j] < M.n:
                    break
                idx[j] = 0
                j -= 1
            if j < 0:
                break
    return StoneValue(Fraction(count, total), True)


def stone_pairing_mc(M: Matroid, phi: Formula, samples: int, seed: int = 0) -> StoneValue:
    """Estimate from ``samples`` uniform tuples drawn from a counter-based stream."""
    if samples < 1:
        raise PreconditionError("need at least one sample")
    free = phi.free_vars()
    k = len(free)
    _check_domain(M, k)
    pred, size = compile_formula(M, phi, free)
    env = [0] * size
    if k == 0:
        hit = bool(pred(env))
        return StoneValue(float(hit), False, 0.0, samples, seed)
    rng = np.random.Generator(np.random.Philox(seed))
    draws = rng.integers(0, M.n, size=(samples, k)).tolist()
    count = 0
    for row in draws:
        env[:k] = row
        if pred(env):
            count += 1
    p = count / samples
    return StoneValue(p, False, sqrt(p * (1 - p) / samples), samples, seed)


@dataclass(frozen=True)
class ConvergenceTable:
    names: tuple[str, ...]
    formulas: tuple[str, ...]
    values: tuple[tuple[StoneValue, ...], ...]

    def differences(self, row: int) -> list[float]:
        vals = [float(v) for v in self.values[row]]
        return [b - a for a, b in zip(vals, vals[1:])]

    def render(self) -> str:
        lines = ["formula\t" + "\t".join(self.names)]
        for i, f in enumerate(self.formulas):
            lines.append(f + "\t" + "\t".join(
                str(v.value) if v.exact else f"{v.value:.6f}" for v in self.values[i]))
            lines.append("  diff\t\t" + "\t".join(f"{d:+.6f}" for d in self.differences(i)))
        return "\n".join(lines)


def convergence_report(matroids, formulas, names=None, samples: int | None = None,
                       seed: int = 0) -> ConvergenceTable:
    """Stone pairings of each formula along a sequence of matroids.

    Exact unless ``samples`` is given.  The table only shows the sequence and
    successive differences; finite data cannot certify a limit.
    """
    matroids = list(matroids)
    parsed = [parse(f) if isinstance(f, str) else f for f in formulas]
    names = tuple(names) if names is not None else tuple(f"M{i}" for i in range(len(matroids)))
    rows = []
    for phi in parsed:
        if samples is None:
            rows.append(tuple(stone_pairing_exact(M, phi) for M in matroids))
        else:
            rows.append(tuple(stone_pairing_mc(M, phi, samples, seed) for M in matroids))
    labels = tuple(f if isinstance(f, str) else str(f) for f in formulas)
    return ConvergenceTable(names, labels, tuple(rows))
