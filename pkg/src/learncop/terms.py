"""First-order syntax, position-named variables and triangular unification.

Terms are tuples (see ``_pykernels`` for the encoding).  Variables of a clause
attached below tableau position ``p`` are named ``(None, p, i)`` where ``i`` is
the variable's index inside the clause, so the same clause at the same
position always yields the same variables, whatever happened before.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

if os.environ.get("LEARNCOP_PURE_PYTHON"):
    from . import _pykernels as _k
else:
    try:
        from . import _ckernels as _k
    except ImportError:  # extension not built
        from . import _pykernels as _k

KERNEL: str = _k.NAME

Term = tuple
Position = tuple
ROOT: Position = ()


def var(pos: Position, idx: int) -> Term:
    return (None, pos, idx)


def template_var(idx: int) -> Term:
    """A clause-local variable, before instantiation."""
    return (None, None, idx)


def const(name: str) -> Term:
    return (name,)


def compound(name: str, *args: Term) -> Term:
    return (name, *args)


def is_var(t: Term) -> bool:
    return t[0] is None


def term_vars(t: Term, out: list | None = None) -> list:
    """Variables of ``t`` in first-occurrence order (no dereferencing)."""
    if out is None:
        out = []
    if t[0] is None:
        if t not in out:
            out.append(t)
    else:
        for a in t[1:]:
            term_vars(a, out)
    return out


def term_depth(t: Term) -> int:
    if t[0] is None or len(t) == 1:
        return 0
    return 1 + max(term_depth(a) for a in t[1:])


class Symbol(NamedTuple):
    name: str
    arity: int
    kind: str  # "predicate" | "function"


class Literal(NamedTuple):
    positive: bool
    pred: str
    args: tuple

    def negate(self) -> Literal:
        return Literal(not self.positive, self.pred, self.args)

    def __str__(self) -> str:
        return format_literal(self)


ROLES = ("axiom", "negated_conjecture", "other")


@dataclass(frozen=True)
class Clause:
    name: str
    role: str
    literals: tuple  # of Literal over template variables
    nvars: int = 0

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        return " | ".join(format_literal(lit) for lit in self.literals)


def child(p: Position, i: int) -> Position:
    return p + (i,)


def depth(p: Position) -> int:
    return len(p)


def is_strict_ancestor(q: Position, p: Position) -> bool:
    return len(q) < len(p) and p[: len(q)] == q


def instantiate_literal(lit: Literal, at: Position) -> Literal:
    inst = _k.instantiate
    return Literal(lit.positive, lit.pred, tuple([inst(a, at) for a in lit.args]))


def instantiate_clause(clause: Clause, at: Position) -> list[Literal]:
    """Name every local variable of ``clause`` after the attachment position."""
    return [instantiate_literal(lit, at) for lit in clause.literals]


class UnificationError(Exception):
    def __init__(self, kind: str):
        super().__init__(kind)
        self.kind = kind  # "clash" | "occurs"


_FAILURE_KIND = {_k.CLASH: "clash", _k.OCCURS: "occurs"}


class Bindings:
    """Triangular global substitution with stack-ordered undo."""

    __slots__ = ("map", "order")

    def __init__(self, pairs: Iterable[tuple[Term, Term]] = ()):
        self.map: dict = {}
        self.order: list = []
        for v, t in pairs:
            if v in self.map:
                raise ValueError(f"{format_term(v)} bound twice")
            self.map[v] = t
            self.order.append(v)

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, v) -> bool:
        return v in self.map

    def items(self) -> list[tuple[Term, Term]]:
        return [(v, self.map[v]) for v in self.order]

    def deref(self, t: Term) -> Term:
        return _k.deref(t, self.map)

    def resolve(self, t: Term) -> Term:
        return _k.resolve(t, self.map)

    def mark(self) -> int:
        return len(self.order)

    def undo_to(self, mark: int) -> None:
        _k.undo_to(self.map, self.order, mark)

    def unify_code(self, s: Term, t: Term) -> int:
        return _k.unify(s, t, self.map, self.order)

    def unify_args_code(self, sargs: tuple, targs: tuple) -> int:
        return _k.unify_args(sargs, targs, self.map, self.order)

    def state(self) -> tuple:
        return tuple(self.items())

    def copy(self) -> Bindings:
        return Bindings(self.items())

    def __repr__(self) -> str:
        inner = ", ".join(f"{format_term(v)} -> {format_term(t)}" for v, t in self.items())
        return f"Bindings({inner})"


def unify(s, t, bindings: Bindings) -> list:
    """Unify two terms (or two equal-length argument tuples).

    Returns the delta, the list of newly bound variables.  On failure the
    bindings are untouched and :class:`UnificationError` is raised.
    """
    mark = len(bindings.order)
    if isinstance(s, Literal) or isinstance(t, Literal):
        raise TypeError("use unify_literals for literals")
    if not s or isinstance(s[0], tuple):  # argument tuples
        code = bindings.unify_args_code(tuple(s), tuple(t)) if len(s) == len(t) else _k.CLASH
    else:
        code = bindings.unify_code(s, t)
    if code:
        raise UnificationError(_FAILURE_KIND[code])
    return bindings.order[mark:]


def unify_literals(goal: Literal, mate: Literal, bindings: Bindings) -> list:
    """Connect two literals: same predicate, opposite polarity, unifiable args."""
    if goal.pred != mate.pred or goal.positive == mate.positive or len(goal.args) != len(mate.args):
        raise UnificationError("clash")
    return unify(goal.args, mate.args, bindings)


def undo_delta(bindings: Bindings, delta: Sequence) -> None:
    n = len(delta)
    if n == 0:
        return
    if bindings.order[-n:] != list(delta):
        raise AssertionError("undo_delta: delta is not the most recent binding block")
    bindings.undo_to(len(bindings.order) - n)


def connectable(l1: Literal, l2: Literal) -> bool:
    """Whether ``l1`` and the complement of ``l2`` unify from scratch."""
    if l1.pred != l2.pred or l1.positive == l2.positive or len(l1.args) != len(l2.args):
        return False
    return _k.unify_args(l1.args, l2.args, {}, []) == _k.OK


def never_unifiable(l1: Literal, l2: Literal) -> bool:
    return not connectable(l1, l2)


def equal_under(s: Sequence, t: Sequence, bindings: Bindings) -> bool:
    if len(s) != len(t):
        return False
    return _k.equal_args(tuple(s), tuple(t), bindings.map)


# --- rendering ---------------------------------------------------------------

def format_position(p: Position) -> str:
    return ".".join(map(str, p)) if p else "root"


def format_var(v: Term) -> str:
    if v[1] is None:
        return f"_{v[2]}"
    return f"x@{format_position(v[1])}/{v[2]}"


def format_term(t: Term) -> str:
    if t[0] is None:
        return format_var(t)
    if len(t) == 1:
        return t[0]
    return f"{t[0]}({','.join(format_term(a) for a in t[1:])})"


def format_literal(lit: Literal) -> str:
    atom = lit.pred if not lit.args else f"{lit.pred}({','.join(format_term(a) for a in lit.args)})"
    return atom if lit.positive else "~" + atom
