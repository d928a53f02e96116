"""Reasons: sets of trail atoms explaining why an inference failed or why a
branch is still open.

Both minimal-subset routines grow a kernel of bindings in a scratch
substitution.  The scan adds bindings of ``sigma`` oldest first until the
watched property appears; the binding that made it appear is kept, the scratch
state is reset to the kernel, and the scan starts over.  Every kept binding
was needed given the ones kept before it, which makes the result irredundant.
"""
from __future__ import annotations

from typing import Iterable

from . import terms
from .calculus import CalculusFailure, Extend, Reduce, Tableau
from .constraints import Bind, Diseq, NoConnect, Place
from .terms import Bindings, Literal, Position, connectable, format_literal

_k = terms._k


class ExplainError(ValueError):
    """A minimal-subset routine was called outside its precondition."""


def _sigma_items(sigma) -> list:
    if isinstance(sigma, Bindings):
        return sigma.items()
    return list(sigma)


def _grow_kernel(items: list, tau: dict, order: list, reached) -> list | None:
    """Shared scan loop.  ``reached(code, tau)`` judges the scratch state after
    unifying one binding (``code`` is the unifier's status).  Returns the
    kernel bindings, or None when all of ``items`` never reach the property."""
    kernel: list = []
    kept: set = set()
    mark = len(order)  # the checkpoint
    while True:
        for v, t in items:
            if v in kept:
                continue
            if not reached(_k.unify(v, t, tau, order), tau):
                continue
            _k.undo_to(tau, order, mark)
            kernel.append((v, t))
            if reached(_k.unify(v, t, tau, order), tau):
                return kernel
            kept.add(v)
            mark = len(order)
            break
        else:
            return None


def minimal_blocking_bindings(l1: Literal, l2: Literal, sigma) -> set:
    """An irredundant subset of ``sigma`` under which ``l1`` and the
    complement of ``l2`` no longer unify, as Bind atoms."""
    if not connectable(l1, l2):
        raise ExplainError(f"{format_literal(l1)} and {format_literal(l2)} never connect")
    tau: dict = {}
    order: list = []
    _k.unify_args(l1.args, l2.args, tau, order)
    kernel = _grow_kernel(_sigma_items(sigma), tau, order, lambda code, _tau: code != _k.OK)
    if kernel is None:
        raise ExplainError(f"{format_literal(l1)} and {format_literal(l2)} unify under sigma")
    return {Bind(v, t) for v, t in kernel}


def minimal_falsifying_bindings(d, sigma, seed: Iterable | None = None) -> set:
    """An irredundant subset of ``sigma`` that, together with the ``seed``
    equations, makes ``d.lhs`` and ``d.rhs`` identical.

    ``seed`` is a sequence of term pairs assumed equal (a binding ``x -> t``
    is the pair ``(x, t)``); seed equations are never part of the result.
    """
    lhs, rhs = tuple(d.lhs), tuple(d.rhs)
    if len(lhs) != len(rhs):
        raise ExplainError("disequation sides differ in length")
    tau: dict = {}
    order: list = []
    for s, t in seed or ():
        if _k.unify(s, t, tau, order) != _k.OK:
            raise ExplainError("seed equations are inconsistent")
    if _k.equal_args(lhs, rhs, tau):
        return set()

    def reached(code, tau_):
        if code != _k.OK:
            raise ExplainError("sigma is inconsistent with the seed equations")
        return _k.equal_args(lhs, rhs, tau_)

    kernel = _grow_kernel(_sigma_items(sigma), tau, order, reached)
    if kernel is None:
        raise ExplainError("disequation is not falsified under sigma and seed")
    return {Bind(v, t) for v, t in kernel}


def connection_equations(tableau: Tableau, j) -> list:
    """Term pairs equated by the connection of inference ``j``."""
    lit = tableau.lits[j.goal]
    if type(j) is Reduce:
        other = tableau.lits[j.ancestor]
    elif type(j) is Extend:
        other = tableau.instantiate(j.clause, j.goal)[j.lit_index - 1]
    else:
        return []
    return list(zip(lit.args, other.args))


def explain_failed_inference(tableau: Tableau, j, failure: CalculusFailure) -> set:
    """Trail atoms under which ``j`` fails the same way again."""
    kind = failure.kind
    if kind == "depth-blocked":
        return set()
    sigma = tableau.bindings
    if kind == "connection-blocked":
        goal_lit, other = failure.detail
        reason = minimal_blocking_bindings(goal_lit, other, sigma)
        if type(j) is Reduce:
            reason.add(Place(tableau.lits[j.ancestor], j.ancestor))
        return reason
    if kind == "regularity-blocked":
        d = failure.detail
        reason = minimal_falsifying_bindings(d, sigma, connection_equations(tableau, j))
        if failure.new_diseq:
            # the disequation is not on the trail yet; what fixes its content
            # is the ancestor literal (the new literal comes from the clause)
            reason.add(Place(tableau.lits[d.ancestor], d.ancestor))
        else:
            reason.add(d.atom())
        if type(j) is Reduce:
            reason.add(Place(tableau.lits[j.ancestor], j.ancestor))
        return reason
    raise ValueError(f"unknown failure kind {kind!r}")


def explain_open_branch(tableau: Tableau, goal: Position) -> set:
    """The goal's placement plus every ancestor that can never close it."""
    lit = tableau.lits[goal]
    reason = {Place(lit, goal)}
    never = tableau.never_connects
    lits = tableau.lits
    for q in tableau.path(goal):
        if never(lits[q], lit):
            reason.add(NoConnect(q, goal))
    return reason


def explain_conflict(tableau: Tableau, record, conflict) -> set:
    """Trail atoms under which applying ``record.inference`` recreates the
    part of ``conflict`` that the inference itself asserts.

    Call after ``record`` has been undone.  Atoms the inference shares with
    the conflict are replaced by what determines them: the bindings that
    force its delta and the placements of ancestors its NoConnect and Diseq
    atoms talk about.
    """
    own = set(record.atoms)
    reason = {a for a in conflict.atoms if a not in own}
    shared = [a for a in conflict.atoms if a in own]
    if not shared:
        return reason
    j = record.inference
    lits = tableau.lits
    binds = [a for a in shared if type(a) is Bind]
    if binds:
        lhs = tuple(a.var for a in binds)
        rhs = tuple(a.term for a in binds)
        reason |= minimal_falsifying_bindings(
            Diseq((), (), lhs, rhs), tableau.bindings, connection_equations(tableau, j))
        if type(j) is Reduce:
            reason.add(Place(lits[j.ancestor], j.ancestor))
    for a in shared:
        if type(a) is NoConnect or type(a) is Diseq:
            reason.add(Place(lits[a.ancestor], a.ancestor))
    return reason
