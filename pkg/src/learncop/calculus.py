"""The clausal connection tableau: inferences, apply/undo, emitted atoms."""
from __future__ import annotations

from typing import NamedTuple

from . import terms
from .constraints import Bind, Diseq, NoConnect, Place
from .terms import ROOT, Bindings, Clause, Literal, Position, connectable, instantiate_clause
from .tptp import Problem, select_start_clauses

_k = terms._k


class Start(NamedTuple):
    clause: Clause

    @property
    def goal(self) -> Position:
        return ROOT


class Reduce(NamedTuple):
    goal: Position
    ancestor: Position


class Extend(NamedTuple):
    goal: Position
    clause: Clause
    lit_index: int  # 1-based


class Disequation(NamedTuple):
    descendant: Position
    ancestor: Position
    lhs: tuple
    rhs: tuple

    def atom(self) -> Diseq:
        return Diseq(self.ancestor, self.descendant, self.lhs, self.rhs)


class Node(NamedTuple):
    position: Position
    literal: Literal | None
    parent: Position | None
    children: tuple
    status: str  # "open" | "closed"


class CalculusFailure(NamedTuple):
    kind: str  # "connection-blocked" | "regularity-blocked" | "depth-blocked"
    inference: object
    detail: object = None
    new_diseq: bool = False

    def __bool__(self) -> bool:
        return False


class ApplyRecord(NamedTuple):
    inference: object
    atoms: list
    delta: list
    new_nodes: list
    new_diseqs: list
    closed_goal: Position | None
    mark: int  # bindings size before the inference
    pushed: int  # goals pushed onto the open-goal stack


class Proof(NamedTuple):
    steps: list
    final_bindings: Bindings


class Tableau:
    """Tableau nodes, the global substitution, active disequations and the
    stack of open goals (its top is the leftmost open branch).

    ``emit_atoms=False`` skips building trail atoms, for searches that never
    consult them.
    """

    def __init__(self, problem: Problem, start_policy: str = "conjecture-first", emit_atoms: bool = True):
        self.problem = problem
        self.start_clauses = select_start_clauses(problem, start_policy)
        self.emit_atoms = emit_atoms
        self.lits: dict = {}
        self.bindings = Bindings()
        self.diseqs: list = []
        self.goals: list = []
        self.history: list = []
        self._inst: dict = {}
        self._ext: dict = {}
        self._nc: dict = {}
        self._mates: dict = {}
        for c in problem.clauses:
            for i, lit in enumerate(c.literals, 1):
                # keyed by the polarity of the goal the literal can close
                self._mates.setdefault((lit.pred, not lit.positive), []).append((c, i))

    # -- queries
    @property
    def started(self) -> bool:
        return bool(self.history)

    @property
    def closed(self) -> bool:
        return bool(self.history) and not self.goals

    def current_goal(self) -> Position:
        if not self.history:
            return ROOT
        return self.goals[-1]

    def literal(self, pos: Position) -> Literal:
        return self.lits[pos]

    def path(self, pos: Position) -> list:
        """Literal positions strictly above ``pos``, nearest first."""
        return [pos[:k] for k in range(len(pos) - 1, 0, -1)]

    def node(self, pos: Position) -> Node:
        if pos != ROOT and pos not in self.lits:
            raise KeyError(pos)
        kids = []
        k = 1
        while pos + (k,) in self.lits:
            kids.append(pos + (k,))
            k += 1
        open_below = any(g[: len(pos)] == pos for g in self.goals)
        if pos == ROOT and not self.history:
            open_below = True
        return Node(
            pos,
            self.lits.get(pos),
            None if pos == ROOT else pos[:-1],
            tuple(kids),
            "open" if open_below else "closed",
        )

    def open_branches(self) -> list:
        return list(reversed(self.goals))

    def state_hash(self) -> int:
        return hash((
            tuple(sorted(self.lits.items())),
            self.bindings.state(),
            tuple(self.diseqs),
            tuple(self.goals),
        ))

    def instantiate(self, clause: Clause, at: Position) -> list:
        key = (id(clause), at)
        lits = self._inst.get(key)
        if lits is None:
            lits = self._inst[key] = instantiate_clause(clause, at)
        return lits

    def proof(self) -> Proof:
        return Proof([r.inference for r in self.history], self.bindings.copy())

    # -- enumeration
    def extensions(self, goal: Position) -> list:
        """Extension steps whose connection unifies from scratch (cached)."""
        lit = self.lits[goal]
        # literal objects are shared through the instantiation cache; entries
        # keep their key objects alive so ids cannot be recycled
        entry = self._ext.get(id(lit))
        if entry is not None and entry[0] is lit:
            return entry[1]
        exts = []
        for clause, i in self._mates.get((lit.pred, lit.positive), ()):
            mate = self.instantiate(clause, goal)[i - 1]
            if _k.unify_args(lit.args, mate.args, {}, []) == _k.OK:
                exts.append(Extend(goal, clause, i))
        self._ext[id(lit)] = (lit, exts)
        return exts

    def never_connects(self, a: Literal, b: Literal) -> bool:
        if a.pred != b.pred or a.positive == b.positive:
            return True
        key = (id(a), id(b))
        entry = self._nc.get(key)
        if entry is not None and entry[0] is a and entry[1] is b:
            return entry[2]
        never = not connectable(a, b)
        self._nc[key] = (a, b, never)
        return never

    def reductions(self, goal: Position) -> list:
        lit = self.lits[goal]
        out = []
        for q in self.path(goal):
            alit = self.lits[q]
            if alit.pred == lit.pred and alit.positive != lit.positive and not self.never_connects(alit, lit):
                out.append(Reduce(goal, q))
        return out

    def enumerate_inferences(self, goal: Position, limit: int) -> list:
        if goal == ROOT:
            return [Start(c) for c in self.start_clauses]
        out = self.reductions(goal)
        if len(goal) < limit:
            out.extend(self.extensions(goal))
        return out

    def depth_blocked(self, goal: Position, limit: int) -> list:
        if goal == ROOT or len(goal) < limit:
            return []
        return self.extensions(goal)

    # -- apply / undo
    def try_apply(self, j, limit: int):
        if type(j) is Extend:
            return self._extend(j, limit)
        if type(j) is Reduce:
            return self._reduce(j)
        if type(j) is Start:
            return self._start(j)
        raise TypeError(f"not an inference: {j!r}")

    def _start(self, j: Start):
        if self.history:
            raise AssertionError("start on a non-empty tableau")
        lits = self.instantiate(j.clause, ROOT)
        new = [(k,) for k in range(1, len(lits) + 1)]
        for q, lit in zip(new, lits):
            self.lits[q] = lit
        self.goals.extend(reversed(new))
        atoms = [Place(lit, q) for q, lit in zip(new, lits)] if self.emit_atoms else []
        rec = ApplyRecord(j, atoms, [], new, [], None, len(self.bindings.order), len(new))
        self.history.append(rec)
        return rec

    def _falsified_diseq(self):
        bmap = self.bindings.map
        eq = _k.equal_args
        for d in self.diseqs:
            if eq(d.lhs, d.rhs, bmap):
                return d
        return None

    def _reduce(self, j: Reduce):
        goal = j.goal
        if not self.goals or self.goals[-1] != goal:
            raise AssertionError(f"goal {goal} is not the selected open branch")
        lit = self.lits[goal]
        q = j.ancestor
        if not (len(q) < len(goal) and goal[:len(q)] == q and q):
            raise ValueError(f"{q} is not a strict ancestor of {goal}")
        anc = self.lits[q]
        if anc.pred != lit.pred or anc.positive == lit.positive:
            raise ValueError(f"{j!r} does not pair complementary literals")
        b = self.bindings
        mark = len(b.order)
        if _k.unify_args(lit.args, anc.args, b.map, b.order):
            return CalculusFailure("connection-blocked", j, (lit, anc))
        delta = b.order[mark:]
        if delta and self.diseqs:
            bad = self._falsified_diseq()
            if bad is not None:
                b.undo_to(mark)
                return CalculusFailure("regularity-blocked", j, bad, False)
        self.goals.pop()
        atoms = [Bind(v, b.map[v]) for v in delta] if self.emit_atoms else []
        rec = ApplyRecord(j, atoms, delta, [], [], goal, mark, 0)
        self.history.append(rec)
        return rec

    def _extend(self, j: Extend, limit: int):
        goal = j.goal
        if not self.goals or self.goals[-1] != goal:
            raise AssertionError(f"goal {goal} is not the selected open branch")
        if len(goal) >= limit:
            return CalculusFailure("depth-blocked", j)
        lit = self.lits[goal]
        new_lits = self.instantiate(j.clause, goal)
        if not 1 <= j.lit_index <= len(new_lits):
            raise ValueError(f"{j!r}: literal index out of range")
        mate = new_lits[j.lit_index - 1]
        if mate.pred != lit.pred or mate.positive == lit.positive:
            raise ValueError(f"{j!r} does not pair complementary literals")
        b = self.bindings
        mark = len(b.order)
        if _k.unify_args(lit.args, mate.args, b.map, b.order):
            return CalculusFailure("connection-blocked", j, (lit, mate))
        delta = b.order[mark:]
        path = [goal[:k] for k in range(len(goal), 0, -1)]
        lits = self.lits
        new_diseqs = []
        for k, nl in enumerate(new_lits, 1):
            for a in path:
                al = lits[a]
                if al.pred == nl.pred and al.positive == nl.positive:
                    new_diseqs.append(Disequation(goal + (k,), a, nl.args, al.args))
        if new_diseqs or (delta and self.diseqs):
            bmap = b.map
            eq = _k.equal_args
            bad = None
            for d in new_diseqs:
                if eq(d.lhs, d.rhs, bmap):
                    bad, is_new = d, True
                    break
            if bad is None and delta:
                for d in self.diseqs:
                    if eq(d.lhs, d.rhs, bmap):
                        bad, is_new = d, False
                        break
            if bad is not None:
                b.undo_to(mark)
                return CalculusFailure("regularity-blocked", j, bad, is_new)
        n = len(new_lits)
        new = [goal + (k,) for k in range(1, n + 1)]
        for q, nl in zip(new, new_lits):
            lits[q] = nl
        goals = self.goals
        goals.pop()
        for k in range(n, 0, -1):
            if k != j.lit_index:
                goals.append(goal + (k,))
        self.diseqs.extend(new_diseqs)
        if self.emit_atoms:
            atoms = [Place(nl, q) for q, nl in zip(new, new_lits)]
            bmap = b.map
            atoms.extend([Bind(v, bmap[v]) for v in delta])
            never = self.never_connects
            for q, nl in zip(new, new_lits):
                for a in path:
                    al = lits[a]
                    if al.pred != nl.pred or al.positive == nl.positive or never(al, nl):
                        atoms.append(NoConnect(a, q))
            atoms.extend([d.atom() for d in new_diseqs])
        else:
            atoms = []
        rec = ApplyRecord(j, atoms, delta, new, new_diseqs, goal, mark, n - 1)
        self.history.append(rec)
        return rec

    def undo_apply(self, rec: ApplyRecord) -> None:
        if not self.history or self.history[-1] is not rec:
            raise AssertionError("undo_apply out of LIFO order")
        self.history.pop()
        goals = self.goals
        if rec.pushed:
            del goals[-rec.pushed:]
        if rec.closed_goal is not None:
            goals.append(rec.closed_goal)
        for q in rec.new_nodes:
            del self.lits[q]
        if rec.new_diseqs:
            del self.diseqs[-len(rec.new_diseqs):]
        self.bindings.undo_to(rec.mark)


def enumerate_inferences(tableau: Tableau, goal: Position, problem: Problem, limit: int) -> list:
    return tableau.enumerate_inferences(goal, limit)


def try_apply(tableau: Tableau, j, limit: int):
    return tableau.try_apply(j, limit)


def undo_apply(tableau: Tableau, record: ApplyRecord) -> None:
    tableau.undo_apply(record)


def check_proof(problem: Problem, proof: Proof, limit: int | None = None):
    """Independent replay check; see :mod:`learncop.checker`."""
    from .checker import check_proof as _check

    return _check(problem, proof, limit)
