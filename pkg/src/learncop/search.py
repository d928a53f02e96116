"""Depth-limited proof search with constraint learning and backjumping,
iterative deepening over the depth limit, and a chronological baseline."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, NamedTuple

from .calculus import CalculusFailure, Extend, Proof, Reduce, Tableau
from .constraints import ConstraintStore, Trail, is_violated_naive, select_conflict
from .explain import explain_conflict, explain_failed_inference, explain_open_branch
from .terms import ROOT
from .tptp import Problem

MODES = ("learning", "chronological")


@dataclass
class SearchOptions:
    max_depth: int | None = None
    time_budget: float = 10.0
    mode: str = "learning"
    start_policy: str = "conjecture-first"
    check_invariants: bool = False

    def __post_init__(self):
        if not self.time_budget > 0:
            raise ValueError("time_budget must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class LevelStats:
    depth: int
    extensions_applied: int = 0
    extensions_tried: int = 0
    reductions_applied: int = 0
    constraints_learned: int = 0
    conflicts_hit: int = 0
    max_trail_depth: int = 0
    backjump_frame_total: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self))


# results of one level
class Closed(NamedTuple):
    proof: Proof


class Exhausted(NamedTuple):
    limit_hit: bool


# outcomes of a whole run; TimeOut is shared by both
class Theorem(NamedTuple):
    proof: Proof
    depth: int
    stats: list


class Saturated(NamedTuple):
    depth: int
    stats: list


class DepthOut(NamedTuple):
    depth: int
    stats: list


class TimeOut(NamedTuple):
    stats: list = []


class LevelSearch:
    """Search state for one depth limit.

    ``analyse_goal`` runs one iteration of the learning loop body; together
    with ``replay`` it lets a caller force a tableau and inspect the dead-end
    analysis.
    """

    def __init__(self, problem: Problem, limit: int, options: SearchOptions | None = None):
        self.options = options or SearchOptions()
        self.limit = limit
        self.tableau = Tableau(problem, self.options.start_policy,
                               emit_atoms=self.options.mode == "learning")
        self.trail = Trail()
        self.store = ConstraintStore()
        self.stats = LevelStats(limit)
        self.limit_hit = False

    # -- pieces of the loop body
    def _count(self, j, ok: bool) -> None:
        st = self.stats
        if type(j) is Extend:
            st.extensions_tried += 1
            if ok:
                st.extensions_applied += 1
        elif ok and type(j) is Reduce:
            st.reductions_applied += 1

    def replay(self, steps) -> None:
        """Apply and commit ``steps`` without consulting the store."""
        for j in steps:
            rec = self.tableau.try_apply(j, self.limit)
            if isinstance(rec, CalculusFailure):
                raise ValueError(f"cannot replay {j!r}: {rec.kind}")
            self.trail.commit_frame(rec)

    def analyse_goal(self):
        """Try the inferences of the selected goal in order.

        Returns ``(record, learn)``: the committed record, or None at a dead
        end together with the reason accumulated for it.
        """
        tab, limit, store, trail = self.tableau, self.limit, self.store, self.trail
        goal = tab.current_goal()
        learn = explain_open_branch(tab, goal) if goal != ROOT else set()
        if tab.depth_blocked(goal, limit):
            self.limit_hit = True
        check = self.options.check_invariants
        for j in tab.enumerate_inferences(goal, limit):
            rec = tab.try_apply(j, limit)
            if isinstance(rec, CalculusFailure):
                self._count(j, False)
                reason = explain_failed_inference(tab, j, rec)
                if check:
                    self._assert_grounded(reason, j)
                learn |= reason
                continue
            conflicts = store.check_conflicts(trail.members, rec.atoms)
            if conflicts:
                self._count(j, False)
                self.stats.conflicts_hit += 1
                c = select_conflict(conflicts, rec.atoms, learn)
                tab.undo_apply(rec)
                reason = explain_conflict(tab, rec, c)
                if check:
                    self._assert_grounded(reason, j)
                learn |= reason
                continue
            self._count(j, True)
            trail.commit_frame(rec)
            if len(trail.frames) > self.stats.max_trail_depth:
                self.stats.max_trail_depth = len(trail.frames)
            if check:
                self._assert_store_consistent()
            return rec, learn
        return None, learn

    def backjump(self, learn) -> int:
        """Pop frames until ``learn`` is no longer violated; returns the count."""
        trail, tab = self.trail, self.tableau
        members = trail.members
        if not is_violated_naive(learn, members):
            raise AssertionError("backjump with a reason that is not on the trail")
        popped = 0
        while True:
            if not trail.frames:
                if learn:
                    raise AssertionError("backjump emptied the trail: reason not grounded")
                break
            tab.undo_apply(trail.pop_frame())
            popped += 1
            if not is_violated_naive(learn, members):
                break
        self.stats.backjump_frame_total += popped
        return popped

    def learn(self, atoms) -> None:
        self.store.add(atoms, self.trail.members)
        self.stats.constraints_learned += 1

    # -- invariant checks (debug)
    def _assert_grounded(self, reason, j) -> None:
        missing = [a for a in reason if a not in self.trail.members]
        if missing:
            raise AssertionError(f"reason for {j!r} not on trail: {missing!r}")

    def _assert_store_consistent(self) -> None:
        members = self.trail.members
        for c in self.store.constraints:
            if c.atoms and is_violated_naive(c.atoms, members):
                raise AssertionError(f"{c!r} violated by the trail")

    # -- drivers
    def run(self, deadline: float | None = None):
        if self.options.mode == "chronological":
            for result in _chronological(self, deadline, all_solutions=False):
                return result
            raise AssertionError("unreachable")
        tab = self.tableau
        clock = time.monotonic
        while True:
            if deadline is not None and clock() > deadline:
                return TimeOut()
            rec, learn = self.analyse_goal()
            if rec is not None:
                if tab.closed:
                    return Closed(tab.proof())
                continue
            if self.options.check_invariants:
                self._assert_grounded(learn, "dead end")
            self.backjump(learn)
            self.learn(learn)
            if not learn:
                return Exhausted(self.limit_hit)


def _chronological(ls: LevelSearch, deadline: float | None, all_solutions: bool) -> Iterator:
    """Classical backtracking over the same enumeration.  Yields Closed for
    every closed tableau when ``all_solutions`` (else only the first), then a
    final Exhausted or TimeOut."""
    tab, limit, st = ls.tableau, ls.limit, ls.stats
    clock = time.monotonic
    stack: list = []  # (record, candidates, next index)
    cands = tab.enumerate_inferences(ROOT, limit)
    i = 0
    while True:
        if deadline is not None and clock() > deadline:
            yield TimeOut()
            return
        rec = None
        while i < len(cands):
            j = cands[i]
            i += 1
            r = tab.try_apply(j, limit)
            ok = not isinstance(r, CalculusFailure)
            ls._count(j, ok)
            if ok:
                rec = r
                break
        if rec is not None:
            stack.append((rec, cands, i))
            if len(stack) > st.max_trail_depth:
                st.max_trail_depth = len(stack)
            if tab.closed:
                yield Closed(tab.proof())
                if not all_solutions:
                    return
                # treat the closed tableau as a dead end and keep enumerating
                cands, i = (), 0
                continue
            goal = tab.current_goal()
            if tab.depth_blocked(goal, limit):
                ls.limit_hit = True
            cands = tab.enumerate_inferences(goal, limit)
            i = 0
            continue
        if not stack:
            yield Exhausted(ls.limit_hit)
            return
        rec, cands, i = stack.pop()
        tab.undo_apply(rec)
        st.backjump_frame_total += 1


def iter_closed_tableaux(problem: Problem, limit: int, start_policy: str = "conjecture-first",
                         max_count: int | None = None) -> Iterator[frozenset]:
    """Trail-atom sets of all closed tableaux at ``limit``, by exhaustive
    backtracking.  Stops after ``max_count`` + 1 results if given."""
    ls = LevelSearch(problem, limit, SearchOptions(mode="learning", start_policy=start_policy))
    tab = ls.tableau
    n = 0
    for result in _chronological(ls, None, all_solutions=True):
        if type(result) is not Closed:
            return
        yield frozenset(a for rec in tab.history for a in rec.atoms)
        n += 1
        if max_count is not None and n > max_count:
            return


def run_level(problem: Problem, limit: int, options: SearchOptions | None = None,
              deadline: float | None = None):
    """Closed(proof), Exhausted(limit_hit) or TimeOut for one depth limit."""
    return LevelSearch(problem, limit, options).run(deadline)


def prove(problem: Problem, options: SearchOptions | None = None,
          on_level: Callable[[LevelSearch, object], None] | None = None):
    """Iterative deepening from limit 1.  ``on_level`` sees each finished
    level's search state and result."""
    options = options or SearchOptions()
    deadline = time.monotonic() + options.time_budget
    stats: list = []
    limit = 1
    while True:
        ls = LevelSearch(problem, limit, options)
        result = ls.run(deadline)
        stats.append(ls.stats)
        if on_level is not None:
            on_level(ls, result)
        if type(result) is Closed:
            return Theorem(result.proof, limit, stats)
        if type(result) is TimeOut:
            return TimeOut(stats)
        if not result.limit_hit:
            return Saturated(limit, stats)
        if options.max_depth is not None and limit >= options.max_depth:
            return DepthOut(limit, stats)
        limit += 1
