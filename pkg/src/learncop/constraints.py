"""Trail atoms, the trail, and the learned-constraint store.

Atoms are small tuples so that hashing and equality stay in C.  The four
shapes never compare equal to each other: ``Diseq`` has four fields, and the
two-field kinds differ in their first field (a literal, a variable, or a
position of positive integers).
"""
from __future__ import annotations

from typing import Iterable, NamedTuple

from .terms import Literal, Position, Term, format_literal, format_position, format_term


class Place(NamedTuple):
    literal: Literal
    position: Position


class Bind(NamedTuple):
    var: Term
    term: Term


class NoConnect(NamedTuple):
    ancestor: Position
    descendant: Position


class Diseq(NamedTuple):
    ancestor: Position
    descendant: Position
    lhs: tuple
    rhs: tuple


def format_atom(atom) -> str:
    if isinstance(atom, Place):
        return f"{format_literal(atom.literal)}@{format_position(atom.position)}"
    if isinstance(atom, Bind):
        return f"{format_term(atom.var)}->{format_term(atom.term)}"
    if isinstance(atom, NoConnect):
        return f"{format_position(atom.ancestor)}~/~{format_position(atom.descendant)}"
    if isinstance(atom, Diseq):
        return f"{format_position(atom.ancestor)}!={format_position(atom.descendant)}"
    raise TypeError(f"not an atom: {atom!r}")


def format_constraint(atoms: Iterable) -> str:
    return " ".join(sorted(format_atom(a) for a in atoms))


class Trail:
    """Stack of committed frames plus the set of atoms they assert."""

    __slots__ = ("frames", "members")

    def __init__(self):
        self.frames: list = []
        self.members: set = set()

    def __len__(self) -> int:
        return len(self.frames)

    def __contains__(self, atom) -> bool:
        return atom in self.members

    def commit_frame(self, frame) -> None:
        self.frames.append(frame)
        self.members.update(frame.atoms)

    def pop_frame(self):
        if not self.frames:
            raise IndexError("pop from an empty trail")
        frame = self.frames.pop()
        self.members.difference_update(frame.atoms)
        return frame


def commit_frame(trail: Trail, frame) -> None:
    trail.commit_frame(frame)


def pop_frame(trail: Trail):
    return trail.pop_frame()


def is_violated_naive(atoms: Iterable, members) -> bool:
    return all(a in members for a in atoms)


class Constraint:
    __slots__ = ("atoms", "watch", "ident")

    def __init__(self, atoms: tuple, ident: int):
        self.atoms = atoms
        self.watch = None
        self.ident = ident

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __repr__(self) -> str:
        return f"Constraint#{self.ident}({format_constraint(self.atoms)})"


class ConstraintStore:
    """Learned constraints with one watched atom each.

    A stored constraint always watches an atom that is absent from the trail,
    so only constraints watching a newly asserted atom can become violated.
    """

    def __init__(self):
        self.constraints: list = []
        self.watches: dict = {}
        self.exhausted = False

    def __len__(self) -> int:
        return len(self.constraints)

    def add(self, atoms: Iterable, members=frozenset()) -> Constraint:
        c = Constraint(tuple(atoms), len(self.constraints))
        self.constraints.append(c)
        if not c.atoms:
            self.exhausted = True
            return c
        for a in c.atoms:
            if a not in members:
                c.watch = a
                break
        else:
            raise AssertionError(f"{c!r} is violated by the trail it is added to")
        self.watches.setdefault(c.watch, []).append(c)
        return c

    def clear(self) -> None:
        self.constraints.clear()
        self.watches.clear()
        self.exhausted = False

    def check_conflicts(self, members, tentative) -> list:
        """Constraints all of whose atoms lie in ``members`` plus ``tentative``."""
        conflicts = []
        watches = self.watches
        tset = None
        for a in tentative:
            watchers = watches.get(a)
            if not watchers:
                continue
            if tset is None:
                tset = set(tentative)
            keep = []
            for c in watchers:
                for b in c.atoms:
                    if b not in members and b not in tset:
                        c.watch = b
                        lst = watches.get(b)
                        if lst is None:
                            watches[b] = [c]
                        else:
                            lst.append(c)
                        break
                else:
                    keep.append(c)
                    conflicts.append(c)
            if keep:
                watches[a] = keep
            else:
                del watches[a]
        return conflicts


def add_constraint(store: ConstraintStore, atoms: Iterable, trail: Trail | None = None) -> Constraint:
    return store.add(atoms, trail.members if trail is not None else frozenset())


def check_conflicts(store: ConstraintStore, trail: Trail, tentative) -> list:
    return store.check_conflicts(trail.members, tentative)


def select_conflict(conflicts: list, tentative, learn_so_far) -> Constraint:
    """The conflict adding the fewest new atoms to ``learn_so_far``; ties go to
    the earliest-learned constraint."""
    tset = set(tentative)
    best = None
    best_cost = None
    for c in conflicts:
        cost = sum(1 for a in c.atoms if a not in tset and a not in learn_so_far)
        if best is None or cost < best_cost or (cost == best_cost and c.ident < best.ident):
            best, best_cost = c, cost
    return best
