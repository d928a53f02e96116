"""Proof objects as text, and an independent replay checker.

The checker deliberately shares nothing with the search machinery except the
term encoding: it has its own idempotent substitution, its own unifier and its
own bookkeeping of open leaves.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .calculus import Extend, Proof, Reduce, Start
from .terms import ROOT, Bindings, Literal, format_position, format_term
from .tptp import Problem


class CheckResult(NamedTuple):
    ok: bool
    step: int | None = None  # 1-based index of the offending step
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


# --- substitution with eager application -------------------------------------

def _walk(t, s: dict):
    while t[0] is None and t in s:
        t = s[t]
    return t


def _apply(t, s: dict):
    t = _walk(t, s)
    if t[0] is None or len(t) == 1:
        return t
    return (t[0],) + tuple(_apply(a, s) for a in t[1:])


def _occurs_in(v, t) -> bool:
    if t[0] is None:
        return t == v
    return any(_occurs_in(v, a) for a in t[1:])


def _mgu(pairs, s: dict) -> dict | None:
    """Extend ``s`` to unify every pair; returns a new dict, or None."""
    s = dict(s)
    todo = list(pairs)
    while todo:
        a, b = todo.pop()
        a, b = _apply(a, s), _apply(b, s)
        if a == b:
            continue
        if a[0] is None or b[0] is None:
            v, t = (a, b) if a[0] is None else (b, a)
            if _occurs_in(v, t):
                return None
            s[v] = t
            continue
        if a[0] != b[0] or len(a) != len(b):
            return None
        todo.extend(zip(a[1:], b[1:]))
    return s


def _rename(t, at):
    if t[0] is None:
        return (None, at, t[2])
    if len(t) == 1:
        return t
    return (t[0],) + tuple(_rename(a, at) for a in t[1:])


def _clause_instance(clause, at) -> list:
    return [Literal(l.positive, l.pred, tuple(_rename(a, at) for a in l.args)) for l in clause.literals]


def check_proof(problem: Problem, proof: Proof, limit: int | None = None) -> CheckResult:
    """Replay ``proof`` from the empty tableau and report the first illegal
    step, or a final tableau that is open, irregular or too deep."""
    clauses = {id(c) for c in problem.clauses}
    lits: dict = {}
    open_leaves: set = set()
    s: dict = {}
    steps = list(proof.steps)
    if not steps:
        return CheckResult(False, None, "empty proof")
    for n, j in enumerate(steps, 1):
        if n == 1:
            if type(j) is not Start:
                return CheckResult(False, n, "first step must be a start step")
            if id(j.clause) not in clauses:
                return CheckResult(False, n, f"unknown clause {j.clause.name}")
            for k, lit in enumerate(_clause_instance(j.clause, ROOT), 1):
                lits[(k,)] = lit
                open_leaves.add((k,))
            continue
        if type(j) is Start:
            return CheckResult(False, n, "start step after the first step")
        goal = j.goal
        if goal not in open_leaves:
            return CheckResult(False, n, f"goal {format_position(goal)} is not an open leaf")
        glit = lits[goal]
        if type(j) is Reduce:
            anc = j.ancestor
            if not (len(anc) < len(goal) and goal[:len(anc)] == anc and anc in lits):
                return CheckResult(False, n, f"{format_position(anc)} is not an ancestor of the goal")
            other = lits[anc]
        elif type(j) is Extend:
            if id(j.clause) not in clauses:
                return CheckResult(False, n, f"unknown clause {j.clause.name}")
            if not 1 <= j.lit_index <= len(j.clause.literals):
                return CheckResult(False, n, "literal index out of range")
            if limit is not None and len(goal) + 1 > limit:
                return CheckResult(False, n, f"branch longer than {limit}")
            inst = _clause_instance(j.clause, goal)
            other = inst[j.lit_index - 1]
        else:
            return CheckResult(False, n, f"not an inference: {j!r}")
        if other.pred != glit.pred or other.positive == glit.positive or len(other.args) != len(glit.args):
            return CheckResult(False, n, "literals are not complementary")
        s2 = _mgu(zip(glit.args, other.args), s)
        if s2 is None:
            return CheckResult(False, n, "connection does not unify")
        s = s2
        open_leaves.discard(goal)
        if type(j) is Extend:
            for k, lit in enumerate(inst, 1):
                q = goal + (k,)
                lits[q] = lit
                if k != j.lit_index:
                    open_leaves.add(q)
    if open_leaves:
        first = min(open_leaves)
        return CheckResult(False, len(steps), f"branch {format_position(first)} is open")
    # regularity along every branch, under the final substitution
    resolved = {q: (l.positive, l.pred, tuple(_apply(a, s) for a in l.args)) for q, l in lits.items()}
    for q, rl in resolved.items():
        for k in range(1, len(q)):
            if resolved[q[:k]] == rl:
                return CheckResult(False, len(steps),
                                   f"irregular branch: {format_position(q[:k])} and {format_position(q)}")
    if limit is not None and max((len(q) for q in lits), default=0) > limit:
        return CheckResult(False, len(steps), f"branch longer than {limit}")
    # the reported bindings must agree with the replayed substitution
    fb = proof.final_bindings
    for v, t in (fb.items() if isinstance(fb, Bindings) else fb or ()):
        if _apply(v, s) != _apply(t, s):
            return CheckResult(False, len(steps), f"reported binding {format_term(v)} -> {format_term(t)} "
                                                  "does not hold")
    return CheckResult(True)


# --- text format -------------------------------------------------------------

def format_proof(proof: Proof) -> str:
    lines = []
    for n, j in enumerate(proof.steps, 1):
        if type(j) is Start:
            lines.append(f"{n}. start goal=root clause={j.clause.name}")
        elif type(j) is Extend:
            lines.append(f"{n}. extension goal={format_position(j.goal)} clause={j.clause.name} lit={j.lit_index}")
        else:
            lines.append(f"{n}. reduction goal={format_position(j.goal)} ancestor={format_position(j.ancestor)}")
    lines.append("bindings:")
    fb = proof.final_bindings
    for v, t in (fb.items() if isinstance(fb, Bindings) else fb or ()):
        lines.append(f"{format_term(v)} -> {format_term(t)}")
    return "\n".join(lines) + "\n"


class ProofSyntaxError(ValueError):
    pass


_STEP = re.compile(r"(\d+)\.\s+(start|extension|reduction)\s+(.*)\Z")
_TERM_TOKEN = re.compile(r"\s*(?:(x@(?:root|\d+(?:\.\d+)*)/\d+)|('(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\"|[^\s(),']+)|([(),]))")


def _parse_position(text: str):
    if text == "root":
        return ROOT
    try:
        return tuple(int(k) for k in text.split("."))
    except ValueError:
        raise ProofSyntaxError(f"bad position {text!r}") from None


_FIELD = re.compile(r"\s*(\w+)=('(?:[^'\\]|\\.)*'|\S+)")


def _parse_fields(rest: str) -> dict:
    out = {}
    pos = 0
    rest = rest.rstrip()
    while pos < len(rest):
        m = _FIELD.match(rest, pos)
        if not m:
            raise ProofSyntaxError(f"bad fields {rest!r}")
        out[m.group(1)] = m.group(2)
        pos = m.end()
    return out


def parse_term(text: str):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ProofSyntaxError(f"bad term {text!r}")
        toks.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    k = 0

    def term():
        nonlocal k
        if k >= len(toks):
            raise ProofSyntaxError(f"truncated term {text!r}")
        tok = toks[k]
        k += 1
        if tok.startswith("x@"):
            p, _, idx = tok[2:].rpartition("/")
            return (None, _parse_position(p), int(idx))
        if tok in "(),":
            raise ProofSyntaxError(f"unexpected {tok!r} in {text!r}")
        if k < len(toks) and toks[k] == "(":
            k += 1
            args = [term()]
            while k < len(toks) and toks[k] == ",":
                k += 1
                args.append(term())
            if k >= len(toks) or toks[k] != ")":
                raise ProofSyntaxError(f"unclosed argument list in {text!r}")
            k += 1
            return (tok, *args)
        return (tok,)

    t = term()
    if k != len(toks):
        raise ProofSyntaxError(f"trailing text in term {text!r}")
    return t


def parse_proof(text: str, problem: Problem) -> Proof:
    """Inverse of :func:`format_proof`; clause names resolve in ``problem``."""
    steps = []
    pairs = []
    in_bindings = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line == "bindings:":
            in_bindings = True
            continue
        if in_bindings:
            lhs, arrow, rhs = line.partition(" -> ")
            if not arrow:
                raise ProofSyntaxError(f"bad binding line {line!r}")
            pairs.append((parse_term(lhs), parse_term(rhs)))
            continue
        m = _STEP.match(line)
        if not m:
            raise ProofSyntaxError(f"bad step line {line!r}")
        rule, f = m.group(2), _parse_fields(m.group(3))
        try:
            if rule == "start":
                steps.append(Start(problem.clause_named(f["clause"])))
            elif rule == "extension":
                steps.append(Extend(_parse_position(f["goal"]), problem.clause_named(f["clause"]), int(f["lit"])))
            else:
                steps.append(Reduce(_parse_position(f["goal"]), _parse_position(f["ancestor"])))
        except KeyError as e:
            raise ProofSyntaxError(f"missing or unknown {e} in {line!r}") from None
    return Proof(steps, Bindings(pairs))
