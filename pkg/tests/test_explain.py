import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from learncop.calculus import CalculusFailure, Disequation, Extend, Reduce, Start, Tableau
from learncop.checker import _apply, _mgu
from learncop.constraints import Bind, NoConnect, Place
from learncop.explain import (
    ExplainError,
    explain_failed_inference,
    explain_open_branch,
    minimal_blocking_bindings,
    minimal_falsifying_bindings,
)
from learncop.terms import ROOT, Bindings, Literal, var

from test_calculus import build, running_prefix

x, y, z = var(ROOT, 0), var(ROOT, 1), var(ROOT, 2)
w = var((1,), 0)  # the variable of clause (2) attached at position 1
v3 = var((3,), 0)  # the variable of a clause attached below position 3
c, d = ("c",), ("d",)


def f(t):
    return ("f", t)


RXY = Literal(True, "r", (x, y))
SIGMA = Bindings([(w, x), (x, c), (y, d), (z, f(c))])


# --- oracles -------------------------------------------------------------------

def unifies_under(l1, l2, pairs) -> bool:
    return _mgu(list(pairs) + list(zip(l1.args, l2.args)), {}) is not None


def equal_under(lhs, rhs, pairs) -> bool:
    s = _mgu(list(pairs), {})
    assert s is not None
    return tuple(_apply(t, s) for t in lhs) == tuple(_apply(t, s) for t in rhs)


def smallest_blocking_subsets(l1, l2, sigma_pairs):
    for k in range(len(sigma_pairs) + 1):
        found = [set(s) for s in itertools.combinations(sigma_pairs, k) if not unifies_under(l1, l2, s)]
        if found:
            return found
    return []


# --- worked examples -----------------------------------------------------------

def test_blocked_by_x_to_c():
    assert minimal_blocking_bindings(RXY, Literal(False, "r", (d, v3)), SIGMA) == {Bind(x, c)}


def test_blocked_by_y_to_d():
    assert minimal_blocking_bindings(RXY, Literal(False, "r", (v3, c)), SIGMA) == {Bind(y, d)}


def test_chain_needs_both_bindings():
    qy, not_qd = Literal(True, "q", (y,)), Literal(False, "q", (d,))
    sigma = Bindings([(y, x), (x, c)])
    got = minimal_blocking_bindings(qy, not_qd, sigma)
    assert got == {Bind(y, x), Bind(x, c)}
    # brute force: the only blocking subset is all of sigma
    assert smallest_blocking_subsets(qy, not_qd, sigma.items()) == [set(sigma.items())]


def test_blocking_precondition():
    with pytest.raises(ExplainError):
        minimal_blocking_bindings(RXY, Literal(False, "r", (v3, v3)), Bindings())  # unifies
    with pytest.raises(ExplainError):
        minimal_blocking_bindings(Literal(True, "p", (c,)), Literal(False, "p", (d,)), SIGMA)


def test_falsifying_examples():
    assert minimal_falsifying_bindings(Disequation((2,), (1,), (c,), (x,)), Bindings([(x, c)])) == {Bind(x, c)}
    # the seed binding is used but never returned
    got = minimal_falsifying_bindings(Disequation((4,), (1,), (z,), (x,)), Bindings([(x, c)]), [(z, c)])
    assert got == {Bind(x, c)}
    assert minimal_falsifying_bindings(Disequation((2,), (1,), (c,), (c,)), SIGMA) == set()
    with pytest.raises(ExplainError):
        minimal_falsifying_bindings(Disequation((2,), (1,), (c,), (y,)), SIGMA)


def test_explain_blocked_extension(running):
    tab = build(running, running_prefix(running), 3)
    j = Extend((3,), running.clause_named("c7"), 1)
    fail = tab.try_apply(j, 3)
    assert explain_failed_inference(tab, j, fail) == {Bind(x, c)}
    j6 = Extend((3,), running.clause_named("c6"), 1)
    assert explain_failed_inference(tab, j6, tab.try_apply(j6, 3)) == {Bind(y, d)}


def test_explain_depth_blocked(running):
    tab = build(running, running_prefix(running), 3)
    j = Extend((3,), running.clause_named("c6"), 1)
    fail = tab.try_apply(j, 1)
    assert fail.kind == "depth-blocked"
    assert explain_failed_inference(tab, j, fail) == set()


def reduction_tableau(reduction):
    cl = reduction.clause_named
    steps = [Start(cl("c1")), Extend((1,), cl("c2"), 1), Extend((1, 2), cl("c3"), 1),
             Extend((1, 2, 2), cl("c4"), 1), Extend((1, 2, 2, 2), cl("c5"), 1)]
    return build(reduction, steps, 5, "conjecture-first")


P5 = (1, 2, 2, 2, 2)


def test_explain_blocked_reduction(reduction):
    tab = reduction_tableau(reduction)
    assert tab.current_goal() == P5
    j = Reduce(P5, (1,))
    fail = tab.try_apply(j, 5)
    assert fail.kind == "connection-blocked"
    assert explain_failed_inference(tab, j, fail) == {Place(Literal(True, "p", (x,)), (1,)), Bind(x, d)}


def test_open_branch_reasons(running, reduction):
    tab = build(running, running_prefix(running), 3)
    assert explain_open_branch(tab, (3,)) == {Place(RXY, (3,))}
    tab = reduction_tableau(reduction)
    assert explain_open_branch(tab, P5) == {
        Place(Literal(False, "p", (c,)), P5),
        NoConnect((1, 2), P5), NoConnect((1, 2, 2), P5), NoConnect((1, 2, 2, 2), P5),
    }
    # every atom of the reason is on the trail
    atoms = {a for rec in tab.history for a in rec.atoms}
    assert explain_open_branch(tab, P5) <= atoms


def test_open_branch_below_root_with_one_never_connecting_ancestor():
    from learncop.tptp import parse_string

    p = parse_string("cnf(a, negated_conjecture, q(a)). cnf(b, axiom, ~q(X) | p(X)).")
    tab = build(p, [Start(p.clauses[0]), Extend((1,), p.clauses[1], 1)], 5)
    assert explain_open_branch(tab, (1, 2)) == {Place(tab.lits[(1, 2)], (1, 2)), NoConnect((1,), (1, 2))}


def test_regularity_reason_for_new_disequation():
    from learncop.tptp import parse_string

    p = parse_string("cnf(a, negated_conjecture, q(Y) | p(Y)). cnf(b, axiom, ~q(a)). cnf(c, axiom, ~p(X) | p(a)).")
    tab = build(p, [Start(p.clauses[0]), Extend((1,), p.clauses[1], 1)], 5)
    j = Extend((2,), p.clauses[2], 1)
    fail = tab.try_apply(j, 5)
    assert fail.kind == "regularity-blocked" and fail.new_diseq
    # the new literal p(a) would repeat p(Y) at 2 because Y -> a
    assert explain_failed_inference(tab, j, fail) == {Place(Literal(True, "p", (x,)), (2,)), Bind(x, ("a",))}


def test_regularity_reason_for_active_disequation():
    from learncop.tptp import parse_string

    p = parse_string("cnf(a, negated_conjecture, p(Y) | q(Y)). cnf(b, axiom, ~p(X) | p(a)). "
                     "cnf(c, axiom, ~p(a)). cnf(d, axiom, ~q(a)).")
    cl = p.clause_named
    tab = build(p, [Start(cl("a")), Extend((1,), cl("b"), 1), Extend((1, 2), cl("c"), 1)], 5)
    j = Extend((2,), cl("d"), 1)
    fail = tab.try_apply(j, 5)
    assert fail.kind == "regularity-blocked" and not fail.new_diseq
    reason = explain_failed_inference(tab, j, fail)
    # the connection alone forces y = a, so no binding is needed
    assert reason == {fail.detail.atom()}
    assert reason <= tab_atoms(tab)


def tab_atoms(tab):
    return {a for rec in tab.history for a in rec.atoms}


# --- random blocked unifications -----------------------------------------------

VARS = [var(ROOT, i) for i in range(4)] + [var((1,), i) for i in range(3)]
CONSTS = [("a",), ("b",)]


def rand_term(rng, depth=1):
    r = rng.random()
    if r < 0.5:
        return rng.choice(VARS)
    if depth and r < 0.75:
        return ("f", rand_term(rng, depth - 1)) if rng.random() < 0.6 else ("g", rand_term(rng, 0), rand_term(rng, 0))
    return rng.choice(CONSTS)


def rand_sigma(rng, size):
    b = Bindings()
    for _ in range(50):
        if len(b) >= size:
            break
        v = rng.choice(VARS)
        if v in b:
            continue
        from learncop import terms
        terms._k.unify(v, rand_term(rng), b.map, b.order)
        while len(b) > size:
            b.undo_to(len(b) - 1)
    return b


def blocked_instance(rng):
    while True:
        sigma = rand_sigma(rng, rng.randint(1, 6))
        arity = rng.randint(1, 3)
        l1 = Literal(True, "p", tuple(rand_term(rng) for _ in range(arity)))
        l2 = Literal(False, "p", tuple(rand_term(rng) for _ in range(arity)))
        if unifies_under(l1, l2, []) and not unifies_under(l1, l2, sigma.items()):
            return l1, l2, sigma


def check_blocking_instance(rng) -> bool:
    l1, l2, sigma = blocked_instance(rng)
    got = minimal_blocking_bindings(l1, l2, sigma)
    pairs = [(a.var, a.term) for a in got]
    if not set(pairs) <= set(sigma.items()):
        return False
    if unifies_under(l1, l2, pairs):
        return False
    return all(unifies_under(l1, l2, [p for p in pairs if p != q]) for q in pairs)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_blocking_is_blocking_and_irredundant(seed):
    assert check_blocking_instance(random.Random(seed))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_blocking_reason_covers_every_superset(seed):
    # any substitution containing the reason blocks the inference as well
    rng = random.Random(seed)
    l1, l2, sigma = blocked_instance(rng)
    got = {(a.var, a.term) for a in minimal_blocking_bindings(l1, l2, sigma)}
    rest = [p for p in sigma.items() if p not in got]
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            assert not unifies_under(l1, l2, list(got) + list(extra))
    if len(got) <= 4:
        # no proper subset blocks
        for k in range(len(got)):
            for sub in itertools.combinations(sorted(got, key=repr), k):
                assert unifies_under(l1, l2, sub)


def falsified_instance(rng):
    while True:
        sigma = rand_sigma(rng, rng.randint(1, 6))
        n = rng.randint(1, 2)
        lhs = tuple(rand_term(rng) for _ in range(n))
        rhs = tuple(rand_term(rng) for _ in range(n))
        seed = [(rand_term(rng), rand_term(rng))] if rng.random() < 0.5 else []
        full = _mgu(sigma.items() + seed, {})
        if full is None:
            continue
        if equal_under(lhs, rhs, sigma.items() + seed):
            return Disequation((2,), (1,), lhs, rhs), sigma, seed


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_falsifying_is_sufficient_and_irredundant(seed):
    rng = random.Random(seed)
    dq, sigma, eqs = falsified_instance(rng)
    got = [(a.var, a.term) for a in minimal_falsifying_bindings(dq, sigma, eqs)]
    assert set(got) <= set(sigma.items())
    assert equal_under(dq.lhs, dq.rhs, got + eqs)
    for q in got:
        assert not equal_under(dq.lhs, dq.rhs, [p for p in got if p != q] + eqs)
