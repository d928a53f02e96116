import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from learncop import terms
from learncop.checker import _mgu
from learncop.terms import (
    ROOT,
    Bindings,
    Literal,
    UnificationError,
    compound,
    connectable,
    const,
    equal_under,
    format_literal,
    format_term,
    instantiate_clause,
    is_strict_ancestor,
    term_depth,
    term_vars,
    undo_delta,
    unify,
    unify_literals,
    var,
)

x, y, z, w = var(ROOT, 0), var(ROOT, 1), var(ROOT, 2), var((1,), 0)
a, b, c, d = const("a"), const("b"), const("c"), const("d")


def f(*args):
    return compound("f", *args)


def g(*args):
    return compound("g", *args)


def test_unify_returns_delta_and_binds():
    s = Bindings()
    delta = unify(f(x, b), f(a, y), s)
    assert delta == [x, y]
    assert s.resolve(f(x, y)) == f(a, b)


def test_clash_leaves_bindings_untouched():
    s = Bindings()
    unify(x, a, s)
    with pytest.raises(UnificationError) as e:
        unify(f(y, x), f(b, b), s)
    assert e.value.kind == "clash"
    assert s.items() == [(x, a)]


def test_occurs_check():
    s = Bindings()
    with pytest.raises(UnificationError) as e:
        unify(x, f(x), s)
    assert e.value.kind == "occurs"
    unify(y, f(x), s)
    with pytest.raises(UnificationError):
        unify(x, y, s)


def test_younger_variable_points_at_older():
    s = Bindings()
    unify(x, w, s)
    assert s.items() == [(w, x)]
    s2 = Bindings()
    unify(w, x, s2)
    assert s2.items() == [(w, x)]


def test_bindings_are_triangular():
    s = Bindings()
    unify(x, f(y), s)
    unify(y, a, s)
    assert s.map[x] == f(y)
    assert s.resolve(x) == f(a)
    assert s.deref(x) == f(y)


def test_undo_delta_is_lifo():
    s = Bindings()
    d1 = unify(x, a, s)
    d2 = unify(y, b, s)
    with pytest.raises(AssertionError):
        undo_delta(s, d1)
    undo_delta(s, d2)
    undo_delta(s, d1)
    assert len(s) == 0


def test_unify_literals_needs_complementary_pair():
    s = Bindings()
    with pytest.raises(UnificationError):
        unify_literals(Literal(True, "p", (x,)), Literal(True, "p", (a,)), s)
    with pytest.raises(UnificationError):
        unify_literals(Literal(True, "p", (x,)), Literal(False, "q", (a,)), s)
    assert unify_literals(Literal(True, "p", (x,)), Literal(False, "p", (a,)), s) == [x]


def test_connectable_ignores_current_bindings():
    assert connectable(Literal(True, "p", (x,)), Literal(False, "p", (a,)))
    assert not connectable(Literal(True, "p", (a,)), Literal(False, "p", (b,)))
    assert not connectable(Literal(True, "p", (x, f(x))), Literal(False, "p", (y, y)))


def test_equal_under():
    s = Bindings()
    unify(x, a, s)
    assert equal_under((x, b), (a, b), s)
    assert not equal_under((x,), (y,), s)
    assert not equal_under((x,), (x, x), s)


def test_instantiate_names_variables_by_position():
    from learncop.tptp import parse_string

    cl = parse_string("cnf(c, axiom, p(X, f(Y)) | q(X)).").clauses[0]
    lits = instantiate_clause(cl, (2, 1))
    assert lits[0].args == (var((2, 1), 0), f(var((2, 1), 1)))
    # same clause at the same position gives the same literals
    assert instantiate_clause(cl, (2, 1)) == lits


def test_positions():
    assert is_strict_ancestor((1,), (1, 2))
    assert not is_strict_ancestor((1, 2), (1, 2))
    assert not is_strict_ancestor((2,), (1, 2))


def test_term_helpers_and_formatting():
    t = f(x, g(a, w))
    assert term_vars(t) == [x, w]
    assert term_depth(t) == 2
    assert format_term(t) == "f(x@root/0,g(a,x@1/0))"
    assert format_literal(Literal(False, "r", (x, c))) == "~r(x@root/0,c)"
    assert format_literal(Literal(True, "s", ())) == "s"


# --- property tests against an independent unifier ---------------------------

VARS = [var(ROOT, i) for i in range(3)] + [var((1,), i) for i in range(2)]


def terms_(depth=2):
    leaves = st.sampled_from(VARS + [a, b])
    return st.recursive(leaves, lambda sub: st.builds(f, sub) | st.builds(g, sub, sub), max_leaves=6)


@settings(max_examples=300, deadline=None)
@given(terms_(), terms_())
def test_unify_agrees_with_reference(s_, t_):
    s = Bindings()
    ref = _mgu([(s_, t_)], {})
    try:
        unify(s_, t_, s)
        ok = True
    except UnificationError:
        ok = False
    assert ok == (ref is not None)
    if ok:
        assert s.resolve(s_) == s.resolve(t_)
    else:
        assert len(s) == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(terms_(), terms_()), max_size=4))
def test_undo_restores_state(pairs):
    s = Bindings()
    states = []
    deltas = []
    for p, q in pairs:
        states.append(s.state())
        try:
            deltas.append(unify(p, q, s))
        except UnificationError:
            states.pop()
    for delta in reversed(deltas):
        undo_delta(s, delta)
        assert s.state() == states.pop()


@settings(max_examples=300, deadline=None)
@given(terms_(), terms_(), st.lists(st.tuples(st.sampled_from(VARS), terms_()), max_size=3))
def test_kernels_agree(s_, t_, pre):
    from conftest import KERNELS

    results = []
    for k in KERNELS:
        bmap, order = {}, []
        for v, u in pre:
            k.unify(v, u, bmap, order)
        code = k.unify(s_, t_, bmap, order)
        results.append((code, list(order), dict(bmap), k.equal(s_, t_, bmap), k.resolve(s_, bmap)))
    assert all(r == results[0] for r in results)


def test_kernel_selected_at_import():
    assert terms.KERNEL in ("python", "cython")
