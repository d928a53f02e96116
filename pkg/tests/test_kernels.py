import os
import subprocess
import sys

import pytest

from conftest import _ckernels

A, B = ("a",), ("b",)
X, Y = (None, (), 0), (None, (), 1)


def test_status_codes(kernel):
    bmap, order = {}, []
    assert kernel.unify(("f", X), ("f", A), bmap, order) == kernel.OK
    assert kernel.unify(X, B, bmap, order) == kernel.CLASH
    assert kernel.unify(Y, ("f", Y), bmap, order) == kernel.OCCURS
    assert order == [X]


def test_unify_args_rolls_back_on_failure(kernel):
    bmap, order = {}, []
    assert kernel.unify_args((X, A), (A, B), bmap, order) == kernel.CLASH
    assert bmap == {} and order == []


def test_undo_to(kernel):
    bmap, order = {}, []
    kernel.unify_args((X, Y), (A, B), bmap, order)
    kernel.undo_to(bmap, order, 1)
    assert order == [X] and bmap == {X: A}


def test_instantiate(kernel):
    t = ("f", (None, None, 0), ("g", (None, None, 1), A))
    assert kernel.instantiate(t, (1, 2)) == ("f", (None, (1, 2), 0), ("g", (None, (1, 2), 1), A))


def test_equal_and_resolve(kernel):
    bmap, order = {}, []
    kernel.unify(X, ("f", Y), bmap, order)
    kernel.unify(Y, A, bmap, order)
    assert kernel.resolve(X, bmap) == ("f", A)
    assert kernel.equal_args((X,), (("f", A),), bmap)
    assert not kernel.equal(X, Y, bmap)


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_compiled_kernel_is_default():
    from learncop import terms

    if not os.environ.get("LEARNCOP_PURE_PYTHON"):
        assert terms.KERNEL == "cython"


def test_pure_python_fallback_runs_a_search():
    env = dict(os.environ, LEARNCOP_PURE_PYTHON="1")
    code = (
        "import learncop as L\n"
        "p = L.parse_string('cnf(a, axiom, p(c)). cnf(b, negated_conjecture, ~p(X)).')\n"
        "o = L.prove(p)\n"
        "print(L.KERNEL, type(o).__name__)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "Theorem"]
