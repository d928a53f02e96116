# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled unification kernels; same contract as ``_pykernels``."""

NAME = "cython"

cdef enum:
    _OK = 0
    _CLASH = 1
    _OCCURS = 2

OK = _OK
CLASH = _CLASH
OCCURS = _OCCURS


cdef inline tuple _deref(tuple t, dict bmap):
    cdef object u
    while t[0] is None:
        u = bmap.get(t)
        if u is None:
            return t
        t = <tuple>u
    return t


cdef bint _occurs(tuple v, tuple t, dict bmap):
    cdef Py_ssize_t i, n
    t = _deref(t, bmap)
    if t[0] is None:
        return t == v
    n = len(t)
    for i in range(1, n):
        if _occurs(v, <tuple>t[i], bmap):
            return True
    return False


cdef int _unify(tuple s, tuple t, dict bmap, list order):
    cdef Py_ssize_t i, n
    cdef int code
    s = _deref(s, bmap)
    t = _deref(t, bmap)
    if s is t:
        return _OK
    if s[0] is None:
        if t[0] is None:
            if s == t:
                return _OK
            if s < t:
                s, t = t, s
            bmap[s] = t
            order.append(s)
            return _OK
        if _occurs(s, t, bmap):
            return _OCCURS
        bmap[s] = t
        order.append(s)
        return _OK
    if t[0] is None:
        if _occurs(t, s, bmap):
            return _OCCURS
        bmap[t] = s
        order.append(t)
        return _OK
    n = len(s)
    if n != len(t) or s[0] != t[0]:
        return _CLASH
    for i in range(1, n):
        code = _unify(<tuple>s[i], <tuple>t[i], bmap, order)
        if code:
            return code
    return _OK


cdef void _undo_to(dict bmap, list order, Py_ssize_t mark):
    while len(order) > mark:
        del bmap[order.pop()]


cdef bint _equal(tuple s, tuple t, dict bmap):
    cdef Py_ssize_t i, n
    s = _deref(s, bmap)
    t = _deref(t, bmap)
    if s is t:
        return True
    if s[0] is None or t[0] is None:
        return s == t
    n = len(s)
    if n != len(t) or s[0] != t[0]:
        return False
    for i in range(1, n):
        if not _equal(<tuple>s[i], <tuple>t[i], bmap):
            return False
    return True


cdef tuple _resolve(tuple t, dict bmap):
    cdef Py_ssize_t i, n
    t = _deref(t, bmap)
    n = len(t)
    if t[0] is None or n == 1:
        return t
    out = [t[0]]
    for i in range(1, n):
        out.append(_resolve(<tuple>t[i], bmap))
    return tuple(out)


cdef tuple _instantiate(tuple t, object pos):
    cdef Py_ssize_t i, n
    if t[0] is None:
        return (None, pos, t[2])
    n = len(t)
    if n == 1:
        return t
    out = [t[0]]
    for i in range(1, n):
        out.append(_instantiate(<tuple>t[i], pos))
    return tuple(out)


def deref(tuple t, dict bmap):
    return _deref(t, bmap)


def occurs(tuple v, tuple t, dict bmap):
    return _occurs(v, t, bmap)


def undo_to(dict bmap, list order, Py_ssize_t mark):
    _undo_to(bmap, order, mark)


def unify(tuple s, tuple t, dict bmap, list order):
    cdef Py_ssize_t mark = len(order)
    cdef int code = _unify(s, t, bmap, order)
    if code:
        _undo_to(bmap, order, mark)
    return code


def unify_args(tuple sargs, tuple targs, dict bmap, list order):
    cdef Py_ssize_t i, n = len(sargs)
    cdef Py_ssize_t mark = len(order)
    cdef int code
    for i in range(n):
        code = _unify(<tuple>sargs[i], <tuple>targs[i], bmap, order)
        if code:
            _undo_to(bmap, order, mark)
            return code
    return _OK


def equal(tuple s, tuple t, dict bmap):
    return _equal(s, t, bmap)


def equal_args(tuple sargs, tuple targs, dict bmap):
    cdef Py_ssize_t i, n = len(sargs)
    for i in range(n):
        if not _equal(<tuple>sargs[i], <tuple>targs[i], bmap):
            return False
    return True


def resolve(tuple t, dict bmap):
    return _resolve(t, bmap)


def instantiate(tuple t, object pos):
    return _instantiate(t, pos)
