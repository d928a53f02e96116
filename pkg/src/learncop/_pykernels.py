"""Pure-Python unification kernels.

Terms are plain tuples. A compound term is ``(functor, arg1, ..., argn)`` with
a ``str`` functor, so a constant is a 1-tuple. A variable is
``(None, position, index)``; clause templates use ``(None, None, index)``.

Bindings are triangular: ``bmap`` maps a variable to the term it was bound to
(which may itself contain bound variables) and ``order`` lists bound variables
in binding order so that any suffix can be undone.

``_ckernels.pyx`` mirrors this module function for function.
"""

NAME = "python"

OK = 0
CLASH = 1
OCCURS = 2


def deref(t, bmap):
    while t[0] is None:
        u = bmap.get(t)
        if u is None:
            return t
        t = u
    return t


def occurs(v, t, bmap):
    t = deref(t, bmap)
    if t[0] is None:
        return t == v
    for i in range(1, len(t)):
        if occurs(v, t[i], bmap):
            return True
    return False


def _unify(s, t, bmap, order):
    s = deref(s, bmap)
    t = deref(t, bmap)
    if s is t:
        return OK
    if s[0] is None:
        if t[0] is None:
            if s == t:
                return OK
            # the younger variable (later position) points at the older one
            if s < t:
                s, t = t, s
            bmap[s] = t
            order.append(s)
            return OK
        if occurs(s, t, bmap):
            return OCCURS
        bmap[s] = t
        order.append(s)
        return OK
    if t[0] is None:
        if occurs(t, s, bmap):
            return OCCURS
        bmap[t] = s
        order.append(t)
        return OK
    n = len(s)
    if n != len(t) or s[0] != t[0]:
        return CLASH
    for i in range(1, n):
        code = _unify(s[i], t[i], bmap, order)
        if code:
            return code
    return OK


def undo_to(bmap, order, mark):
    while len(order) > mark:
        del bmap[order.pop()]


def unify(s, t, bmap, order):
    mark = len(order)
    code = _unify(s, t, bmap, order)
    if code:
        undo_to(bmap, order, mark)
    return code


def unify_args(sargs, targs, bmap, order):
    mark = len(order)
    for i in range(len(sargs)):
        code = _unify(sargs[i], targs[i], bmap, order)
        if code:
            undo_to(bmap, order, mark)
            return code
    return OK


def equal(s, t, bmap):
    s = deref(s, bmap)
    t = deref(t, bmap)
    if s is t:
        return True
    if s[0] is None or t[0] is None:
        return s == t
    n = len(s)
    if n != len(t) or s[0] != t[0]:
        return False
    for i in range(1, n):
        if not equal(s[i], t[i], bmap):
            return False
    return True


def equal_args(sargs, targs, bmap):
    for i in range(len(sargs)):
        if not equal(sargs[i], targs[i], bmap):
            return False
    return True


def resolve(t, bmap):
    t = deref(t, bmap)
    if t[0] is None or len(t) == 1:
        return t
    return (t[0],) + tuple([resolve(a, bmap) for a in t[1:]])


def instantiate(t, pos):
    if t[0] is None:
        return (None, pos, t[2])
    if len(t) == 1:
        return t
    return (t[0],) + tuple([instantiate(a, pos) for a in t[1:]])
