# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``.

Coefficients stay arbitrary-precision Python objects (Fraction), so the
win over the pure-Python kernels comes from C-level loop control, tuple
construction and dict plumbing in the innermost products, not from
coefficient arithmetic itself.
"""

cimport cython
from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF


cdef inline tuple _tuple_add(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple out = PyTuple_New(n)
    cdef object x
    for i in range(n):
        x = (<object>PyTuple_GET_ITEM(a, i)) + (<object>PyTuple_GET_ITEM(b, i))
        Py_INCREF(x)
        PyTuple_SET_ITEM(out, i, x)
    return out


cdef inline Py_ssize_t _tuple_sum(tuple a):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef Py_ssize_t tot = 0
    for i in range(n):
        tot += <Py_ssize_t>(<object>PyTuple_GET_ITEM(a, i))
    return tot


def mono_mul(tuple a, tuple b):
    return _tuple_add(a, b)


def mono_deg(tuple a):
    return _tuple_sum(a)


def mono_divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    for i in range(n):
        if <Py_ssize_t>(<object>PyTuple_GET_ITEM(a, i)) > <Py_ssize_t>(<object>PyTuple_GET_ITEM(b, i)):
            return False
    return True


def mono_div(tuple b, tuple a):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple out = PyTuple_New(n)
    cdef object x
    for i in range(n):
        x = (<object>PyTuple_GET_ITEM(b, i)) - (<object>PyTuple_GET_ITEM(a, i))
        Py_INCREF(x)
        PyTuple_SET_ITEM(out, i, x)
    return out


def mono_lcm(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple out = PyTuple_New(n)
    cdef object x, y
    for i in range(n):
        x = <object>PyTuple_GET_ITEM(a, i)
        y = <object>PyTuple_GET_ITEM(b, i)
        if <Py_ssize_t>x < <Py_ssize_t>y:
            x = y
        Py_INCREF(x)
        PyTuple_SET_ITEM(out, i, x)
    return out


def tmap_add(dict a, dict b):
    cdef dict out = dict(a)
    cdef object m, c, acc
    for m, c in b.items():
        acc = out.get(m)
        if acc is None:
            out[m] = c
        else:
            acc = acc + c
            if acc:
                out[m] = acc
            else:
                del out[m]
    return out


def tmap_sub(dict a, dict b):
    cdef dict out = dict(a)
    cdef object m, c, acc
    for m, c in b.items():
        acc = out.get(m)
        if acc is None:
            out[m] = -c
        else:
            acc = acc - c
            if acc:
                out[m] = acc
            else:
                del out[m]
    return out


def tmap_neg(dict a):
    cdef dict out = {}
    cdef object m, c
    for m, c in a.items():
        out[m] = -c
    return out


def tmap_scale(dict a, s):
    cdef dict out = {}
    cdef object m, c
    if not s:
        return out
    for m, c in a.items():
        out[m] = c * s
    return out


def tmap_mul(dict a, dict b):
    cdef dict out = {}
    cdef object ma, ca, mb, cb, c, acc
    cdef tuple m
    if len(a) > len(b):
        a, b = b, a
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _tuple_add(<tuple>ma, <tuple>mb)
            c = ca * cb
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc:
                    out[m] = acc
                else:
                    del out[m]
    return out


def tmap_mul_term(dict a, tuple mono, coeff):
    cdef dict out = {}
    cdef object m, c
    if not coeff:
        return out
    for m, c in a.items():
        out[_tuple_add(<tuple>m, mono)] = c * coeff
    return out


def series_mul(dict a, dict b, Py_ssize_t cap):
    cdef dict out = {}
    cdef object ma, ca, mb, cb, c, acc
    cdef tuple m
    cdef Py_ssize_t da
    if len(a) > len(b):
        a, b = b, a
    for ma, ca in a.items():
        da = _tuple_sum(<tuple>ma)
        if da > cap:
            continue
        for mb, cb in b.items():
            if da + _tuple_sum(<tuple>mb) > cap:
                continue
            m = _tuple_add(<tuple>ma, <tuple>mb)
            c = ca * cb
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc:
                    out[m] = acc
                else:
                    del out[m]
    return out
