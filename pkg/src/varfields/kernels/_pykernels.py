"""Pure-Python term-map kernels.

A term map is a dict mapping exponent tuples (one non-negative int per
variable) to nonzero ``fractions.Fraction`` coefficients.  Every
polynomial and truncated-series operation in the package bottoms out in
the functions below, so they are kept allocation-lean and free of any
class machinery.  ``_ckernels.pyx`` is a compiled twin with the exact
same signatures.
"""


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def mono_divides(a, b):
    """True if x^a divides x^b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b, a):
    """Exponent tuple of x^b / x^a; caller guarantees divisibility."""
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def tmap_add(a, b):
    out = dict(a)
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


def tmap_sub(a, b):
    out = dict(a)
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


def tmap_neg(a):
    return {m: -c for m, c in a.items()}


def tmap_scale(a, s):
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def tmap_mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
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


def tmap_mul_term(a, mono, coeff):
    """a * (coeff * x^mono); used by the division inner loop."""
    if not coeff:
        return {}
    out = {}
    for m, c in a.items():
        out[tuple(x + y for x, y in zip(m, mono))] = c * coeff
    return out


def series_mul(a, b, cap):
    """Term-map product dropping every term of total degree > cap."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        da = sum(ma)
        if da > cap:
            continue
        for mb, cb in b.items():
            if da + sum(mb) > cap:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
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
