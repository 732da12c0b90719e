# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Laurent kernels; same contract as heiscat._pykernels."""


def ladd(dict a, dict b):
    cdef dict out
    cdef object m, c, v
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def lmul(dict a, dict b):
    cdef dict out = {}
    cdef long az, at, bz, bt
    cdef object ac, bc, v, m
    cdef list ai
    if len(a) < len(b):
        a, b = b, a
    ai = [(k[0], k[1], c) for k, c in a.items()]
    for k, bc in b.items():
        bz = k[0]
        bt = k[1]
        for az, at, ac in ai:
            m = (az + bz, at + bt)
            v = out.get(m)
            if v is None:
                out[m] = ac * bc
            else:
                out[m] = v + ac * bc
    return {m: v for m, v in out.items() if v}
