"""Pure-Python Laurent kernels (reference implementation and fallback)."""


def ladd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
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


def lmul(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for (bz, bt), bc in b.items():
        for (az, at), ac in a.items():
            m = (az + bz, at + bt)
            v = get(m)
            out[m] = ac * bc if v is None else v + ac * bc
    return {m: c for m, c in out.items() if c}
