import random

from lfk.laurent import MultiLaurent


def rand_poly(rng: random.Random, nvars=2, max_terms=8, span=4, parity=None):
    """Random polynomial with exponents on a fixed coset per variable."""
    if parity is None:
        parity = tuple(rng.randint(0, 1) for _ in range(nvars))
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e2 = tuple(2 * rng.randint(-span, span) + parity[i]
                   for i in range(nvars))
        c = rng.randint(-9, 9)
        if c:
            terms[e2] = c
    return MultiLaurent(nvars, terms)


def rand_nonzero(rng, **kw):
    while True:
        p = rand_poly(rng, **kw)
        if not p.is_zero():
            return p
