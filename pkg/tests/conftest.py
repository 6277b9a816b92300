import random

import pytest
from hypothesis import settings

from dilatations.poly import PolyRing, Polynomial, QQ

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")


def ring(names, field=QQ, order=None):
    from dilatations.poly import GREVLEX

    return PolyRing(field, names, order or GREVLEX)


def random_poly(rng: random.Random, r: PolyRing, max_deg=2, max_terms=3, coeff_bound=3):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * r.nvars
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            exps[rng.randrange(r.nvars)] += 1
        c = rng.randint(-coeff_bound, coeff_bound)
        if c == 0:
            continue
        mono = tuple(exps)
        terms[mono] = r.field.add(terms.get(mono, r.field.zero()), r.field.of_int(c))
        if not terms[mono]:
            del terms[mono]
    return Polynomial(r, terms)


@pytest.fixture
def rng():
    return random.Random(20240811)
