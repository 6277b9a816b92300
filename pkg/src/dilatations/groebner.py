"""Multivariate division and Buchberger's algorithm with reduced output.

The basis returned by `buchberger_reduced` is the unique reduced Groebner
basis of its input ideal: monic, mutually reduced, sorted by leading
monomial (descending).  Identical inputs give bit-identical output; there
is no randomness and no hash-order dependence anywhere in the pair
selection.

S-pair processing uses the normal strategy (smallest lcm first) together
with the two classical discard criteria (coprime leading terms, and the
lcm chain criterion).  Work is bounded by a degree cap and a pair cap;
exceeding either raises ResourceLimitError rather than running unbounded.
"""

from __future__ import annotations

from .poly import (
    InputError,
    Polynomial,
    mono_coprime,
    mono_deg,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_DEGREE_CAP = 24
DEFAULT_PAIR_CAP = 200_000


class ResourceLimitError(RuntimeError):
    """A configured S-pair or degree budget was exceeded."""


class Limits:
    __slots__ = ("degree_cap", "pair_cap")

    def __init__(self, degree_cap: int = DEFAULT_DEGREE_CAP, pair_cap: int = DEFAULT_PAIR_CAP):
        self.degree_cap = degree_cap
        self.pair_cap = pair_cap


DEFAULT_LIMITS = Limits()


def _same_ring(polys):
    ring = None
    for f in polys:
        if ring is None:
            ring = f.ring
        elif f.ring != ring:
            raise InputError("basis elements over different registries")
    return ring


def normal_form(f: Polynomial, basis, order=None) -> Polynomial:
    """Remainder of `f` under multivariate division by `basis`.

    No term of the result is divisible by any basis leading term, and
    f - result lies in the ideal generated by the basis.
    """
    r, _ = divide(f, basis, with_quotients=False)
    return r


def divide(f: Polynomial, basis, with_quotients: bool = True):
    """Divide `f` by a list of polynomials; return (remainder, quotients).

    quotients[i] * basis[i] summed plus the remainder reconstructs f
    exactly (quotients is None when with_quotients is false).
    """
    basis = [g for g in basis if not g.is_zero()]
    ring = f.ring
    _same_ring([f] + basis)
    fld = ring.field
    key = ring.order.key
    lts = [(g.lm(), g.lc(), g) for g in basis]
    quotients = [ring.zero() for _ in basis] if with_quotients else None

    rem_terms: dict = {}
    work = dict(f.terms)
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = -1
        for idx, (lm, _, _) in enumerate(lts):
            if mono_divides(lm, m):
                hit = idx
                break
        if hit < 0:
            rem_terms[m] = c
            continue
        lm, lc, g = lts[hit]
        q_mono = mono_div(m, lm)
        q_coef = fld.mul(c, fld.inv(lc))
        if with_quotients:
            quotients[hit] = quotients[hit] + Polynomial(ring, {q_mono: q_coef})
        for gm, gc in g.terms.items():
            if gm == lm:
                continue
            t = mono_mul(gm, q_mono)
            s = fld.sub(work.get(t, fld.zero()), fld.mul(gc, q_coef))
            if s:
                work[t] = s
            else:
                work.pop(t, None)
    return Polynomial(ring, rem_terms), quotients


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    fld = ring.field
    l = mono_lcm(f.lm(), g.lm())
    a = f.mul_term(mono_div(l, f.lm()), fld.inv(f.lc()))
    b = g.mul_term(mono_div(l, g.lm()), fld.inv(g.lc()))
    return a - b


def buchberger_reduced(gens, order=None, limits: Limits | None = None):
    """Unique reduced Groebner basis of the ideal generated by `gens`.

    `order` overrides the generators' ring order when given (a ring with
    that order must already be attached to the inputs; the argument is a
    consistency check only).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = _same_ring(gens)
    if order is not None and order != ring.order:
        raise InputError("order argument disagrees with the ring order")
    limits = limits or DEFAULT_LIMITS

    basis: list[Polynomial] = []
    for g in sorted(gens, key=lambda p: (ring.order.key(p.lm()), sorted(p.terms.items()))):
        r = normal_form(g, basis)
        if not r.is_zero():
            basis.append(r.monic())

    # pair queue keyed by (lcm order key, i, j) — normal strategy
    import heapq

    key = ring.order.key
    heap: list = []
    pending = set()

    def push(i, j):
        l = mono_lcm(basis[i].lm(), basis[j].lm())
        heapq.heappush(heap, (key(l), i, j, l))
        pending.add((i, j))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push(i, j)

    processed = 0
    while heap:
        _, i, j, l = heapq.heappop(heap)
        pending.discard((i, j))
        processed += 1
        if processed > limits.pair_cap:
            raise ResourceLimitError(f"pair budget {limits.pair_cap} exceeded")
        if mono_deg(l) > limits.degree_cap:
            raise ResourceLimitError(
                f"degree budget {limits.degree_cap} exceeded (lcm degree {mono_deg(l)})"
            )
        if mono_coprime(basis[i].lm(), basis[j].lm()):
            continue
        # chain criterion: some k with lt(k) | lcm(i,j) and both other pairs done
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(basis[k].lm(), l):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        r = normal_form(_spoly(basis[i], basis[j]), basis)
        if r.is_zero():
            continue
        if mono_deg(r.lm()) > limits.degree_cap:
            raise ResourceLimitError(
                f"degree budget {limits.degree_cap} exceeded (new lead degree {mono_deg(r.lm())})"
            )
        basis.append(r.monic())
        new = len(basis) - 1
        for k in range(new):
            push(k, new)

    return _interreduce(basis)


def _interreduce(basis):
    """Minimalize and fully reduce a Groebner basis; sort deterministically."""
    if not basis:
        return []
    ring = basis[0].ring
    key = ring.order.key
    basis = sorted(basis, key=lambda p: key(p.lm()))
    keep = []
    for i, g in enumerate(basis):
        lm = g.lm()
        dominated = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            if mono_divides(h.lm(), lm) and (h.lm() != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        r = normal_form(g, others)
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda p: key(p.lm()), reverse=True)
    return reduced


def groebner_with_cofactors(gens, limits: Limits | None = None):
    """Groebner basis plus cofactor rows expressing it over `gens`.

    Returns (basis, rows): basis[e] == sum_j rows[e][j] * gens[j] exactly.
    The basis is a (not necessarily reduced) monic Groebner basis.
    """
    gens = list(gens)
    nz = [(g, k) for k, g in enumerate(gens) if not g.is_zero()]
    if not nz:
        return [], []
    ring = _same_ring([g for g, _ in nz])
    limits = limits or DEFAULT_LIMITS
    fld = ring.field

    basis = []
    rows = []
    for g, k in sorted(nz, key=lambda gk: (ring.order.key(gk[0].lm()), gk[1])):
        row = [ring.zero() for _ in gens]
        row[k] = ring.one()
        r, qs = divide(g, basis)
        for idx, q in enumerate(qs):
            if not q.is_zero():
                for j in range(len(gens)):
                    row[j] = row[j] - q * rows[idx][j]
        if r.is_zero():
            continue
        inv = fld.inv(r.lc())
        basis.append(r.monic())
        rows.append([c.scale(inv) for c in row])

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    processed = 0
    while pairs:
        i, j = min(
            pairs,
            key=lambda ij: (ring.order.key(mono_lcm(basis[ij[0]].lm(), basis[ij[1]].lm())), ij),
        )
        pairs.discard((i, j))
        processed += 1
        if processed > limits.pair_cap:
            raise ResourceLimitError(f"pair budget {limits.pair_cap} exceeded")
        l = mono_lcm(basis[i].lm(), basis[j].lm())
        if mono_deg(l) > limits.degree_cap:
            raise ResourceLimitError(f"degree budget {limits.degree_cap} exceeded")
        if mono_coprime(basis[i].lm(), basis[j].lm()):
            continue
        mi = mono_div(l, basis[i].lm())
        mj = mono_div(l, basis[j].lm())
        ci = fld.inv(basis[i].lc())
        cj = fld.inv(basis[j].lc())
        s = basis[i].mul_term(mi, ci) - basis[j].mul_term(mj, cj)
        srow = [
            rows[i][k].mul_term(mi, ci) - rows[j][k].mul_term(mj, cj) for k in range(len(gens))
        ]
        r, qs = divide(s, basis)
        for idx, q in enumerate(qs):
            if not q.is_zero():
                for k in range(len(gens)):
                    srow[k] = srow[k] - q * rows[idx][k]
        if r.is_zero():
            continue
        if mono_deg(r.lm()) > limits.degree_cap:
            raise ResourceLimitError(f"degree budget {limits.degree_cap} exceeded")
        inv = fld.inv(r.lc())
        basis.append(r.monic())
        rows.append([c.scale(inv) for c in srow])
        new = len(basis) - 1
        for k in range(new):
            pairs.add((k, new))
    return basis, rows


def ideal_cofactors(f: Polynomial, gens, limits: Limits | None = None):
    """Express f as a combination of gens, or None if f is not a member.

    Returns coefficients cs with f == sum cs[j] * gens[j], exactly.
    """
    basis, rows = groebner_with_cofactors(gens, limits)
    r, qs = divide(f, basis)
    if not r.is_zero():
        return None
    ring = f.ring
    out = [ring.zero() for _ in gens]
    for idx, q in enumerate(qs):
        if not q.is_zero():
            for j in range(len(gens)):
                out[j] = out[j] + q * rows[idx][j]
    return out
