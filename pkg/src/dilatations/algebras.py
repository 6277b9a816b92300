"""Finitely presented algebras A = k[y1..ym]/P and their homomorphisms.

Element equality is normal-form equality under the cached reduced
Groebner basis of P, which makes zero-ring and unit-ideal detection
uniform (the zero ring is presented by P = (1) and is legal).
"""

from __future__ import annotations

from .ideals import IdealHandle, colon, eliminate
from .poly import InputError, PolyRing, Polynomial


class PresentedAlgebra:
    __slots__ = ("ring", "relations")

    def __init__(self, ring: PolyRing, relations: IdealHandle | None = None):
        if relations is None:
            relations = IdealHandle(ring, [])
        if relations.ring != ring:
            raise InputError("relation ideal over a different registry")
        self.ring = ring
        self.relations = relations

    @classmethod
    def free(cls, field, names, order=None) -> "PresentedAlgebra":
        from .poly import GREVLEX

        return cls(PolyRing(field, names, order or GREVLEX))

    def nf(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise InputError("element over a different registry")
        return self.relations.normal_form(f)

    def eq(self, f: Polynomial, g: Polynomial) -> bool:
        return self.nf(f - g).is_zero()

    def is_zero_ring(self) -> bool:
        return self.relations.is_unit()

    def ideal(self, gens, include_relations: bool = True) -> IdealHandle:
        """An ideal of the quotient, represented in the ambient ring."""
        gens = list(gens)
        if include_relations:
            gens = gens + self.relations.gens
        return IdealHandle(self.ring, gens, self.relations.limits)

    def quotient(self, extra_gens) -> "PresentedAlgebra":
        return PresentedAlgebra(self.ring, self.ideal(list(extra_gens)))

    def parse(self, text: str) -> Polynomial:
        return self.ring.parse(text)

    def var(self, name: str) -> Polynomial:
        return self.ring.var(name)

    def one(self) -> Polynomial:
        return self.ring.one()

    def zero(self) -> Polynomial:
        return self.ring.zero()

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAlgebra)
            and self.ring == other.ring
            and self.relations.groebner() == other.relations.groebner()
        )

    def __hash__(self):
        return hash(self.ring)

    def __repr__(self):
        rels = ", ".join(str(g) for g in self.relations.gens)
        return f"{self.ring}/({rels})" if rels else f"{self.ring}"


class AlgebraHom:
    """A k-algebra map given by images of the source ring variables."""

    __slots__ = ("source", "target", "images", "_well_defined")

    def __init__(self, source: PresentedAlgebra, target: PresentedAlgebra, images):
        images = list(images)
        if len(images) != source.ring.nvars:
            raise InputError("image count does not match source variables")
        for f in images:
            if f.ring != target.ring:
                raise InputError("image over a different registry")
        self.source = source
        self.target = target
        self.images = images
        self._well_defined: bool | None = None

    @classmethod
    def identity(cls, a: PresentedAlgebra) -> "AlgebraHom":
        h = cls(a, a, a.ring.gens())
        h._well_defined = True
        return h

    def image_map(self) -> dict:
        return dict(zip(self.source.ring.names, self.images))

    def apply_raw(self, f: Polynomial) -> Polynomial:
        """Substitution only; no reduction modulo target relations."""
        if f.ring != self.source.ring:
            raise InputError("element over a different registry")
        if f.is_zero():
            return self.target.ring.zero()
        return f.subst(self.image_map())

    def apply(self, f: Polynomial) -> Polynomial:
        return self.target.nf(self.apply_raw(f))

    def compose(self, inner: "AlgebraHom") -> "AlgebraHom":
        """self ∘ inner (inner applied first)."""
        if inner.target.ring != self.source.ring:
            raise InputError("composition endpoints do not match")
        return AlgebraHom(inner.source, self.target, [self.apply(f) for f in inner.images])

    def __repr__(self):
        pairs = ", ".join(
            f"{n} -> {img}" for n, img in zip(self.source.ring.names, self.images)
        )
        return f"Hom({pairs})"


def check_hom(h: AlgebraHom) -> bool:
    """True iff every source relation maps into the target relation ideal."""
    ok = all(h.apply(g).is_zero() for g in h.source.relations.gens)
    h._well_defined = ok
    return ok


def maps_equal(h1: AlgebraHom, h2: AlgebraHom) -> bool:
    """Equality of maps with fixed endpoints, variable by variable."""
    if h1.source.ring != h2.source.ring or h1.target.ring != h2.target.ring:
        raise InputError("maps_equal needs matching endpoints")
    return all(h1.target.nf(a - b).is_zero() for a, b in zip(h1.images, h2.images))


def hom_kernel(h: AlgebraHom) -> IdealHandle:
    """Kernel ideal of h in the source ambient ring (contains the source
    relations), computed by eliminating the target block of the graph
    ideal."""
    src, tgt = h.source.ring, h.target.ring
    rename = {}
    taken = set(src.names)
    for n in tgt.names:
        cand = n
        k = 0
        while cand in taken:
            k += 1
            cand = f"_im{k}_{n}"
        rename[n] = cand
        taken.add(cand)
    combined = PolyRing(src.field, tuple(rename[n] for n in tgt.names) + src.names)
    tgt_alias = PolyRing(tgt.field, tuple(rename[n] for n in tgt.names), tgt.order)

    def to_combined(f: Polynomial, from_tgt: bool) -> Polynomial:
        if from_tgt:
            return Polynomial(tgt_alias, dict(f.terms)).map_ring(combined)
        return f.map_ring(combined)

    gens = [to_combined(g, True) for g in h.target.relations.gens]
    for name, img in zip(src.names, h.images):
        gens.append(combined.var(name) - to_combined(img, True))
    graph = IdealHandle(combined, gens, h.source.relations.limits)
    elim = eliminate(graph, [rename[n] for n in tgt.names])
    kept = [g.map_ring(src) for g in elim.gens]
    return IdealHandle(src, kept, h.source.relations.limits)


def is_nzd(a: PresentedAlgebra, f: Polynomial) -> bool:
    """Non-zero-divisor test: (P : f) = P on reduced representatives."""
    if a.is_zero_ring():
        return True
    g = a.nf(f)
    if g.is_zero():
        return False
    return colon(a.relations, g, saturate=False).equals(a.relations)
