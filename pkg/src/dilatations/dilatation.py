"""Multi-centered dilatations of finitely presented algebras.

`dilate` builds A[{M_i/a_i}] as an explicit presentation: one fresh
variable x_i_j per stored generator g_ij of M_i, the relations
a_i*x_ij - g_ij, and a saturation by the product of the a_i that removes
the denominator torsion.  Every structural identity the construction is
supposed to satisfy has a verifier here that certifies it with explicit
maps in both directions; a verifier never reports success on a one-sided
check.
"""

from __future__ import annotations

from .algebras import AlgebraHom, PresentedAlgebra, check_hom, hom_kernel, is_nzd, maps_equal
from .groebner import ideal_cofactors
from .ideals import IdealHandle, colon
from .poly import GREVLEX, InputError, PolyRing, Polynomial
from .report import Report, VerificationFinding


class Center:
    """One pair [M, a]: stored generators of M (kept verbatim) and a."""

    __slots__ = ("ideal", "elem")

    def __init__(self, ideal: IdealHandle, elem: Polynomial):
        if ideal.ring != elem.ring:
            raise InputError("center ideal and element over different registries")
        self.ideal = ideal
        self.elem = elem

    def __repr__(self):
        return f"[({', '.join(str(g) for g in self.ideal.gens)}) / {self.elem}]"


class MultiCenter:
    __slots__ = ("algebra", "centers")

    def __init__(self, algebra: PresentedAlgebra, centers):
        centers = list(centers)
        for c in centers:
            if c.ideal.ring != algebra.ring:
                raise InputError("center over a different registry")
        self.algebra = algebra
        self.centers = centers

    def __len__(self):
        return len(self.centers)

    def l_ideal(self, i: int) -> IdealHandle:
        """Derived L_i = M_i + (a_i), as an ideal of the quotient."""
        c = self.centers[i]
        return self.algebra.ideal(c.ideal.gens + [c.elem])

    def product_elem(self) -> Polynomial:
        f = self.algebra.ring.one()
        for c in self.centers:
            f = f * c.elem
        return f

    def sub(self, indices) -> "MultiCenter":
        """Sub-multi-center for 1-based positions `indices` (order kept)."""
        return MultiCenter(self.algebra, [self.centers[i - 1] for i in indices])

    def __repr__(self):
        return f"MultiCenter({self.algebra!r}; {', '.join(map(repr, self.centers))})"


class DilatationResult:
    """Presentation of A' = A[{M_i/a_i}] plus the structural map.

    fraction_vars[i][j] is the name of the variable representing
    g_ij / a_i (0-based lists, 1-based names x_<i>_<j>).
    """

    __slots__ = (
        "center",
        "algebra",
        "iota",
        "fraction_vars",
        "presaturation",
        "saturation_changed",
    )

    def __init__(self, center, algebra, iota, fraction_vars, presaturation, saturation_changed):
        self.center = center
        self.algebra = algebra
        self.iota = iota
        self.fraction_vars = fraction_vars
        self.presaturation = presaturation
        self.saturation_changed = saturation_changed

    @property
    def base(self) -> PresentedAlgebra:
        return self.center.algebra

    def is_zero_ring(self) -> bool:
        return self.algebra.is_zero_ring()

    def var_dict(self) -> dict:
        """fraction variable name -> (center position, generator position),
        both 1-based."""
        out = {}
        for i, row in enumerate(self.fraction_vars):
            for j, name in enumerate(row):
                out[name] = (i + 1, j + 1)
        return out

    def push(self, f: Polynomial) -> Polynomial:
        """Transport a base-ring element along iota (no reduction)."""
        return f.map_ring(self.algebra.ring)

    def fraction(self, pos: int, m: Polynomial, in_l: bool = False) -> Polynomial:
        """The element m / a_pos of A' (pos 1-based).

        Requires m in M_pos (or in L_pos when in_l is set); the expression
        is extracted by cofactor-tracked division over the stored
        generator list, so it lands in the span of the fraction variables.
        """
        c = self.center.centers[pos - 1]
        gens = list(c.ideal.gens)
        if in_l:
            gens.append(c.elem)
        gens_all = gens + self.base.relations.gens
        cof = ideal_cofactors(m, gens_all)
        if cof is None:
            raise InputError(f"element {m} is not in the center ideal at position {pos}")
        ring = self.algebra.ring
        out = ring.zero()
        n_m = len(c.ideal.gens)
        for j in range(n_m):
            if not cof[j].is_zero():
                out = out + cof[j].map_ring(ring) * ring.var(self.fraction_vars[pos - 1][j])
        if in_l and not cof[n_m].is_zero():
            out = out + cof[n_m].map_ring(ring)  # a_i / a_i = 1
        return self.algebra.nf(out)


def _fresh_fraction_names(ring: PolyRing, centers) -> list[list[str]]:
    taken = set(ring.names)
    rows = []
    for i, c in enumerate(centers, start=1):
        row = []
        for j in range(1, len(c.ideal.gens) + 1):
            stem = f"x_{i}_{j}"
            name = stem
            k = 1
            while name in taken:
                k += 1
                name = f"{stem}_{k}"
            taken.add(name)
            row.append(name)
        rows.append(row)
    return rows


def dilate(center: MultiCenter) -> DilatationResult:
    """Build the dilatation presentation (Groebner route).

    The relation ideal is saturate(P + (a_i*x_ij - g_ij), f) with
    f = prod a_i; when f is nilpotent modulo P the result is the zero
    ring, and that equivalence is asserted on every run.
    """
    a = center.algebra
    if not center.centers:
        return DilatationResult(center, a, AlgebraHom.identity(a), [], a.relations, False)

    names = _fresh_fraction_names(a.ring, center.centers)
    ext = PolyRing(a.ring.field, a.ring.names + tuple(n for row in names for n in row), GREVLEX)

    rels = [p.map_ring(ext) for p in a.relations.gens]
    for i, c in enumerate(center.centers):
        ai = c.elem.map_ring(ext)
        for j, g in enumerate(c.ideal.gens):
            rels.append(ai * ext.var(names[i][j]) - g.map_ring(ext))
    presat = IdealHandle(ext, rels, a.relations.limits)

    f = center.product_elem()
    nilpotent = a.relations.radical_contains(f)
    if f.is_zero():
        # inverting 0 collapses everything; colon by 0 is undefined
        sat = IdealHandle(ext, [ext.one()], a.relations.limits)
    else:
        sat = colon(presat, f.map_ring(ext), saturate=True)
    if sat.is_unit() != nilpotent:
        raise VerificationFinding(
            "zero-ring criterion mismatch: saturation says "
            f"{sat.is_unit()} but nilpotency of {f} says {nilpotent}"
        )

    prime = PresentedAlgebra(ext, sat)
    iota = AlgebraHom(a, prime, [ext.var(n) for n in a.ring.names])
    if not check_hom(iota):
        raise VerificationFinding("structural map failed well-definedness")
    changed = not sat.equals(presat)
    return DilatationResult(center, prime, iota, names, presat, changed)


# ---------------------------------------------------------------------------
# center normalization


def _power_of(a: PresentedAlgebra, f: Polynomial, base: Polynomial, cap: int = 32):
    """Smallest d >= 1 with f == base^d in a, or None."""
    if a.nf(base).is_constant():
        return None
    acc = a.ring.one()
    for d in range(1, cap + 1):
        acc = a.nf(acc * base)
        if a.eq(f, acc):
            return d
    return None


def normalize_center(center: MultiCenter, declared_base: Polynomial | None = None) -> MultiCenter:
    """Canonical form of a multi-center, preserving the dilatation.

    Centers sharing one denominator are merged by summing their stored
    ideals; families over a common base element b with denominators b^d
    and equal ideals collapse to the maximal exponent.  Stored generator
    lists are kept verbatim (deduplicated), and the output is sorted by
    the printed denominator, then the printed reduced basis.
    """
    a = center.algebra
    # merge identical denominators
    by_elem: list[tuple[Polynomial, list[Polynomial]]] = []
    for c in center.centers:
        ae = a.nf(c.elem)
        for k, (e, gens) in enumerate(by_elem):
            if a.eq(e, ae):
                by_elem[k] = (e, gens + [g for g in c.ideal.gens if g not in gens])
                break
        else:
            by_elem.append((ae, list(dict.fromkeys(c.ideal.gens))))

    # collapse power families with equal ideals over a common base
    groups: list[list[tuple[Polynomial, list[Polynomial]]]] = []
    handles = [a.ideal(gens) for _, gens in by_elem]
    used = [False] * len(by_elem)
    for i in range(len(by_elem)):
        if used[i]:
            continue
        group = [by_elem[i]]
        used[i] = True
        for j in range(i + 1, len(by_elem)):
            if not used[j] and handles[i].equals(handles[j]):
                group.append(by_elem[j])
                used[j] = True
        groups.append(group)

    result: list[Center] = []
    for group in groups:
        if len(group) == 1:
            e, gens = group[0]
            result.append(Center(IdealHandle(a.ring, gens, a.relations.limits), e))
            continue
        candidates = [declared_base] if declared_base is not None else [e for e, _ in group]
        collapsed = False
        for b in candidates:
            if b is None:
                continue
            exps = [_power_of(a, e, b) for e, _ in group]
            if all(d is not None for d in exps):
                keep = max(range(len(group)), key=lambda k: exps[k])
                e, gens = group[keep]
                merged = []
                for _, gs in group:
                    merged += [g for g in gs if g not in merged]
                result.append(Center(IdealHandle(a.ring, merged, a.relations.limits), e))
                collapsed = True
                break
        if not collapsed:
            for e, gens in group:
                result.append(Center(IdealHandle(a.ring, gens, a.relations.limits), e))

    result.sort(key=lambda c: (str(c.elem), str([str(g) for g in c.ideal.groebner()])))
    return MultiCenter(a, result)


# ---------------------------------------------------------------------------
# verifiers


def check_exceptional(result: DilatationResult, extra_nzd=()) -> Report:
    """Exceptional identities in A': a_i*A' = L_i*A', each a_i a
    non-zero-divisor, and images of declared non-zero-divisors stay
    non-zero-divisors."""
    rep = Report("exceptional")
    if result.is_zero_ring():
        rep.add("nonzero", False, "dilatation is the zero ring")
        return rep
    prime = result.algebra
    for i, c in enumerate(result.center.centers, start=1):
        ai = result.push(c.elem)
        lhs = prime.ideal([ai])
        rhs = prime.ideal([result.push(g) for g in c.ideal.gens] + [ai])
        rep.add(
            f"divisor_ideal_{i}",
            lhs.equals(rhs),
            f"(a_{i})A' vs L_{i}A': {[str(g) for g in lhs.groebner()]} vs {[str(g) for g in rhs.groebner()]}",
        )
        rep.add(f"divisor_nzd_{i}", is_nzd(prime, ai), f"a_{i} = {c.elem}")
    for c in extra_nzd:
        if not is_nzd(result.base, c):
            rep.add("declared_nzd_precondition", False, f"{c} is not a non-zero-divisor in the base")
            continue
        rep.add("declared_nzd_image", is_nzd(prime, result.push(c)), str(c))
    return rep


def _certify_pair(rep: Report, fwd: AlgebraHom, bwd: AlgebraHom, tag: str = "") -> None:
    """check_hom both ways and both composites equal to the identity."""
    p = tag + "_" if tag else ""
    okf = check_hom(fwd)
    okb = check_hom(bwd)
    rep.add(p + "forward_defined", okf)
    rep.add(p + "backward_defined", okb)
    if not (okf and okb):
        return
    idt = AlgebraHom.identity(fwd.target)
    ids = AlgebraHom.identity(fwd.source)
    rep.add(p + "fwd_bwd_identity", maps_equal(fwd.compose(bwd), idt))
    rep.add(p + "bwd_fwd_identity", maps_equal(bwd.compose(fwd), ids))


def forget_map(result_full: DilatationResult, keep) -> tuple[AlgebraHom, Report]:
    """Canonical map A[{M_i/a_i}_K] -> A[{M_i/a_i}_I] for K given as
    1-based positions, with surjectivity/injectivity certificates."""
    keep = sorted(set(keep))
    center = result_full.center
    if any(i < 1 or i > len(center.centers) for i in keep):
        raise InputError("forget indices out of range")
    rep = Report("forget")
    sub = dilate(center.sub(keep))
    dropped = [i for i in range(1, len(center.centers) + 1) if i not in keep]

    ring_i = result_full.algebra.ring
    # build by source variable order: base names then sub fraction names
    images = []
    src_names = sub.algebra.ring.names
    lookup = {}
    for p, i in enumerate(keep):
        for j, name_k in enumerate(sub.fraction_vars[p]):
            lookup[name_k] = result_full.fraction_vars[i - 1][j]
    for n in src_names:
        images.append(ring_i.var(lookup.get(n, n)))
    phi = AlgebraHom(sub.algebra, result_full.algebra, images)
    rep.add("well_defined", check_hom(phi))

    a = center.algebra
    surj_hyp = True
    witnesses_ok = True
    for i in dropped:
        c = center.centers[i - 1]
        target = a.ideal([c.elem])
        for j, g in enumerate(c.ideal.gens):
            if not target.contains(g):
                surj_hyp = False
                break
        if not surj_hyp:
            break
    rep.add("surjectivity_hypothesis", surj_hyp, "M_i ⊄ (a_i) for some dropped i")
    if surj_hyp:
        for i in dropped:
            c = center.centers[i - 1]
            cof_gens = [c.elem] + a.relations.gens
            for j, g in enumerate(c.ideal.gens):
                cof = ideal_cofactors(g, cof_gens)
                w = cof[0].map_ring(ring_i)
                xvar = ring_i.var(result_full.fraction_vars[i - 1][j])
                if not result_full.algebra.nf(xvar - w).is_zero():
                    witnesses_ok = False
        rep.add("surjectivity_witnesses", witnesses_ok)

    inj_hyp = all(is_nzd(a, center.centers[i - 1].elem) for i in dropped)
    rep.add("injectivity_hypothesis", inj_hyp, "a_i is a zero divisor for some dropped i")
    kernel = hom_kernel(phi)
    kernel_trivial = kernel.equals(sub.algebra.relations)
    rep.add("kernel_trivial", kernel_trivial)
    return phi, rep


def monopoly_iso(center: MultiCenter) -> tuple[MultiCenter, tuple[AlgebraHom, AlgebraHom], Report]:
    """Reduce a finite multi-center to the single center
    [sum_i M_i * prod_{j!=i} a_j / prod_i a_i] and certify the canonical
    isomorphism by explicit maps both ways."""
    if not center.centers:
        raise InputError("monopoly needs at least one center")
    a = center.algebra
    rep = Report("monopoly")

    mono_gens = []
    tags = []  # (center pos, gen pos) per mono generator
    for i, c in enumerate(center.centers, start=1):
        cofactor = a.ring.one()
        for l, other in enumerate(center.centers, start=1):
            if l != i:
                cofactor = cofactor * other.elem
        for j, g in enumerate(c.ideal.gens, start=1):
            mono_gens.append(g * cofactor)
            tags.append((i, j))
    mono = MultiCenter(a, [Center(IdealHandle(a.ring, mono_gens, a.relations.limits), center.product_elem())])

    r_multi = dilate(center)
    r_mono = dilate(mono)

    ring_multi = r_multi.algebra.ring
    ring_mono = r_mono.algebra.ring

    fwd_images = [ring_multi.var(n) for n in a.ring.names]
    for m, (i, j) in enumerate(tags):
        fwd_images.append(ring_multi.var(r_multi.fraction_vars[i - 1][j - 1]))
    fwd = AlgebraHom(r_mono.algebra, r_multi.algebra, fwd_images)

    back = {}
    for m, (i, j) in enumerate(tags):
        back[(i, j)] = r_mono.fraction_vars[0][m]
    bwd_images = [ring_mono.var(n) for n in a.ring.names]
    for i, row in enumerate(r_multi.fraction_vars, start=1):
        for j, _ in enumerate(row, start=1):
            bwd_images.append(ring_mono.var(back[(i, j)]))
    bwd = AlgebraHom(r_multi.algebra, r_mono.algebra, bwd_images)

    _certify_pair(rep, fwd, bwd)
    return mono, (fwd, bwd), rep


def two_stage_iso(center: MultiCenter, keep) -> tuple[tuple[AlgebraHom, AlgebraHom], Report]:
    """Dilate by the K-part, push the remaining centers into the result,
    dilate again, and certify agreement with the one-shot dilatation."""
    keep = sorted(set(keep))
    if any(i < 1 or i > len(center.centers) for i in keep):
        raise InputError("two-stage indices out of range")
    rest = [i for i in range(1, len(center.centers) + 1) if i not in keep]
    rep = Report("two_stage")

    stage1 = dilate(center.sub(keep))
    b1 = stage1.algebra
    pushed = []
    for i in rest:
        c = center.centers[i - 1]
        gens = [g.map_ring(b1.ring) for g in c.ideal.gens]
        pushed.append(Center(IdealHandle(b1.ring, gens, b1.relations.limits), c.elem.map_ring(b1.ring)))
    stage2 = dilate(MultiCenter(b1, pushed))
    b2 = stage2.algebra

    oneshot = dilate(center)
    ring_i = oneshot.algebra.ring
    ring_2 = b2.ring

    # b2 variable -> one-shot variable
    to_one = {}
    for p, i in enumerate(keep):
        for j, name in enumerate(stage1.fraction_vars[p]):
            to_one[name] = oneshot.fraction_vars[i - 1][j]
    for q, i in enumerate(rest):
        for j, name in enumerate(stage2.fraction_vars[q]):
            to_one[name] = oneshot.fraction_vars[i - 1][j]
    fwd = AlgebraHom(b2, oneshot.algebra, [ring_i.var(to_one.get(n, n)) for n in ring_2.names])

    to_two = {v: k for k, v in to_one.items()}
    bwd = AlgebraHom(oneshot.algebra, b2, [ring_2.var(to_two.get(n, n)) for n in ring_i.names])

    _certify_pair(rep, fwd, bwd)
    return (fwd, bwd), rep


def localize_compare(center: MultiCenter) -> Report:
    """Localization comparisons: the pure-localization presentation when
    every M_i is the unit ideal, and A'[1/f] = A[1/f] in general."""
    a = center.algebra
    rep = Report("localize")
    result = dilate(center)
    f = center.product_elem()

    all_unit = all(a.ideal(c.ideal.gens).is_unit() for c in center.centers)
    if all_unit:
        zname = a.ring.fresh_name("z")
        locring = a.ring.extend([zname])
        loc = PresentedAlgebra(
            locring,
            IdealHandle(
                locring,
                [p.map_ring(locring) for p in a.relations.gens]
                + [locring.var(zname) * f.map_ring(locring) - locring.one()],
                a.relations.limits,
            ),
        )
        prime_ring = result.algebra.ring
        fwd_images = []
        z = locring.var(zname)
        vd = result.var_dict()
        for n in prime_ring.names:
            if n in vd:
                i, j = vd[n]
                g = center.centers[i - 1].ideal.gens[j - 1]
                cof = a.ring.one()
                for l, other in enumerate(center.centers, start=1):
                    if l != i:
                        cof = cof * other.elem
                fwd_images.append(g.map_ring(locring) * z * cof.map_ring(locring))
            else:
                fwd_images.append(locring.var(n))
        fwd = AlgebraHom(result.algebra, loc, fwd_images)
        inv = result.algebra.one()
        for i in range(1, len(center.centers) + 1):
            inv = inv * result.fraction(i, a.ring.one())
        bwd_images = [prime_ring.var(n) for n in a.ring.names] + [inv]
        bwd = AlgebraHom(loc, result.algebra, bwd_images)
        _certify_pair(rep, fwd, bwd, tag="unit_centers")

    # general comparison after inverting f on both sides
    zname = a.ring.fresh_name("z")
    aring = a.ring.extend([zname])
    a_f = PresentedAlgebra(
        aring,
        IdealHandle(
            aring,
            [p.map_ring(aring) for p in a.relations.gens]
            + [aring.var(zname) * f.map_ring(aring) - aring.one()],
            a.relations.limits,
        ),
    )
    wname = result.algebra.ring.fresh_name("z")
    pring = result.algebra.ring.extend([wname])
    prime_f = PresentedAlgebra(
        pring,
        IdealHandle(
            pring,
            [p.map_ring(pring) for p in result.algebra.relations.gens]
            + [pring.var(wname) * f.map_ring(pring) - pring.one()],
            result.algebra.relations.limits,
        ),
    )
    fwd = AlgebraHom(a_f, prime_f, [pring.var(n) for n in a.ring.names] + [pring.var(wname)])
    vd = result.var_dict()
    bwd_images = []
    for n in pring.names:
        if n == wname:
            bwd_images.append(aring.var(zname))
        elif n in vd:
            i, j = vd[n]
            g = center.centers[i - 1].ideal.gens[j - 1]
            cof = a.ring.one()
            for l, other in enumerate(center.centers, start=1):
                if l != i:
                    cof = cof * other.elem
            bwd_images.append(g.map_ring(aring) * aring.var(zname) * cof.map_ring(aring))
        else:
            bwd_images.append(aring.var(n))
    bwd = AlgebraHom(prime_f, a_f, bwd_images)
    _certify_pair(rep, fwd, bwd, tag="localized")
    return rep


def open_immersion_iso(center: MultiCenter, keep, assign) -> Report:
    """A[{M_i/a_i}_I] as a localization of the K-dilatation, under the
    hypotheses a_k(i) in L_i and L_i ⊆ L_k(i); hypothesis violations are
    reported before any construction."""
    keep = sorted(set(keep))
    rest = [i for i in range(1, len(center.centers) + 1) if i not in keep]
    rep = Report("open_immersion")
    a = center.algebra

    for i in rest:
        k = assign.get(i)
        if k not in keep:
            rep.add("assignment_valid", False, f"k({i}) = {k} not in K")
            return rep
    rep.add("assignment_valid", True)

    for i in rest:
        k = assign[i]
        li = center.l_ideal(i - 1)
        lk = center.l_ideal(k - 1)
        if not rep.add(f"hyp_a_in_L_{i}", li.contains(center.centers[k - 1].elem), f"a_{k} ∉ L_{i}"):
            return rep
        if not rep.add(f"hyp_L_contained_{i}", lk.contains_ideal(li), f"L_{i} ⊄ L_{k}"):
            return rep

    full = dilate(center)
    part = dilate(center.sub(keep))
    pos_in_keep = {i: p + 1 for p, i in enumerate(keep)}

    fracs = {}
    for i in rest:
        k = assign[i]
        fracs[i] = part.fraction(pos_in_keep[k], center.centers[i - 1].elem, in_l=True)

    zname = part.algebra.ring.fresh_name("z")
    lring = part.algebra.ring.extend([zname])
    prod = lring.one()
    for i in rest:
        prod = prod * fracs[i].map_ring(lring)
    loc = PresentedAlgebra(
        lring,
        IdealHandle(
            lring,
            [p.map_ring(lring) for p in part.algebra.relations.gens]
            + [lring.var(zname) * prod - lring.one()],
            part.algebra.relations.limits,
        ),
    )

    # forward: full dilatation -> localized K-dilatation
    vd = full.var_dict()
    fwd_images = []
    for n in full.algebra.ring.names:
        if n in vd:
            i, j = vd[n]
            if i in pos_in_keep:
                fwd_images.append(lring.var(part.fraction_vars[pos_in_keep[i] - 1][j - 1]))
            else:
                k = assign[i]
                g = center.centers[i - 1].ideal.gens[j - 1]
                num = part.fraction(pos_in_keep[k], g, in_l=True).map_ring(lring)
                inv_rest = lring.var(zname)
                for l in rest:
                    if l != i:
                        inv_rest = inv_rest * fracs[l].map_ring(lring)
                fwd_images.append(num * inv_rest)
        else:
            fwd_images.append(lring.var(n))
    fwd = AlgebraHom(full.algebra, loc, fwd_images)

    # backward: localized K-dilatation -> full dilatation
    bwd_images = []
    fring = full.algebra.ring
    for n in lring.names:
        if n == zname:
            img = full.algebra.one()
            for i in rest:
                img = img * full.fraction(i, center.centers[assign[i] - 1].elem, in_l=True)
            bwd_images.append(img)
        elif n in part.var_dict():
            p, j = part.var_dict()[n]
            bwd_images.append(fring.var(full.fraction_vars[keep[p - 1] - 1][j - 1]))
        else:
            bwd_images.append(fring.var(n))
    bwd = AlgebraHom(loc, full.algebra, bwd_images)
    _certify_pair(rep, fwd, bwd)
    return rep


def detect_common_base(center: MultiCenter):
    """(base, exponents) for a single-divisor-shaped center, else None."""
    a = center.algebra
    candidates = sorted({str(c.elem): c.elem for c in center.centers}.items(), key=lambda kv: (kv[1].degree(), kv[0]))
    for _, b in candidates:
        exps = []
        for c in center.centers:
            if a.eq(c.elem, b):
                exps.append(1)
                continue
            d = _power_of(a, c.elem, b)
            if d is None:
                exps = None
                break
            exps.append(d)
        if exps is not None:
            return b, exps
    return None


def center_kernel(result: DilatationResult, extra_report: bool = True) -> tuple[IdealHandle, Report]:
    """Kernel of A' -> A/M_0 computed two ways (fraction-variable ideal vs
    graph elimination) and certified equal.  Requires the single-divisor
    shape and the base to be a non-zero-divisor modulo M_0."""
    rep = Report("center_kernel")
    center = result.center
    a = center.algebra
    det = detect_common_base(center)
    if det is None:
        rep.add("single_divisor_shape", False, "denominators are not powers of one element")
        return a.ideal([]), rep
    rep.add("single_divisor_shape", True)
    base, exps = det

    m0 = center.centers[0].ideal
    quot = a.quotient(m0.gens)
    if not rep.add("base_nzd_mod_M0", is_nzd(quot, base), f"{base} is a zero divisor mod M_0"):
        return a.ideal([]), rep
    nested = all(a.ideal(m0.gens).contains_ideal(a.ideal(c.ideal.gens, include_relations=False)) for c in center.centers[1:])
    if not rep.add("nested_centers", nested, "M_i ⊄ M_0 for some i"):
        return a.ideal([]), rep

    prime = result.algebra
    ring = prime.ring
    alpha_gens = [ring.var(n) for row in result.fraction_vars for n in row]
    alpha_gens += [result.push(g) for g in m0.gens]
    alpha_full = prime.ideal(alpha_gens)

    vd = result.var_dict()
    images = []
    for n in ring.names:
        if n in vd:
            images.append(quot.ring.zero())
        else:
            images.append(quot.ring.var(n))
    phi = AlgebraHom(prime, quot, images)
    rep.add("quotient_map_defined", check_hom(phi))
    beta = hom_kernel(phi)
    rep.add("kernels_agree", alpha_full.equals(beta))
    return IdealHandle(ring, alpha_gens, prime.relations.limits), rep


def iterate_iso(
    algebra: PresentedAlgebra,
    base: Polynomial,
    centers: list,
    exponents: list[int],
    t: int,
) -> Report:
    """Bl^t_{Y_0}(Bl^{s})  =  Bl^{s+t} for nested single-divisor centers:
    dilate, take the center kernel, dilate once more by base^t, and
    certify against the direct dilatation at exponents s_i + t."""
    rep = Report("iterate")
    if not centers:
        raise InputError("iterate needs at least one center")
    s0 = exponents[0]
    if not rep.add("t_range", 0 <= t <= s0, f"t = {t} outside [0, {s0}]"):
        return rep

    mk = [
        Center(IdealHandle(algebra.ring, list(gens), algebra.relations.limits), base ** e)
        for gens, e in zip(centers, exponents)
    ]
    first = dilate(MultiCenter(algebra, mk))
    kernel, krep = center_kernel(first)
    rep.merge(krep, prefix="kernel.")
    if not krep.ok:
        return rep

    b1 = first.algebra
    qcenter = Center(
        IdealHandle(b1.ring, kernel.gens, b1.relations.limits), first.push(base) ** t
    )
    second = dilate(MultiCenter(b1, [qcenter]))
    b2 = second.algebra

    direct = dilate(
        MultiCenter(
            algebra,
            [
                Center(IdealHandle(algebra.ring, list(gens), algebra.relations.limits), base ** (e + t))
                for gens, e in zip(centers, exponents)
            ],
        )
    )
    dring = direct.algebra.ring

    n_frac = sum(len(row) for row in first.fraction_vars)
    frac_names = [n for row in first.fraction_vars for n in row]
    vd1 = first.var_dict()

    at = base.map_ring(dring) ** t
    fwd_images = []
    for n in b2.ring.names:
        if n in vd1:
            i, j = vd1[n]
            fwd_images.append(at * dring.var(direct.fraction_vars[i - 1][j - 1]))
        elif n in second.var_dict():
            _, m = second.var_dict()[n]
            if m <= n_frac:
                i, j = vd1[frac_names[m - 1]]
                fwd_images.append(dring.var(direct.fraction_vars[i - 1][j - 1]))
            else:
                j = m - n_frac
                fwd_images.append(base.map_ring(dring) ** exponents[0] * dring.var(direct.fraction_vars[0][j - 1]))
        else:
            fwd_images.append(dring.var(n))
    fwd = AlgebraHom(b2, direct.algebra, fwd_images)

    u_for_frac = {}
    for name, (pos, m) in second.var_dict().items():
        if m <= n_frac:
            u_for_frac[frac_names[m - 1]] = name
    bwd_images = []
    for n in dring.names:
        if n in direct.var_dict():
            i, j = direct.var_dict()[n]
            bwd_images.append(b2.ring.var(u_for_frac[first.fraction_vars[i - 1][j - 1]]))
        else:
            bwd_images.append(b2.ring.var(n))
    bwd = AlgebraHom(direct.algebra, b2, bwd_images)

    _certify_pair(rep, fwd, bwd)
    return rep


def base_change_compare(center: MultiCenter, h: AlgebraHom) -> Report:
    """B ⊗_A A' modulo denominator torsion against the direct dilatation
    of the pushed center; for variable extensions the torsion is certified
    to vanish (flat case)."""
    rep = Report("base_change")
    if not rep.add("hom_defined", check_hom(h), "base-change map is not well-defined"):
        return rep
    a = center.algebra
    b = h.target

    pushed = MultiCenter(
        b,
        [
            Center(
                IdealHandle(b.ring, [h.apply(g) for g in c.ideal.gens], b.relations.limits),
                h.apply(c.elem),
            )
            for c in center.centers
        ],
    )
    direct = dilate(pushed)
    source = dilate(center)

    t_ring = direct.algebra.ring
    xmap = {}
    for row_a, row_b in zip(source.fraction_vars, direct.fraction_vars):
        for na, nb in zip(row_a, row_b):
            xmap[na] = nb
    subst = {}
    for n, img in zip(a.ring.names, h.images):
        subst[n] = img.map_ring(t_ring)
    for na, nb in xmap.items():
        subst[na] = t_ring.var(nb)

    tensor_gens = [p.map_ring(t_ring) for p in b.relations.gens]
    for g in source.algebra.relations.gens:
        tensor_gens.append(g.subst(subst))
    tensor = IdealHandle(t_ring, tensor_gens, b.relations.limits)

    fb = pushed.product_elem().map_ring(t_ring)
    nilpotent = b.relations.radical_contains(pushed.product_elem())
    if nilpotent:
        t_sat = IdealHandle(t_ring, [t_ring.one()], b.relations.limits)
    else:
        t_sat = colon(tensor, fb, saturate=True)
    rep.add("tensor_matches_direct", t_sat.equals(direct.algebra.relations))

    flat_ext = (
        set(a.ring.names) <= set(b.ring.names)
        and all(img == b.ring.var(n) for n, img in zip(a.ring.names, h.images))
        and [str(g) for g in b.relations.groebner()]
        == [str(g.map_ring(b.ring)) for g in a.relations.groebner()]
    )
    if flat_ext:
        rep.add("flat_no_torsion", t_sat.equals(tensor), "saturation changed the tensor ideal")
    return rep


def conic_iso(center: MultiCenter) -> Report:
    """Conic-algebra route: present the conic algebra as a kernel, quotient
    by (rho_i - 1), and certify the identification with the dilatation."""
    rep = Report("conic")
    a = center.algebra
    for i, c in enumerate(center.centers, start=1):
        if not rep.add(f"nzd_precondition_{i}", is_nzd(a, c.elem), f"a_{i} is a zero divisor"):
            return rep

    k = len(center.centers)
    if k == 0:
        rep.add("empty_center", True)
        return rep

    # ambient polynomial extension A[t_1..t_k]
    tnames = []
    taken = set(a.ring.names)
    for i in range(1, k + 1):
        n = f"t_{i}"
        while n in taken:
            n = "_" + n
        taken.add(n)
        tnames.append(n)
    tring = a.ring.extend(tnames)
    at = PresentedAlgebra(tring, IdealHandle(tring, [p.map_ring(tring) for p in a.relations.gens], a.relations.limits))

    unames = []
    rows = []
    for i, c in enumerate(center.centers, start=1):
        row = []
        for j in range(1, len(c.ideal.gens) + 2):
            n = f"u_{i}_{j}"
            while n in taken:
                n = "_" + n
            taken.add(n)
            row.append(n)
        rows.append(row)
        unames += row
    uring = a.ring.extend(unames)
    src = PresentedAlgebra(uring, IdealHandle(uring, [p.map_ring(uring) for p in a.relations.gens], a.relations.limits))

    images = [tring.var(n) for n in a.ring.names]
    for i, c in enumerate(center.centers):
        lgens = list(c.ideal.gens) + [c.elem]
        ti = tring.var(tnames[i])
        for g in lgens:
            images.append(g.map_ring(tring) * ti)
    phi = AlgebraHom(src, at, images)
    rep.add("grading_map_defined", check_hom(phi))
    kernel = hom_kernel(phi)
    conic = PresentedAlgebra(uring, kernel)

    rhos = [uring.var(rows[i][-1]) for i in range(k)]
    quot = conic.quotient([r - uring.one() for r in rhos])

    lcenter = MultiCenter(
        a,
        [
            Center(IdealHandle(a.ring, list(c.ideal.gens) + [c.elem], a.relations.limits), c.elem)
            for c in center.centers
        ],
    )
    r_l = dilate(lcenter)
    lring = r_l.algebra.ring

    fwd_images = []
    udict = {}
    for i, row in enumerate(rows, start=1):
        for j, n in enumerate(row, start=1):
            udict[n] = (i, j)
    for n in uring.names:
        if n in udict:
            i, j = udict[n]
            fwd_images.append(lring.var(r_l.fraction_vars[i - 1][j - 1]))
        else:
            fwd_images.append(lring.var(n))
    fwd = AlgebraHom(quot, r_l.algebra, fwd_images)
    bwd_images = []
    for n in lring.names:
        vd = r_l.var_dict()
        if n in vd:
            i, j = vd[n]
            bwd_images.append(uring.var(rows[i - 1][j - 1]))
        else:
            bwd_images.append(uring.var(n))
    bwd = AlgebraHom(r_l.algebra, quot, bwd_images)
    _certify_pair(rep, fwd, bwd, tag="conic_vs_L")

    r_m = dilate(center)
    mring = r_m.algebra.ring
    e_images = []
    for n in lring.names:
        vd = r_l.var_dict()
        if n in vd:
            i, j = vd[n]
            if j <= len(center.centers[i - 1].ideal.gens):
                e_images.append(mring.var(r_m.fraction_vars[i - 1][j - 1]))
            else:
                e_images.append(mring.one())
        else:
            e_images.append(mring.var(n))
    eps = AlgebraHom(r_l.algebra, r_m.algebra, e_images)
    z_images = []
    for n in mring.names:
        vd = r_m.var_dict()
        if n in vd:
            i, j = vd[n]
            z_images.append(lring.var(r_l.fraction_vars[i - 1][j - 1]))
        else:
            z_images.append(lring.var(n))
    zeta = AlgebraHom(r_m.algebra, r_l.algebra, z_images)
    _certify_pair(rep, eps, zeta, tag="L_vs_M")
    return rep


class FactorResult:
    __slots__ = ("hom", "refused", "reason", "report")

    def __init__(self, hom, refused, reason, report):
        self.hom = hom
        self.refused = refused
        self.reason = reason
        self.report = report


def universal_factor(center: MultiCenter, chi: AlgebraHom) -> FactorResult:
    """Factor chi: A -> B through the dilatation when the representability
    conditions hold (chi(a_i) a non-zero-divisor, chi(M_i)B ⊆ chi(a_i)B);
    refuse with the violated condition otherwise."""
    rep = Report("universal")
    if not check_hom(chi):
        return FactorResult(None, True, "chi is not well-defined", rep)
    a = center.algebra
    b = chi.target

    for i, c in enumerate(center.centers, start=1):
        bi = chi.apply(c.elem)
        if not is_nzd(b, bi):
            rep.add(f"nzd_{i}", False, f"chi(a_{i}) is a zero divisor")
            return FactorResult(None, True, f"chi(a_{i}) is a zero divisor in B", rep)
        rep.add(f"nzd_{i}", True)
        target = b.ideal([bi])
        for j, g in enumerate(c.ideal.gens, start=1):
            if not target.contains(chi.apply(g)):
                rep.add(f"containment_{i}", False, f"chi(M_{i})B ⊄ chi(a_{i})B at generator {j}")
                return FactorResult(
                    None, True, f"chi(M_{i})B is not contained in chi(a_{i})B", rep
                )
        rep.add(f"containment_{i}", True)

    result = dilate(center)
    ring = result.algebra.ring
    images = []
    images_alt = []
    vd = result.var_dict()
    for n in ring.names:
        if n in vd:
            i, j = vd[n]
            c = center.centers[i - 1]
            bi = chi.apply(c.elem)
            gi = chi.apply(c.ideal.gens[j - 1])
            cof = ideal_cofactors(gi, [bi] + b.relations.gens)
            images.append(b.nf(cof[0]))
            cof2 = ideal_cofactors(gi, b.relations.gens + [bi])
            images_alt.append(b.nf(cof2[-1]))
        else:
            idx = a.ring.names.index(n)
            images.append(chi.images[idx])
            images_alt.append(chi.images[idx])
    factored = AlgebraHom(result.algebra, b, images)
    rep.add("factor_defined", check_hom(factored))
    rep.add("factors_chi", maps_equal(factored.compose(result.iota), chi))
    second = AlgebraHom(result.algebra, b, images_alt)
    if check_hom(second):
        rep.add("uniqueness", maps_equal(factored, second))
    else:
        rep.add("uniqueness", False, "alternate extraction not well-defined")
    return FactorResult(factored, False, "", rep)
