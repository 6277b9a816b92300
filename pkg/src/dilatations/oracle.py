"""Ground-truth dilatation semantics over small finite rings.

Everything here is literal: rings are element lists with operation
tables, the fraction construction enumerates equivalence classes of
symbols m/a^nu exactly as defined, and the subring construction closes
generator sets inside an idempotent localization.  The two constructions
certify each other; the symbolic engine is then checked against them on
finite-dimensional instances.

Witness bound: with e = f^t idempotent (f the product of the a_i), two
symbols are equivalent iff they are equalized by the single witness
beta = (t, ..., t), because e * a^beta is a unit multiple of e in e*A.
That bound is what makes the enumeration total.
"""

from __future__ import annotations

import itertools
import random

from .poly import InputError, Polynomial
from .report import Report, VerificationFinding

SIZE_CAP = 4096


class SizeCapError(RuntimeError):
    """Ring or enumeration exceeded the configured size cap."""


class FiniteRing:
    """Commutative unital ring as an explicit element list with ops.

    Elements are hashable canonical labels; `gens` generate the ring (the
    closure of {0, 1} ∪ gens under + and * is everything), which drives
    hom enumeration.
    """

    def __init__(self, label, elements, add, mul, zero, one, gens, verify=True):
        self.label = label
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise InputError("duplicate element labels")
        self.add = add
        self.mul = mul
        self.zero = zero
        self.one = one
        self.gens = list(gens)
        self._neg = None
        if verify:
            self._verify_axioms()

    @property
    def size(self):
        return len(self.elements)

    def _verify_axioms(self):
        els = self.elements
        if len(els) > SIZE_CAP:
            raise SizeCapError(f"ring size {len(els)} exceeds cap {SIZE_CAP}")
        if len(els) <= 64:
            triples = itertools.product(els, repeat=3)
        else:
            rng = random.Random(0)
            triples = [tuple(rng.choice(els) for _ in range(3)) for _ in range(2000)]
        add, mul = self.add, self.mul
        for x, y, z in triples:
            if add(x, y) != add(y, x) or mul(x, y) != mul(y, x):
                raise VerificationFinding(f"{self.label}: commutativity fails")
            if add(add(x, y), z) != add(x, add(y, z)):
                raise VerificationFinding(f"{self.label}: additive associativity fails")
            if mul(mul(x, y), z) != mul(x, mul(y, z)):
                raise VerificationFinding(f"{self.label}: multiplicative associativity fails")
            if mul(x, add(y, z)) != add(mul(x, y), mul(x, z)):
                raise VerificationFinding(f"{self.label}: distributivity fails")
        for x in els:
            if add(x, self.zero) != x or mul(x, self.one) != x:
                raise VerificationFinding(f"{self.label}: unit laws fail")

    def neg(self, x):
        if self._neg is None:
            table = {}
            for a in self.elements:
                for b in self.elements:
                    if self.add(a, b) == self.zero:
                        table[a] = b
                        break
            self._neg = table
        return self._neg[x]

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def is_nzd(self, x):
        return all(self.mul(x, y) != self.zero for y in self.elements if y != self.zero)

    def is_unit(self, x):
        return any(self.mul(x, y) == self.one for y in self.elements)

    def inverse(self, x):
        for y in self.elements:
            if self.mul(x, y) == self.one:
                return y
        raise InputError(f"{x} is not a unit in {self.label}")

    def nilpotent(self, x):
        seen = set()
        p = x
        while p not in seen:
            if p == self.zero:
                return True
            seen.add(p)
            p = self.mul(p, x)
        return False

    def is_reduced(self):
        return all(not self.nilpotent(x) for x in self.elements if x != self.zero)

    def is_domain(self):
        if self.size < 2 or self.zero == self.one:
            return False
        return all(
            self.mul(x, y) != self.zero
            for x in self.elements
            if x != self.zero
            for y in self.elements
            if y != self.zero
        )

    def ideal_closure(self, gens):
        """Smallest subset containing gens closed under + and ring
        multiplication (an ideal)."""
        current = {self.zero}
        current.update(gens)
        changed = True
        while changed:
            changed = False
            snapshot = sorted(current, key=self._sort_key)
            for x in snapshot:
                for y in snapshot:
                    s = self.add(x, y)
                    if s not in current:
                        current.add(s)
                        changed = True
                for r in self.elements:
                    p = self.mul(r, x)
                    if p not in current:
                        current.add(p)
                        changed = True
        return frozenset(current)

    def _sort_key(self, x):
        return self.index[x]

    def sorted(self, xs):
        return sorted(xs, key=self._sort_key)

    def subring_closure(self, gens, cap=SIZE_CAP):
        """Closure of {one} ∪ gens under + and *, as a sorted list."""
        current = {self.zero, self.one}
        current.update(gens)
        changed = True
        while changed:
            if len(current) > cap:
                raise SizeCapError(f"subring closure exceeded cap {cap}")
            changed = False
            snapshot = self.sorted(current)
            for x in snapshot:
                for y in snapshot:
                    for v in (self.add(x, y), self.mul(x, y)):
                        if v not in current:
                            current.add(v)
                            changed = True
        return self.sorted(current)

    def expressions(self):
        """One expression DAG per element over {0, 1, gens}: used to
        extend candidate generator images to full maps."""
        exprs = {self.zero: ("zero",), self.one: ("one",)}
        for k, g in enumerate(self.gens):
            exprs.setdefault(g, ("gen", k))
        frontier = self.sorted(exprs)
        while True:
            new = []
            for x in self.sorted(exprs):
                for y in frontier:
                    for op, v in (("add", self.add(x, y)), ("mul", self.mul(x, y))):
                        if v not in exprs:
                            exprs[v] = (op, x, y)
                            new.append(v)
            if not new:
                break
            frontier = new
        if len(exprs) != self.size:
            raise InputError(f"{self.label}: listed gens do not generate the ring")
        return exprs

    def __repr__(self):
        return f"FiniteRing({self.label}, n={self.size})"


# ---------------------------------------------------------------------------
# constructors


def zmod(n: int) -> FiniteRing:
    if n < 1:
        raise InputError("modulus must be >= 1")
    return FiniteRing(
        f"Z/{n}",
        range(n),
        lambda a, b: (a + b) % n,
        lambda a, b: (a * b) % n,
        0,
        1 % n,
        [1 % n],
    )


def quotient_ring(n: int, modulus: tuple, var: str = "y") -> FiniteRing:
    """Z/n[var] / (monic modulus); elements are coefficient tuples of
    degree < deg(modulus)."""
    mod = tuple(c % n for c in modulus)
    if not mod or mod[-1] != 1:
        raise InputError("modulus must be monic")
    d = len(mod) - 1
    if d < 1:
        raise InputError("modulus must have positive degree")
    if n**d > SIZE_CAP:
        raise SizeCapError("quotient ring too large")

    def reduce(coeffs):
        coeffs = [c % n for c in coeffs]
        while len(coeffs) > d:
            lead = coeffs.pop()
            if lead:
                for i in range(len(mod) - 1):
                    coeffs[len(coeffs) - d + i] = (coeffs[len(coeffs) - d + i] - lead * mod[i]) % n
        while len(coeffs) < d:
            coeffs.append(0)
        return tuple(coeffs)

    def add(a, b):
        return tuple((x + y) % n for x, y in zip(a, b))

    def mul(a, b):
        out = [0] * (2 * d)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % n
        return reduce(out)

    elements = [tuple(reversed(t)) for t in itertools.product(range(n), repeat=d)]
    elements = sorted(set(elements))
    zero = (0,) * d
    one = reduce([1])
    y = reduce([0, 1])
    return FiniteRing(f"Z/{n}[{var}]/(m)", elements, add, mul, zero, one, [one, y] if one != y else [y])


def dual_numbers(n: int) -> FiniteRing:
    return quotient_ring(n, (0, 0, 1), var="eps")


def galois_extension(n: int, p: int) -> FiniteRing:
    """Z/n with a quadratic extension faithful mod the prime p (n a power
    of p): used as a small test ring seeing non-split phenomena."""
    if p == 2:
        return quotient_ring(n, (1, 1, 1), var="w")
    c = 2
    while pow(c, (p - 1) // 2, p) == 1:
        c += 1
    return quotient_ring(n, ((-c) % n, 0, 1), var="w")


def from_presented(ap, cap: int = SIZE_CAP) -> tuple[FiniteRing, dict]:
    """Enumerate a zero-dimensional presented algebra over Fp as a finite
    ring; returns (ring, var name -> element).

    Elements are coefficient tuples over the sorted standard monomial
    basis.  Rejects non-finite-dimensional input.
    """
    field = ap.ring.field
    if field.is_rational:
        raise InputError("finite enumeration needs a prime field")
    p = field.p
    gb = ap.relations.groebner()
    if any(g.is_one() for g in gb):
        basis_monos = []
    else:
        lms = [g.lm() for g in gb]
        nv = ap.ring.nvars
        bounds = []
        for i in range(nv):
            pure = [m[i] for m in lms if all(e == 0 for j, e in enumerate(m) if j != i)]
            if not pure:
                raise InputError("relation ideal is not zero-dimensional")
            bounds.append(min(pure))
        from .poly import mono_divides

        basis_monos = []
        for exps in itertools.product(*(range(b) for b in bounds)):
            if not any(mono_divides(lm, exps) for lm in lms):
                basis_monos.append(exps)
        basis_monos.sort()
    dim = len(basis_monos)
    if dim and p**dim > cap:
        raise SizeCapError(f"{p}^{dim} elements exceeds cap {cap}")

    mono_pos = {m: i for i, m in enumerate(basis_monos)}

    def poly_to_vec(f):
        f = ap.nf(f)
        vec = [0] * dim
        for m, c in f.terms.items():
            vec[mono_pos[m]] = c
        return tuple(vec)

    def vec_to_poly(vec):
        terms = {}
        for i, c in enumerate(vec):
            if c:
                terms[basis_monos[i]] = c
        return Polynomial(ap.ring, terms)

    if dim == 0:
        ring = FiniteRing(f"{ap.ring}(zero)", [()], lambda a, b: (), lambda a, b: (), (), (), [])
        return ring, {n: () for n in ap.ring.names}

    prod_table = {}
    for i in range(dim):
        for j in range(i, dim):
            from .poly import mono_mul

            m = mono_mul(basis_monos[i], basis_monos[j])
            prod_table[(i, j)] = poly_to_vec(Polynomial(ap.ring, {m: field.one()}))

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        out = [0] * dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                vec = prod_table[(i, j) if i <= j else (j, i)]
                c = x * y % p
                for k, v in enumerate(vec):
                    if v:
                        out[k] = (out[k] + c * v) % p
        return tuple(out)

    elements = [t for t in itertools.product(range(p), repeat=dim)]
    zero = (0,) * dim
    one = poly_to_vec(ap.ring.one())
    var_map = {n: poly_to_vec(ap.ring.var(n)) for n in ap.ring.names}
    gens = [one] + [var_map[n] for n in ap.ring.names]
    ring = FiniteRing(str(ap.ring), elements, add, mul, zero, one, gens)
    return ring, var_map


# ---------------------------------------------------------------------------
# centers and localization


class FiniteCenter:
    """Pairs (ideal subset, element); each subset is verified to be an
    ideal on construction."""

    def __init__(self, ring: FiniteRing, pairs):
        self.ring = ring
        self.pairs = []
        for m, a in pairs:
            m = frozenset(m)
            if a not in ring.index:
                raise InputError("center element not in the ring")
            for x in m:
                for y in m:
                    if ring.add(x, y) not in m:
                        raise InputError("center subset not closed under addition")
                for r in ring.elements:
                    if ring.mul(r, x) not in m:
                        raise InputError("center subset not closed under multiplication")
            if ring.zero not in m:
                raise InputError("center subset must contain zero")
            self.pairs.append((m, a))

    @classmethod
    def from_gens(cls, ring: FiniteRing, pairs):
        return cls(ring, [(ring.ideal_closure(gens), a) for gens, a in pairs])

    def __len__(self):
        return len(self.pairs)

    def l_set(self, i):
        m, a = self.pairs[i]
        return self.ring.ideal_closure(set(m) | {a})

    def product_elem(self):
        f = self.ring.one
        for _, a in self.pairs:
            f = self.ring.mul(f, a)
        return f


class Localization:
    """e.A for the idempotent e = f^t, with the canonical map a -> e*a."""

    def __init__(self, parent: FiniteRing, f):
        self.parent = parent
        self.f = f
        t = 1
        power = f
        while parent.mul(power, power) != power:
            t += 1
            power = parent.mul(power, f)
            if t > parent.size + 1:
                raise VerificationFinding("no idempotent power found")
        self.t = t
        self.e = power
        elements = parent.sorted({parent.mul(self.e, x) for x in parent.elements})
        self.ring = FiniteRing(
            f"{parent.label}[1/{f}]",
            elements,
            parent.add,
            parent.mul,
            parent.zero,
            self.e,
            [parent.mul(self.e, g) for g in parent.gens],
            verify=False,
        )
        ef = parent.mul(self.e, f)
        if not self.ring.is_unit(ef):
            raise VerificationFinding("e*f is not invertible in e*A")

    def map(self, x):
        return self.parent.mul(self.e, x)


def localize_finite(a: FiniteRing, f) -> Localization:
    return Localization(a, f)


# ---------------------------------------------------------------------------
# oracle dilatations


class OracleDilatation:
    """Subring-route dilatation: the closure of e*A and the fractions
    e*m*(e*a_i)^{-1} inside the localization at prod a_i."""

    def __init__(self, base: FiniteRing, center: FiniteCenter, cap=SIZE_CAP):
        self.base = base
        self.center = center
        self.loc = localize_finite(base, center.product_elem())
        e = self.loc.e
        gens = [self.loc.map(x) for x in base.elements]
        self.fraction_values = {}
        for i, (m, a) in enumerate(center.pairs):
            inv = self.loc.ring.inverse(self.loc.map(a))
            for x in base.sorted(m):
                v = base.mul(self.loc.map(x), inv)
                self.fraction_values[(i, x)] = v
                gens.append(v)
        elements = set()
        current = {self.loc.ring.zero, e}
        current.update(gens)
        changed = True
        while changed:
            if len(current) > cap:
                raise SizeCapError(f"oracle dilatation exceeded cap {cap}")
            changed = False
            snap = base.sorted(current)
            for x in snap:
                for y in snap:
                    for v in (base.add(x, y), base.mul(x, y)):
                        if v not in current:
                            current.add(v)
                            changed = True
        frac_gens = [self.fraction_values[k] for k in sorted(self.fraction_values, key=lambda k: (k[0], base.index[k[1]]))]
        self.ring = FiniteRing(
            f"{base.label}-dilatation",
            base.sorted(current),
            base.add,
            base.mul,
            base.zero,
            e,
            [self.loc.map(g) for g in base.gens] + frac_gens,
            verify=False,
        )

    def struct_map(self, x):
        return self.loc.map(x)


def dilate_oracle_subring(a: FiniteRing, c: FiniteCenter, cap=SIZE_CAP) -> OracleDilatation:
    return OracleDilatation(a, c, cap)


class SymbolDilatation:
    """Fraction-symbol dilatation built from the literal definition.

    Symbols m/a^nu with nu_i <= t and m in L^nu, classed by the witness
    test e*m*a^lambda == e*p*a^nu.  The certified bijection onto the
    subring construction (value map m/a^nu -> e*m*(e*a^nu)^{-1}) is part
    of construction; failure raises VerificationFinding.
    """

    def __init__(self, base: FiniteRing, center: FiniteCenter, cap=SIZE_CAP):
        self.base = base
        self.center = center
        self.sub = dilate_oracle_subring(base, center, cap)
        loc = self.sub.loc
        e, t = loc.e, loc.t
        k = len(center.pairs)

        lsets = {(0,) * k: frozenset(base.elements)}

        def l_of(nu):
            if nu in lsets:
                return lsets[nu]
            i = next(j for j, v in enumerate(nu) if v > 0)
            prev = l_of(tuple(v - 1 if j == i else v for j, v in enumerate(nu)))
            li = center.l_set(i)
            prods = {base.mul(x, y) for x in prev for y in li}
            out = base.ideal_closure(prods)
            lsets[nu] = out
            return out

        _pow_cache = {}

        def a_pow(nu):
            v = _pow_cache.get(nu)
            if v is None:
                v = base.one
                for i, (m, ai) in enumerate(center.pairs):
                    for _ in range(nu[i]):
                        v = base.mul(v, ai)
                _pow_cache[nu] = v
            return v

        self._a_pow = a_pow

        def equivalent(sym1, sym2):
            (m, nu), (p, lam) = sym1, sym2
            lhs = base.mul(base.mul(e, m), a_pow(lam))
            rhs = base.mul(base.mul(e, p), a_pow(nu))
            return lhs == rhs

        self.equivalent = equivalent

        symbols = []
        for nu in itertools.product(range(t + 1), repeat=k):
            for m in base.sorted(l_of(nu)):
                symbols.append((m, nu))
                if len(symbols) > cap * (t + 1) ** k:
                    raise SizeCapError("symbol enumeration exceeded cap")

        reps = []  # class representatives in discovery order
        self.class_of_symbol = {}
        for sym in symbols:
            for ci, rep_sym in enumerate(reps):
                if equivalent(sym, rep_sym):
                    self.class_of_symbol[sym] = ci
                    break
            else:
                self.class_of_symbol[sym] = len(reps)
                reps.append(sym)
        self.reps = reps

        def value(sym):
            m, nu = sym
            u = loc.map(a_pow(nu))
            return base.mul(base.mul(e, m), loc.ring.inverse(u))

        self.value = value

        # certified bijection with the subring construction
        values = [value(s) for s in reps]
        if len(set(values)) != len(values):
            raise VerificationFinding("fraction classes collapse in the localization")
        if set(values) != set(self.sub.ring.elements):
            raise VerificationFinding("fraction classes do not cover the subring dilatation")
        for s1 in reps:
            for s2 in reps:
                if (value(s1) == value(s2)) != equivalent(s1, s2):
                    raise VerificationFinding("equivalence disagrees with localization equality")
        self.values = values

        def locate(sym):
            """Class index of an arbitrary symbol (exponents unbounded)."""
            for ci, rep_sym in enumerate(reps):
                if equivalent(sym, rep_sym):
                    return ci
            raise VerificationFinding(f"symbol {sym} matches no class")

        def add_op(i, j):
            (m, nu), (p, lam) = reps[i], reps[j]
            s = (base.add(base.mul(m, a_pow(lam)), base.mul(p, a_pow(nu))),
                 tuple(x + y for x, y in zip(nu, lam)))
            return locate(s)

        def mul_op(i, j):
            (m, nu), (p, lam) = reps[i], reps[j]
            s = (base.mul(m, p), tuple(x + y for x, y in zip(nu, lam)))
            return locate(s)

        n = len(reps)
        add_table = [[0] * n for _ in range(n)]
        mul_table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                add_table[i][j] = add_table[j][i] = add_op(i, j)
                mul_table[i][j] = mul_table[j][i] = mul_op(i, j)
        zero_c = locate((base.zero, (0,) * k))
        one_c = locate((base.one, (0,) * k))
        gen_cs = sorted({locate((base.mul(x, base.one), (0,) * k)) for x in base.gens})
        self.ring = FiniteRing(
            f"{base.label}-fractions",
            range(n),
            lambda x, y: add_table[x][y],
            lambda x, y: mul_table[x][y],
            zero_c,
            one_c,
            gen_cs,
        )

        # operations agree with the subring construction through the values
        for i in range(n):
            for j in range(n):
                if value(reps[add_table[i][j]]) != base.add(values[i], values[j]):
                    raise VerificationFinding("addition disagrees with the subring dilatation")
                if value(reps[mul_table[i][j]]) != base.mul(values[i], values[j]):
                    raise VerificationFinding("multiplication disagrees with the subring dilatation")

    def struct_class(self, x):
        return self.class_of_symbol.get((x, (0,) * len(self.center.pairs)))


def dilate_oracle_fractions(a: FiniteRing, c: FiniteCenter, cap=SIZE_CAP) -> SymbolDilatation:
    return SymbolDilatation(a, c, cap)


# ---------------------------------------------------------------------------
# modules


class FiniteModule:
    """Finite abelian group with an A-action; axioms verified on
    construction."""

    def __init__(self, ring: FiniteRing, label, elements, add, act, zero, verify=True):
        self.ring = ring
        self.label = label
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.add = add
        self.act = act
        self.zero = zero
        if verify:
            self._verify()

    def _verify(self):
        els = self.elements
        ring = self.ring
        if len(els) > 512 or ring.size > 512:
            rng = random.Random(1)
            pairs = [(rng.choice(els), rng.choice(els)) for _ in range(500)]
            rpairs = [(rng.choice(ring.elements), rng.choice(els)) for _ in range(500)]
        else:
            pairs = [(x, y) for x in els for y in els]
            rpairs = [(r, x) for r in ring.elements for x in els]
        for x, y in pairs:
            if self.add(x, y) != self.add(y, x) or self.add(x, y) not in self.index:
                raise VerificationFinding(f"{self.label}: addition broken")
        for r, x in rpairs:
            if self.act(r, x) not in self.index:
                raise VerificationFinding(f"{self.label}: action not closed")
            if self.act(ring.one, x) != x:
                raise VerificationFinding(f"{self.label}: unit action broken")
        for r, x in rpairs[:200]:
            for s in ring.elements[: min(len(ring.elements), 16)]:
                if self.act(ring.mul(r, s), x) != self.act(r, self.act(s, x)):
                    raise VerificationFinding(f"{self.label}: action not associative")

    def sorted(self, xs):
        return sorted(xs, key=lambda x: self.index[x])

    @classmethod
    def from_ring(cls, ring: FiniteRing):
        return cls(ring, f"{ring.label} as module", ring.elements, ring.add, ring.mul, ring.zero)

    @classmethod
    def zmod_over(cls, ring: FiniteRing, n: int, m: int):
        """Z/m as a Z/n-module (m | n)."""
        if n % m:
            raise InputError("m must divide n")
        return cls(
            ring,
            f"Z/{m} over Z/{n}",
            range(m),
            lambda a, b: (a + b) % m,
            lambda r, x: (r * x) % m,
            0,
        )


class ModuleDilatation:
    """Module dilatation by symbol enumeration; the result is e*M with the
    action of the subring dilatation, certified through symbol classes."""

    def __init__(self, module: FiniteModule, center: FiniteCenter, cap=SIZE_CAP):
        base = center.ring
        self.module = module
        self.center = center
        self.sub = dilate_oracle_subring(base, center, cap)
        loc = self.sub.loc
        e, t = loc.e, loc.t
        k = len(center.pairs)

        def a_pow(nu):
            v = base.one
            for i, (_, ai) in enumerate(center.pairs):
                for _ in range(nu[i]):
                    v = base.mul(v, ai)
            return v

        lsets = {(0,) * k: frozenset(base.elements)}

        def l_of(nu):
            if nu in lsets:
                return lsets[nu]
            i = next(j for j, v in enumerate(nu) if v > 0)
            prev = l_of(tuple(v - 1 if j == i else v for j, v in enumerate(nu)))
            li = center.l_set(i)
            out = base.ideal_closure({base.mul(x, y) for x in prev for y in li})
            lsets[nu] = out
            return out

        # symbols l*m / a^nu
        def equivalent(sym1, sym2):
            (l1, m1, nu), (l2, m2, lam) = sym1, sym2
            lhs = module.act(base.mul(base.mul(e, l1), a_pow(lam)), m1)
            rhs = module.act(base.mul(base.mul(e, l2), a_pow(nu)), m2)
            return lhs == rhs

        def value(sym):
            l, m, nu = sym
            inv = loc.ring.inverse(loc.map(a_pow(nu)))
            return module.act(base.mul(base.mul(e, l), inv), m)

        symbols = []
        for nu in itertools.product(range(t + 1), repeat=k):
            for l in base.sorted(l_of(nu)):
                for m in module.elements:
                    symbols.append((l, m, nu))

        reps = []
        for sym in symbols:
            if not any(equivalent(sym, r) for r in reps):
                reps.append(sym)
        values = [value(r) for r in reps]
        if len(set(values)) != len(values):
            raise VerificationFinding("module classes collapse")
        target = {module.act(e, m) for m in module.elements}
        if set(values) != target:
            raise VerificationFinding("module classes do not cover e*M")

        self.elements = module.sorted(target)
        self.result = FiniteModule(
            self.sub.ring,
            f"{module.label}-dilatation",
            self.elements,
            module.add,
            module.act,
            module.act(e, module.zero),
            verify=False,
        )

        # a^nu acts injectively and a^nu M' = L^nu M' for small nu
        for nu in itertools.product(range(3), repeat=k):
            anu = self.sub.loc.map(a_pow(nu))
            image = {module.act(anu, x) for x in self.elements}
            if len(image) != len(self.elements):
                raise VerificationFinding(f"a^{nu} acts non-injectively on the dilatation")
            lnu_image = set()
            for l in base.sorted(l_of(nu)):
                for x in self.elements:
                    lnu_image.add(module.act(base.mul(e, l), x))
            span = set()
            frontier = set(lnu_image)
            while frontier - span:
                span.update(frontier)
                frontier = {module.add(x, y) for x in span for y in span}
            lspan = span or {self.result.zero}
            aspan = set()
            frontier = set(image)
            while frontier - aspan:
                aspan.update(frontier)
                frontier = {module.add(x, y) for x in aspan for y in aspan}
            if lspan != aspan:
                raise VerificationFinding(f"L^{nu} M' != a^{nu} M'")


def module_dilate_oracle(module: FiniteModule, center: FiniteCenter, cap=SIZE_CAP) -> ModuleDilatation:
    return ModuleDilatation(module, center, cap)


# ---------------------------------------------------------------------------
# hom enumeration and the universal-property scan


def enumerate_homs(a: FiniteRing, b: FiniteRing, budget: int = 200_000):
    """All unital ring homs A -> B, by assigning generator images and
    verifying the full addition/multiplication tables."""
    exprs = a.expressions()
    ngens = len(a.gens)
    if b.size**ngens > budget:
        raise SizeCapError("hom enumeration budget exceeded")
    homs = []
    order = a.sorted(exprs)
    for images in itertools.product(b.elements, repeat=ngens):
        fmap = {}
        ok = True
        for x in order:
            ex = exprs[x]
            if ex[0] == "zero":
                v = b.zero
            elif ex[0] == "one":
                v = b.one
            elif ex[0] == "gen":
                v = images[ex[1]]
            elif ex[0] == "add":
                v = b.add(fmap[ex[1]], fmap[ex[2]])
            else:
                v = b.mul(fmap[ex[1]], fmap[ex[2]])
            if x in fmap and fmap[x] != v:
                ok = False
                break
            fmap[x] = v
        if not ok:
            continue
        if fmap[a.one] != b.one:
            continue
        good = all(
            fmap[a.add(x, y)] == b.add(fmap[x], fmap[y])
            and fmap[a.mul(x, y)] == b.mul(fmap[x], fmap[y])
            for x in a.elements
            for y in a.elements
        )
        if good:
            if fmap not in homs:
                homs.append(fmap)
    return homs


def count_algebra_homs(dil: OracleDilatation, b: FiniteRing, f: dict) -> int:
    """#Hom_{A-alg}(A', B) over the base hom f, for f(a_i) non-zero-
    divisors.  Candidate images of each fraction are enumerated as the
    solutions of x * f(a_i) = f(m); a non-zero-divisor admits at most one,
    which is checked rather than assumed."""
    base = dil.base
    forced = {}
    for (i, m), v in sorted(dil.fraction_values.items(), key=lambda kv: (kv[0][0], base.index[kv[0][1]])):
        ai = dil.center.pairs[i][1]
        sols = [x for x in b.elements if b.mul(x, f[ai]) == f[m]]
        if len(sols) > 1:
            raise VerificationFinding("multiple fraction images despite a non-zero-divisor")
        if not sols:
            return 0
        forced[v] = sols[0]

    # extend to the whole dilatation along its subring closure structure
    fmap = {}
    for x in dil.ring.elements:
        fmap[x] = None
    for x in base.elements:
        ex = dil.struct_map(x)
        if fmap.get(ex) is not None and fmap[ex] != f[x]:
            return 0
        fmap[ex] = f[x]
    for v, img in forced.items():
        if fmap.get(v) is not None and fmap[v] != img:
            return 0
        fmap[v] = img
    changed = True
    while changed:
        changed = False
        known = [x for x in dil.ring.elements if fmap[x] is not None]
        for x in known:
            for y in known:
                for res, img in (
                    (base.add(x, y), b.add(fmap[x], fmap[y])),
                    (base.mul(x, y), b.mul(fmap[x], fmap[y])),
                ):
                    if fmap[res] is None:
                        fmap[res] = img
                        changed = True
                    elif fmap[res] != img:
                        return 0
    if any(v is None for v in fmap.values()):
        raise VerificationFinding("dilatation not generated by base and fractions")
    return 1


def universal_property_scan(a: FiniteRing, center: FiniteCenter, catalog, budget: int = 200_000) -> Report:
    """Check the 0/1 hom-count prediction against every enumerated base
    hom with non-zero-divisor denominators."""
    rep = Report("universal_scan")
    dil = dilate_oracle_subring(a, center)
    for b in catalog:
        if b.size > 64:
            rep.add(f"catalog_size_{b.label}", False, "catalog ring exceeds 64 elements")
            continue
        homs = enumerate_homs(a, b, budget)
        for hn, f in enumerate(homs):
            if not all(b.is_nzd(f[ai]) for _, ai in center.pairs):
                continue
            predicted = 1
            for m, ai in center.pairs:
                target = {b.mul(f[ai], x) for x in b.elements}
                if not all(f[x] in target for x in m):
                    predicted = 0
                    break
            count = count_algebra_homs(dil, b, f)
            rep.add(
                f"{b.label}_hom{hn}",
                count == predicted,
                f"predicted {predicted}, found {count}",
            )
            if count >= 2:
                raise VerificationFinding("hom count >= 2 contradicts uniqueness")
    return rep


def preservation_checks(a: FiniteRing, center: FiniteCenter) -> Report:
    """Reducedness is preserved; over a finite domain with nonzero
    denominators the dilatation is the base ring itself."""
    rep = Report("preservation")
    dil = dilate_oracle_subring(a, center)
    if a.is_reduced():
        rep.add("reduced_preserved", dil.ring.is_reduced())
    else:
        rep.add("reduced_skipped", True, "base not reduced")
    if a.is_domain() and all(ai != a.zero for _, ai in center.pairs):
        same_size = dil.ring.size == a.size
        bijective = len({dil.struct_map(x) for x in a.elements}) == a.size
        rep.add("domain_unit_case", same_size and bijective)
    return rep


# ---------------------------------------------------------------------------
# symbolic bridge


def eval_poly(f, var_values: dict, target: FiniteRing):
    """Evaluate an Fp polynomial in a finite ring through scalar action."""
    total = target.zero
    for mono, coeff in sorted(f.terms.items()):
        term = target.one
        for i, e in enumerate(mono):
            v = var_values[f.ring.names[i]]
            for _ in range(e):
                term = target.mul(term, v)
        c = coeff % f.ring.field.p
        acc = target.zero
        for _ in range(c):
            acc = target.add(acc, term)
        total = target.add(total, acc)
    return total


def compare_with_symbolic(ap, center, cap: int = SIZE_CAP) -> Report:
    """Cross-validate the symbolic dilatation of a finite-dimensional Fp
    algebra against both oracle constructions."""
    from .dilatation import dilate

    rep = Report("oracle_bridge")
    base_ring, var_map = from_presented(ap, cap)
    fc = FiniteCenter.from_gens(
        base_ring,
        [([eval_poly(g, var_map, base_ring) for g in c.ideal.gens], eval_poly(c.elem, var_map, base_ring))
         for c in center.centers],
    )
    fractions = dilate_oracle_fractions(base_ring, fc, cap)
    rep.add("oracle_equivalence", True, "fractions vs subring certified in construction")
    oracle_ring = fractions.sub.ring

    sym = dilate(center)
    if sym.is_zero_ring():
        rep.add("zero_ring_agrees", oracle_ring.size == 1)
        return rep

    try:
        sym_ring, sym_vars = from_presented(sym.algebra, cap)
    except InputError:
        rep.add("symbolic_finite_dimensional", False, "symbolic dilatation is not finite-dimensional")
        return rep
    rep.add("symbolic_finite_dimensional", True)
    rep.add("sizes_match", sym_ring.size == oracle_ring.size,
            f"{sym_ring.size} vs {oracle_ring.size}")

    # map symbolic generators to oracle values and certify a surjection
    images = {}
    for n in ap.ring.names:
        images[n] = fractions.sub.struct_map(var_map[n])
    vd = sym.var_dict()
    for name, (i, j) in vd.items():
        g = center.centers[i - 1].ideal.gens[j - 1]
        gval = eval_poly(g, var_map, base_ring)
        images[name] = fractions.sub.fraction_values[(i - 1, gval)]
    well_defined = all(
        eval_poly(g, images, oracle_ring) == oracle_ring.zero
        for g in sym.algebra.relations.groebner()
    )
    rep.add("map_well_defined", well_defined)
    closure = oracle_ring.subring_closure([images[n] for n in sym.algebra.ring.names], cap)
    onto = set(closure) == set(oracle_ring.elements)
    rep.add("surjective", onto)
    if rep.ok and not (well_defined and onto and sym_ring.size == oracle_ring.size):
        raise VerificationFinding("bridge certificate incoherent")
    return rep
