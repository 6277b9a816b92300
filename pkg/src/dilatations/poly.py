"""Exact multivariate polynomials over QQ or a prime field.

Polynomials are sparse dicts mapping exponent tuples to nonzero field
scalars.  A monomial is a plain tuple of nonnegative ints over a fixed
variable registry; the registry (variable name list), the coefficient
field and the monomial order together form a PolyRing.  All values are
immutable after construction, so sharing across threads is safe.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

Mono = tuple  # exponent vector over a ring's registry
Scalar = Union[Fraction, int]  # Fraction over QQ, int residue over Fp


class InputError(ValueError):
    """Malformed input: registry mismatch, bad syntax, non-prime modulus."""


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """QQ, or Fp for a prime p < 2**31.

    Rationals are Fractions (lowest terms, positive denominator by
    construction); Fp residues are ints in [0, p).
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not (_is_prime(p) and p < 2**31):
                raise InputError(f"modulus {p} is not a prime < 2^31")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def of_int(self, n: int) -> Scalar:
        return Fraction(n) if self.p is None else n % self.p

    def of_fraction(self, num: int, den: int) -> Scalar:
        if self.p is None:
            return Fraction(num, den)
        if den % self.p == 0:
            raise InputError(f"denominator {den} not invertible mod {self.p}")
        return num * pow(den, -1, self.p) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p is None else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("field inverse of zero")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"Fp({self.p})"


QQ = Field()


# ---------------------------------------------------------------------------
# monomial orders

_GREVLEX = "grevlex"
_LEX = "lex"
_BLOCK = "block"


class MonomialOrder:
    """lex, grevlex, or a two-block elimination order.

    A block order eliminates the first `block` variables: exponent vectors
    are compared by the grevlex key of the leading block first, then the
    grevlex key of the tail.  Keys sort ascending; bigger key = bigger
    monomial.
    """

    __slots__ = ("kind", "block")

    def __init__(self, kind: str, block: int = 0):
        if kind not in (_GREVLEX, _LEX, _BLOCK):
            raise InputError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = block

    def key(self, e: Mono):
        if self.kind == _LEX:
            return e
        if self.kind == _GREVLEX:
            return (sum(e), tuple(-x for x in reversed(e)))
        h, t = e[: self.block], e[self.block :]
        return (
            sum(h),
            tuple(-x for x in reversed(h)),
            sum(t),
            tuple(-x for x in reversed(t)),
        )

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.block == other.block
        )

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == _BLOCK:
            return f"block({self.block})"
        return self.kind


GREVLEX = MonomialOrder(_GREVLEX)
LEX = MonomialOrder(_LEX)


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder(_BLOCK, k)


# monomial helpers (exponent tuples)


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Mono, b: Mono) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_deg(a: Mono) -> int:
    return sum(a)


# ---------------------------------------------------------------------------
# rings

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyRing:
    """A polynomial ring: coefficient field, variable registry, order.

    The registry is immutable; extending it yields a fresh ring.  Rings
    compare by value, so equal declarations are interchangeable.
    """

    __slots__ = ("field", "names", "order", "_index", "_hash")

    def __init__(self, field: Field, names: Iterable[str], order: MonomialOrder = GREVLEX):
        names = tuple(names)
        seen = set()
        for n in names:
            if not _NAME_RE.match(n):
                raise InputError(f"bad variable name {n!r}")
            if n in seen:
                raise InputError(f"duplicate variable name {n!r}")
            seen.add(n)
        self.field = field
        self.names = names
        self.order = order
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((field, names, order))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.field}[{', '.join(self.names)}]"

    # construction helpers

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        if isinstance(c, int):
            c = self.field.of_int(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Polynomial":
        i = self._index.get(name)
        if i is None:
            raise InputError(f"unknown variable {name!r} in {self!r}")
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one()})

    def gens(self) -> list:
        return [self.var(n) for n in self.names]

    def extend(self, extra: Iterable[str], order: MonomialOrder | None = None) -> "PolyRing":
        return PolyRing(self.field, self.names + tuple(extra), order or self.order)

    def fresh_name(self, stem: str) -> str:
        if stem not in self._index:
            return stem
        k = 2
        while f"{stem}_{k}" in self._index:
            k += 1
        return f"{stem}_{k}"

    # parsing / printing ----------------------------------------------------

    def parse(self, text: str) -> "Polynomial":
        return _parse_poly(self, text)


class Polynomial:
    """Immutable sparse polynomial attached to a PolyRing."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # basic structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.ring.nvars: self.ring.field.one()}

    def is_constant(self) -> bool:
        return all(mono_deg(m) == 0 for m in self.terms)

    def degree(self) -> int:
        return max((mono_deg(m) for m in self.terms), default=-1)

    def lm(self) -> Mono:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            key = self.ring.order.key
            self._lm = max(self.terms, key=key)
        return self._lm

    def lc(self) -> Scalar:
        return self.terms[self.lm()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        c = self.lc()
        if c == self.ring.field.one():
            return self
        inv = self.ring.field.inv(c)
        mul = self.ring.field.mul
        return Polynomial(self.ring, {m: mul(inv, c2) for m, c2 in self.terms.items()})

    def uses_vars(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    # arithmetic

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise InputError("polynomials over different registries")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        fld = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = fld.add(res.get(m, fld.zero()), c)
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.ring, res)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        fld = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = fld.sub(res.get(m, fld.zero()), c)
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.ring, res)

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        fld = self.ring.field
        res: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = fld.add(res.get(m, fld.zero()), fld.mul(c1, c2))
                if s:
                    res[m] = s
                else:
                    res.pop(m, None)
        return Polynomial(self.ring, res)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        if not c:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Polynomial(self.ring, {m: mul(c, v) for m, v in self.terms.items()})

    def mul_term(self, m: Mono, c: Scalar) -> "Polynomial":
        if not c:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Polynomial(self.ring, {mono_mul(m0, m): mul(c0, c) for m0, c0 in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, int):
                return self.terms == self.ring.const(other).terms
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    # ring transport

    def map_ring(self, target: PolyRing) -> "Polynomial":
        """Reinterpret in `target`, matching variables by name.

        Every variable actually used must exist in the target registry;
        coefficient fields must agree.
        """
        if target.field != self.ring.field:
            raise InputError("coefficient field mismatch")
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(target._index.get(n, -1))
        res: dict = {}
        fld = target.field
        for m, c in self.terms.items():
            e = [0] * target.nvars
            for i, x in enumerate(m):
                if x:
                    if pos[i] < 0:
                        raise InputError(f"variable {self.ring.names[i]!r} missing in target ring")
                    e[pos[i]] = x
            me = tuple(e)
            s = fld.add(res.get(me, fld.zero()), c)
            if s:
                res[me] = s
            else:
                res.pop(me, None)
        return Polynomial(target, res)

    def subst(self, images: dict) -> "Polynomial":
        """Evaluate with variables replaced by polynomials.

        `images` maps variable names to polynomials over one common target
        ring; unmapped variables must exist there by name.
        """
        target = None
        for v in images.values():
            target = v.ring
            break
        if target is None:
            raise InputError("empty substitution")
        var_imgs = []
        for n in self.ring.names:
            img = images.get(n)
            var_imgs.append(img if img is not None else target.var(n))
        result = target.zero()
        for m, c in sorted(self.terms.items()):
            part = Polynomial(target, {(0,) * target.nvars: c})
            for i, e in enumerate(m):
                for _ in range(e):
                    part = part * var_imgs[i]
            result = result + part
        return result

    # printing

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<{format_poly(self)}>"


# ---------------------------------------------------------------------------
# printer: terms descending in the ring order; round-trips through parse()


def _format_scalar(c: Scalar) -> str:
    return str(c)


def format_poly(f: Polynomial, ascending: bool = False) -> str:
    if not f.terms:
        return "0"
    key = f.ring.order.key
    monos = sorted(f.terms, key=key, reverse=not ascending)
    first = True
    out = []
    for m in monos:
        c = f.terms[m]
        neg = (not isinstance(c, int)) and c < 0
        mag = -c if neg else c
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(f.ring.names[i])
            elif e > 1:
                factors.append(f"{f.ring.names[i]}^{e}")
        if not factors:
            body = _format_scalar(mag)
        elif mag == f.ring.field.one():
            body = "*".join(factors)
        else:
            body = _format_scalar(mag) + "*" + "*".join(factors)
        if first:
            out.append(("-" if neg else "") + body)
            first = False
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^]))"
)


def _parse_poly(ring: PolyRing, text: str) -> Polynomial:
    """Parse `3/2*x^2*y - z + 1` style syntax (no parentheses)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise InputError(f"cannot tokenize polynomial near {rest[:20]!r}")
        pos = m.end()
        if m.group("num") is not None:
            tokens.append(("num", m.group("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    if not tokens:
        raise InputError("empty polynomial text")

    fld = ring.field
    result = ring.zero()
    i = 0
    n = len(tokens)

    def parse_factor(i):
        kind, val = tokens[i]
        if kind == "num":
            if "/" in val:
                a, b = val.split("/")
                c = fld.of_fraction(int(a), int(b))
            else:
                c = fld.of_int(int(val))
            return ring.const(c), i + 1
        if kind == "name":
            base = ring.var(val)
            i += 1
            if i + 1 < n and tokens[i] == ("op", "^") and tokens[i + 1][0] == "num":
                exp = tokens[i + 1][1]
                if "/" in exp:
                    raise InputError("fractional exponent")
                return base ** int(exp), i + 2
            return base, i
        raise InputError(f"unexpected token {val!r} in polynomial")

    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise InputError("dangling sign in polynomial")
        term, i = parse_factor(i)
        while i < n and tokens[i] == ("op", "*"):
            factor, i = parse_factor(i + 1)
            term = term * factor
        if sign < 0:
            term = -term
        result = result + term
    return result
