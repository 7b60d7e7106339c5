"""Sparse multivariate polynomials over an exact field.

A Polynomial stores its terms as a tuple of (exponents, coefficient) pairs
sorted strictly decreasing in the ring's monomial order; the zero polynomial
is the empty tuple.  Instances are immutable and always canonical: no zero
coefficients, no duplicate monomials.
"""

from __future__ import annotations

import re


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms, *, _canonical=False):
        self.ring = ring
        if _canonical:
            self.terms = terms if isinstance(terms, tuple) else tuple(terms)
        else:
            self.terms = _normalize(ring, terms)

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero(ring):
        return Polynomial(ring, (), _canonical=True)

    @staticmethod
    def constant(ring, c):
        c = ring.field(c)
        if c == ring.field.zero:
            return Polynomial.zero(ring)
        return Polynomial(ring, ((ring.zero_mono, c),), _canonical=True)

    @staticmethod
    def variable(ring, i, power=1):
        exps = tuple(power if j == i else 0 for j in range(ring.nvars))
        return Polynomial(ring, ((exps, ring.field.one),), _canonical=True)

    @staticmethod
    def from_dict(ring, data):
        return Polynomial(ring, list(data.items()))

    @staticmethod
    def monomial(ring, exps, coeff=1):
        c = ring.field(coeff)
        if c == ring.field.zero:
            return Polynomial.zero(ring)
        return Polynomial(ring, ((tuple(exps), c),), _canonical=True)

    # predicates ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return len(self.terms) == 0 or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def constant_coefficient(self):
        for exps, c in self.terms:
            if not any(exps):
                return c
        return self.ring.field.zero

    # leading data ----------------------------------------------------------

    @property
    def lead_mono(self):
        return self.terms[0][0]

    @property
    def lead_coeff(self):
        return self.terms[0][1]

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return Polynomial(self.ring, _merge(self.ring, self.terms, other.terms, 1), _canonical=True)

    def __sub__(self, other):
        self._check(other)
        return Polynomial(self.ring, _merge(self.ring, self.terms, other.terms, -1), _canonical=True)

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, tuple((m, neg(c)) for m, c in self.terms), _canonical=True)

    def __mul__(self, other):
        ring = self.ring
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(ring)
        if len(other.terms) == 1:
            m, c = other.terms[0]
            return self.term_mul(m, c)
        if len(self.terms) == 1:
            m, c = self.terms[0]
            return other.term_mul(m, c)
        fmul, fadd, fzero = ring.field.mul, ring.field.add, ring.field.zero
        acc = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(x + y for x, y in zip(m1, m2))
                prev = acc.get(m)
                acc[m] = fmul(c1, c2) if prev is None else fadd(prev, fmul(c1, c2))
        return Polynomial.from_dict(ring, acc)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.ring.field(c)
        if c == self.ring.field.zero:
            return Polynomial.zero(self.ring)
        fmul = self.ring.field.mul
        return Polynomial(self.ring, tuple((m, fmul(cc, c)) for m, cc in self.terms), _canonical=True)

    def term_mul(self, mono, coeff):
        """Multiply by a single term; preserves term order."""
        if coeff == self.ring.field.zero:
            return Polynomial.zero(self.ring)
        fmul = self.ring.field.mul
        out = tuple(
            (tuple(x + y for x, y in zip(m, mono)), fmul(c, coeff)) for m, c in self.terms
        )
        return Polynomial(self.ring, out, _canonical=True)

    def monic(self):
        if not self.terms:
            return self
        lc = self.lead_coeff
        if lc == self.ring.field.one:
            return self
        fdiv = self.ring.field.div
        return Polynomial(self.ring, tuple((m, fdiv(c, lc)) for m, c in self.terms), _canonical=True)

    def __pow__(self, n):
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # grading ---------------------------------------------------------------

    def weighted_degree(self):
        """Max weighted degree over terms; None for the zero polynomial."""
        if not self.terms:
            return None
        deg = self.ring.order.degree
        return max(deg(m) for m, _ in self.terms)

    def homogeneous_degree(self):
        """The common weighted degree, or None if zero or inhomogeneous."""
        if not self.terms:
            return None
        deg = self.ring.order.degree
        d = deg(self.terms[0][0])
        for m, _ in self.terms[1:]:
            if deg(m) != d:
                return None
        return d

    def is_homogeneous(self):
        return not self.terms or self.homogeneous_degree() is not None

    # calculus / substitution -----------------------------------------------

    def derivative(self, i):
        field = self.ring.field
        out = []
        for m, c in self.terms:
            if m[i] == 0:
                continue
            mm = list(m)
            e = mm[i]
            mm[i] = e - 1
            out.append((tuple(mm), field.mul(c, field(e))))
        return Polynomial(self.ring, out)

    def substitute(self, images):
        """Evaluate at images[i] (polynomials over a possibly different ring)."""
        target = images[0].ring
        acc = Polynomial.zero(target)
        for m, c in self.terms:
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * images[i] ** e
            acc = acc + term
        return acc

    # formatting ------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<poly {format_polynomial(self)}>"

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and (self.ring is other.ring or self.ring.signature == other.ring.signature)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring.signature, self.terms))

    def _check(self, other):
        if self.ring is not other.ring and self.ring.signature != other.ring.signature:
            raise ValueError("polynomials over different rings")


def _normalize(ring, terms):
    fadd, fzero = ring.field.add, ring.field.zero
    acc = {}
    for m, c in terms:
        c = ring.field(c)
        prev = acc.get(m)
        acc[m] = c if prev is None else fadd(prev, c)
    key = ring.order.key
    items = [(m, c) for m, c in acc.items() if c != fzero]
    items.sort(key=lambda t: key(t[0]), reverse=True)
    return tuple(items)


def _merge(ring, a, b, sign):
    """Merge two canonical term tuples; sign=-1 subtracts b."""
    key = ring.order.key
    fadd, fsub, fneg, fzero = ring.field.add, ring.field.sub, ring.field.neg, ring.field.zero
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ma, ca = a[i]
        mb, cb = b[j]
        if ma == mb:
            c = fadd(ca, cb) if sign == 1 else fsub(ca, cb)
            if c != fzero:
                out.append((ma, c))
            i += 1
            j += 1
        elif key(ma) > key(mb):
            out.append((ma, ca))
            i += 1
        else:
            out.append((mb, cb if sign == 1 else fneg(cb)))
            j += 1
    out.extend(a[i:])
    if sign == 1:
        out.extend(b[j:])
    else:
        out.extend((m, fneg(c)) for m, c in b[j:])
    return tuple(out)


# ---------------------------------------------------------------------------
# text grammar: terms like  3*x^2*y - 1/2*z ; variables in RingSpec order
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[\^*+-]))")


def _tokenize(text):
    pos, n, out = 0, len(text), []
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse polynomial at ...{text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", m.group("num").replace(" ", "")))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


def parse_polynomial(ring, text):
    """Parse the input grammar into a Polynomial over `ring`."""
    tokens = _tokenize(text)
    terms = []
    i, n = 0, len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i] == ("op", "+") or i < n and tokens[i] == ("op", "-"):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            if terms or sign != 1:
                raise ValueError(f"trailing sign in {text!r}")
            break
        coeff = _parse_rational("1")
        exps = [0] * ring.nvars
        expect_factor = True
        while i < n:
            kind, tok = tokens[i]
            if kind == "num":
                if not expect_factor:
                    raise ValueError(f"unexpected number {tok!r} in {text!r}")
                coeff = coeff * _parse_rational(tok)
                i += 1
                expect_factor = False
            elif kind == "name":
                if tok not in ring.name_index:
                    raise ValueError(f"unknown variable {tok!r}")
                idx = ring.name_index[tok]
                power = 1
                i += 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "num" or "/" in tokens[i][1]:
                        raise ValueError("expected integer exponent after '^'")
                    power = int(tokens[i][1])
                    i += 1
                exps[idx] += power
                expect_factor = False
            elif tok == "*":
                i += 1
                expect_factor = True
            else:  # '+' or '-' ends the term
                break
        c = ring.field(coeff)
        if sign < 0:
            c = ring.field.neg(c)
        terms.append((tuple(exps), c))
    return Polynomial(ring, terms)


def _parse_rational(tok):
    from fractions import Fraction

    if "/" in tok:
        a, b = tok.split("/")
        return Fraction(int(a), int(b))
    return Fraction(int(tok))


def format_polynomial(p):
    if not p.terms:
        return "0"
    ring = p.ring
    chunks = []
    for m, c in p.terms:
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(ring.names[i])
            elif e > 1:
                factors.append(f"{ring.names[i]}^{e}")
        cstr = ring.field.format(c)
        negative = cstr.startswith("-")
        if negative:
            cstr = cstr[1:]
        if factors and cstr == "1":
            body = "*".join(factors)
        elif factors:
            body = cstr + "*" + "*".join(factors)
        else:
            body = cstr
        if not chunks:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)
