"""Weighted N-graded polynomial rings and their homogeneous quotients.

A RingSpec is an ambient polynomial ring k[x_1..x_n] with positive integer
variable weights, optionally modulo a list of homogeneous relations.  Local
rings are modeled by such quotients throughout; minimality and ideal
equality then become decidable by graded Groebner methods.
"""

from __future__ import annotations

from .field import QQ, Field, field_from_name
from .order import GrevlexOrder, monomials_of_degree
from .poly import Polynomial, parse_polynomial


class RingError(ValueError):
    pass


class RingSpec:
    def __init__(self, field, names, weights=None, relations=(), check_homogeneous=True):
        if isinstance(field, str):
            field = field_from_name(field)
        if not isinstance(field, Field):
            raise RingError(f"not a field: {field!r}")
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise RingError("duplicate variable names")
        self.name_index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(self.names)
        weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(weights) != self.nvars or any(w < 1 for w in weights):
            raise RingError("weights must be positive integers, one per variable")
        self.weights = weights
        self.order = GrevlexOrder(weights)
        self.zero_mono = (0,) * self.nvars
        self.relations = tuple(
            parse_polynomial(self, r) if isinstance(r, str) else r for r in relations
        )
        for r in self.relations:
            if r.is_zero():
                raise RingError("zero relation")
            if check_homogeneous and not r.is_homogeneous():
                raise RingError(f"relation {r} is not homogeneous for weights {weights}")
        self._relation_gb = None

    # mode ------------------------------------------------------------------

    @property
    def signature(self):
        return (self.field, self.names, self.weights)

    @property
    def is_quotient(self):
        return bool(self.relations)

    def ambient(self):
        """The underlying polynomial ring with the relations dropped."""
        if not self.relations:
            return self
        return RingSpec(self.field, self.names, self.weights)

    # element constructors ----------------------------------------------------

    def zero(self):
        return Polynomial.zero(self)

    def one(self):
        return Polynomial.constant(self, 1)

    def var(self, name_or_index, power=1):
        i = self.name_index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return Polynomial.variable(self, i, power)

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text):
        return parse_polynomial(self, text)

    def monomials_of_degree(self, d):
        return monomials_of_degree(self.weights, d)

    # quotient arithmetic -----------------------------------------------------

    def relation_gb(self):
        """Reduced Groebner basis of the relation ideal (engine elements)."""
        if self._relation_gb is None:
            from .engine import buchberger, to_element

            gens = [to_element(r) for r in self.relations if not r.is_zero()]
            self._relation_gb = buchberger(self, gens)
        return self._relation_gb

    def reduce(self, p):
        """Normal form of a polynomial modulo the relation ideal."""
        if not self.relations or p.is_zero():
            return p
        from .engine import from_element, normal_form, to_element

        return from_element(self, normal_form(self, to_element(p), self.relation_gb()))

    def extend(self, extra_names, extra_weights=None, order=None):
        """Ambient ring with extra variables appended (relations re-parsed)."""
        names = self.names + tuple(extra_names)
        weights = self.weights + tuple(extra_weights or (1,) * len(extra_names))
        ext = RingSpec(self.field, names, weights)
        if order is not None:
            ext.order = order
        return ext

    def map_poly(self, p):
        """Reinterpret a polynomial from a subring with matching leading names."""
        pad = self.nvars - p.ring.nvars
        if pad < 0 or p.ring.names != self.names[: p.ring.nvars]:
            raise RingError("not a compatible subring")
        terms = [(m + (0,) * pad, c) for m, c in p.terms]
        return Polynomial(self, terms)

    def __repr__(self):
        base = f"{self.field}[{','.join(self.names)}]"
        if self.weights != (1,) * self.nvars:
            base += f" weights={list(self.weights)}"
        if self.relations:
            base += "/(" + ", ".join(str(r) for r in self.relations) + ")"
        return base

    def __eq__(self, other):
        return (
            isinstance(other, RingSpec)
            and self.field == other.field
            and self.names == other.names
            and self.weights == other.weights
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.field, self.names, self.weights, len(self.relations)))


def ring_q(names, weights=None, relations=()):
    return RingSpec(QQ, names, weights, relations)
