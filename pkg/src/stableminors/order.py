"""Monomial orders and exponent-tuple arithmetic.

Monomials are plain tuples of non-negative ints, one slot per variable.
The default order is grevlex refined by weighted degree: weighted degree
first, ties broken by reverse lexicographic comparison of exponents.
"""

from __future__ import annotations


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """Return a/b as an exponent tuple, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_divides(a, b):
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd_is_one(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class GrevlexOrder:
    """Weighted-degree grevlex.  key() returns a tuple that sorts ascending."""

    def __init__(self, weights):
        self.weights = tuple(weights)
        self.nvars = len(self.weights)

    def degree(self, exps):
        w = self.weights
        return sum(e * w[i] for i, e in enumerate(exps))

    def key(self, exps):
        return (self.degree(exps), tuple(-e for e in reversed(exps)))

    def __eq__(self, other):
        return type(other) is GrevlexOrder and other.weights == self.weights

    def __hash__(self):
        return hash(("grevlex", self.weights))


class BlockElimOrder:
    """Eliminate the last `nelim` variables: their exponents dominate, then grevlex.

    Used for intersection/colon constructions; a Groebner basis in this
    order intersected with the small ring eliminates the tail block.
    """

    def __init__(self, weights, nelim=1):
        self.weights = tuple(weights)
        self.nvars = len(self.weights)
        self.nelim = nelim
        self._inner = GrevlexOrder(self.weights[: self.nvars - nelim])

    def degree(self, exps):
        w = self.weights
        return sum(e * w[i] for i, e in enumerate(exps))

    def key(self, exps):
        cut = self.nvars - self.nelim
        head = exps[cut:]
        return (sum(head), tuple(-e for e in reversed(head))) + self._inner.key(exps[:cut])

    def __eq__(self, other):
        return (
            type(other) is BlockElimOrder
            and other.weights == self.weights
            and other.nelim == self.nelim
        )

    def __hash__(self):
        return hash(("blockelim", self.weights, self.nelim))


def monomials_of_degree(weights, degree):
    """All exponent tuples of the given weighted degree, in a stable order."""
    n = len(weights)
    out = []

    def rec(i, rem, acc):
        if i == n - 1:
            if rem % weights[i] == 0:
                out.append(tuple(acc + [rem // weights[i]]))
            return
        w = weights[i]
        for e in range(rem // w + 1):
            rec(i + 1, rem - e * w, acc + [e])

    if degree < 0:
        return []
    rec(0, degree, [])
    return out


def monomials_up_to_degree(weights, degree):
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(weights, d))
    return out
