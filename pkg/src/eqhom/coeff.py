"""Arithmetic in the presented coefficient ringoid.

Coefficients of the collapsed resolution are integer combinations of
monomials.  A monomial is a composable list of generator derivatives,
written left to right with the rightmost factor acting first::

    d_{i1}(f1)_{s1} ... d_{ik}(fk)_{sk} a*

Each factor carries an operation symbol ``f``, an argument index ``i``
and a subscript morphism ``s``; the tail ``a*`` restricts along a
morphism ``a`` and is kept rightmost as the normal form.  Multiplying
pushes the left factor's tail through the right factor's derivatives by
composing it into their subscripts, and composes the tails; subscripts
and tails are stored in normal form with positional variable naming so
that equality of monomials is structural.

``expand_derivative`` rewrites the derivative of a composite term into
the sum of one monomial per occurrence of the chosen context variable
(the defining recursion of the presented ringoid).  Deciding equality
modulo the presentation's relations is out of scope: element equality is
syntactic, and the only relation-aware maps are ``signed_monomial_count``
(each monomial counts 1) and ``vanishes`` (per-tail counts, which is the
image of an element under the counting module and therefore zero for
every element of the relation ideal when the count is taken modulo the
system's degree).
"""

from __future__ import annotations

from dataclasses import dataclass

from .rewrite import Trs, normal_form
from .terms import (
    Context,
    Morphism,
    Term,
    Var,
    compose_raw,
    identity,
    is_identity,
    positional,
    render_morphism,
)

Factor = tuple[str, int, Morphism]


@dataclass(frozen=True)
class Monomial:
    factors: tuple[Factor, ...]
    tail: Morphism

    def __repr__(self):
        return render_monomial(self)


def normalize_positional(m: Morphism, trs: Trs) -> Morphism:
    """Normal-form components, context renamed x1..xn by position."""
    return positional(Morphism(m.context, tuple(normal_form(t, trs) for t in m.terms)))


def _mono_key(m: Monomial) -> tuple:
    return (
        tuple((op, idx, repr(sub)) for op, idx, sub in m.factors),
        repr(m.tail),
    )


@dataclass(frozen=True)
class RingoidElement:
    """Integer combination of monomials, canonically ordered, no zeros."""

    terms: tuple[tuple[Monomial, int], ...]

    @staticmethod
    def from_counter(counter: dict[Monomial, int]) -> "RingoidElement":
        items = [(m, c) for m, c in counter.items() if c != 0]
        items.sort(key=lambda mc: _mono_key(mc[0]))
        return RingoidElement(tuple(items))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "RingoidElement") -> "RingoidElement":
        counter: dict[Monomial, int] = dict(self.terms)
        for m, c in other.terms:
            counter[m] = counter.get(m, 0) + c
        return RingoidElement.from_counter(counter)

    def scale(self, k: int) -> "RingoidElement":
        if k == 0:
            return ZERO
        return RingoidElement(tuple((m, c * k) for m, c in self.terms))

    def __neg__(self) -> "RingoidElement":
        return self.scale(-1)

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for m, c in self.terms:
            sign = "-" if c < 0 else ("+" if bits else "")
            mag = "" if abs(c) == 1 else f"{abs(c)}·"
            bits.append(f"{sign}{mag}{render_monomial(m)}")
        return "".join(bits)


ZERO = RingoidElement(())


def identity_element(context: Context) -> RingoidElement:
    return RingoidElement(((Monomial((), identity(context)), 1),))


def star(alpha: Morphism, trs: Trs) -> RingoidElement:
    """The restriction generator along ``alpha`` as an element."""
    return RingoidElement(((Monomial((), normalize_positional(alpha, trs)), 1),))


def expand_derivative(i: int, tm: Morphism, subscript: Morphism, trs: Trs) -> RingoidElement:
    """Derivative of a term by its ``i``-th context variable (1-based),
    restricted along ``subscript``, expanded into generator monomials.

    The expansion has exactly one monomial per occurrence of the chosen
    variable in the term.
    """
    if not 1 <= i <= len(tm.context):
        raise ValueError(f"derivative index {i} outside context of size {len(tm.context)}")
    if subscript.codomain_sorts != tm.domain_sorts:
        raise ValueError("subscript does not land in the term's context")
    target = tm.context[i - 1][0]
    tail = identity(positional(subscript).context)

    def rec(t: Term) -> list[tuple[Factor, ...]]:
        if isinstance(t, Var):
            return [()] if t.name == target else []
        out: list[tuple[Factor, ...]] = []
        args_m = Morphism(tm.context, t.args)
        sub = normalize_positional(compose_raw(args_m, subscript), trs)
        for j, arg in enumerate(t.args, 1):
            head: Factor = (t.op, j, sub)
            out.extend((head,) + rest for rest in rec(arg))
        return out

    counter: dict[Monomial, int] = {}
    for factors in rec(tm.term):
        mono = Monomial(factors, tail)
        counter[mono] = counter.get(mono, 0) + 1
    return RingoidElement.from_counter(counter)


def multiply(a: RingoidElement, b: RingoidElement, trs: Trs) -> RingoidElement:
    """Bilinear product; ``b`` acts first.

    Factor lists concatenate (``a``'s leftmost); ``a``'s tail is pushed
    through ``b``'s factors by composing it into their subscripts, and
    the tails compose in the theory.
    """
    counter: dict[Monomial, int] = {}
    for ma, ca in a.terms:
        for mb, cb in b.terms:
            moved = tuple(
                (op, idx, normalize_positional(compose_raw(sub, ma.tail), trs))
                for op, idx, sub in mb.factors
            )
            tail = normalize_positional(compose_raw(mb.tail, ma.tail), trs)
            mono = Monomial(ma.factors + moved, tail)
            counter[mono] = counter.get(mono, 0) + ca * cb
    return RingoidElement.from_counter(counter)


def signed_monomial_count(a: RingoidElement, d: int) -> int:
    """Image of the element under the counting module: every monomial
    maps to 1, reduced modulo ``d`` (exact integer when ``d`` is 0)."""
    total = sum(c for _, c in a.terms)
    if d == 0:
        return total
    return total % d


def tail_counts(a: RingoidElement) -> dict[Morphism, int]:
    out: dict[Morphism, int] = {}
    for m, c in a.terms:
        out[m.tail] = out.get(m.tail, 0) + c
    return out


def vanishes(a: RingoidElement, d: int) -> bool:
    """Zero as far as the counting module can see: the signed monomial
    count of every tail component is 0 modulo ``d``."""
    return all((c if d == 0 else c % d) == 0 for c in tail_counts(a).values())


def render_monomial(m: Monomial) -> str:
    bits = [f"∂{idx}({op})_{render_morphism(sub)}" for op, idx, sub in m.factors]
    if not is_identity(m.tail):
        bits.append(f"{render_morphism(m.tail)}*")
    return "".join(bits) if bits else "1"
