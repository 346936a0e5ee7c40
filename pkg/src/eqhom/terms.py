"""Multi-sorted first-order terms and term-tuple morphisms.

A signature declares a finite set of sorts and a finite set of operation
symbols, each with a list of argument sorts and a result sort.  Terms are
variables or applications of operation symbols; every term carries a sort.

A morphism packages a sorting context (an ordered list of typed variables)
together with a tuple of terms over that context.  These are the arrows of
the free theory generated by the signature: composition substitutes the
inner morphism's terms for the outer morphism's context variables.

Every morphism factors uniquely as an *essential* morphism followed by a
*partial permutation*.  A partial permutation merely selects and reorders
context slots (its terms are pairwise distinct variables); an essential
morphism uses every variable of its context.  We fix one representative
per renaming class: context variables are listed in order of first
occurrence across the term tuple and named ``x1, x2, ...``.  A morphism in
that form is called *canonical* here, and ``canonicalize`` computes the
factorization.  All higher-level cell machinery stores canonical morphisms
only, so structural equality is semantic equality.

All values are immutable; every function is pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

Position = tuple[int, ...]
ROOT: Position = ()


class TermError(Exception):
    """Ill-sorted or structurally invalid term-level input."""


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __repr__(self):
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...]
    sort: str

    def __repr__(self):
        if not self.args:
            return self.op
        return f"{self.op}({','.join(map(repr, self.args))})"


Term = Union[Var, App]


@dataclass(frozen=True)
class Signature:
    """Operation symbols with declared argument sorts and result sort."""

    sorts: tuple[str, ...]
    ops: tuple[tuple[str, tuple[str, ...], str], ...]
    _by_name: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise TermError("duplicate sort names")
        by_name = {}
        for name, arg_sorts, result in self.ops:
            if name in by_name:
                raise TermError(f"duplicate operation symbol {name!r}")
            for s in (*arg_sorts, result):
                if s not in self.sorts:
                    raise TermError(f"operation {name!r} references undeclared sort {s!r}")
            by_name[name] = (tuple(arg_sorts), result)
        object.__setattr__(self, "_by_name", by_name)

    def is_op(self, name: str) -> bool:
        return name in self._by_name

    def arg_sorts(self, name: str) -> tuple[str, ...]:
        return self._by_name[name][0]

    def result_sort(self, name: str) -> str:
        return self._by_name[name][1]

    def app(self, op: str, *args: Term) -> App:
        """Build a well-sorted application, checking arity and argument sorts."""
        if op not in self._by_name:
            raise TermError(f"unknown operation symbol {op!r}")
        arg_sorts, result = self._by_name[op]
        if len(args) != len(arg_sorts):
            raise TermError(f"{op!r} expects {len(arg_sorts)} arguments, got {len(args)}")
        for a, s in zip(args, arg_sorts):
            if a.sort != s:
                raise TermError(f"argument of sort {a.sort!r} where {s!r} expected in {op!r}")
        return App(op, tuple(args), result)


def positions(t: Term) -> list[Position]:
    """All positions of ``t`` in depth-first preorder, root first."""
    out: list[Position] = []

    def walk(u: Term, p: Position):
        out.append(p)
        if isinstance(u, App):
            for i, a in enumerate(u.args, 1):
                walk(a, p + (i,))

    walk(t, ROOT)
    return out


def subterm_at(t: Term, p: Position) -> Term:
    """The subterm of ``t`` at position ``p`` (root = empty position)."""
    u = t
    for i in p:
        if not (isinstance(u, App) and 1 <= i <= len(u.args)):
            raise TermError(f"invalid position {p} in {u!r}")
        u = u.args[i - 1]
    return u


def replace_at(t: Term, p: Position, s: Term) -> Term:
    """Replace the subterm of ``t`` at ``p`` by ``s`` (sorts must agree)."""
    if not p:
        if t.sort != s.sort:
            raise TermError("replacement changes sort")
        return s
    if not (isinstance(t, App) and 1 <= p[0] <= len(t.args)):
        raise TermError(f"invalid position {p} in {t!r}")
    i = p[0]
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return App(t.op, tuple(args), t.sort)


def variables(t: Term) -> list[Var]:
    """Distinct variables of ``t`` in order of first occurrence."""
    seen: dict[str, Var] = {}

    def walk(u: Term):
        if isinstance(u, Var):
            if u.name not in seen:
                seen[u.name] = u
        else:
            for a in u.args:
                walk(a)

    walk(t)
    return list(seen.values())


def var_count(t: Term, name: str) -> int:
    """Number of occurrences of the variable called ``name`` in ``t``."""
    if isinstance(t, Var):
        return 1 if t.name == name else 0
    return sum(var_count(a, name) for a in t.args)


def substitute(t: Term, assignment: Mapping[str, Term]) -> Term:
    """Simultaneous substitution; every variable of ``t`` must be assigned."""
    if isinstance(t, Var):
        if t.name not in assignment:
            raise TermError(f"unbound variable {t.name!r}")
        image = assignment[t.name]
        if image.sort != t.sort:
            raise TermError(f"sort mismatch substituting {image!r} for {t!r}")
        return image
    return App(t.op, tuple(substitute(a, assignment) for a in t.args), t.sort)


def rename_vars(t: Term, mapping: Mapping[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name), t.sort)
    return App(t.op, tuple(rename_vars(a, mapping) for a in t.args), t.sort)


def render_term(t: Term) -> str:
    """Concrete syntax: ``f(a,b)``, constants bare, variables by name."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.op
    return f"{t.op}({','.join(render_term(a) for a in t.args)})"


Context = tuple[tuple[str, str], ...]  # ordered (variable name, sort) pairs


def canonical_name(i: int) -> str:
    return f"x{i}"


@dataclass(frozen=True)
class Morphism:
    """A sorting context together with a tuple of terms over it."""

    context: Context
    terms: tuple[Term, ...]

    def __post_init__(self):
        names = [n for n, _ in self.context]
        if len(set(names)) != len(names):
            raise TermError("duplicate context variable")
        sorts = dict(self.context)
        for t in self.terms:
            for v in variables(t):
                if v.name not in sorts:
                    raise TermError(f"term variable {v.name!r} missing from context")
                if sorts[v.name] != v.sort:
                    raise TermError(f"context sort clash for {v.name!r}")

    @property
    def domain_sorts(self) -> tuple[str, ...]:
        return tuple(s for _, s in self.context)

    @property
    def codomain_sorts(self) -> tuple[str, ...]:
        return tuple(t.sort for t in self.terms)

    @property
    def term(self) -> Term:
        if len(self.terms) != 1:
            raise TermError("morphism is not single-term")
        return self.terms[0]

    def __repr__(self):
        ctx = ",".join(n for n, _ in self.context)
        tms = ",".join(render_term(t) for t in self.terms)
        return f"({ctx}|{tms})"


@dataclass(frozen=True)
class PartialPermutation:
    """An injection from target slots into source context slots (1-based)."""

    selected: tuple[int, ...]
    source: Context

    def __post_init__(self):
        n = len(self.source)
        if len(set(self.selected)) != len(self.selected):
            raise TermError("partial permutation must be injective")
        if any(not 1 <= i <= n for i in self.selected):
            raise TermError("partial permutation index out of range")

    @property
    def is_permutation(self) -> bool:
        return len(self.selected) == len(self.source)

    @property
    def is_identity(self) -> bool:
        return self.selected == tuple(range(1, len(self.source) + 1))

    def as_morphism(self) -> Morphism:
        terms = tuple(Var(*self.source[i - 1]) for i in self.selected)
        return Morphism(self.source, terms)


def identity(context: Context) -> Morphism:
    return Morphism(context, tuple(Var(n, s) for n, s in context))


def projection(context: Context, i: int) -> Morphism:
    """The morphism selecting the ``i``-th context slot (1-based)."""
    return Morphism(context, (Var(*context[i - 1]),))


def compose_raw(f: Morphism, g: Morphism) -> Morphism:
    """Composition by substitution only; no rewriting is performed.

    ``g``'s terms are substituted for ``f``'s context variables, so the
    result lives over ``g``'s context.  The result is not essentialized:
    unused context variables stay in place.
    """
    if f.domain_sorts != g.codomain_sorts:
        raise TermError(
            f"cannot compose: domain {f.domain_sorts} vs codomain {g.codomain_sorts}"
        )
    assignment = {name: t for (name, _), t in zip(f.context, g.terms)}
    return Morphism(g.context, tuple(substitute(t, assignment) for t in f.terms))


def compose_chain(morphisms: Iterable[Morphism]) -> Morphism:
    it: Iterator[Morphism] = iter(morphisms)
    acc = next(it)
    for m in it:
        acc = compose_raw(acc, m)
    return acc


def canonicalize(context: Context, terms: tuple[Term, ...]) -> tuple[Morphism, PartialPermutation]:
    """Factor a raw (context, terms) pair as essential-after-selection.

    Returns the essential part (context restricted to the variables that
    occur, in first-occurrence order, renamed ``x1, x2, ...``) and the
    partial permutation recording which source slots were kept.  Composing
    the essential part with the partial permutation as a morphism restores
    the input up to renaming; canonical input returns itself with the
    identity permutation.
    """
    sorts = dict(context)
    order: list[str] = []
    seen: set[str] = set()

    def scan(u: Term):
        if isinstance(u, Var):
            if u.name not in seen:
                seen.add(u.name)
                order.append(u.name)
        else:
            for a in u.args:
                scan(a)

    probe = Morphism(context, terms)  # validates variable coverage
    for t in probe.terms:
        scan(t)
    renaming = {old: canonical_name(i) for i, old in enumerate(order, 1)}
    new_context = tuple((renaming[old], sorts[old]) for old in order)
    new_terms = tuple(rename_vars(t, renaming) for t in terms)
    index_of = {name: i for i, (name, _) in enumerate(context, 1)}
    selected = tuple(index_of[old] for old in order)
    return Morphism(new_context, new_terms), PartialPermutation(selected, context)


def canonical_morphism(m: Morphism) -> Morphism:
    return canonicalize(m.context, m.terms)[0]


def essential_from_terms(terms: tuple[Term, ...]) -> Morphism:
    """Canonical morphism whose context is exactly the variables occurring."""
    ctx = []
    seen = set()
    for t in terms:
        for v in variables(t):
            if v.name not in seen:
                seen.add(v.name)
                ctx.append((v.name, v.sort))
    return canonical_morphism(Morphism(tuple(ctx), terms))


def is_canonical(m: Morphism) -> bool:
    ess, pp = canonicalize(m.context, m.terms)
    return pp.is_identity and ess == m


def is_partial_permutation(m: Morphism) -> bool:
    """True iff every tuple entry is a variable and entries are distinct."""
    if not all(isinstance(t, Var) for t in m.terms):
        return False
    names = [t.name for t in m.terms]
    return len(set(names)) == len(names)


def is_identity(m: Morphism) -> bool:
    return m.terms == tuple(Var(n, s) for n, s in m.context)


def positional(m: Morphism) -> Morphism:
    """Rename context variables to ``x1..xn`` by slot position.

    Unlike ``canonicalize`` this keeps every context slot, used or not, so
    it is the normal form for subscript and tail morphisms whose domain is
    a fixed object rather than a variable set.
    """
    renaming = {name: canonical_name(i) for i, (name, _) in enumerate(m.context, 1)}
    ctx = tuple((renaming[n], s) for n, s in m.context)
    return Morphism(ctx, tuple(rename_vars(t, renaming) for t in m.terms))


def render_morphism(m: Morphism) -> str:
    return "(" + ",".join(render_term(t) for t in m.terms) + ")"
