"""First-order matching and most general unifiers.

Matching is nonlinear: a pattern variable occurring twice must bind
syntactically equal subjects.  Unification shares variable names between
the two sides and runs the usual occurs-check algorithm; callers that
want the two sides treated independently rename apart beforehand.  The
result is reported as a pair of substitution morphisms together with the
unified term in canonical form, so mgu output is deterministic.

Pure functions throughout; safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    App,
    Morphism,
    Position,
    Term,
    Var,
    canonical_morphism,
    positions,
    rename_vars,
    substitute,
    subterm_at,
    variables,
)

__all__ = [
    "Subst",
    "Unifier",
    "generalized_subterm_occurrences",
    "match_term",
    "match_tuple",
    "mgu",
    "unify_terms",
]

Subst = dict[str, Term]


def match_term(pattern: Term, subject: Term) -> Subst | None:
    """A substitution sending ``pattern`` to ``subject``, or None."""
    binding: Subst = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            if p.sort != s.sort:
                return None
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = s
            elif bound != s:
                return None
        else:
            if not (isinstance(s, App) and s.op == p.op and len(s.args) == len(p.args)):
                return None
            stack.extend(zip(p.args, s.args))
    return binding


def match_tuple(patterns: tuple[Term, ...], subjects: tuple[Term, ...]) -> Subst | None:
    """Componentwise nonlinear match of term tuples."""
    if len(patterns) != len(subjects):
        return None
    binding: Subst = {}
    for p, s in zip(patterns, subjects):
        sub = match_term(p, s)
        if sub is None:
            return None
        for k, v in sub.items():
            if binding.setdefault(k, v) != v:
                return None
    return binding


def _occurs(name: str, t: Term, binding: Subst) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            if u.name == name:
                return True
            if u.name in binding:
                stack.append(binding[u.name])
        else:
            stack.extend(u.args)
    return False


def unify_terms(t: Term, s: Term) -> Subst | None:
    """Most general substitution (shared namespace) with ``σt = σs``.

    Occurs check enforced.  The result maps every bound variable to a
    fully resolved term; unbound variables are simply absent.
    """
    binding: Subst = {}

    def walk(u: Term) -> Term:
        while isinstance(u, Var) and u.name in binding:
            u = binding[u.name]
        return u

    stack = [(t, s)]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if a == b:
            continue
        if isinstance(a, Var) or isinstance(b, Var):
            if isinstance(b, Var) and not isinstance(a, Var):
                a, b = b, a
            if a.sort != b.sort or _occurs(a.name, b, binding):
                return None
            binding[a.name] = b
        else:
            if a.op != b.op or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))

    def resolve(u: Term) -> Term:
        u = walk(u)
        if isinstance(u, Var):
            return u
        return App(u.op, tuple(resolve(x) for x in u.args), u.sort)

    return {name: resolve(image) for name, image in binding.items()}


@dataclass(frozen=True)
class Unifier:
    """Substitution morphisms for both sides plus the unified canonical term."""

    left: Morphism
    right: Morphism
    unified: Morphism


def mgu(t: Term, s: Term) -> Unifier | None:
    """Most general unifier of two terms of the same sort, or None.

    Variable names are shared between the two sides, so unifying ``x``
    with ``f(x)`` fails the occurs check; callers wanting independent
    contexts rename apart first.  The unified term is returned essential
    with canonical variable naming, and the two substitutions are
    expressed over each term's own context (first-occurrence order).
    """
    if t.sort != s.sort:
        return None
    sigma = unify_terms(t, s)
    if sigma is None:
        return None

    def image(v: Var) -> Term:
        return sigma.get(v.name, Var(v.name, v.sort))

    t_vars = variables(t)
    s_vars = variables(s)
    left_raw = tuple(image(v) for v in t_vars)
    right_raw = tuple(image(v) for v in s_vars)
    unified_raw = substitute(t, {v.name: img for v, img in zip(t_vars, left_raw)})

    # One canonical renaming, fixed by the unified term, applied everywhere.
    raw_vars = variables(unified_raw)
    unified = canonical_morphism(
        Morphism(tuple((v.name, v.sort) for v in raw_vars), (unified_raw,))
    )
    renaming = {old.name: new for old, (new, _) in zip(raw_vars, unified.context)}
    # The substitutions are morphisms from the unified domain into each
    # term's context, so their tuple slots follow the original contexts.
    left = Morphism(unified.context, tuple(rename_vars(u, renaming) for u in left_raw))
    right = Morphism(unified.context, tuple(rename_vars(u, renaming) for u in right_raw))
    return Unifier(left=left, right=right, unified=unified)


def generalized_subterm_occurrences(tp: Term, t: Term) -> list[tuple[Position, Subst]]:
    """All positions of ``t`` where an instance of ``tp`` occurs."""
    out = []
    for p in positions(t):
        sub = subterm_at(t, p)
        if sub.sort != tp.sort:
            continue
        sigma = match_term(tp, sub)
        if sigma is not None:
            out.append((p, sigma))
    return out
