"""Enumeration of the critical generators ("chains") of the collapsed
bar resolution of a reduced complete rewrite system.

A cell of dimension n is a tuple of n composable canonical morphisms,
each essential and not an identity, whose first entry has a single-sort
codomain; entries are stored in normal form.  Dimension 0 cells are one
per sort.  Chains are the cells surviving the collapse:

* dimension 0: one chain per sort,
* dimension 1: one chain per operation symbol (applied to fresh
  variables, provided that pattern is a normal form),
* dimension 2: one chain per rewrite rule (head symbol followed by the
  argument tuple of the left-hand side),
* dimension n+1: extensions of an n-chain by the most general way of
  creating a strictly larger maximal redex in its raw composite.

Redexes are indexed by (position, rule rank) pairs ordered
lexicographically: a proper prefix precedes its extensions and siblings
compare numerically, then the rule order breaks ties.  ``max_redex`` of
an irreducible term is None, the bottom of the order.

Enumeration of one dimension from the previous one is an independent
per-chain task; results are merged in a canonical cell order so the
output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rewrite import Rule, Trs, certify, is_irreducible, op_morphism
from .terms import (
    Morphism,
    Position,
    Term,
    TermError,
    Var,
    canonical_morphism,
    compose_chain,
    compose_raw,
    is_canonical,
    is_partial_permutation,
    positions,
    render_morphism,
    rename_vars,
    subterm_at,
    variables,
)
from .unify import match_term, unify_terms

RedexIndex = tuple[Position, int]  # (position, rule rank); None plays bottom


@dataclass(frozen=True)
class Cell:
    """A tuple of composable canonical morphisms over a base sort."""

    sort: str
    entries: tuple[Morphism, ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __repr__(self):
        if not self.entries:
            return f"<>{self.sort}"
        return "<" + "; ".join(render_morphism(m) for m in self.entries) + ">"


def cell_key(cell: Cell) -> tuple:
    return (cell.sort, tuple(repr(m) for m in cell.entries))


def composite(cell: Cell, trs: Trs, upto: int | None = None) -> Morphism:
    """Raw composite of the first ``upto`` entries (no rewriting)."""
    upto = cell.dim if upto is None else upto
    cache = trs.cache("composite")
    key = (cell.sort, cell.entries[:upto])
    hit = cache.get(key)
    if hit is None:
        hit = compose_chain(cell.entries[:upto])
        cache[key] = hit
    return hit


def redex_set(t: Term, trs: Trs) -> set[RedexIndex]:
    """All (position, rule rank) pairs where a rule instance occurs."""
    out = set()
    for p in positions(t):
        sub = subterm_at(t, p)
        if isinstance(sub, Var):
            continue
        for rank, rule in enumerate(trs.rules):
            if match_term(rule.lhs, sub) is not None:
                out.add((p, rank))
    return out


def max_redex(t: Term, trs: Trs) -> RedexIndex | None:
    """Greatest redex index of ``t``; None iff ``t`` is irreducible."""
    redexes = redex_set(t, trs)
    return max(redexes) if redexes else None


def redex_less(a: RedexIndex | None, b: RedexIndex | None) -> bool:
    """Strict order with None as bottom."""
    if b is None:
        return False
    if a is None:
        return True
    return a < b


def valid_entry(m: Morphism, trs: Trs) -> bool:
    """Usable as a cell entry: canonical, not a selection of variables
    (which rules out identities), all components in normal form."""
    if is_partial_permutation(m):
        return False
    if not is_canonical(m):
        return False
    return all(is_irreducible(t, trs) for t in m.terms)


def mgu_extension(T: Morphism, p: Position, rule: Rule, trs: Trs) -> Morphism | None:
    """Most general substitution tuple unifying ``T``'s subterm at ``p``
    with the rule's left-hand side, expressed over ``T``'s full context.

    Context variables not constrained by the unification stay as fresh
    distinct variables.  Returns the canonical morphism, or None when the
    subterm is a variable or the unification fails.
    """
    sub = subterm_at(T.term, p)
    if isinstance(sub, Var):
        return None
    apart = {v.name: v.name + "'" for v in variables(rule.lhs)}
    sigma = unify_terms(sub, rename_vars(rule.lhs, apart))
    if sigma is None:
        return None
    terms = tuple(sigma.get(name, Var(name, sort)) for name, sort in T.context)
    return canonical_morphism(
        Morphism(_covering_context(terms), terms)
    )


def _covering_context(terms: tuple[Term, ...]):
    ctx = []
    seen = set()
    for t in terms:
        for v in variables(t):
            if v.name not in seen:
                seen.add(v.name)
                ctx.append((v.name, v.sort))
    return tuple(ctx)


def sigma_cell_entry(m: Morphism, trs: Trs) -> str | None:
    """The operation symbol when ``m`` applies one symbol to its context
    variables in order, else None."""
    if len(m.terms) != 1:
        return None
    t = m.terms[0]
    if isinstance(t, Var):
        return None
    if t.args == tuple(Var(n, s) for n, s in m.context):
        return t.op
    return None


def chain_step(T: Morphism, entry: Morphism, trs: Trs) -> bool:
    """Does ``entry`` extend the chain whose raw composite so far is ``T``?

    The composite with ``entry`` must have a strictly larger maximal redex
    (p, l), located at a non-variable position of ``T`` itself, and
    ``entry`` must be exactly the most general unifier component of
    ``T`` at ``p`` against ``l``.
    """
    base = max_redex(T.term, trs)
    comp = compose_raw(T, entry)
    top = max_redex(comp.term, trs)
    if top is None or not redex_less(base, top):
        return False
    p, rank = top
    try:
        sub = subterm_at(T.term, p)
    except TermError:
        return False
    if isinstance(sub, Var):
        return False
    return mgu_extension(T, p, trs.rules[rank], trs) == entry


def longest_chain_prefix(cell: Cell, trs: Trs) -> int:
    """Number of leading entries that form a chain (0..dim)."""
    cache = trs.cache("prefix")
    hit = cache.get(cell)
    if hit is not None:
        return hit
    n = 0
    for k, entry in enumerate(cell.entries, 1):
        if k == 1:
            ok = sigma_cell_entry(entry, trs) is not None
        else:
            ok = chain_step(composite(cell, trs, k - 1), entry, trs)
        if not ok:
            break
        n = k
    cache[cell] = n
    return n


def chain_prefix_length(cell: Cell, trs: Trs) -> int:
    """Largest L in 1..dim such that the first L-1 entries are a chain."""
    return min(longest_chain_prefix(cell, trs) + 1, cell.dim)


def is_chain(cell: Cell, trs: Trs) -> bool:
    if cell.dim == 0:
        return True
    return longest_chain_prefix(cell, trs) == cell.dim


def chain_extensions(T: Morphism, trs: Trs) -> list[Morphism]:
    """All valid entries extending the chain with raw composite ``T``."""
    base = max_redex(T.term, trs)
    out = []
    for p in positions(T.term):
        if isinstance(subterm_at(T.term, p), Var):
            continue
        for rank, rule in enumerate(trs.rules):
            if not redex_less(base, (p, rank)):
                continue
            u = mgu_extension(T, p, rule, trs)
            if u is None or not valid_entry(u, trs):
                continue
            if max_redex(compose_raw(T, u).term, trs) != (p, rank):
                continue
            out.append(u)
    return out


def enumerate_chains(trs: Trs, max_dim: int) -> dict[int, list[Cell]]:
    """Chains per dimension, 0..max_dim, each list in canonical order.

    Requires the system to certify as reduced and complete.
    """
    certify(trs)
    sig = trs.signature
    chains: dict[int, list[Cell]] = {0: [Cell(s, ()) for s in sig.sorts]}
    if max_dim >= 1:
        ops = []
        for name, _, result in sig.ops:
            m = op_morphism(sig, name)
            if is_irreducible(m.term, trs):
                ops.append(Cell(result, (m,)))
        chains[1] = sorted(ops, key=cell_key)
    for dim in range(2, max_dim + 1):
        new: list[Cell] = []
        for cell in chains[dim - 1]:
            T = composite(cell, trs)
            for u in chain_extensions(T, trs):
                new.append(Cell(cell.sort, cell.entries + (u,)))
        chains[dim] = sorted(new, key=cell_key)
    return chains
