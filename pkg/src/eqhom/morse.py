"""Collapsing machinery: the normalized boundary, the classification of
cells as critical, redundant or collapsible, and the collapsed
differential computed by routing boundary terms through matched pairs.

The boundary of a cell is a signed sum of faces: face 0 differentiates
the head entry (one summand per component of the second entry, with a
derivative coefficient), the middle faces compose adjacent entries and
re-normalize, and the last face drops the tail entry and emits its
restriction as a coefficient.  Faces that are not valid cells are
repaired: a face containing a variable-selection entry dies, and
otherwise the leftmost non-canonical entry is factored into its
essential part, pushing the leftover selection rightward until it either
dies, is absorbed, or falls off the end as a restriction coefficient.

Classification pairs every non-critical cell with a partner one
dimension up (split) or down (merge); the matched boundary coefficient
is always plus or minus one.  The collapsed differential of a critical
cell routes every boundary term through these pairs until only critical
cells remain; termination is guaranteed for a certified system and is
enforced with a step budget.

Two coefficient modes are supported: ``"symbolic"`` tracks ringoid
elements, ``"count"`` tracks their signed monomial counts (the tensoring
used for homology matrices).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .chains import (
    Cell,
    chain_prefix_length,
    composite,
    is_chain,
    max_redex,
    mgu_extension,
    valid_entry,
)
from .coeff import (
    RingoidElement,
    expand_derivative,
    identity_element,
    multiply,
    star,
)
from .rewrite import BudgetExceeded, Trs, normal_form_morphism, op_morphism
from .terms import (
    App,
    Context,
    Morphism,
    TermError,
    Var,
    canonical_name,
    canonicalize,
    compose_chain,
    compose_raw,
    identity,
    is_canonical,
    is_identity,
    is_partial_permutation,
    projection,
    subterm_at,
    var_count,
)
from .unify import match_tuple

Coeff = Union[int, RingoidElement]
Boundary = dict[Cell, Coeff]

DEFAULT_ROUTE_BUDGET = 200_000


class MatchingError(Exception):
    """The critical/redundant/collapsible trichotomy failed (a bug, or the
    input system was not actually complete)."""


@dataclass(frozen=True)
class CellClass:
    kind: str  # "critical" | "redundant" | "collapsible"
    partner: Cell | None = None
    epsilon: int | None = None


def cell_domain(cell: Cell) -> Context:
    if cell.entries:
        return cell.entries[-1].context
    return ((canonical_name(1), cell.sort),)


def _one(cell: Cell, mode: str) -> Coeff:
    if mode == "count":
        return 1
    return identity_element(cell_domain(cell))


def _combine(a: Coeff, b: Coeff, trs: Trs, mode: str) -> Coeff:
    if mode == "count":
        return a * b
    return multiply(a, b, trs)


def _scale(a: Coeff, k: int) -> Coeff:
    if isinstance(a, int):
        return a * k
    return a.scale(k)


def _is_zero(a: Coeff) -> bool:
    return a == 0 if isinstance(a, int) else a.is_zero


def _add_term(acc: Boundary, cell: Cell, coeff: Coeff):
    if cell in acc:
        new = acc[cell] + coeff
        if _is_zero(new):
            del acc[cell]
        else:
            acc[cell] = new
    elif not _is_zero(coeff):
        acc[cell] = coeff


def _phi(entries: tuple[Morphism, ...]) -> tuple[tuple[Morphism, ...], Morphism | None] | None:
    """Repair a face tuple into a cell, or kill it.

    Returns (cell entries, leftover selection morphism or None); None
    altogether when some entry is a selection of variables (identities
    included), which makes the face vanish.
    """
    work = list(entries)
    while True:
        if any(is_partial_permutation(e) for e in work):
            return None
        bad = next((k for k, e in enumerate(work) if not is_canonical(e)), None)
        if bad is None:
            return tuple(work), None
        ess, pp = canonicalize(work[bad].context, work[bad].terms)
        pi = pp.as_morphism()
        work[bad] = ess
        if bad + 1 < len(work):
            work[bad + 1] = compose_raw(pi, work[bad + 1])
        else:
            if is_partial_permutation(ess):
                return None
            return tuple(work), pi


def _component(m: Morphism, i: int) -> Morphism:
    """The ``i``-th component (1-based) over the full context."""
    return Morphism(m.context, (m.terms[i - 1],))


def normalized_boundary(cell: Cell, trs: Trs, mode: str = "count") -> Boundary:
    """Signed boundary of a cell over cells one dimension down."""
    cache = trs.cache("boundary_" + mode)
    hit = cache.get(cell)
    if hit is not None:
        return dict(hit)
    out = _normalized_boundary(cell, trs, mode)
    cache[cell] = dict(out)
    return out


def _normalized_boundary(cell: Cell, trs: Trs, mode: str) -> Boundary:
    n = cell.dim
    if n < 1:
        raise ValueError("boundary needs dimension at least 1")
    entries = cell.entries
    acc: Boundary = {}

    if n == 1:
        head = entries[0]
        for i, (name, sort) in enumerate(head.context, 1):
            target = Cell(sort, ())
            if mode == "count":
                coeff: Coeff = var_count(head.term, name)
            else:
                coeff = multiply(
                    expand_derivative(i, head, identity(head.context), trs),
                    star(projection(head.context, i), trs),
                    trs,
                )
            _add_term(acc, target, coeff)
        codomain = Cell(cell.sort, ())
        if mode == "count":
            _add_term(acc, codomain, -1)
        else:
            _add_term(acc, codomain, star(head, trs).scale(-1))
        return acc

    head, second = entries[0], entries[1]
    rest = compose_chain(entries[2:]) if n > 2 else None

    # face 0: differentiate the head across the second entry's components;
    # these faces live over the component's sort, not the cell's
    for i in range(1, len(second.terms) + 1):
        face = (_component(second, i),) + entries[2:]
        repaired = _phi(face)
        if repaired is None:
            continue
        new_entries, leftover = repaired
        if mode == "count":
            coeff = var_count(head.term, head.context[i - 1][0])
        else:
            subscript = compose_raw(second, rest) if rest is not None else second
            coeff = expand_derivative(i, head, subscript, trs)
            if leftover is not None:
                coeff = multiply(coeff, star(leftover, trs), trs)
        _add_term(acc, Cell(second.terms[i - 1].sort, new_entries), coeff)

    # middle faces: compose adjacent entries and re-normalize
    for j in range(1, n):
        merged = normal_form_morphism(compose_raw(entries[j - 1], entries[j]), trs)
        face = entries[: j - 1] + (merged,) + entries[j + 1 :]
        repaired = _phi(face)
        if repaired is None:
            continue
        new_entries, leftover = repaired
        sign = -1 if j % 2 else 1
        if mode == "count":
            coeff = sign
        else:
            coeff = identity_element(cell_domain(cell)).scale(sign)
            if leftover is not None:
                coeff = multiply(coeff, star(leftover, trs), trs)
        _add_term(acc, Cell(cell.sort, new_entries), coeff)

    # last face: drop the tail entry, emit its restriction
    sign = -1 if n % 2 else 1
    target = Cell(cell.sort, entries[: n - 1])
    if mode == "count":
        coeff = sign
    else:
        coeff = star(entries[n - 1], trs).scale(sign)
    _add_term(acc, target, coeff)
    return acc


def _try_split(cell: Cell, trs: Trs) -> Cell | None:
    """The partner one dimension up, when the cell is a matched target."""
    if is_chain(cell, trs):
        return None
    entries = cell.entries
    n = cell.dim
    L = chain_prefix_length(cell, trs)
    if L == 1:
        head = entries[0]
        term = head.term
        assert isinstance(term, App) and term.args, "cell head must split"
        f = op_morphism(trs.signature, term.op)
        args = Morphism(head.context, term.args)
        assert is_canonical(args) and not is_partial_permutation(args)
        return Cell(cell.sort, (f, args) + entries[1:])
    T = composite(cell, trs, L - 1)
    tL = entries[L - 1]
    top = max_redex(compose_raw(T, tL).term, trs)
    if top is None:
        return None
    p, rank = top
    try:
        sub = subterm_at(T.term, p)
    except TermError:
        return None
    if isinstance(sub, Var):
        return None
    u = mgu_extension(T, p, trs.rules[rank], trs)
    if u is None or not valid_entry(u, trs):
        return None
    binding = match_tuple(u.terms, tL.terms)
    if binding is None:
        return None
    w = Morphism(tL.context, tuple(binding[name] for name, _ in u.context))
    if is_partial_permutation(w):
        return None
    assert is_canonical(w), "split remainder should be canonical"
    return Cell(cell.sort, entries[: L - 1] + (u, w) + entries[L:])


def _find_merge(cell: Cell, trs: Trs) -> Cell | None:
    """The partner one dimension down, when the cell is a matched source."""
    entries = cell.entries
    n = cell.dim
    found = []
    for j in range(1, n):
        merged = normal_form_morphism(compose_raw(entries[j - 1], entries[j]), trs)
        if is_partial_permutation(merged) or not is_canonical(merged):
            continue
        target = Cell(cell.sort, entries[: j - 1] + (merged,) + entries[j + 1 :])
        if chain_prefix_length(target, trs) != j:
            continue
        if _try_split(target, trs) == cell:
            found.append(target)
    if len(found) > 1:
        raise MatchingError(f"cell {cell!r} splits two targets: {found!r}")
    return found[0] if found else None


def classify(cell: Cell, trs: Trs) -> CellClass:
    """Critical, redundant-with-partner or collapsible-with-partner.

    The matched sign is read off the partner's boundary; it must be +1 or
    -1, and no cell may qualify both ways.
    """
    cache = trs.cache("classify")
    hit = cache.get(cell)
    if hit is not None:
        return hit
    result = _classify(cell, trs)
    cache[cell] = result
    return result


def _classify(cell: Cell, trs: Trs) -> CellClass:
    if cell.dim == 0 or is_chain(cell, trs):
        return CellClass("critical")
    split = _try_split(cell, trs)
    merge = _find_merge(cell, trs)
    if split is not None and merge is not None:
        raise MatchingError(f"cell {cell!r} is both redundant and collapsible")
    if split is not None:
        eps = _matched_sign(normalized_boundary(split, trs, "count").get(cell))
        return CellClass("redundant", split, eps)
    if merge is not None:
        eps = _matched_sign(normalized_boundary(cell, trs, "count").get(merge))
        return CellClass("collapsible", merge, eps)
    raise MatchingError(f"cell {cell!r} is neither critical, redundant nor collapsible")


def _matched_sign(coeff: Coeff | None) -> int:
    if coeff not in (1, -1):
        raise MatchingError(f"matched coefficient {coeff!r} is not a unit")
    return coeff


def _matched_sign_symbolic(coeff: RingoidElement) -> int:
    if len(coeff.terms) != 1:
        raise MatchingError(f"matched coefficient {coeff!r} is not a unit")
    mono, c = coeff.terms[0]
    if mono.factors or not is_identity(mono.tail) or c not in (1, -1):
        raise MatchingError(f"matched coefficient {coeff!r} is not a unit")
    return c


def express_critical(cell: Cell, trs: Trs, mode: str = "count",
                     budget: int = DEFAULT_ROUTE_BUDGET) -> Boundary:
    """Write the cell's class in the collapsed complex: a combination of
    critical cells of the same dimension obtained by routing through
    matched pairs.  Critical cells map to themselves, collapsible cells
    to zero."""
    counter = [budget]
    return _express(cell, trs, mode, counter)


def _express(cell: Cell, trs: Trs, mode: str, counter: list[int]) -> Boundary:
    cache = trs.cache("express_" + mode)
    hit = cache.get(cell)
    if hit is not None:
        return dict(hit)
    counter[0] -= 1
    if counter[0] < 0:
        raise BudgetExceeded("routing budget exhausted; matching may not terminate")
    cls = classify(cell, trs)
    if cls.kind == "critical":
        out: Boundary = {cell: _one(cell, mode)}
    elif cls.kind == "collapsible":
        out = {}
    else:
        partner = cls.partner
        bd = normalized_boundary(partner, trs, mode)
        eps = cls.epsilon if mode == "count" else _matched_sign_symbolic(bd[cell])
        out = {}
        for face, coeff in bd.items():
            if face == cell:
                continue
            routed = _express(face, trs, mode, counter)
            for crit, w in routed.items():
                _add_term(out, crit, _scale(_combine(coeff, w, trs, mode), -eps))
    cache[cell] = dict(out)
    return out


def morse_differential(cell: Cell, trs: Trs, mode: str = "count",
                       budget: int = DEFAULT_ROUTE_BUDGET) -> Boundary:
    """Differential of a critical cell in the collapsed complex."""
    cache = trs.cache("morse_" + mode)
    hit = cache.get(cell)
    if hit is not None:
        return dict(hit)
    counter = [budget]
    out: Boundary = {}
    for face, coeff in normalized_boundary(cell, trs, mode).items():
        for crit, w in _express(face, trs, mode, counter).items():
            _add_term(out, crit, _combine(coeff, w, trs, mode))
    cache[cell] = dict(out)
    return dict(out)
