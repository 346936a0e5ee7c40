"""Classical chain enumeration and homology for monoids presented by
complete string rewriting systems.

This is the one-sorted, one-operation-per-letter sibling of the term
machinery: cells are tuples of nonempty irreducible words, a cell is a
chain when every consecutive concatenation first becomes reducible
exactly at its right end, and the collapse pairs each non-chain cell
with the unique way of splitting the entry after its longest chain
prefix at the earliest reducible point.  The collapsed complex of the
trivial coefficients has one free generator per chain, and its integral
homology is the monoid's homology.

Coefficients are elements of the monoid ring, stored as formal sums over
irreducible words; the counting mode maps every monoid element to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .homology import BoundaryMatrix, HomologyGroup, homology_group
from .rewrite import BudgetExceeded, CompletenessError

Word = tuple[str, ...]
EMPTY: Word = ()


@dataclass(frozen=True)
class SrsRule:
    name: str
    lhs: Word
    rhs: Word

    def __post_init__(self):
        if not self.lhs:
            raise ValueError(f"rule {self.name}: empty left-hand side")


@dataclass(frozen=True, eq=False)
class Srs:
    alphabet: tuple[str, ...]
    rules: tuple[SrsRule, ...]
    step_budget: int = 10_000
    caches: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters")
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise ValueError("duplicate rule names")
        for r in self.rules:
            for c in r.lhs + r.rhs:
                if c not in self.alphabet:
                    raise ValueError(f"rule {r.name}: letter {c!r} not declared")

    def __eq__(self, other):
        return (isinstance(other, Srs) and self.alphabet == other.alphabet
                and self.rules == other.rules)

    def __hash__(self):
        return hash((self.alphabet, self.rules))

    def cache(self, kind: str) -> dict:
        return self.caches.setdefault(kind, {})


WordCell = tuple[Word, ...]
WordCoeff = Union[int, dict]  # count, or formal sum {word: int}


def render_word(w: Word) -> str:
    return " ".join(w) if w else "ε"


def find_redex(w: Word, srs: Srs) -> tuple[int, SrsRule] | None:
    """Leftmost (then longest-rule-first by declaration order) redex."""
    for i in range(len(w)):
        for rule in srs.rules:
            if w[i:i + len(rule.lhs)] == rule.lhs:
                return i, rule
    return None


def reduce_word(w: Word, srs: Srs) -> Word:
    cache = srs.cache("nf")
    hit = cache.get(w)
    if hit is not None:
        return hit
    start = w
    for _ in range(srs.step_budget):
        hit = cache.get(w)
        if hit is not None:
            cache[start] = hit
            return hit
        redex = find_redex(w, srs)
        if redex is None:
            cache[start] = w
            cache[w] = w
            return w
        i, rule = redex
        w = w[:i] + rule.rhs + w[i + len(rule.lhs):]
    raise BudgetExceeded(f"word reduction budget exhausted on {render_word(start)}")


def is_irreducible_word(w: Word, srs: Srs) -> bool:
    return find_redex(w, srs) is None


@dataclass
class SrsReport:
    reduced: bool
    reducedness_failures: list[str]
    locally_confluent: bool
    unjoinable: list[tuple[Word, Word]]
    termination_probe_ok: bool

    @property
    def certified(self) -> bool:
        return self.reduced and self.locally_confluent and self.termination_probe_ok


def check_complete_srs(srs: Srs) -> SrsReport:
    failures = []
    for r in srs.rules:
        rest = Srs(srs.alphabet, tuple(x for x in srs.rules if x is not r), srs.step_budget)
        if not is_irreducible_word(r.lhs, rest):
            failures.append(f"lhs of {r.name} reducible by another rule")
        if not is_irreducible_word(r.rhs, srs):
            failures.append(f"rhs of {r.name} not in normal form")
    unjoinable = []
    probe_ok = True
    try:
        for a, b in _word_critical_pairs(srs):
            if reduce_word(a, srs) != reduce_word(b, srs):
                unjoinable.append((a, b))
    except BudgetExceeded:
        probe_ok = False
    if probe_ok:
        try:
            for r in srs.rules:
                reduce_word(r.rhs, srs)
                reduce_word(r.lhs, srs)
            for a in srs.alphabet:  # small generic sample
                w: Word = (a,) * 4
                reduce_word(w, srs)
        except BudgetExceeded:
            probe_ok = False
    return SrsReport(not failures, failures, not unjoinable, unjoinable, probe_ok)


def _word_critical_pairs(srs: Srs):
    for r1 in srs.rules:
        for r2 in srs.rules:
            l1, l2 = r1.lhs, r2.lhs
            # boundary overlaps: a proper suffix of l1 is a proper prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    left = r1.rhs + l2[k:]
                    right = l1[:-k] + r2.rhs
                    yield left, right
            # containment: l2 occurs inside l1
            if r1 is not r2 or len(l2) < len(l1):
                for i in range(len(l1) - len(l2) + 1):
                    if r1 is r2 and i == 0 and len(l1) == len(l2):
                        continue
                    if l1[i:i + len(l2)] == l2:
                        left = r1.rhs
                        right = l1[:i] + r2.rhs + l1[i + len(l2):]
                        yield left, right


def certify_srs(srs: Srs) -> SrsReport:
    cache = srs.cache("certify")
    report = cache.get("report")
    if report is None:
        report = check_complete_srs(srs)
        cache["report"] = report
    if not report.certified:
        raise CompletenessError("string system is not certified reduced complete")
    return report


def chain_tails(last: Word, srs: Srs) -> list[Word]:
    """Words v such that appending v to ``last`` creates a redex ending
    exactly at the end, with every proper prefix irreducible."""
    out = set()
    for rule in srs.rules:
        l = rule.lhs
        for k in range(1, len(l)):
            if len(last) >= k and last[-k:] == l[:k]:
                v = l[k:]
                w = last + v
                if (is_irreducible_word(v, srs)
                        and all(is_irreducible_word(w[:j], srs) for j in range(len(w)))):
                    out.add(v)
    return sorted(out)


def enumerate_word_chains(srs: Srs, max_dim: int) -> dict[int, list[WordCell]]:
    """Chains per dimension: the empty cell, the letters, and inductive
    extensions by ``chain_tails``.  Requires certification."""
    certify_srs(srs)
    chains: dict[int, list[WordCell]] = {0: [()]}
    if max_dim >= 1:
        chains[1] = [((a,),) for a in srs.alphabet if is_irreducible_word((a,), srs)]
    for dim in range(2, max_dim + 1):
        new = []
        for cell in chains[dim - 1]:
            for v in chain_tails(cell[-1], srs):
                new.append(cell + (v,))
        chains[dim] = sorted(new)
    return chains


def is_word_chain(cell: WordCell, srs: Srs) -> bool:
    return longest_word_chain_prefix(cell, srs) == len(cell)


def longest_word_chain_prefix(cell: WordCell, srs: Srs) -> int:
    n = 0
    for k, w in enumerate(cell, 1):
        if not w or not is_irreducible_word(w, srs):
            break
        if k == 1:
            ok = len(w) == 1
        else:
            ok = w in chain_tails(cell[k - 2], srs)
        if not ok:
            break
        n = k
    return n


@dataclass(frozen=True)
class WordCellClass:
    kind: str
    partner: WordCell | None = None
    epsilon: int | None = None


def classify_word_cell(cell: WordCell, srs: Srs) -> WordCellClass:
    cache = srs.cache("classify")
    hit = cache.get(cell)
    if hit is None:
        hit = _classify_word_cell(cell, srs)
        cache[cell] = hit
    return hit


def _classify_word_cell(cell: WordCell, srs: Srs) -> WordCellClass:
    n = len(cell)
    if is_word_chain(cell, srs):
        return WordCellClass("critical")
    i = longest_word_chain_prefix(cell, srs)
    # split the entry after the chain prefix at the earliest reducible point
    split = None
    u = cell[i]
    if i == 0:
        if len(u) >= 2:
            split = ((u[:1], u[1:]), 0)
    else:
        prev = cell[i - 1]
        for k in range(1, len(u)):
            head, tail = u[:k], u[k:]
            if not is_irreducible_word(prev + head, srs):
                if all(is_irreducible_word((prev + head)[:j], srs)
                       for j in range(len(prev + head))):
                    split = ((head, tail), i)
                break
    if split is not None:
        (head, tail), at = split
        partner = cell[:at] + (head, tail) + cell[at + 1:]
        eps = _word_matched_sign(word_boundary(partner, srs, "count").get(cell))
        return WordCellClass("redundant", partner, eps)
    # collapsible: the unique merge whose split recovers the cell
    found = []
    for j in range(1, n):
        merged = cell[j - 1] + cell[j]
        if not is_irreducible_word(merged, srs):
            continue
        target = cell[:j - 1] + (merged,) + cell[j + 1:]
        if longest_word_chain_prefix(target, srs) != j - 1:
            continue
        back = _classify_word_cell_split_only(target, srs)
        if back == cell:
            found.append(target)
    if len(found) > 1:
        raise ValueError(f"word cell {cell!r} splits two targets")
    if found:
        target = found[0]
        eps = _word_matched_sign(word_boundary(cell, srs, "count").get(target))
        return WordCellClass("collapsible", target, eps)
    raise ValueError(f"word cell {cell!r} is neither critical, redundant nor collapsible")


def _classify_word_cell_split_only(cell: WordCell, srs: Srs) -> WordCell | None:
    i = longest_word_chain_prefix(cell, srs)
    if i >= len(cell):
        return None
    u = cell[i]
    if i == 0:
        return (u[:1], u[1:]) + cell[1:] if len(u) >= 2 else None
    prev = cell[i - 1]
    for k in range(1, len(u)):
        head, tail = u[:k], u[k:]
        if not is_irreducible_word(prev + head, srs):
            if all(is_irreducible_word((prev + head)[:j], srs)
                   for j in range(len(prev + head))):
                return cell[:i] + (head, tail) + cell[i + 1:]
            return None
    return None


def _word_matched_sign(coeff) -> int:
    value = coeff if isinstance(coeff, int) else _count_of(coeff)
    if value not in (1, -1):
        raise ValueError(f"matched word coefficient {coeff!r} is not a unit")
    return value


def _count_of(c: WordCoeff) -> int:
    return c if isinstance(c, int) else sum(c.values())


def _coeff_one(mode: str) -> WordCoeff:
    return 1 if mode == "count" else {EMPTY: 1}


def _coeff_word(w: Word, mode: str, srs: Srs) -> WordCoeff:
    return 1 if mode == "count" else {reduce_word(w, srs): 1}


def _coeff_add(acc: dict, cell: WordCell, c: WordCoeff):
    if cell not in acc:
        if not _coeff_is_zero(c):
            acc[cell] = c
        return
    cur = acc[cell]
    if isinstance(cur, int):
        new: WordCoeff = cur + c
    else:
        new = dict(cur)
        for w, k in c.items():
            new[w] = new.get(w, 0) + k
            if new[w] == 0:
                del new[w]
    if _coeff_is_zero(new):
        del acc[cell]
    else:
        acc[cell] = new


def _coeff_is_zero(c: WordCoeff) -> bool:
    return c == 0 if isinstance(c, int) else not c


def _coeff_mul(a: WordCoeff, b: WordCoeff, srs: Srs) -> WordCoeff:
    if isinstance(a, int):
        return a * b
    out: dict = {}
    for wa, ka in a.items():
        for wb, kb in b.items():
            w = reduce_word(wa + wb, srs)
            out[w] = out.get(w, 0) + ka * kb
            if out[w] == 0:
                del out[w]
    return out


def _coeff_scale(a: WordCoeff, k: int) -> WordCoeff:
    if isinstance(a, int):
        return a * k
    return {w: v * k for w, v in a.items()}


def word_boundary(cell: WordCell, srs: Srs, mode: str = "count") -> dict[WordCell, WordCoeff]:
    """Bar-resolution boundary with identity entries dropped: act by the
    first word, merge adjacent words, drop the last word."""
    n = len(cell)
    acc: dict[WordCell, WordCoeff] = {}
    _coeff_add(acc, cell[1:], _coeff_word(cell[0], mode, srs))
    for j in range(1, n):
        merged = reduce_word(cell[j - 1] + cell[j], srs)
        if not merged:
            continue  # identity entry, degenerate face
        sign = -1 if j % 2 else 1
        _coeff_add(acc, cell[:j - 1] + (merged,) + cell[j + 1:],
                   _coeff_scale(_coeff_one(mode), sign))
    sign = -1 if n % 2 else 1
    _coeff_add(acc, cell[:n - 1], _coeff_scale(_coeff_one(mode), sign))
    return acc


def word_express_critical(cell: WordCell, srs: Srs, mode: str,
                          counter: list[int]) -> dict[WordCell, WordCoeff]:
    cache = srs.cache("express_" + mode)
    hit = cache.get(cell)
    if hit is not None:
        return dict(hit)
    counter[0] -= 1
    if counter[0] < 0:
        raise BudgetExceeded("word routing budget exhausted")
    cls = classify_word_cell(cell, srs)
    if cls.kind == "critical":
        out = {cell: _coeff_one(mode)}
    elif cls.kind == "collapsible":
        out = {}
    else:
        partner, eps = cls.partner, cls.epsilon
        bd = word_boundary(partner, srs, mode)
        out = {}
        for face, coeff in bd.items():
            if face == cell:
                continue
            for crit, w in word_express_critical(face, srs, mode, counter).items():
                _coeff_add(out, crit, _coeff_scale(_coeff_mul(coeff, w, srs), -eps))
    cache[cell] = dict(out)
    return out


def word_morse_differential(cell: WordCell, srs: Srs, mode: str = "count",
                            budget: int = 200_000) -> dict[WordCell, WordCoeff]:
    cache = srs.cache("morse_" + mode)
    hit = cache.get(cell)
    if hit is not None:
        return dict(hit)
    counter = [budget]
    out: dict[WordCell, WordCoeff] = {}
    for face, coeff in word_boundary(cell, srs, mode).items():
        for crit, w in word_express_critical(face, srs, mode, counter).items():
            _coeff_add(out, crit, _coeff_mul(coeff, w, srs))
    cache[cell] = dict(out)
    return dict(out)


def word_boundary_matrices(srs: Srs, chains: dict[int, list[WordCell]],
                           max_dim: int) -> dict[int, BoundaryMatrix]:
    out: dict[int, BoundaryMatrix] = {}
    for n in range(1, max_dim + 1):
        rows, cols = chains[n], chains[n - 1]
        col_index = {c: j for j, c in enumerate(cols)}
        entries = [[0] * len(cols) for _ in rows]
        for i, cell in enumerate(rows):
            for target, coeff in word_morse_differential(cell, srs, "count").items():
                entries[i][col_index[target]] = _count_of(coeff)
        out[n] = BoundaryMatrix(n, list(rows), list(cols), entries, 0)
    return out


def monoid_homology(srs: Srs, max_dim: int) -> dict[int, HomologyGroup]:
    """Integral homology with trivial coefficients through ``max_dim``.

    Needs chains one dimension higher to bound the image at the top.
    """
    chains = enumerate_word_chains(srs, max_dim + 1)
    counts = {k: len(v) for k, v in chains.items()}
    matrices = word_boundary_matrices(srs, chains, max_dim + 1)
    return {n: homology_group(matrices, n, 0, counts) for n in range(max_dim + 1)}
