"""Term rewriting: reduction, normal forms, critical pairs, completeness.

A rewrite system is an ordered list of oriented rules ``l -> r`` over a
signature; the list order doubles as the total order on left-hand sides
used by the chain machinery.  Rewriting is undecidably terminating in
general, so completeness is certified only as reducedness plus local
confluence (every critical pair joins) plus a budgeted termination probe;
the report says which parts passed.

Normal forms are computed with a deterministic leftmost-innermost
strategy.  For a certified system the normal form is unique regardless,
and results are memoized per system (idempotent values, so last-write-wins
caching is safe under concurrent use).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .terms import (
    App,
    Morphism,
    Position,
    Signature,
    Term,
    TermError,
    Var,
    canonical_morphism,
    positions,
    render_term,
    rename_vars,
    replace_at,
    substitute,
    subterm_at,
    var_count,
    variables,
)
from .unify import match_term, unify_terms

DEFAULT_STEP_BUDGET = 10_000
DEFAULT_JOIN_BUDGET = 1_000


class BudgetExceeded(Exception):
    """A rewrite-step budget ran out (possible nontermination or a bug)."""


class CompletenessError(Exception):
    """An operation required a certified reduced complete system."""


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TermError(f"rule {self.name}: left-hand side is a variable")
        if self.lhs.sort != self.rhs.sort:
            raise TermError(f"rule {self.name}: sides have different sorts")
        lhs_vars = {v.name for v in variables(self.lhs)}
        for v in variables(self.rhs):
            if v.name not in lhs_vars:
                raise TermError(f"rule {self.name}: right-hand variable {v.name} not on the left")

    def __repr__(self):
        return f"{self.name}: {render_term(self.lhs)} -> {render_term(self.rhs)}"


@dataclass(frozen=True, eq=False)
class Trs:
    signature: Signature
    rules: tuple[Rule, ...]
    step_budget: int = DEFAULT_STEP_BUDGET
    join_budget: int = DEFAULT_JOIN_BUDGET
    caches: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise TermError("duplicate rule names")

    def __eq__(self, other):
        return (
            isinstance(other, Trs)
            and self.signature == other.signature
            and self.rules == other.rules
            and self.step_budget == other.step_budget
            and self.join_budget == other.join_budget
        )

    def __hash__(self):
        return hash((self.signature.sorts, self.signature.ops, self.rules))

    def cache(self, kind: str) -> dict:
        return self.caches.setdefault(kind, {})


def rewrite_steps(t: Term, trs: Trs) -> list[tuple[Rule, Position, Term]]:
    """All one-step reducts of ``t`` with rule and position provenance."""
    out = []
    for p in positions(t):
        sub = subterm_at(t, p)
        if isinstance(sub, Var):
            continue
        for rule in trs.rules:
            sigma = match_term(rule.lhs, sub)
            if sigma is not None:
                out.append((rule, p, replace_at(t, p, substitute(rule.rhs, sigma))))
    return out


def is_irreducible(t: Term, trs: Trs) -> bool:
    for p in positions(t):
        sub = subterm_at(t, p)
        if isinstance(sub, Var):
            continue
        for rule in trs.rules:
            if match_term(rule.lhs, sub) is not None:
                return False
    return True


def normal_form(t: Term, trs: Trs) -> Term:
    """The unique normal form under leftmost-innermost reduction.

    Uniqueness holds once the system is certified; without certification
    this is still a deterministic reduction, bounded by the step budget.
    """
    cache = trs.cache("nf")
    hit = cache.get(t)
    if hit is not None:
        return hit
    budget = [trs.step_budget]

    def go(u: Term) -> Term:
        done = cache.get(u)
        if done is not None:
            return done
        result = _innermost(u, trs, budget)
        cache[u] = result
        cache[result] = result
        return result

    return go(t)


def _innermost(u: Term, trs: Trs, budget: list[int]) -> Term:
    if isinstance(u, Var):
        return u
    u = App(u.op, tuple(_innermost(a, trs, budget) for a in u.args), u.sort)
    for rule in trs.rules:
        sigma = match_term(rule.lhs, u)
        if sigma is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceeded(f"step budget exhausted while reducing {render_term(u)}")
            return _innermost(substitute(rule.rhs, sigma), trs, budget)
    return u


def normal_form_morphism(m: Morphism, trs: Trs) -> Morphism:
    return Morphism(m.context, tuple(normal_form(t, trs) for t in m.terms))


def is_irreducible_morphism(m: Morphism, trs: Trs) -> bool:
    return all(is_irreducible(t, trs) for t in m.terms)


@dataclass(frozen=True)
class CriticalPair:
    """Two one-step reducts of a minimal overlap of rule left-hand sides."""

    outer: Rule
    inner: Rule
    position: Position
    left: Term   # outer rhs instantiated
    right: Term  # overlap with the inner redex rewritten in place

    def __repr__(self):
        at = ".".join(map(str, self.position)) or "ε"
        return (f"<{self.outer.name}/{self.inner.name}@{at}:"
                f" {render_term(self.left)} vs {render_term(self.right)}>")


def apply_subst(t: Term, sigma: dict[str, Term]) -> Term:
    """Substitution that keeps unbound variables in place."""
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.op, tuple(apply_subst(a, sigma) for a in t.args), t.sort)


def critical_pairs(trs: Trs) -> list[CriticalPair]:
    """All overlaps at non-variable positions, including self-overlaps.

    The trivial root overlap of a rule with itself is excluded.
    """
    out = []
    for outer in trs.rules:
        for inner in trs.rules:
            apart = {v.name: v.name + "'" for v in variables(inner.lhs)}
            inner_lhs = rename_vars(inner.lhs, apart)
            inner_rhs = rename_vars(inner.rhs, apart)
            for p in positions(outer.lhs):
                if p == () and outer is inner:
                    continue
                sub = subterm_at(outer.lhs, p)
                if isinstance(sub, Var):
                    continue
                sigma = unify_terms(sub, inner_lhs)
                if sigma is None:
                    continue
                overlap = apply_subst(outer.lhs, sigma)
                left = apply_subst(outer.rhs, sigma)
                right = replace_at(overlap, p, apply_subst(inner_rhs, sigma))
                out.append(CriticalPair(outer, inner, p, left, right))
    return out


def joinable(a: Term, b: Term, trs: Trs) -> bool:
    budget = [trs.join_budget]
    return _innermost(a, trs, budget) == _innermost(b, trs, budget)


@dataclass
class CompletenessReport:
    reduced: bool
    reducedness_failures: list[str]
    locally_confluent: bool
    unjoinable: list[CriticalPair]
    termination_probe_ok: bool
    termination_offender: str | None
    probe_terms: int
    budget_exceeded: bool
    assume_terminating: bool = False

    @property
    def complete(self) -> bool:
        return self.locally_confluent and self.termination_probe_ok

    @property
    def certified(self) -> bool:
        return self.reduced and self.complete

    def lines(self) -> list[str]:
        ok = lambda b: "ok" if b else "FAILED"
        out = [f"reduced: {ok(self.reduced)}"]
        out.extend(f"  {msg}" for msg in self.reducedness_failures)
        out.append(f"locally confluent: {ok(self.locally_confluent)}")
        out.extend(f"  unjoinable: {cp!r}" for cp in self.unjoinable)
        probe = "ok" if self.termination_probe_ok else f"FAILED ({self.termination_offender})"
        out.append(f"termination probe ({self.probe_terms} terms): {probe}")
        if self.termination_probe_ok:
            note = "acknowledged" if self.assume_terminating else "pass --assume-terminating to acknowledge"
            out.append(f"termination is probed, not proven ({note})")
        out.append(f"complete (reduced + locally confluent + termination probed): "
                   f"{'yes' if self.certified else 'NO'}")
        return out


def _without(trs: Trs, rule: Rule) -> Trs:
    rest = tuple(r for r in trs.rules if r is not rule)
    return Trs(trs.signature, rest, trs.step_budget, trs.join_budget)


def random_term(sig: Signature, sort: str, rng: random.Random, depth: int,
                var_pool: dict[str, list[str]] | None = None) -> Term:
    """A random well-sorted term, used by probes and property tests."""
    if var_pool is None:
        var_pool = {s: [f"v{i}{s}" for i in range(3)] for s in sig.sorts}
    ops = [(name, a, r) for name, a, r in sig.ops if r == sort]
    leaves = [(name, a, r) for name, a, r in ops if not a]
    can_leaf = bool(var_pool.get(sort)) or bool(leaves)
    if depth <= 0 or not ops or (can_leaf and rng.random() < 0.4):
        choices: list = [("var", v) for v in var_pool.get(sort, [])]
        choices += [("const", name) for name, a, _ in leaves]
        if not choices:
            choices = [("op", name) for name, _, _ in ops]
        kind, payload = rng.choice(choices)
        if kind == "var":
            return Var(payload, sort)
        if kind == "const":
            return sig.app(payload)
        name = payload
    else:
        name = rng.choice(ops)[0]
    args = tuple(random_term(sig, s, rng, depth - 1, var_pool) for s in sig.arg_sorts(name))
    return sig.app(name, *args)


def check_complete(trs: Trs, sample_size: int = 40, sample_depth: int = 4,
                   seed: int = 0, assume_terminating: bool = False) -> CompletenessReport:
    """Certify reducedness, local confluence, and a termination probe."""
    failures = []
    for rule in trs.rules:
        rest = _without(trs, rule)
        if not is_irreducible(rule.lhs, rest):
            failures.append(f"lhs of {rule.name} reducible by another rule")
        if not is_irreducible(rule.rhs, trs):
            failures.append(f"rhs of {rule.name} not in normal form")

    unjoinable = []
    budget_exceeded = False
    for cp in critical_pairs(trs):
        try:
            if not joinable(cp.left, cp.right, trs):
                unjoinable.append(cp)
        except BudgetExceeded:
            budget_exceeded = True
            unjoinable.append(cp)

    probe_ok = True
    offender = None
    rng = random.Random(seed)
    probes: list[Term] = [r.rhs for r in trs.rules] + [r.lhs for r in trs.rules]
    for sort in trs.signature.sorts:
        probes.extend(random_term(trs.signature, sort, rng, sample_depth)
                      for _ in range(sample_size))
    for t in probes:
        try:
            normal_form(t, trs)
        except BudgetExceeded:
            probe_ok = False
            budget_exceeded = True
            offender = render_term(t)
            break

    return CompletenessReport(
        reduced=not failures,
        reducedness_failures=failures,
        locally_confluent=not unjoinable,
        unjoinable=unjoinable,
        termination_probe_ok=probe_ok,
        termination_offender=offender,
        probe_terms=len(probes),
        budget_exceeded=budget_exceeded,
        assume_terminating=assume_terminating,
    )


def certify(trs: Trs, need_reduced: bool = True) -> CompletenessReport:
    """Budgeted certification, cached on the system; raises if it fails."""
    cache = trs.cache("certify")
    report = cache.get("report")
    if report is None:
        report = check_complete(trs)
        cache["report"] = report
    if not report.complete:
        raise CompletenessError("system is not certified complete: "
                                + "; ".join(report.lines()))
    if need_reduced and not report.reduced:
        raise CompletenessError("system is complete but not reduced: "
                                + "; ".join(report.reducedness_failures))
    return report


def reduce_trs(trs: Trs) -> Trs:
    """Equivalent reduced system: normalize right-hand sides, then drop
    every rule whose left-hand side the remaining rules already reduce."""
    certify(trs, need_reduced=False)
    normalized = tuple(
        Rule(r.name, r.lhs, normal_form(r.rhs, trs)) for r in trs.rules
    )
    stage_two = Trs(trs.signature, normalized, trs.step_budget, trs.join_budget)
    kept = tuple(
        r for r in stage_two.rules
        if is_irreducible(r.lhs, _without(stage_two, r))
    )
    return Trs(trs.signature, kept, trs.step_budget, trs.join_budget)


def degree(trs: Trs) -> int:
    """gcd of all per-variable occurrence-count changes across the rules.

    Variables outside a rule's left side occur zero times on both sides
    and cannot change the gcd, so only left-side variables are scanned.
    An empty or all-zero multiset has gcd 0.
    """
    d = 0
    for rule in trs.rules:
        for v in variables(rule.lhs):
            d = gcd(d, abs(var_count(rule.lhs, v.name) - var_count(rule.rhs, v.name)))
    return d


def op_morphism(sig: Signature, name: str) -> Morphism:
    """The canonical morphism applying one operation to fresh variables."""
    arg_sorts = sig.arg_sorts(name)
    ctx = tuple((f"x{i}", s) for i, s in enumerate(arg_sorts, 1))
    term = sig.app(name, *(Var(n, s) for n, s in ctx))
    return Morphism(ctx, (term,))


def lhs_morphism(rule: Rule) -> Morphism:
    """The rule's left-hand side as a canonical single-term morphism."""
    return canonical_morphism(
        Morphism(tuple((v.name, v.sort) for v in variables(rule.lhs)), (rule.lhs,))
    )
