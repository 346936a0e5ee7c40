import random

import pytest

from eqhom.chains import (
    Cell,
    chain_prefix_length,
    composite,
    enumerate_chains,
    is_chain,
    max_redex,
    redex_less,
    redex_set,
    valid_entry,
)
from eqhom.rewrite import CompletenessError, Rule, Trs, random_term
from eqhom.terms import Morphism, Signature, Var, substitute, variables

SIG = Signature(("X",), (("plus", ("X", "X"), "X"), ("zero", (), "X")))
ZERO = SIG.app("zero")


def x(name="x"):
    return Var(name, "X")


def plus(a, b):
    return SIG.app("plus", a, b)


def tau1_cell(trs):
    plus_m = Morphism((("x1", "X"), ("x2", "X")), (plus(x("x1"), x("x2")),))
    return Cell("X", (
        plus_m,
        Morphism((("x1", "X"),), (x("x1"), ZERO)),
        Morphism((), (ZERO,)),
    ))


def tau2_cell(trs):
    plus_m = Morphism((("x1", "X"), ("x2", "X")), (plus(x("x1"), x("x2")),))
    return Cell("X", (
        plus_m,
        Morphism((("x1", "X"),), (ZERO, x("x1"))),
        Morphism((), (ZERO,)),
    ))


def test_redex_set_examples(ab_trs):
    assert redex_set(plus(ZERO, ZERO), ab_trs) == {((), 0), ((), 1)}
    assert redex_set(plus(x("a"), x("b")), ab_trs) == set()
    assert redex_set(plus(plus(x("a"), ZERO), ZERO), ab_trs) == {((), 0), ((1,), 0)}


def test_max_redex_order(ab_trs):
    # a unit redex on the left is dominated by one at the same position
    # with a later rule, and None is the bottom of the order
    assert redex_less(max_redex(plus(x("a"), ZERO), ab_trs),
                      max_redex(plus(ZERO, ZERO), ab_trs))
    assert max_redex(plus(ZERO, x("a")), ab_trs) == max_redex(plus(ZERO, ZERO), ab_trs)
    assert max_redex(x("a"), ab_trs) is None
    assert redex_less(None, ((), 0)) and not redex_less(((), 0), None)


def test_position_order_is_prefix_then_sibling():
    assert ((), 5) < ((1,), 0)
    assert ((1,), 9) < ((1, 1), 0)
    assert ((1, 2), 0) < ((2,), 0)


def test_chain_counts_abelian(ab_trs):
    chains = enumerate_chains(ab_trs, 5)
    assert {d: len(cs) for d, cs in chains.items()} == {0: 1, 1: 2, 2: 2, 3: 1, 4: 0, 5: 0}


def test_chain_correspondence(ab_trs, group_trs):
    for trs in (ab_trs, group_trs):
        chains = enumerate_chains(trs, 2)
        assert len(chains[0]) == len(trs.signature.sorts)
        assert len(chains[1]) == len(trs.signature.ops)
        assert len(chains[2]) == len(trs.rules)


def test_tau1_is_a_chain_tau2_is_not(ab_trs):
    chains = enumerate_chains(ab_trs, 3)
    assert tau1_cell(ab_trs) in chains[3]
    assert tau2_cell(ab_trs) not in chains[3]
    assert is_chain(tau1_cell(ab_trs), ab_trs)
    assert not is_chain(tau2_cell(ab_trs), ab_trs)


def test_every_chain_is_a_valid_cell(ab_trs, group_trs):
    for trs, maxd in ((ab_trs, 4), (group_trs, 3)):
        chains = enumerate_chains(trs, maxd)
        for dim, cells in chains.items():
            for cell in cells:
                assert cell.dim == dim
                for entry in cell.entries:
                    assert valid_entry(entry, trs)
                if dim:
                    assert len(cell.entries[0].terms) == 1


def test_chain_prefixes_are_chains(ab_trs, group_trs):
    for trs, maxd in ((ab_trs, 3), (group_trs, 3)):
        chains = enumerate_chains(trs, maxd)
        for dim, cells in chains.items():
            for cell in cells:
                for k in range(dim):
                    assert is_chain(Cell(cell.sort, cell.entries[:k]), trs)
                if dim:
                    assert chain_prefix_length(cell, trs) == dim


def test_max_redex_monotone_under_composition(ab_trs, group_trs):
    rng = random.Random(13)
    for trs, sort in ((ab_trs, "X"), (group_trs, "G")):
        for _ in range(150):
            t = random_term(trs.signature, sort, rng, 3)
            names = {v.name: v.sort for v in variables(t)}
            sigma = {n: random_term(trs.signature, s, rng, 2) for n, s in names.items()}
            u = substitute(t, sigma) if sigma else t
            a, b = max_redex(t, trs), max_redex(u, trs)
            assert a == b or redex_less(a, b)


def test_enumeration_requires_certified_input():
    trs = Trs(SIG, (
        Rule("r1", plus(x(), ZERO), x()),
        Rule("bad", plus(ZERO, ZERO), plus(ZERO, ZERO)),
    ), step_budget=100)
    with pytest.raises((CompletenessError, Exception)):
        enumerate_chains(trs, 2)


def test_group_dim3_chains_include_associativity_nesting(group_trs):
    chains = enumerate_chains(group_trs, 3)
    composites = {repr(composite(c, group_trs).term) for c in chains[3]}
    # the left-nested associativity overlap is one of the 3-chains
    g = group_trs.signature
    a, b, c, d = (Var(n, "G") for n in ("x1", "x2", "x3", "x4"))
    nested = g.app("m", g.app("m", g.app("m", a, b), c), d)
    assert repr(nested) in composites
