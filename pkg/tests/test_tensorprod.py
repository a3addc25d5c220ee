from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_gca.gca import Generator, LieElement, basis
from planar_gca.rank1mods import ModuleParams
from planar_gca.sampling import permutations_within_blocks, random_element, random_shape
from planar_gca.tensorprod import (
    NEG_INFINITY,
    TRIVIAL,
    ExpSignature,
    TensorShape,
    compare_sig,
    deg,
    tensor_act,
    top_exponents,
)

from .helpers import tensor_axiom_holds

OM1 = TensorShape.build(omega=[(2, 3, 0)])


def sig(p=(), q=(), r=(), s=()):
    return ExpSignature(tuple(p), tuple(q), tuple(r), tuple(s))


def test_act_examples():
    vac = OM1.vacuum()
    assert not tensor_act(Generator("J", 1), vac)
    assert tensor_act(Generator("I", 1), vac) == 6 * vac
    assert tensor_act(Generator("H", 1), vac) == OM1.element({sig((0,), (1,)): 2})


def test_compare_sig_examples():
    assert compare_sig(sig((1, 0)), sig((0, 5))) == 1
    a = sig((1,), (2,), (), ())
    assert compare_sig(a, a) == 0
    assert compare_sig(sig((1,), (2,)), sig((1,), (1,))) == 1
    with pytest.raises(ValueError):
        compare_sig(sig((1,)), sig((1, 0)))


def test_r_before_q():
    # r is compared before q
    a = sig((0,), (5,), (1,), (0,))
    b = sig((0,), (0,), (2,), (0,))
    assert compare_sig(a, b) == -1


sig_parts = st.tuples(*(st.tuples(st.integers(0, 2), st.integers(0, 2)) for _ in range(4)))


@given(sig_parts, sig_parts, sig_parts)
def test_compare_sig_is_total_order(a, b, c):
    a, b, c = (ExpSignature(*x) for x in (a, b, c))
    assert compare_sig(a, b) == -compare_sig(b, a)
    assert (compare_sig(a, b) == 0) == (a == b)
    if compare_sig(a, b) <= 0 and compare_sig(b, c) <= 0:
        assert compare_sig(a, c) <= 0
    assert compare_sig(NEG_INFINITY, a) == -1


def test_deg_examples():
    g = OM1.element({sig((2,), (1,)): 1, sig((1,), (3,)): 1})
    assert deg(g) == sig((2,), (1,))
    assert deg(OM1.zero()) is NEG_INFINITY
    assert deg(OM1.vacuum()).is_zero()


def test_top_exponents_examples():
    g = OM1.element({sig((2,), (0,)): 1, sig((1,), (5,)): 1})
    assert top_exponents(g, 1) == (2, None)
    assert top_exponents(OM1.vacuum(), 1) == (0, None)
    ga = TensorShape.build(gamma=[(2, 3, 0)])
    assert top_exponents(ga.element({sig((), (), (3,), (0,)): 1}), 1) == (None, 3)
    with pytest.raises(ValueError):
        top_exponents(OM1.zero(), 1)


def test_shape_rules():
    with pytest.raises(ValueError):
        TensorShape([ModuleParams.gamma(1, 1, 0), ModuleParams.omega(2, 1, 0)])
    sh = TensorShape.build(omega=[(2, 1, 0), (2, 5, 0)], gamma=[(3, 1, 1)])
    assert sh.lambda_collisions() == [(1, 2)]
    assert not sh.distinct_lambdas
    with pytest.raises(ValueError):
        sh.permuted([2, 1, 0])


def test_leibniz_rule_by_hand():
    sh = TensorShape.build(omega=[(2, 1, 0)], gamma=[(3, 1, 0)])
    # H_1 (1 x 1) = 2 t1 + 3 y1
    got = tensor_act(Generator("H", 1), sh.vacuum())
    assert got == sh.element({sig((0,), (1,), (0,), (0,)): 2, sig((0,), (0,), (0,), (1,)): 3})


def test_permutation_commutes_with_action():
    rng = random.Random(3)
    for m1, m2 in [(2, 1), (1, 2), (3, 0)]:
        sh = random_shape(rng, m1, m2)
        perm = permutations_within_blocks(sh, rng)
        for _ in range(5):
            g = random_element(rng, sh, 2)
            for gen in basis(range(-2, 3)):
                assert tensor_act(gen, g).permuted(perm) == tensor_act(gen, g.permuted(perm))


@pytest.mark.parametrize("m", [(1, 0), (0, 1), (1, 1)])
def test_tensor_module_axiom(m):
    rng = random.Random(str(m))
    sh = random_shape(rng, *m)
    gens = basis(range(-2, 3))
    g = random_element(rng, sh, 2)
    for x, y in itertools.product(gens, repeat=2):
        assert tensor_axiom_holds(LieElement({x: 1}), LieElement({y: 1}), g), (x, y)


def test_render_and_vacuum_vector():
    g = OM1.element({sig((1,), (0,)): 2, sig((0,), (0,)): -1})
    assert g.render() == "2*s1⊗v - 1⊗v"
    assert OM1.vacuum().vacuum_vector() == TRIVIAL.default_vector()
    with pytest.raises(ValueError):
        g.vacuum_vector()
