from __future__ import annotations

import random

import pytest

from planar_gca.gca import Generator
from planar_gca.sampling import permutations_within_blocks, random_element, random_shape, repeated_shape
from planar_gca.spanlab import SingularExtraction
from planar_gca.tensorprod import ExpSignature, RestrictedModule, TensorShape, VVec, tensor_act
from planar_gca.theorems import (
    RecoveredParameters,
    check_certificate,
    colliding_factors,
    compute_dg,
    dt_bounds,
    estimate_dt,
    generation_saturation,
    isomorphic,
    lemma32_extract,
    recover_parameters,
    simplicity_reduce,
    stable_span,
)

OM1 = TensorShape.build(omega=[(2, 3, 0)])


def one(shape, p=(), q=(), r=(), s=(), c=1):
    return shape.element({ExpSignature(tuple(p), tuple(q), tuple(r), tuple(s)): c})


class LateModule(RestrictedModule):
    """One-dimensional V with zero action that claims an annihilation bound of 3."""

    name = "late"

    def act(self, gen, v):
        return VVec()

    def annihilation_bound(self, v):
        return 3

    @property
    def is_trivial(self):
        return False

    def default_vector(self):
        return VVec({"w": 1})


def test_stable_span_examples():
    vac = OM1.vacuum()
    assert stable_span("I", vac, 0).dim == 1
    span = stable_span("H", vac, 0)
    assert span.dim == 2
    assert span.contains(vac) and span.contains(one(OM1, (0,), (1,)))
    assert stable_span("J", random_element(random.Random(0), OM1), 0).dim == 1


def test_threshold_below_annihilation_bound():
    sh = TensorShape.build(omega=[(2, 3, 0)], V=LateModule())
    vac = sh.vacuum()
    assert vac.ann_bound() == 3
    with pytest.raises(ValueError):
        stable_span("H", vac, 1)
    assert stable_span("H", vac, 3).dim == 2


def test_stable_span_threshold_independent():
    rng = random.Random(2)
    for m in [(1, 0), (1, 1), (0, 2)]:
        sh = random_shape(rng, *m)
        for _ in range(4):
            g = random_element(rng, sh, 3)
            for fam in "LHIJ":
                a, b = stable_span(fam, g, 0), stable_span(fam, g, 5)
                assert a.dim == b.dim
                assert all(b.contains(x) for x in a.basis)
                assert a.check_stable()


def test_certificates_recompute():
    rng = random.Random(4)
    sh = random_shape(rng, 1, 1)
    g = random_element(rng, sh, 2)
    span = stable_span("L", g)
    x = span.decomposition.component(1, 1)
    cert = span.certificate(x)
    assert check_certificate(span, x, cert)
    assert not check_certificate(span, x + one(sh, (7,), (0,), (0,), (0,)), cert)


def test_display_examples():
    vac = OM1.vacuum()
    assert lemma32_extract(1, vac, 1).element == one(OM1, (1,), (0,))
    g = one(OM1, (2,), (0,))
    assert lemma32_extract(5, g, 1).element == one(OM1, (0,), (1,))
    with pytest.raises(IndexError):
        lemma32_extract(6, vac, 1)


def test_displays_bump_exponents():
    sh = TensorShape.build(omega=[(2, 1, 0)], gamma=[(-3, 1, 1)])
    vac = sh.vacuum()
    assert lemma32_extract(2, vac, 1).element == one(sh, (0,), (0,), (1,), (0,))
    assert lemma32_extract(3, vac, 1).element == one(sh, (0,), (1,), (0,), (0,))
    assert lemma32_extract(4, vac, 1).element == one(sh, (0,), (0,), (0,), (1,))
    g = one(sh, (0,), (0,), (3,), (0,))
    assert lemma32_extract(6, g, 1).element == one(sh, (0,), (0,), (0,), (1,))


def test_dg_examples():
    assert compute_dg(OM1.vacuum()) == 2
    assert compute_dg(one(OM1, (0,), (1,))) == 3
    assert compute_dg(TensorShape.build(omega=[(2, 1, 0)], gamma=[(3, 1, 0)]).vacuum()) == 3
    with pytest.raises(ValueError):
        compute_dg(OM1.zero())


def test_dt_examples():
    t1 = one(OM1, (0,), (1,))
    assert estimate_dt(OM1, [OM1.vacuum()]) == 2
    assert estimate_dt(OM1, [t1]) == 3
    b = dt_bounds(OM1, [t1, OM1.vacuum()])
    assert (b.lower, b.upper, b.vacuum_sampled, b.tight) == (2, 2, True, True)
    assert not dt_bounds(OM1, [t1]).tight


def test_dg_law_small():
    rng = random.Random(6)
    for m in [(1, 0), (0, 1), (1, 1)]:
        sh = random_shape(rng, *m)
        base = sum(m) + 1
        assert compute_dg(sh.vacuum()) == base
        for _ in range(5):
            assert compute_dg(random_element(rng, sh, 2, non_vacuum=True)) > base


def test_reduce_examples():
    vac = OM1.vacuum()
    assert len(simplicity_reduce(vac)) == 0
    trace = simplicity_reduce(one(OM1, (0,), (1,)))
    assert len(trace) == 1
    assert trace.final.is_vacuum_form()
    assert trace.steps[0].companion == one(OM1, (0,), (1,)) - vac


def test_reduce_repeated_lambda():
    sh = TensorShape.build(omega=[(2, 1, 0), (2, 5, 1)])
    with pytest.raises(SingularExtraction) as exc:
        simplicity_reduce(sh.vacuum())
    assert colliding_factors(exc.value) == [1, 2]


def test_reduce_steps_certified_and_descending():
    rng = random.Random(9)
    sh = random_shape(rng, 1, 1)
    for _ in range(10):
        g = random_element(rng, sh, 3)
        trace = simplicity_reduce(g)
        prev = g
        for step in trace.steps:
            span = stable_span(step.span_family, prev)
            assert check_certificate(span, step.element, step.certificate)
            prev = step.element
        assert trace.final.is_vacuum_form()


def test_saturation_examples():
    rep = generation_saturation(TensorShape.build(omega=[(2, 3, 1)]), degree_bound=2, generator_degree_bound=3)
    assert (rep.saturated, rep.dim_reached, rep.dim_target) == (True, 6, 6)
    assert generation_saturation(TensorShape([]), degree_bound=3).dim_target == 1
    bad = generation_saturation(TensorShape.build(omega=[(2, 1, 0), (2, 3, 1)]), degree_bound=2)
    assert bad.status == "inconclusive"
    with pytest.raises(ValueError):
        generation_saturation(TensorShape.build(omega=[(2, 3, 0)], V=LateModule()))


def test_recover_examples():
    def got(sh):
        return recover_parameters(sh)

    sh = TensorShape.build(omega=[(2, 3, 5)])
    assert got(sh) == RecoveredParameters.of_shape(sh)
    assert got(sh).omega and not got(sh).gamma
    sh = TensorShape.build(gamma=[(2, 3, 0)])
    assert got(sh) == RecoveredParameters.of_shape(sh) and not got(sh).omega
    sh = TensorShape.build(omega=[(2, 3, 0), (5, 7, 1)])
    assert got(sh) == RecoveredParameters.of_shape(sh)


def test_recover_random_and_permuted():
    rng = random.Random(12)
    for m in [(2, 1), (0, 3), (1, 2)]:
        sh = random_shape(rng, *m)
        perm = permutations_within_blocks(sh, rng)
        assert recover_parameters(sh) == RecoveredParameters.of_shape(sh)
        assert recover_parameters(sh.permuted(perm)) == recover_parameters(sh)
        assert isomorphic(sh, sh.permuted(perm))


def test_recover_distinguishes():
    a = TensorShape.build(omega=[(2, 3, 0)])
    b = TensorShape.build(omega=[(2, 3, 1)])
    c = TensorShape.build(gamma=[(2, 3, 0)])
    assert not isomorphic(a, b)
    assert not isomorphic(a, c)


def test_recover_repeated_lambda_raises():
    sh = repeated_shape(random.Random(0), 1, 1)
    with pytest.raises((SingularExtraction, ValueError)):
        recover_parameters(sh)


def test_h_samples_match_model():
    g = one(OM1, (1,), (0,))
    # H_n (s x v) = 2^n (s - n) t
    for n in range(4):
        want = 2**n * (one(OM1, (1,), (1,)) - n * one(OM1, (0,), (1,)))
        assert tensor_act(Generator("H", n), g) == want
