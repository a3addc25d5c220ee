from __future__ import annotations

import itertools
import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_gca.exactfield import Scalar
from planar_gca.sampling import random_nonzero, random_scalar
from planar_gca.spanlab import (
    Echelon,
    GenVanSpec,
    SingularExtraction,
    cofactor_det,
    elimination_det,
    express,
    genvan_matrix,
    in_span,
    lemma2_det,
    rank,
    superfactorial,
    vandermonde_extract,
)

from .helpers import to_sympy


def test_matrix_examples():
    assert genvan_matrix(GenVanSpec((2, 3), (1, 1))) == [[1, 1], [2, 3]]
    assert genvan_matrix(GenVanSpec((2,), (2,))) == [[1, 0], [2, 2]]
    assert genvan_matrix(GenVanSpec((5,), (1,), 3)) == [[125]]


def test_det_examples():
    assert lemma2_det(GenVanSpec((2, 3), (1, 1))) == 1
    assert lemma2_det(GenVanSpec((2,), (2,))) == 2
    # frozen from the cofactor oracle: rows n=1,2,3 of [2^n, n 2^n, 3^n]
    spec = GenVanSpec((2, 3), (2, 1), 1)
    assert cofactor_det(genvan_matrix(spec)) == 24
    assert lemma2_det(spec) == 24


def test_superfactorial():
    assert [superfactorial(m) for m in range(5)] == [1, 1, 2, 12, 288]


def test_spec_validation():
    with pytest.raises(ValueError):
        GenVanSpec((2, 2), (1, 1))
    with pytest.raises(ValueError):
        GenVanSpec((0,), (1,))
    with pytest.raises(ValueError):
        GenVanSpec((2,), (0,))
    with pytest.raises(ValueError):
        GenVanSpec((2,), (1,), -1)


def test_closed_form_matches_oracles_sampled():
    rng = random.Random(1)
    for sizes in [(1, 2), (3,), (2, 2), (1, 1, 1), (3, 1, 2)]:
        for r in range(3):
            lams = []
            while len(lams) < len(sizes):
                x = random_nonzero(rng, 4)
                if x not in lams:
                    lams.append(x)
            spec = GenVanSpec(tuple(lams), sizes, r)
            mat = genvan_matrix(spec)
            closed = lemma2_det(spec)
            assert closed == cofactor_det(mat) == elimination_det(mat)


def test_cofactor_matches_sympy():
    spec = GenVanSpec((Scalar(1, 1), Scalar(-2), Scalar(0, 3)), (2, 1, 1), 2)
    mat = genvan_matrix(spec)
    ref = sp.Matrix([[to_sympy(x) for x in row] for row in mat]).det()
    assert sp.simplify(ref - to_sympy(cofactor_det(mat))) == 0


def test_rank_examples():
    assert rank([{"a": Scalar(1)}, {"a": Scalar(2)}]) == 1
    assert rank([]) == 0
    assert in_span({"a": Scalar(1), "b": Scalar(1)}, [{"a": Scalar(1)}, {"b": Scalar(1)}])
    assert not in_span({"c": Scalar(1)}, [{"a": Scalar(1)}])


vec_st = st.dictionaries(st.sampled_from("abcde"), st.integers(-3, 3).map(Scalar), max_size=4)


@settings(max_examples=80)
@given(st.lists(vec_st, max_size=6), st.permutations(range(6)))
def test_rank_invariant_under_reordering_and_combination(vs, perm):
    r = rank(vs)
    assert rank([vs[i] for i in perm if i < len(vs)]) == r
    combo: dict = {}
    for k, v in enumerate(vs):
        for key, c in v.items():
            combo[key] = combo.get(key, Scalar(0)) + c * (k + 1)
    assert rank(vs + [combo]) == r
    assert in_span(combo, vs)


@settings(max_examples=60)
@given(st.lists(vec_st, min_size=1, max_size=5), st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_express_reconstructs(vs, coeffs):
    target: dict = {}
    for v, c in zip(vs, coeffs):
        for key, x in v.items():
            target[key] = target.get(key, Scalar(0)) + c * x
    target = {k: x for k, x in target.items() if x}
    cs = express(target, vs)
    assert cs is not None
    rebuilt: dict = {}
    for v, c in zip(vs, cs):
        for key, x in v.items():
            rebuilt[key] = rebuilt.get(key, Scalar(0)) + c * x
    assert {k: x for k, x in rebuilt.items() if x} == target


def test_echelon_labels():
    ech = Echelon()
    assert ech.add({"a": Scalar(1)}, "g")
    assert ech.add({"a": Scalar(1), "b": Scalar(2)}, 5)
    assert not ech.add({"b": Scalar(4)}, 6)
    cert = ech.express({"b": Scalar(1)})
    assert cert == {"g": Scalar(-1, 0) / 2, 5: Scalar(1) / 2}


def test_extract_examples():
    u, w = {"u": Scalar(1)}, {"w": Scalar(1), "z": Scalar(-2)}

    def F(n):
        out = {k: Scalar(2) ** n * c for k, c in u.items()}
        for k, c in w.items():
            out[k] = out.get(k, Scalar(0)) + Scalar(3) ** n * c
        return out

    assert vandermonde_extract([(5, F(5)), (6, F(6))], [(2, 0), (3, 0)]) == [u, w]
    assert vandermonde_extract([(1, {"u": Scalar(2)})], [(2, 0)]) == [u]
    with pytest.raises(SingularExtraction) as exc:
        vandermonde_extract([(1, F(1)), (2, F(2))], [(2, 0), (2, 0)], ["x", "y"])
    assert exc.value.colliding_labels() == [("x", "y")]


def test_extract_rejects_inconsistent_extra_sample():
    with pytest.raises(ValueError):
        vandermonde_extract([(1, {"u": Scalar(2)}), (2, {"u": Scalar(5)})], [(2, 0)])


def test_extract_recovers_random_exp_polys():
    rng = random.Random(8)
    for _ in range(20):
        terms = []
        for lam in (Scalar(2), Scalar(-1, 1), Scalar(1, 3)):
            terms += [(lam, j) for j in range(rng.randint(0, 2))]
        ws = [{k: random_scalar(rng) for k in "abc" if rng.random() < 0.7} for _ in terms]
        ws = [{k: c for k, c in w.items() if c} for w in ws]
        p = rng.randint(0, 4)
        samples = []
        for n in range(p, p + len(terms) + 2):
            vec: dict = {}
            for (lam, j), w in zip(terms, ws):
                for k, c in w.items():
                    vec[k] = vec.get(k, Scalar(0)) + lam**n * n**j * c
            samples.append((n, {k: c for k, c in vec.items() if c}))
        assert vandermonde_extract(samples, terms) == ws
