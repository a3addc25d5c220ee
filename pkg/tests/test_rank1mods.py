from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_gca.gca import Generator, LieElement, basis
from planar_gca.rank1mods import (
    Kind,
    ModuleParams,
    Poly2,
    act,
    act_monomial_printed,
    gamma_act,
    omega_act,
)
from planar_gca.sampling import random_nonzero, random_scalar

from .conftest import nonzero_scalars, scalars
from .helpers import module_axiom_defect, oracle_act, poly_to_sympy

OM = ModuleParams.omega(2, 3, 1)


def P(terms):
    return Poly2(terms)


def test_omega_examples():
    # L_1 1 = lam (s - t + eta); the t-term sign is what makes [L, I] consistent
    assert omega_act(Generator("L", 1), Poly2.const(1), OM) == P({(1, 0): 2, (0, 1): -2, (0, 0): 2})
    assert omega_act(Generator("J", 5), P({(2, 3): 1}), OM) == Poly2()
    assert omega_act(Generator("I", 1), P({(0, 1): 1}), OM) == P({(0, 1): 6, (0, 0): -6})
    assert omega_act(Generator("H", 0), P({(1, 0): 1}), OM) == P({(1, 1): 1})


def test_gamma_examples():
    assert gamma_act(Generator("I", 7), P({(4, 1): 1}), ModuleParams.gamma(5, 1, 2)) == Poly2()
    assert gamma_act(Generator("J", 1), Poly2.const(1), ModuleParams.gamma(2, 3, 0)) == Poly2.const(6)
    assert gamma_act(Generator("L", 2), Poly2.const(1), ModuleParams.gamma(2, 1, 1)) == P(
        {(1, 0): 4, (0, 1): 8, (0, 0): 8}
    )


def test_kind_checks_and_validation():
    with pytest.raises(ValueError):
        omega_act(Generator("L", 0), Poly2.const(1), ModuleParams.gamma(1, 1, 0))
    with pytest.raises(ValueError, match="sigma must be nonzero"):
        ModuleParams.omega(1, 0, 0)
    with pytest.raises(ValueError, match="lambda must be nonzero"):
        ModuleParams.gamma(0, 1, 0)


params_st = st.builds(ModuleParams, st.sampled_from(list(Kind)), nonzero_scalars, nonzero_scalars, scalars)
poly_st = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), scalars, max_size=4
).map(Poly2)


@settings(max_examples=60, deadline=None)
@given(params_st, st.sampled_from("LHIJ"), st.integers(-4, 4), poly_st)
def test_matches_symbolic_oracle(p, family, n, f):
    assert poly_to_sympy(act(Generator(family, n), f, p)) == oracle_act(family, n, poly_to_sympy(f), p)


@pytest.mark.parametrize("kind", list(Kind))
def test_module_axiom_on_generators(kind):
    rng = random.Random(kind.value)
    p = ModuleParams(kind, random_nonzero(rng), random_nonzero(rng), random_scalar(rng))
    gens = basis(range(-2, 3))
    monos = [P({(a, b): 1}) for a in range(3) for b in range(3 - a)]
    for x, y in itertools.product(gens, repeat=2):
        for f in monos:
            assert not module_axiom_defect(LieElement({x: 1}), LieElement({y: 1}), f, p), (x, y, f)


def test_printed_omega_sign_breaks_the_axiom():
    """With L_n f = lam^n (s + n t + n eta) f(s-n, t), [L_m, I_n] acts as (m+n) I_{m+n}."""

    def printed(gen, f, p):
        out = {}
        for (a, b), c in f.terms.items():
            for mono, k in act_monomial_printed(p, gen, a, b).items():
                out[mono] = out.get(mono, 0) + c * k
        return Poly2(out)

    x, y = LieElement.gen("L", -3), LieElement.gen("I", -3)
    defect = module_axiom_defect(x, y, Poly2.const(1), OM, printed)
    assert defect  # the bracket gives 0, the composite gives -6 lam^-6 sigma
    assert not module_axiom_defect(x, y, Poly2.const(1), OM)


@given(params_st, st.sampled_from("LHIJ"), st.integers(-5, 5), poly_st)
def test_degree_growth(p, family, n, f):
    """L and H raise total degree by exactly one on nonzero f; I and J preserve it or kill."""
    img = act(Generator(family, n), f, p)
    if not f:
        assert not img
    elif family in "LH":
        assert img.total_degree() == f.total_degree() + 1
    elif img:
        assert img.total_degree() == f.total_degree()


def test_render():
    assert P({(1, 1): 1, (0, 0): -2}).render() == "s*t - 2"
    assert P({(2, 0): 3}).render(("x", "y")) == "3*x^2"
