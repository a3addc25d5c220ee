"""Seeded random draws of scalars, shapes and tensor elements.

All functions take a ``random.Random``; the order in which they consume it is
fixed, so a seed reproduces every draw.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .exactfield import Scalar
from .rank1mods import ModuleParams
from .tensorprod import TRIVIAL, ExpSignature, RestrictedModule, TensorElement, TensorShape

__all__ = [
    "random_scalar",
    "random_nonzero",
    "random_shape",
    "repeated_shape",
    "random_signature",
    "random_element",
    "monomial_signatures",
]

_DENOMS = (1, 1, 1, 2, 3)


def random_scalar(rng: random.Random, bound: int = 6, complex_prob: float = 0.5) -> Scalar:
    """Draw order: real numerator, real denominator, imaginary flag, then imaginary parts."""
    re = Fraction(rng.randint(-bound, bound), rng.choice(_DENOMS))
    im = Fraction(0)
    if rng.random() < complex_prob:
        im = Fraction(rng.randint(-bound, bound), rng.choice(_DENOMS))
    return Scalar(re, im)


def random_nonzero(rng: random.Random, bound: int = 6, complex_prob: float = 0.5) -> Scalar:
    while True:
        x = random_scalar(rng, bound, complex_prob)
        if x:
            return x


def _draw_params(rng, lams, m1):
    params = []
    for k, lam in enumerate(lams):
        sigma = random_nonzero(rng)
        eta = random_scalar(rng)
        make = ModuleParams.omega if k < m1 else ModuleParams.gamma
        params.append(make(lam, sigma, eta))
    return params


def random_shape(rng: random.Random, m1: int, m2: int, V: RestrictedModule = TRIVIAL) -> TensorShape:
    """Shape with pairwise-distinct lambdas. Draws all lambdas first, then (sigma, eta) per factor."""
    lams: list[Scalar] = []
    while len(lams) < m1 + m2:
        lam = random_nonzero(rng)
        if lam not in lams:
            lams.append(lam)
    return TensorShape(_draw_params(rng, lams, m1), V)


def repeated_shape(
    rng: random.Random, m1: int, m2: int, pair: tuple[int, int] | None = None, V: RestrictedModule = TRIVIAL
) -> TensorShape:
    """Shape where factors ``pair`` (0-based) share lambda; a random pair is drawn if omitted."""
    n = m1 + m2
    if n < 2:
        raise ValueError("need at least two factors to repeat a lambda")
    if pair is None:
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        pair = (i, j + 1 if j >= i else j)
    i, j = sorted(pair)
    lams: list[Scalar] = []
    while len(lams) < n:
        lam = random_nonzero(rng)
        if lam not in lams:
            lams.append(lam)
    lams[j] = lams[i]
    return TensorShape(_draw_params(rng, lams, m1), V)


def random_signature(rng: random.Random, shape: TensorShape, max_degree: int) -> ExpSignature:
    """Uniform total degree in [0, max_degree], then one unit at a time into random slots."""
    nvars = 2 * shape.nfactors
    expo = [0] * nvars
    if nvars:
        for _ in range(rng.randint(0, max_degree)):
            expo[rng.randrange(nvars)] += 1
    return shape.signature(tuple(expo))


def monomial_signatures(shape: TensorShape, max_degree: int) -> list[ExpSignature]:
    """Every signature of total degree <= max_degree, in a fixed order."""
    nvars = 2 * shape.nfactors
    out = []

    def rec(prefix, left):
        if len(prefix) == nvars:
            out.append(shape.signature(tuple(prefix)))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    rec([], max_degree)
    return out


def random_element(
    rng: random.Random,
    shape: TensorShape,
    max_degree: int = 3,
    max_terms: int = 4,
    non_vacuum: bool = False,
) -> TensorElement:
    """Nonzero element with up to ``max_terms`` monomials times the default V-vector.

    With ``non_vacuum`` the draw is repeated until the element is not of vacuum form
    (impossible when the shape has no factors).
    """
    if non_vacuum and shape.nfactors == 0:
        raise ValueError("every nonzero element of a factorless shape is a vacuum element")
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            terms[random_signature(rng, shape, max_degree)] = random_nonzero(rng, 4, 0.3)
        g = shape.element(terms)
        if g and not (non_vacuum and g.is_vacuum_form()):
            return g


def sized_shapes(max_factors: int) -> list[tuple[int, int]]:
    return [(m1, n - m1) for n in range(max_factors + 1) for m1 in range(n, -1, -1)]


def permutations_within_blocks(shape: TensorShape, rng: random.Random) -> Sequence[int]:
    """A random factor permutation that keeps the Omega and Gamma blocks in place."""
    om = list(range(shape.m1))
    ga = list(range(shape.m1, shape.nfactors))
    rng.shuffle(om)
    rng.shuffle(ga)
    return om + ga
