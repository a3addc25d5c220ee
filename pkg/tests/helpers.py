"""Shared helpers: module-axiom checks and sympy oracles."""

from __future__ import annotations

import sympy as sp

from planar_gca.exactfield import Scalar
from planar_gca.gca import LieElement, bracket
from planar_gca.rank1mods import Kind, ModuleParams, Poly2, act
from planar_gca.tensorprod import TensorElement, tensor_act

u, v = sp.symbols("u v")


def to_sympy(c: Scalar):
    re, im = c.as_fractions()
    return sp.Rational(re.numerator, re.denominator) + sp.I * sp.Rational(im.numerator, im.denominator)


def poly_to_sympy(f: Poly2):
    return sp.expand(sum((to_sympy(c) * u**a * v**b for (a, b), c in f.terms.items()), sp.Integer(0)))


def oracle_act(family: str, n: int, f, p: ModuleParams):
    """The rank-one action written directly from the defining formulas."""
    lam, sigma, eta = (to_sympy(x) for x in p.triple)
    omega = p.kind is Kind.OMEGA
    if family == "L":
        sign = -1 if omega else 1
        return sp.expand(lam**n * (u + sign * n * v + n * eta) * f.subs(u, u - n))
    if family == "H":
        return sp.expand(lam**n * v * f.subs(u, u - n))
    if (family == "I") == omega:
        return sp.expand(lam**n * sigma * f.subs({u: u - n, v: v + (-1 if omega else 1)}, simultaneous=True))
    return sp.Integer(0)


def apply_lie(x: LieElement, f: Poly2, p: ModuleParams, action=act) -> Poly2:
    out = Poly2()
    for gen, c in x.terms.items():
        out = out + action(gen, f, p) * c
    return out


def module_axiom_defect(x: LieElement, y: LieElement, f: Poly2, p: ModuleParams, action=act) -> Poly2:
    lhs = apply_lie(bracket(x, y), f, p, action)
    rhs = apply_lie(x, apply_lie(y, f, p, action), p, action) - apply_lie(y, apply_lie(x, f, p, action), p, action)
    return lhs - rhs


def tensor_apply(x: LieElement, g: TensorElement) -> TensorElement:
    out = g.shape.zero()
    for gen, c in x.terms.items():
        out = out + c * tensor_act(gen, g)
    return out


def tensor_axiom_holds(x: LieElement, y: LieElement, g: TensorElement) -> bool:
    lhs = tensor_apply(bracket(x, y), g)
    rhs = tensor_apply(x, tensor_apply(y, g)) - tensor_apply(y, tensor_apply(x, g))
    return lhs == rhs
