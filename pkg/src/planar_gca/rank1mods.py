"""Rank-one U(H)-free modules Omega(lam, sigma, eta) = C[s,t] and Gamma(lam, sigma, eta) = C[x,y].

Omega action (f in C[s,t])::

    L_n f = lam^n (s - n t + n eta) f(s-n, t)
    H_n f = lam^n t f(s-n, t)
    I_n f = lam^n sigma f(s-n, t-1)
    J_n f = 0

Gamma action (g in C[x,y])::

    L_n g = lam^n (x + n y + n eta) g(x-n, y)
    H_n g = lam^n y g(x-n, y)
    I_n g = 0
    J_n g = lam^n sigma g(x-n, y+1)

The J-action on Gamma shifts the second variable by +1. On Omega the t-term
of L_n carries a minus sign: with ``+n t`` the commutator [L_m, I_n] acts as
(m+n) I_{m+n} instead of (n-m) I_{m+n}. With the minus sign Omega is exactly
Gamma twisted by the automorphism L -> L, H -> -H, I <-> J under y = -t, and
both satisfy the module axiom for the bracket in :mod:`planar_gca.gca`.
``act_monomial_printed`` keeps the ``+n t`` variant for comparison.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

from .exactfield import ONE, ZERO, Scalar, as_scalar
from .gca import Generator

__all__ = [
    "Kind",
    "ModuleParams",
    "Poly2",
    "omega_act",
    "gamma_act",
    "act",
    "act_monomial",
    "shift_monomial",
]

Monomial = tuple[int, int]


class Kind(enum.Enum):
    OMEGA = "Omega"
    GAMMA = "Gamma"

    @classmethod
    def parse(cls, text: str) -> Kind:
        key = text.strip().lower()
        for k in cls:
            if k.value.lower() == key:
                return k
        raise ValueError(f"unknown module kind {text!r}; expected Omega or Gamma")

    @property
    def variables(self) -> tuple[str, str]:
        return ("s", "t") if self is Kind.OMEGA else ("x", "y")


@dataclass(frozen=True)
class ModuleParams:
    """Parameters (lam, sigma, eta) of a rank-one module; lam and sigma must be nonzero."""

    kind: Kind
    lam: Scalar
    sigma: Scalar
    eta: Scalar

    def __post_init__(self):
        for name in ("lam", "sigma", "eta"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if not self.lam:
            raise ValueError("lambda must be nonzero")
        if not self.sigma:
            raise ValueError("sigma must be nonzero")

    @classmethod
    def omega(cls, lam, sigma, eta) -> ModuleParams:
        return cls(Kind.OMEGA, lam, sigma, eta)

    @classmethod
    def gamma(cls, lam, sigma, eta) -> ModuleParams:
        return cls(Kind.GAMMA, lam, sigma, eta)

    @property
    def triple(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.lam, self.sigma, self.eta)

    def __str__(self) -> str:
        return f"{self.kind.value}({self.lam}, {self.sigma}, {self.eta})"


class Poly2:
    """Sparse polynomial in two variables over Q(i); keys are exponent pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None) -> None:
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = as_scalar(c)
                if c:
                    clean[(int(mono[0]), int(mono[1]))] = c
        self.terms: dict[Monomial, Scalar] = clean

    @classmethod
    def monomial(cls, a: int, b: int, coeff=ONE) -> Poly2:
        return cls({(a, b): coeff})

    @classmethod
    def const(cls, c) -> Poly2:
        return cls({(0, 0): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly2):
            return self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self.terms == Poly2.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))

    def __add__(self, other: Poly2) -> Poly2:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Poly2(out)

    def __neg__(self) -> Poly2:
        return Poly2({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly2) -> Poly2:
        return self + (-other)

    def __mul__(self, other) -> Poly2:
        if not isinstance(other, Poly2):
            s = as_scalar(other)
            return Poly2({m: s * c for m, c in self.terms.items()})
        out: dict[Monomial, Scalar] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, ZERO) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def shift(self, da: int, db: int) -> Poly2:
        """f(u + da, v + db)."""
        out: dict[Monomial, Scalar] = {}
        for (a, b), c in self.terms.items():
            for mono, k in shift_monomial(a, b, da, db).items():
                out[mono] = out.get(mono, ZERO) + c * k
        return Poly2(out)

    def render(self, variables: tuple[str, str] = ("s", "t")) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self:
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(variables, (a, b)) if e
            )
            if not mono:
                parts.append(str(c) if c.is_real or not c.re else f"({c})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                cs = str(c) if c.is_real or not c.re else f"({c})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly2({self.render()})"


def _grlex_key(m: Monomial) -> tuple[int, int, int]:
    return (m[0] + m[1], m[0], m[1])


@lru_cache(maxsize=1 << 16)
def shift_monomial(a: int, b: int, da: int, db: int) -> dict[Monomial, int]:
    """Integer coefficients of (u + da)^a (v + db)^b.

    Returned dicts are shared through the cache and must not be mutated.
    """
    out: dict[Monomial, int] = {}
    for i in range(a + 1):
        ca = comb(a, i) * da ** (a - i)
        if not ca:
            continue
        for j in range(b + 1):
            cb = comb(b, j) * db ** (b - j)
            if cb:
                out[(i, j)] = ca * cb
    return out


@lru_cache(maxsize=1 << 18)
def act_monomial(params: ModuleParams, gen: Generator, a: int, b: int) -> dict[Monomial, Scalar]:
    """Image of the monomial u^a v^b under ``gen`` in the module ``params``.

    Cached; callers must treat the returned dict as read-only.
    """
    return _act_monomial(params, gen, a, b, False)


def act_monomial_printed(params: ModuleParams, gen: Generator, a: int, b: int) -> dict[Monomial, Scalar]:
    """Omega variant with L_n f = lam^n (s + n t + n eta) f(s-n, t); not a module action."""
    return _act_monomial(params, gen, a, b, True)


def _act_monomial(params, gen, a, b, _printed):
    family, n = gen
    kind = params.kind
    if (kind is Kind.OMEGA and family == "J") or (kind is Kind.GAMMA and family == "I"):
        return {}
    lam_n = params.lam**n
    if family in ("I", "J"):
        db = -1 if family == "I" else 1
        scale = lam_n * params.sigma
        return {m: scale * k for m, k in shift_monomial(a, b, -n, db).items()}
    shifted = shift_monomial(a, b, -n, 0)
    out: dict[Monomial, Scalar] = {}
    if family == "H":
        for (i, j), k in shifted.items():
            out[(i, j + 1)] = lam_n * k
        return out
    # L_n: multiply f(u - n, v) by (u + sign*n v + n eta); sign is -1 on Omega
    n_eta = params.eta * n
    n_v = -n if kind is Kind.OMEGA and not _printed else n
    for (i, j), k in shifted.items():
        c = lam_n * k
        for mono, coeff in (((i + 1, j), c), ((i, j + 1), c * n_v), ((i, j), c * n_eta)):
            if coeff:
                out[mono] = out.get(mono, ZERO) + coeff
    return {m: c for m, c in out.items() if c}


def act(gen: Generator, f: Poly2, params: ModuleParams) -> Poly2:
    out: dict[Monomial, Scalar] = {}
    for (a, b), c in f.terms.items():
        for mono, k in act_monomial(params, gen, a, b).items():
            out[mono] = out.get(mono, ZERO) + c * k
    return Poly2(out)


def omega_act(gen: Generator, f: Poly2, params: ModuleParams) -> Poly2:
    if params.kind is not Kind.OMEGA:
        raise ValueError("omega_act requires Omega parameters")
    return act(gen, f, params)


def gamma_act(gen: Generator, g: Poly2, params: ModuleParams) -> Poly2:
    if params.kind is not Kind.GAMMA:
        raise ValueError("gamma_act requires Gamma parameters")
    return act(gen, g, params)
