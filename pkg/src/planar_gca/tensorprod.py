"""Tensor products T = (Omega_1 x ... x Omega_m1) x (Gamma_1 x ... x Gamma_m2) x V.

A vector of T is stored as a sparse map ``(mono, vid) -> Scalar`` where
``mono = (a_1, b_1, ..., a_m, b_m)`` lists the exponents of each rank-one
factor (``s_k^a t_k^b`` for Omega factors, ``x_l^a y_l^b`` for Gamma factors)
and ``vid`` is a basis id of the restricted module V. The per-monomial
V-component is recovered with :meth:`TensorElement.components`.

Exponent vectors are named ``exp_p, exp_q, exp_r, exp_s`` in
:class:`ExpSignature`; the Omega variables are ``s_k, t_k`` and the Gamma
variables ``x_l, y_l``; annihilation bounds of V-vectors are ``ann_bound``.
"""

from __future__ import annotations

import abc
import functools
from collections import defaultdict
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .exactfield import ONE, ZERO, Scalar, as_scalar
from .gca import Generator
from .rank1mods import Kind, ModuleParams, act_monomial

__all__ = [
    "VVec",
    "RestrictedModule",
    "TrivialModule",
    "TRIVIAL",
    "TensorShape",
    "ExpSignature",
    "TensorElement",
    "NEG_INFINITY",
    "tensor_act",
    "compare_sig",
    "deg",
    "top_exponents",
]


class VVec(Mapping):
    """Immutable sparse vector of a restricted module: basis id -> Scalar."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[Hashable, object] | None = None) -> None:
        clean = {}
        if data:
            for k, c in data.items():
                c = as_scalar(c)
                if c:
                    clean[k] = c
        self._data = clean
        self._hash = None

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return self._data == dict(other)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self._data)

    def __add__(self, other: Mapping) -> VVec:
        out = dict(self._data)
        for k, c in other.items():
            out[k] = out.get(k, ZERO) + c
        return VVec(out)

    def __neg__(self) -> VVec:
        return VVec({k: -c for k, c in self._data.items()})

    def __sub__(self, other: Mapping) -> VVec:
        return self + (-VVec(other))

    def __rmul__(self, scalar) -> VVec:
        s = as_scalar(scalar)
        return VVec({k: s * c for k, c in self._data.items()})

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {c}" for k, c in sorted(self._data.items(), key=lambda kv: repr(kv[0])))
        return f"VVec({{{inner}}})"


class RestrictedModule(abc.ABC):
    """A restricted module V, given on a (possibly infinite) basis of ids.

    Implementations supply :meth:`act` and :meth:`annihilation_bound`. Every
    vector ``v`` must satisfy ``act(X_n, v) == 0`` for all families X and all
    ``n >= annihilation_bound(v)``. Simplicity of V is the caller's contract;
    nothing here checks it. ``act`` must be pure so instances can be shared.
    """

    name = "restricted"

    @abc.abstractmethod
    def act(self, gen: Generator, v: VVec) -> VVec: ...

    @abc.abstractmethod
    def annihilation_bound(self, v: VVec) -> int: ...

    @property
    def is_trivial(self) -> bool:
        return False

    def default_vector(self) -> VVec:
        raise NotImplementedError(f"{type(self).__name__} has no default vector")

    # Linear-structure helpers; VVec already carries coordinates.
    def add(self, u: VVec, v: VVec) -> VVec:
        return u + v

    def scale(self, a, v: VVec) -> VVec:
        return a * v

    def is_zero(self, v: VVec) -> bool:
        return not v

    def coords(self, v: VVec) -> dict:
        return dict(v)


class TrivialModule(RestrictedModule):
    """The one-dimensional trivial module C; every generator acts as zero."""

    name = "trivial"
    basis_id = "v"

    def act(self, gen: Generator, v: VVec) -> VVec:
        return VVec()

    def annihilation_bound(self, v: VVec) -> int:
        return 0

    @property
    def is_trivial(self) -> bool:
        return True

    def default_vector(self) -> VVec:
        return VVec({self.basis_id: ONE})

    def __eq__(self, other) -> bool:
        return type(other) is TrivialModule

    def __hash__(self) -> int:
        return hash(TrivialModule)

    def __repr__(self) -> str:
        return "TrivialModule()"


TRIVIAL = TrivialModule()


class ExpSignature(NamedTuple):
    """Exponent quadruple: Omega ``s``/``t`` exponents, then Gamma ``x``/``y`` exponents."""

    exp_p: tuple[int, ...]
    exp_q: tuple[int, ...]
    exp_r: tuple[int, ...]
    exp_s: tuple[int, ...]

    def order_key(self) -> tuple[int, ...]:
        # p first, then r, then q, then s; equal lengths make tuple order lexicographic
        return self.exp_p + self.exp_r + self.exp_q + self.exp_s

    def total_degree(self) -> int:
        return sum(self.exp_p) + sum(self.exp_q) + sum(self.exp_r) + sum(self.exp_s)

    def is_zero(self) -> bool:
        return not any(self.order_key())

    def __str__(self) -> str:
        def f(t):
            return "(" + ",".join(map(str, t)) + ")"

        return f"(p={f(self.exp_p)}, q={f(self.exp_q)}, r={f(self.exp_r)}, s={f(self.exp_s)})"


@functools.total_ordering
class _NegInfinity:
    """Degree of the zero element; below every signature."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("NEG_INFINITY")

    def __repr__(self) -> str:
        return "NEG_INFINITY"


NEG_INFINITY = _NegInfinity()


class TensorShape:
    """Factor parameters (Omega factors first, then Gamma) plus the restricted module V."""

    def __init__(self, params: Sequence[ModuleParams], V: RestrictedModule = TRIVIAL) -> None:
        params = tuple(params)
        kinds = [p.kind for p in params]
        m1 = sum(1 for k in kinds if k is Kind.OMEGA)
        if any(k is not Kind.OMEGA for k in kinds[:m1]):
            raise ValueError("Omega factors must precede Gamma factors")
        self.params = params
        self.m1 = m1
        self.m2 = len(params) - m1
        self.V = V

    @classmethod
    def build(cls, omega: Iterable = (), gamma: Iterable = (), V: RestrictedModule = TRIVIAL) -> TensorShape:
        """Shape from ``(lam, sigma, eta)`` triples; entries may be ints, Fractions or text."""
        params = [ModuleParams.omega(*t) for t in omega] + [ModuleParams.gamma(*t) for t in gamma]
        return cls(params, V)

    @property
    def nfactors(self) -> int:
        return len(self.params)

    @property
    def lambdas(self) -> tuple[Scalar, ...]:
        return tuple(p.lam for p in self.params)

    def lambda_collisions(self) -> list[tuple[int, int]]:
        """1-based index pairs (i, j), i < j, with equal lambda."""
        lams = self.lambdas
        return [
            (i + 1, j + 1)
            for i in range(len(lams))
            for j in range(i + 1, len(lams))
            if lams[i] == lams[j]
        ]

    @property
    def distinct_lambdas(self) -> bool:
        return not self.lambda_collisions()

    def variable_names(self, k: int) -> tuple[str, str]:
        """Names of the two variables of factor k (0-based)."""
        if k < self.m1:
            return (f"s{k + 1}", f"t{k + 1}")
        return (f"x{k - self.m1 + 1}", f"y{k - self.m1 + 1}")

    def signature(self, mono: tuple[int, ...]) -> ExpSignature:
        m1 = self.m1
        a, b = mono[0::2], mono[1::2]
        return ExpSignature(a[:m1], b[:m1], a[m1:], b[m1:])

    def monomial(self, sig: ExpSignature | Sequence[Sequence[int]]) -> tuple[int, ...]:
        sig = ExpSignature(*(tuple(c) for c in sig))
        if (len(sig.exp_p), len(sig.exp_q), len(sig.exp_r), len(sig.exp_s)) != (
            self.m1,
            self.m1,
            self.m2,
            self.m2,
        ):
            raise ValueError(f"signature {sig} does not match shape m=({self.m1},{self.m2})")
        if any(e < 0 for e in sig.order_key()):
            raise ValueError(f"negative exponent in {sig}")
        a = sig.exp_p + sig.exp_r
        b = sig.exp_q + sig.exp_s
        return tuple(x for pair in zip(a, b) for x in pair)

    def zero_signature(self) -> ExpSignature:
        return ExpSignature((0,) * self.m1, (0,) * self.m1, (0,) * self.m2, (0,) * self.m2)

    def zero(self) -> TensorElement:
        return TensorElement(self, {})

    def vacuum(self, v: VVec | None = None) -> TensorElement:
        """The element 1 x ... x 1 x v."""
        v = self.V.default_vector() if v is None else v
        if not v:
            raise ValueError("vacuum needs a nonzero V-vector")
        mono = (0,) * (2 * self.nfactors)
        return TensorElement(self, {(mono, vid): c for vid, c in v.items()})

    def element(self, terms: Mapping, v: VVec | None = None) -> TensorElement:
        """Build from ``{signature: coeff}`` (coefficient times ``v``) or ``{signature: VVec}``."""
        default_v = None
        coords: dict = {}
        for sig, val in terms.items():
            mono = self.monomial(sig)
            if isinstance(val, Mapping):
                vec = val
            else:
                if default_v is None:
                    default_v = self.V.default_vector() if v is None else v
                vec = as_scalar(val) * default_v
            for vid, c in vec.items():
                key = (mono, vid)
                coords[key] = coords.get(key, ZERO) + c
        return TensorElement(self, coords)

    def permuted(self, perm: Sequence[int]) -> TensorShape:
        """Shape whose factor i is this shape's factor ``perm[i]`` (0-based; kinds must stay in blocks)."""
        _check_perm(self, perm)
        return TensorShape([self.params[j] for j in perm], self.V)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorShape) and self.params == other.params and self.V == other.V

    def __hash__(self) -> int:
        return hash((self.params, self.V))

    def __repr__(self) -> str:
        inner = " ⊗ ".join(str(p) for p in self.params)
        return f"TensorShape(m=({self.m1},{self.m2}), {inner or 'C'} ⊗ {self.V.name})"


def _check_perm(shape: TensorShape, perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(shape.nfactors)):
        raise ValueError(f"{perm} is not a permutation of the factors")
    for i, j in enumerate(perm):
        if shape.params[i].kind is not shape.params[j].kind:
            raise ValueError("a factor permutation must keep Omega and Gamma blocks in place")


class TensorElement:
    """Immutable sparse vector of a tensor module."""

    __slots__ = ("shape", "coords", "_hash")

    def __init__(self, shape: TensorShape, coords: Mapping[tuple, Scalar]) -> None:
        self.shape = shape
        self.coords: dict[tuple, Scalar] = {k: c for k, c in coords.items() if c}
        self._hash = None

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorElement):
            return self.shape == other.shape and self.coords == other.coords
        if other == 0:
            return not self.coords
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.coords.items()))
        return self._hash

    def _check(self, other: TensorElement) -> None:
        if other.shape is not self.shape and other.shape != self.shape:
            raise ValueError("tensor elements belong to different shapes")

    def __add__(self, other: TensorElement) -> TensorElement:
        self._check(other)
        out = dict(self.coords)
        for k, c in other.coords.items():
            out[k] = out.get(k, ZERO) + c
        return TensorElement(self.shape, out)

    def __neg__(self) -> TensorElement:
        return TensorElement(self.shape, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def __rmul__(self, scalar) -> TensorElement:
        s = as_scalar(scalar)
        return TensorElement(self.shape, {k: s * c for k, c in self.coords.items()})

    def __truediv__(self, scalar) -> TensorElement:
        return as_scalar(scalar).inv() * self

    def components(self) -> dict[ExpSignature, VVec]:
        """Per-monomial V-components v_{pqrs}; every value is nonzero."""
        grouped: dict[tuple, dict] = defaultdict(dict)
        for (mono, vid), c in self.coords.items():
            grouped[mono][vid] = c
        return {self.shape.signature(mono): VVec(d) for mono, d in grouped.items()}

    def support(self) -> set[ExpSignature]:
        return {self.shape.signature(mono) for mono, _ in self.coords}

    def monomials(self) -> set[tuple[int, ...]]:
        return {mono for mono, _ in self.coords}

    def is_vacuum_form(self) -> bool:
        """True iff this is 1 x ... x 1 x v with v != 0."""
        return bool(self.coords) and all(not any(mono) for mono, _ in self.coords)

    def vacuum_vector(self) -> VVec:
        """The V-vector v of a vacuum-form element."""
        if not self.is_vacuum_form():
            raise ValueError("element is not of vacuum form")
        return VVec({vid: c for (_, vid), c in self.coords.items()})

    def ann_bound(self) -> int:
        V = self.shape.V
        if V.is_trivial or not self.coords:
            return 0
        return max(V.annihilation_bound(v) for v in self.components().values())

    def total_degree(self) -> int:
        return max((sum(mono) for mono, _ in self.coords), default=-1)

    def permuted(self, perm: Sequence[int]) -> TensorElement:
        """The image of this element in ``shape.permuted(perm)``."""
        new_shape = self.shape.permuted(perm)
        out = {}
        for (mono, vid), c in self.coords.items():
            new_mono = tuple(x for j in perm for x in mono[2 * j : 2 * j + 2])
            out[(new_mono, vid)] = c
        return TensorElement(new_shape, out)

    def map_factor(self, k: int, fn) -> TensorElement:
        """Apply a linear map on factor k given as ``fn(a, b) -> {(a', b'): coeff}``."""
        out: dict[tuple, Scalar] = {}
        lo = 2 * k
        for (mono, vid), c in self.coords.items():
            for (i, j), coeff in fn(mono[lo], mono[lo + 1]).items():
                key = (mono[:lo] + (i, j) + mono[lo + 2 :], vid)
                out[key] = out.get(key, ZERO) + c * coeff
        return TensorElement(self.shape, out)

    def __iter__(self) -> Iterator[tuple[ExpSignature, VVec]]:
        comps = self.components()
        for sig in sorted(comps, key=ExpSignature.order_key, reverse=True):
            yield sig, comps[sig]

    def render(self) -> str:
        if not self.coords:
            return "0"
        shape = self.shape
        parts = []
        keys = sorted(self.coords, key=lambda k: (shape.signature(k[0]).order_key(), repr(k[1])), reverse=True)
        for mono, vid in keys:
            c = self.coords[(mono, vid)]
            factors = []
            for k in range(shape.nfactors):
                for name, e in zip(shape.variable_names(k), mono[2 * k : 2 * k + 2]):
                    if e:
                        factors.append(name if e == 1 else f"{name}^{e}")
            head = "*".join(factors) or "1"
            cs = str(c) if c.is_real or not c.re else f"({c})"
            prefix = "" if c == 1 else "-" if c == -1 else f"{cs}*"
            parts.append(f"{prefix}{head}⊗{vid}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TensorElement({self.render()})"


def tensor_act(gen: Generator, g: TensorElement) -> TensorElement:
    """Leibniz action of a generator on a tensor element."""
    shape = g.shape
    out: dict[tuple, Scalar] = {}
    factors = shape.params
    for (mono, vid), c in g.coords.items():
        for k, params in enumerate(factors):
            lo = 2 * k
            img = act_monomial(params, gen, mono[lo], mono[lo + 1])
            if not img:
                continue
            head, tail = mono[:lo], mono[lo + 2 :]
            for ij, coeff in img.items():
                key = (head + ij + tail, vid)
                prev = out.get(key)
                out[key] = c * coeff if prev is None else prev + c * coeff
    V = shape.V
    if not V.is_trivial:
        grouped: dict[tuple, dict] = defaultdict(dict)
        for (mono, vid), c in g.coords.items():
            grouped[mono][vid] = c
        for mono, d in grouped.items():
            for vid, c in V.act(gen, VVec(d)).items():
                key = (mono, vid)
                out[key] = out.get(key, ZERO) + c
    return TensorElement(shape, out)


def _sig_key(sig):
    return (0,) if sig is NEG_INFINITY else (1,) + sig.order_key()


def compare_sig(a: ExpSignature, b: ExpSignature) -> int:
    """-1, 0 or 1 as a precedes, equals or follows b in the composite order (p, r, q, s)."""
    if a is not NEG_INFINITY and b is not NEG_INFINITY:
        la = tuple(map(len, a))
        lb = tuple(map(len, b))
        if la != lb:
            raise ValueError(f"signature shapes differ: {la} vs {lb}")
    ka, kb = _sig_key(a), _sig_key(b)
    return (ka > kb) - (ka < kb)


def deg(g: TensorElement) -> ExpSignature:
    """Maximal signature in the support, or NEG_INFINITY for zero."""
    if not g.coords:
        return NEG_INFINITY
    shape = g.shape
    best = max(g.monomials(), key=lambda mono: shape.signature(mono).order_key())
    return shape.signature(best)


def deg_key(g: TensorElement) -> tuple:
    """Sort key consistent with :func:`compare_sig` on ``deg(g)``."""
    return _sig_key(deg(g))


def top_exponents(g: TensorElement, l: int) -> tuple[int | None, int | None]:
    """``(P_l, R_l)``: max s_l- and x_l-exponents over the support (1-based l).

    A component is None when the shape has fewer than l factors of that kind.
    """
    if not g.coords:
        raise ValueError("top_exponents: zero element")
    shape = g.shape
    if not 1 <= l <= max(shape.m1, shape.m2):
        raise IndexError(f"index l={l} out of range for m=({shape.m1},{shape.m2})")
    P = R = None
    if l <= shape.m1:
        P = max(mono[2 * (l - 1)] for mono in g.monomials())
    if l <= shape.m2:
        R = max(mono[2 * (shape.m1 + l - 1)] for mono in g.monomials())
    return P, R
