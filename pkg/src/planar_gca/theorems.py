"""Executable structure theory of the tensor modules T(m, lam, sigma, eta, V).

The central tool is the stable span ``N(X, g, p) = span{g, X_n g : n >= p}``.
For ``n >= ann_bound(g)`` the V-slot is killed and each factor k contributes
``lam_k**n`` times a polynomial in n, so

    X_n g = sum_{k, j} lam_k**n * n**j * w[k, j]

with finitely many terms. Sampling X_n g at as many consecutive n as there
are terms and solving the generalized Vandermonde system recovers every
``w[k, j]`` exactly; the same samples span N(X, g, p) because the system is
invertible. Everything below is built on that decomposition.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Iterable, Sequence

from .exactfield import ONE, Scalar
from .gca import FAMILIES, Generator
from .rank1mods import Kind
from .spanlab import Echelon, SingularExtraction, SparseVec, vandermonde_extract
from .tensorprod import (
    ExpSignature,
    TensorElement,
    TensorShape,
    VVec,
    deg,
    deg_key,
    tensor_act,
    top_exponents,
)

__all__ = [
    "StableSpan",
    "stable_span",
    "decompose",
    "lemma32_extract",
    "compute_dg",
    "estimate_dt",
    "dt_bounds",
    "DTBounds",
    "generation_saturation",
    "SaturationReport",
    "ReductionStep",
    "ReductionTrace",
    "simplicity_reduce",
    "colliding_factors",
    "RecoveredParameters",
    "recover_parameters",
    "isomorphic",
]

log = logging.getLogger(__name__)

# extra sample points used to cross-check every decomposition
VERIFY_SAMPLES = 2


def _acts_on(family: str, kind: Kind) -> bool:
    if family == "J":
        return kind is Kind.GAMMA
    if family == "I":
        return kind is Kind.OMEGA
    return True


def term_model(family: str, g: TensorElement) -> list[tuple[tuple[int, int], tuple[Scalar, int]]]:
    """Labelled terms ``((factor, power), (lam, power))`` of X_n g as a function of n.

    ``factor`` is 1-based. The n-degree on factor k is bounded by the top
    first-variable exponent of factor k, plus one for L_n.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    shape = g.shape
    monos = g.monomials()
    out = []
    for k, params in enumerate(shape.params):
        if not _acts_on(family, params.kind):
            continue
        top = max((mono[2 * k] for mono in monos), default=0)
        if family == "L":
            top += 1
        out.extend(((k + 1, j), (params.lam, j)) for j in range(top + 1))
    return out


def _sample(family: str, g: TensorElement, n: int) -> SparseVec:
    return tensor_act(Generator(family, n), g).coords


@dataclass
class Decomposition:
    """X_n g = sum lam**n n**power w[label] for all n >= threshold."""

    family: str
    base: TensorElement
    threshold: int
    labels: list[tuple[int, int]]
    terms: list[tuple[Scalar, int]]
    components: dict[tuple[int, int], SparseVec]
    samples: list[tuple[int, SparseVec]]

    def component(self, factor: int, power: int) -> TensorElement:
        return TensorElement(self.base.shape, self.components.get((factor, power), {}))


def decompose(family: str, g: TensorElement, p: int | None = None) -> Decomposition:
    """Split X_n g (n >= p) into its exponential-polynomial components.

    Raises SingularExtraction when two factors share a lambda, and ValueError
    when p is below the annihilation bound of g.
    """
    bound = g.ann_bound()
    p = bound if p is None else p
    if p < bound:
        raise ValueError(f"threshold p={p} is below the annihilation bound {bound}")
    model = term_model(family, g)
    labels = [lab for lab, _ in model]
    terms = [t for _, t in model]
    count = len(terms) + VERIFY_SAMPLES
    samples = [(n, _sample(family, g, n)) for n in range(p, p + count)]
    ws = vandermonde_extract(samples, terms, labels)
    comps = {lab: w for lab, w in zip(labels, ws) if w}
    return Decomposition(family, g, p, labels, terms, comps, samples)


@dataclass
class StableSpan:
    """Finite basis of N(X, g, p) = span{g, X_n g : n >= p}."""

    family: str
    base: TensorElement
    threshold: int
    basis: list[SparseVec]
    echelon: Echelon = field(repr=False)
    decomposition: Decomposition = field(repr=False)

    @property
    def dim(self) -> int:
        return self.echelon.dim

    def contains(self, x: TensorElement | SparseVec) -> bool:
        coords = x.coords if isinstance(x, TensorElement) else x
        return self.echelon.contains(coords)

    def certificate(self, x: TensorElement) -> dict | None:
        """Coefficients over ``"g"`` and sample degrees n with sum(c * X_n g) == x."""
        return self.echelon.express(x.coords)

    def check_stable(self, extra: Iterable[int] | None = None) -> bool:
        """Confirm X_n g lies in the span for sample points beyond those used to build it."""
        if extra is None:
            last = self.decomposition.samples[-1][0]
            extra = range(last + 1, last + 4)
        return all(self.echelon.contains(_sample(self.family, self.base, n)) for n in extra)


def stable_span(family: str, g: TensorElement, p: int | None = None) -> StableSpan:
    dec = decompose(family, g, p)
    ech = Echelon()
    ech.add(g.coords, "g")
    for n, vec in dec.samples:
        ech.add(vec, n)
    return StableSpan(family, g, dec.threshold, ech.basis(), ech, dec)


def check_certificate(span: StableSpan, x: TensorElement, cert: dict | None) -> bool:
    """Recompute sum(c * X_n g) from scratch and compare with x."""
    if cert is None:
        return False
    total = span.base.shape.zero()
    for label, c in cert.items():
        vec = span.base if label == "g" else tensor_act(Generator(span.family, label), span.base)
        total = total + c * vec
    return total == x


# --- displayed extractions ----------------------------------------------------

_DISPLAYS = {
    # which: (family, kind block, top-slice?)
    1: ("L", Kind.OMEGA, False),
    2: ("L", Kind.GAMMA, False),
    3: ("H", Kind.OMEGA, False),
    4: ("H", Kind.GAMMA, False),
    5: ("H", Kind.OMEGA, True),
    6: ("H", Kind.GAMMA, True),
}


@dataclass
class Extraction:
    which: int
    l: int
    element: TensorElement
    span: StableSpan
    certificate: dict


def lemma32_extract(which: int, g: TensorElement, l: int, threshold: int | None = None) -> Extraction:
    """Build one of the six exponent-shifted companions of g inside a stable span.

    which=1/2: multiply by s_l / x_l, inside N(L, g, i).
    which=3/4: multiply by t_l / y_l, inside N(H, g, j).
    which=5/6: on the slice where the s_l (x_l) exponent is maximal, trade that
    whole power for one extra t_l (y_l), inside N(H, g, j).
    """
    if which not in _DISPLAYS:
        raise ValueError(f"which must be 1..6, got {which}")
    if not g:
        raise ValueError("extraction needs a nonzero element")
    family, kind, top_slice = _DISPLAYS[which]
    shape = g.shape
    count = shape.m1 if kind is Kind.OMEGA else shape.m2
    if not 1 <= l <= count:
        raise IndexError(f"index l={l} out of range: shape has {count} {kind.value} factors")
    factor = l if kind is Kind.OMEGA else shape.m1 + l
    span = stable_span(family, g, threshold)
    power = 0
    sign = ONE
    if top_slice:
        P, R = top_exponents(g, l)
        power = P if kind is Kind.OMEGA else R
        sign = ONE if power % 2 == 0 else -ONE
    element = sign * span.decomposition.component(factor, power)
    cert = span.certificate(element)
    if cert is None:
        raise AssertionError(f"extracted element for display {which} is outside the stable span")
    return Extraction(which, l, element, span, cert)


# --- D_g ------------------------------------------------------------------------


def compute_dg(g: TensorElement, p: int | None = None) -> int:
    """dim(N(H,g,p) + N(I,g,p) + N(J,g,p)) in the stable range."""
    if not g:
        raise ValueError("D_g is defined for nonzero g only")
    ech = Echelon()
    for family in ("H", "I", "J"):
        for vec in stable_span(family, g, p).basis:
            ech.add(vec)
    return ech.dim


@dataclass(frozen=True)
class DTBounds:
    lower: int  # m1 + m2 + 1, attained exactly by vacuum elements
    upper: int  # min D_g over the samples
    vacuum_sampled: bool

    @property
    def tight(self) -> bool:
        return self.lower == self.upper


def estimate_dt(shape: TensorShape, samples: Sequence[TensorElement]) -> int:
    """Min of D_g over the samples: an upper bound on D_T."""
    if not samples:
        raise ValueError("need at least one sample")
    return min(compute_dg(g) for g in samples)


def dt_bounds(shape: TensorShape, samples: Sequence[TensorElement]) -> DTBounds:
    upper = estimate_dt(shape, samples)
    return DTBounds(shape.m1 + shape.m2 + 1, upper, any(g.is_vacuum_form() for g in samples))


# --- generation -----------------------------------------------------------------


@dataclass(frozen=True)
class SaturationReport:
    saturated: bool
    dim_reached: int
    dim_target: int
    degree_bound: int
    generator_degree_bound: int

    @property
    def status(self) -> str:
        return "saturated" if self.saturated else "inconclusive"


def generation_saturation(
    shape: TensorShape,
    seed_v: VVec | None = None,
    degree_bound: int = 2,
    generator_degree_bound: int = 4,
) -> SaturationReport:
    """Close span{vacuum} under X_n (|n| <= N), keeping results of total degree <= D.

    Only action results that stay inside the truncation are kept, so a
    saturated report proves the vacuum generates every monomial of degree
    <= D; an unsaturated one is inconclusive.
    """
    if not shape.V.is_trivial:
        raise ValueError("generation_saturation needs the trivial V to know the target dimension")
    D, N = degree_bound, generator_degree_bound
    nvars = 2 * shape.nfactors
    target = comb(nvars + D, D)
    gens = [Generator(f, n) for f in FAMILIES for n in range(-N, N + 1)]
    ech = Echelon()
    start = shape.vacuum(seed_v)
    ech.add(start.coords)
    queue = [start]
    while queue and ech.dim < target:
        x = queue.pop(0)
        for gen in gens:
            y = tensor_act(gen, x)
            if not y or y.total_degree() > D:
                continue
            if ech.add(y.coords):
                queue.append(y)
    return SaturationReport(ech.dim == target, ech.dim, target, D, N)


# --- simplicity -----------------------------------------------------------------


@dataclass
class ReductionStep:
    """One descent step; ``certificate`` expresses ``element`` over g and the X_n g samples."""

    operation: str
    element: TensorElement
    degree: ExpSignature
    span_family: str
    certificate: dict
    companion: TensorElement | None = None


@dataclass
class ReductionTrace:
    start: TensorElement
    steps: list[ReductionStep]
    final: TensorElement
    generation: list[Extraction]

    def __len__(self) -> int:
        return len(self.steps)


def colliding_factors(err: SingularExtraction) -> list[int]:
    """1-based factor indices taking part in a lambda collision."""
    out = set()
    for group in err.colliding_labels():
        for label in group:
            if isinstance(label, tuple):
                out.add(label[0])
    return sorted(out)


def _certified(span: StableSpan, x: TensorElement) -> dict:
    cert = span.certificate(x)
    if cert is None:
        raise AssertionError("reduction produced an element outside its stable span")
    return cert


def simplicity_reduce(g: TensorElement) -> ReductionTrace:
    """Drive g down to a vacuum element 1 x ... x 1 x v' inside the submodule it generates.

    Order: clear the s-exponents (top-slice trades), then x-exponents, then
    the t-exponents via I_n, then the y-exponents via J_n. Each new element is
    certified to lie in the stable span of its predecessor, and its degree is
    strictly lower. Finally the vacuum's own s/x/t/y companions are extracted,
    which is what shows the vacuum generates the whole module.

    Raises SingularExtraction (see :func:`colliding_factors`) if two factors
    share a lambda.
    """
    if not g:
        raise ValueError("simplicity_reduce needs a nonzero element")
    shape = g.shape
    m1 = shape.m1
    current = g
    steps: list[ReductionStep] = []
    while True:
        d = deg(current)
        if d.is_zero():
            break
        if any(d.exp_p):
            l = next(i for i, e in enumerate(d.exp_p) if e) + 1
            ext = lemma32_extract(5, current, l)
            new, span, companion = ext.element, ext.span, None
            op = f"trade top s{l}-slice for t{l} (H_n)"
        elif any(d.exp_r):
            l = next(i for i, e in enumerate(d.exp_r) if e) + 1
            ext = lemma32_extract(6, current, l)
            new, span, companion = ext.element, ext.span, None
            op = f"trade top x{l}-slice for y{l} (H_n)"
        elif any(d.exp_q):
            k = next(i for i, e in enumerate(d.exp_q) if e) + 1
            span = stable_span("I", current)
            companion = span.decomposition.component(k, 0) / shape.params[k - 1].sigma
            new = current - companion
            op = f"subtract t{k} -> t{k}-1 shift (I_n)"
        else:
            l = next(i for i, e in enumerate(d.exp_s) if e) + 1
            span = stable_span("J", current)
            factor = m1 + l
            companion = span.decomposition.component(factor, 0) / shape.params[factor - 1].sigma
            new = companion - current
            op = f"subtract y{l} -> y{l}+1 shift (J_n)"
        new_deg = deg(new)
        if not new or deg_key(new) >= deg_key(current):
            raise AssertionError(f"degree failed to drop at step {op}: {d} -> {new_deg}")
        cert = _certified(span, new)
        steps.append(ReductionStep(op, new, new_deg, span.family, cert, companion))
        current = new
    generation = [
        lemma32_extract(which, current, l)
        for which, count in ((1, shape.m1), (2, shape.m2), (3, shape.m1), (4, shape.m2))
        for l in range(1, count + 1)
    ]
    # the L-family term model covers every factor, so repeated lambdas surface here too
    if not generation:
        decompose("L", current)
    return ReductionTrace(g, steps, current, generation)


# --- isomorphism invariants -----------------------------------------------------


@dataclass(frozen=True)
class RecoveredParameters:
    m1: int
    m2: int
    omega: Counter
    gamma: Counter

    @classmethod
    def of_shape(cls, shape: TensorShape) -> RecoveredParameters:
        om = Counter(p.triple for p in shape.params if p.kind is Kind.OMEGA)
        ga = Counter(p.triple for p in shape.params if p.kind is Kind.GAMMA)
        return cls(shape.m1, shape.m2, om, ga)

    def sorted_triples(self) -> tuple[list, list]:
        def key(t):
            return tuple(x.sort_key() for x in t)

        return sorted(self.omega.elements(), key=key), sorted(self.gamma.elements(), key=key)


def _ratio(x: SparseVec, base: SparseVec) -> Scalar:
    """The scalar c with x == c * base; ValueError if x is not proportional."""
    if not x:
        return Scalar(0)
    k0 = next(iter(base))
    c = x.get(k0)
    if c is None or any(x.get(k) != c * v for k, v in base.items()) or len(x) != len(base):
        raise ValueError("vector is not proportional to the vacuum")
    return c / base[k0]


def _remove_multiple(x: SparseVec, h: SparseVec) -> SparseVec:
    """x - c*h where c is read off on the support of h."""
    if not h:
        return dict(x)
    k0 = next(iter(h))
    c = x.get(k0, Scalar(0)) / h[k0]
    out = dict(x)
    for k, v in h.items():
        r = out.get(k, Scalar(0)) - c * v
        if r:
            out[k] = r
        else:
            out.pop(k, None)
    return out


def recover_parameters(shape: TensorShape, probe_v: VVec | None = None) -> RecoveredParameters:
    """Read off m and the (lam, sigma, eta) multisets from actions on a vacuum vector.

    Uses only the module action: H_n on the vacuum exposes one coordinate
    family per factor growing like lam**n; I_n and J_n on the vacuum give
    sum lam**n sigma times the vacuum, split by kind; the n*lam**n part of
    L_n, with its H_n-direction removed, gives eta times the vacuum.
    """
    vac = shape.vacuum(probe_v)
    base = vac.coords
    p = vac.ann_bound()

    h0 = _sample("H", vac, p)
    h1 = _sample("H", vac, p + 1)
    h2 = _sample("H", vac, p + 2)
    by_mono: dict[tuple, Scalar] = {}
    for (mono, vid), c in h0.items():
        lam = h1.get((mono, vid), Scalar(0)) / c
        if h2.get((mono, vid), Scalar(0)) != lam * h1[(mono, vid)]:
            raise ValueError("H_n on the vacuum is not geometric in n")
        prev = by_mono.setdefault(mono, lam)
        if prev != lam:
            raise ValueError("inconsistent growth rate within one factor")
    monos = sorted(by_mono, reverse=True)
    labels = [mono.index(1) // 2 + 1 for mono in monos]
    lam_terms = [(by_mono[m], 0) for m in monos]

    def extract(family: str, terms: list, labs: list) -> list[SparseVec]:
        count = len(terms) + VERIFY_SAMPLES
        samples = [(n, _sample(family, vac, n)) for n in range(p, p + count)]
        return vandermonde_extract(samples, terms, labs)

    sig_I = extract("I", lam_terms, [(lab, 0) for lab in labels])
    sig_J = extract("J", lam_terms, [(lab, 0) for lab in labels])
    h_parts = extract("H", lam_terms, [(lab, 0) for lab in labels])
    l_terms = [(by_mono[m], j) for m in monos for j in (0, 1)]
    l_parts = extract("L", l_terms, [(lab, j) for lab in labels for j in (0, 1)])

    omega: Counter = Counter()
    gamma: Counter = Counter()
    for idx, mono in enumerate(monos):
        lam = by_mono[mono]
        s_i = _ratio(sig_I[idx], base)
        s_j = _ratio(sig_J[idx], base)
        if bool(s_i) == bool(s_j):
            raise ValueError(f"factor with lambda={lam} is neither purely Omega nor purely Gamma")
        # n*lam^n part of L_n on the vacuum is (c * second variable + eta) x v,
        # and the lam^n part of H_n is (second variable) x v
        eta = _ratio(_remove_multiple(l_parts[2 * idx + 1], h_parts[idx]), base)
        if s_i:
            omega[(lam, s_i, eta)] += 1
        else:
            gamma[(lam, s_j, eta)] += 1
    return RecoveredParameters(sum(omega.values()), sum(gamma.values()), omega, gamma)


def isomorphic(a: TensorShape, b: TensorShape) -> bool:
    """Isomorphism test for simple tensor modules with V trivial on both sides."""
    if not (a.V.is_trivial and b.V.is_trivial):
        raise ValueError("isomorphic() only decides the case V = W = trivial")
    return recover_parameters(a) == recover_parameters(b)
