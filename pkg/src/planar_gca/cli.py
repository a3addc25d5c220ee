"""Command-line verification harness.

Usage::

    planar-gca --config shape.yaml [--suite dg] [--seed 7] [--format text|structured]
               [--degree-bound 2] [--gen-bound 4]

Exit status is 0 when no check FAILs, 1 when some check FAILs and 2 for
config or validation errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable

import yaml

from . import __version__
from .exactfield import ScalarParseError, parse_scalar
from .gca import FAMILIES, Generator, LieElement, bracket, bracket_basis
from .rank1mods import ModuleParams, Poly2, act
from .sampling import (
    permutations_within_blocks,
    random_element,
    random_nonzero,
)
from .spanlab import GenVanSpec, SingularExtraction, cofactor_det, genvan_matrix, lemma2_det
from .tensorprod import TRIVIAL, TensorShape, tensor_act
from .theorems import (
    check_certificate,
    colliding_factors,
    compute_dg,
    dt_bounds,
    generation_saturation,
    recover_parameters,
    RecoveredParameters,
    simplicity_reduce,
    stable_span,
)

SUITES = ("axioms", "det", "dg", "simplicity", "generation", "recover")
PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
V_SELECTORS = {"trivial": TRIVIAL}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


@dataclass
class Bounds:
    degree_bound: int = 2
    generator_degree_bound: int = 4
    sample_count: int = 20
    seed: int = 0


@dataclass
class ExperimentConfig:
    omega: list[tuple[str, str, str]]
    gamma: list[tuple[str, str, str]]
    V: str = "trivial"
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    bounds: Bounds = field(default_factory=Bounds)

    @property
    def m1(self) -> int:
        return len(self.omega)

    @property
    def m2(self) -> int:
        return len(self.gamma)

    def shape(self) -> TensorShape:
        params = [ModuleParams.omega(*map(parse_scalar, t)) for t in self.omega]
        params += [ModuleParams.gamma(*map(parse_scalar, t)) for t in self.gamma]
        return TensorShape(params, V_SELECTORS[self.V])


# --- config parsing ---------------------------------------------------------------


def _mark(node) -> tuple[int, int]:
    return node.start_mark.line + 1, node.start_mark.column + 1


def _scalar_text(node) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise ConfigError("expected a scalar value", *_mark(node))
    return str(node.value)


def _mapping(node, what: str) -> dict:
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{what} must be a mapping", *_mark(node))
    out = {}
    for k, v in node.value:
        key = _scalar_text(k)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", *_mark(k))
        out[key] = (k, v)
    return out


def _int(node, name: str, minimum: int = 0) -> int:
    text = _scalar_text(node)
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}", *_mark(node)) from None
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}", *_mark(node))
    return value


def _triples(node, kind: str) -> list[tuple[str, str, str]]:
    if isinstance(node, yaml.ScalarNode) and node.value in ("", "null", "~"):
        return []
    if not isinstance(node, yaml.SequenceNode):
        raise ConfigError(f"{kind} must be a list of [lambda, sigma, eta] triples", *_mark(node))
    out = []
    for item in node.value:
        if not isinstance(item, yaml.SequenceNode) or len(item.value) != 3:
            raise ConfigError(f"each {kind} entry must be [lambda, sigma, eta]", *_mark(item))
        texts = []
        for name, sub in zip(("lambda", "sigma", "eta"), item.value):
            text = _scalar_text(sub)
            try:
                value = parse_scalar(text)
            except ScalarParseError as e:
                line, col = _mark(sub)
                raise ConfigError(f"bad scalar for {name}: {e}", line, col + e.column - 1) from None
            if name != "eta" and not value:
                raise ConfigError(f"{name} must be nonzero", *_mark(sub))
            texts.append(text)
        out.append(tuple(texts))
    return out


def _suites(node) -> list[str]:
    if isinstance(node, yaml.ScalarNode):
        names = [node.value] if node.value else []
        items = [node] * len(names)
    elif isinstance(node, yaml.SequenceNode):
        items = node.value
        names = [_scalar_text(n) for n in items]
    else:
        raise ConfigError("suite must be a name or a list of names", *_mark(node))
    out: list[str] = []
    for name, n in zip(names, items):
        if name == "all":
            out.extend(SUITES)
        elif name in SUITES:
            out.append(name)
        else:
            raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}, all", *_mark(n))
    return sorted(set(out), key=SUITES.index)


def parse_config(text: str) -> ExperimentConfig:
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise ConfigError(f"syntax error: {e.problem or e}", line, col) from None
    if root is None:
        raise ConfigError("empty config", 1, 1)
    top = _mapping(root, "config")
    allowed = {"shape", "suite", "bounds"}
    for key, (knode, _) in top.items():
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", *_mark(knode))
    if "shape" not in top:
        raise ConfigError("missing 'shape' section", 1, 1)
    shape = _mapping(top["shape"][1], "shape")
    for key, (knode, _) in shape.items():
        if key not in {"m", "omega", "gamma", "V"}:
            raise ConfigError(f"unknown shape key {key!r}", *_mark(knode))
    omega = _triples(shape["omega"][1], "omega") if "omega" in shape else []
    gamma = _triples(shape["gamma"][1], "gamma") if "gamma" in shape else []
    if "m" in shape:
        mnode = shape["m"][1]
        if not isinstance(mnode, yaml.SequenceNode) or len(mnode.value) != 2:
            raise ConfigError("m must be [m1, m2]", *_mark(mnode))
        m1, m2 = (_int(n, "m") for n in mnode.value)
        if (m1, m2) != (len(omega), len(gamma)):
            raise ConfigError(
                f"parameter count mismatch: m=({m1},{m2}) but {len(omega)} omega and {len(gamma)} gamma triples",
                *_mark(mnode),
            )
    V = "trivial"
    if "V" in shape:
        V = _scalar_text(shape["V"][1])
        if V not in V_SELECTORS:
            raise ConfigError(f"unknown V selector {V!r}; available: {', '.join(V_SELECTORS)}", *_mark(shape["V"][1]))
    suites = _suites(top["suite"][1]) if "suite" in top else list(SUITES)
    bounds = Bounds()
    if "bounds" in top:
        b = _mapping(top["bounds"][1], "bounds")
        names = {
            "degree_bound": 0,
            "generator_degree_bound": 0,
            "sample_count": 1,
            "seed": 0,
        }
        for key, (knode, vnode) in b.items():
            if key not in names:
                raise ConfigError(f"unknown bounds key {key!r}", *_mark(knode))
            setattr(bounds, key, _int(vnode, key, names[key]))
    return ExperimentConfig(omega, gamma, V, suites, bounds)


# --- reports ----------------------------------------------------------------------


@dataclass
class Check:
    suite: str
    name: str
    status: str
    statement: str
    detail: str = ""
    counterexample: str | None = None


@dataclass
class Report:
    header: dict
    checks: list[Check] = field(default_factory=list)

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    @property
    def exit_status(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_dict(self) -> dict:
        return {
            "header": self.header,
            "checks": [asdict(c) for c in self.checks],
            "summary": self.summary(),
        }


def emit_report(report: Report, fmt: str = "text") -> bytes:
    """Serialize deterministically; ``structured`` is canonical JSON."""
    if fmt == "structured":
        return (json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    h = report.header
    lines = [
        f"planar-gca {h['version']} verification report",
        f"shape: {h['shape']}",
        f"m = ({h['m'][0]},{h['m'][1]}); lambdas distinct: {'yes' if h['distinct_lambdas'] else 'no'}",
        f"seed: {h['seed']}; degree bound: {h['degree_bound']}; generator degree bound: {h['generator_degree_bound']}; samples: {h['sample_count']}",
        f"suites: {', '.join(h['suites']) or '(none)'}",
    ]
    current = None
    for c in report.checks:
        if c.suite != current:
            current = c.suite
            lines.append(f"== {current} ==")
        lines.append(f"{c.name} {c.status}")
        lines.append(f"    statement: {c.statement}")
        if c.detail:
            lines.append(f"    {c.detail}")
        if c.counterexample:
            lines.append(f"    counterexample: {c.counterexample}")
    if report.checks:
        s = report.summary()
        lines.append(f"summary: {s[PASS]} PASS, {s[FAIL]} FAIL, {s[INCONCLUSIVE]} INCONCLUSIVE")
    return ("\n".join(lines) + "\n").encode()


def parse_report(data: bytes) -> Report:
    """Inverse of ``emit_report(..., "structured")``."""
    obj = json.loads(data.decode())
    return Report(obj["header"], [Check(**c) for c in obj["checks"]])


# --- suites -----------------------------------------------------------------------

SuiteFn = Callable[[TensorShape, Bounds, random.Random], list]


def _suite_axioms(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    out = []
    N = min(b.generator_degree_bound, 3)
    gens = [Generator(f, n) for f in FAMILIES for n in range(-N, N + 1)]
    bad = None
    for x, y in itertools.product(gens, repeat=2):
        ex, ey = LieElement({x: 1}), LieElement({y: 1})
        if bracket(ex, ey) != -bracket(ey, ex):
            bad = f"[{x},{y}]"
            break
    if bad is None:
        for x, y, z in itertools.product(gens, repeat=3):
            ex, ey, ez = LieElement({x: 1}), LieElement({y: 1}), LieElement({z: 1})
            jac = bracket(ex, bracket(ey, ez)) + bracket(ey, bracket(ez, ex)) + bracket(ez, bracket(ex, ey))
            if jac:
                bad = f"Jacobi({x},{y},{z}) = {jac}"
                break
    out.append(
        Check(
            "axioms",
            f"bracket antisymmetry and Jacobi on basis degrees [-{N},{N}]",
            FAIL if bad else PASS,
            "the bracket table defines a Lie algebra",
            f"{len(gens)} basis elements",
            bad,
        )
    )
    for k, params in enumerate(shape.params):
        bad = _factor_axiom(params, gens, b.degree_bound)
        out.append(
            Check(
                "axioms",
                f"module axiom on factor {k + 1}: {params}",
                FAIL if bad else PASS,
                "act([a,b], f) = a(b f) - b(a f) on the rank-one module",
                f"generator degrees [-{N},{N}], monomials of degree <= {b.degree_bound}",
                bad,
            )
        )
    tgens = [Generator(f, n) for f in FAMILIES for n in range(-2, 3)]
    bad = None
    for _ in range(b.sample_count):
        g = random_element(rng, shape, max_degree=min(b.degree_bound, 2), max_terms=2)
        for x, y in itertools.product(tgens, repeat=2):
            r = bracket_basis(x, y)
            lhs = shape.zero() if r is None else r[0] * tensor_act(r[1], g)
            rhs = tensor_act(x, tensor_act(y, g)) - tensor_act(y, tensor_act(x, g))
            if lhs != rhs:
                bad = f"x={x}, y={y}, g={g.render()}"
                break
        if bad:
            break
    out.append(
        Check(
            "axioms",
            "module axiom on the tensor product",
            FAIL if bad else PASS,
            "the Leibniz action on the tensor product is a module action",
            f"{b.sample_count} random elements, generator degrees [-2,2]",
            bad,
        )
    )
    return out


def _factor_axiom(params: ModuleParams, gens, max_degree: int) -> str | None:
    monos = [Poly2.monomial(a, d - a) for d in range(max_degree + 1) for a in range(d + 1)]
    for f in monos:
        for x, y in itertools.product(gens, repeat=2):
            r = bracket_basis(x, y)
            lhs = Poly2() if r is None else act(r[1], f, params) * r[0]
            rhs = act(x, act(y, f, params), params) - act(y, act(x, f, params), params)
            if lhs != rhs:
                return f"x={x}, y={y}, f={f.render(params.kind.variables)}"
    return None


def _suite_det(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    configs = []
    for m in (1, 2, 3):
        for sizes in itertools.product((1, 2, 3), repeat=m):
            for r in (0, 1, 2):
                configs.append((sizes, r))
    bad = None
    count = 0
    lam_sets = []
    if shape.nfactors and shape.distinct_lambdas:
        lam_sets.append(list(shape.lambdas[:3]))
    for sizes, r in configs:
        draws = [ls[: len(sizes)] for ls in lam_sets if len(ls) >= len(sizes)]
        lams: list = []
        while len(lams) < len(sizes):
            x = random_nonzero(rng)
            if x not in lams:
                lams.append(x)
        draws.append(lams)
        for ls in draws:
            spec = GenVanSpec(tuple(ls), sizes, r)
            closed = lemma2_det(spec)
            brute = cofactor_det(genvan_matrix(spec))
            count += 1
            if closed != brute:
                bad = f"lambdas={[str(x) for x in ls]}, sizes={sizes}, r={r}: closed {closed} vs brute {brute}"
                break
        if bad:
            break
    return [
        Check(
            "det",
            "generalized Vandermonde closed form equals cofactor expansion",
            FAIL if bad else PASS,
            "det = prod (s_j-1)!! lam_j^(s_j(s_j+2r-1)/2) prod_{i<j} (lam_j-lam_i)^(s_i s_j)",
            f"{count} matrices, m <= 3, s_j <= 3, r <= 2",
            bad,
        )
    ]


def _expected_negative(suite: str, err: SingularExtraction) -> Check:
    idx = ",".join(map(str, colliding_factors(err)))
    return Check(
        suite,
        f"SingularExtraction: indices {idx}; consistent with the reducible case (repeated lambda)",
        PASS,
        "the tensor module is reducible when two lambdas coincide",
        "expected-negative experiment",
    )


def _suite_dg(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    m = shape.m1 + shape.m2
    vac = shape.vacuum()
    try:
        d = compute_dg(vac)
    except SingularExtraction as e:
        return [
            Check(
                "dg",
                "D_g not computed: lambdas repeat",
                INCONCLUSIVE,
                "D_g is defined for pairwise-distinct lambdas",
                str(e),
            )
        ]
    out = [
        Check(
            "dg",
            f"D_g = {d} {'=' if d == m + 1 else '!='} m1+m2+1 (equality iff vacuum)",
            PASS if d == m + 1 else FAIL,
            "D_g >= m1+m2+1 with equality exactly on vacuum elements",
            "g = vacuum",
            None if d == m + 1 else f"D_g(vacuum) = {d}",
        )
    ]
    samples = [vac]
    if shape.nfactors:
        bad = None
        values = []
        for _ in range(b.sample_count):
            g = random_element(rng, shape, max_degree=max(b.degree_bound, 1), non_vacuum=True)
            dg = compute_dg(g)
            values.append(dg)
            samples.append(g)
            if dg <= m + 1:
                bad = f"D_g = {dg} for g = {g.render()}"
                break
        out.append(
            Check(
                "dg",
                f"D_g > m1+m2+1 on {len(values)} non-vacuum elements",
                FAIL if bad else PASS,
                "D_g >= m1+m2+1 with equality exactly on vacuum elements",
                f"min {min(values)}, max {max(values)}",
                bad,
            )
        )
    bounds = dt_bounds(shape, samples)
    out.append(
        Check(
            "dg",
            f"D_T: lower bound {bounds.lower}, sampled upper bound {bounds.upper}",
            PASS if bounds.tight else FAIL,
            "D_T = inf D_g = m1+m2+1",
            f"{len(samples)} samples, vacuum included",
        )
    )
    return out


def _suite_simplicity(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    if not shape.distinct_lambdas:
        try:
            simplicity_reduce(shape.vacuum())
        except SingularExtraction as e:
            return [_expected_negative("simplicity", e)]
        return [
            Check(
                "simplicity",
                "repeated lambdas but the reduction did not raise SingularExtraction",
                FAIL,
                "the tensor module is reducible when two lambdas coincide",
            )
        ]
    bad = None
    steps = 0
    for i in range(b.sample_count):
        g = random_element(rng, shape, max_degree=max(b.degree_bound, 3))
        trace = simplicity_reduce(g)
        steps += len(trace.steps)
        prev = g
        for step in trace.steps:
            span = stable_span(step.span_family, prev)
            if not check_certificate(span, step.element, step.certificate):
                bad = f"uncertified step {step.operation} from {prev.render()}"
                break
            prev = step.element
        if bad is None and not trace.final.is_vacuum_form():
            bad = f"reduction of {g.render()} ended at {trace.final.render()}"
        if bad:
            break
    return [
        Check(
            "simplicity",
            f"{b.sample_count} random elements reduce to vacuum form",
            FAIL if bad else PASS,
            "with pairwise-distinct lambdas every nonzero submodule contains a vacuum element, hence T is simple",
            f"{steps} certified reduction steps",
            bad,
        )
    ]


def _suite_generation(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    rep = generation_saturation(shape, None, b.degree_bound, b.generator_degree_bound)
    distinct = shape.distinct_lambdas
    if rep.saturated:
        status, note = PASS, ""
    else:
        status = INCONCLUSIVE
        note = "; repeated lambdas (reducible case), failure expected" if not distinct else ""
    return [
        Check(
            "generation",
            f"vacuum closure reaches dim {rep.dim_reached}/{rep.dim_target} (degree <= {rep.degree_bound}, |n| <= {rep.generator_degree_bound})",
            status,
            "for pairwise-distinct lambdas the vacuum generates T",
            f"status {rep.status}{note}",
        )
    ]


def _fmt_params(rp: RecoveredParameters) -> str:
    om, ga = rp.sorted_triples()

    def f(ts):
        return "{" + ", ".join("(" + ", ".join(map(str, t)) + ")" for t in ts) + "}"

    return f"m=({rp.m1},{rp.m2}) Omega {f(om)} Gamma {f(ga)}"


def _suite_recover(shape: TensorShape, b: Bounds, rng: random.Random) -> list[Check]:
    try:
        got = recover_parameters(shape)
    except SingularExtraction as e:
        return [_expected_negative("recover", e)]
    want = RecoveredParameters.of_shape(shape)
    out = [
        Check(
            "recover",
            "parameter multisets recovered from the vacuum",
            PASS if got == want else FAIL,
            "T determines m and the (lambda, sigma, eta) multisets of each kind",
            _fmt_params(got),
            None if got == want else f"expected {_fmt_params(want)}",
        )
    ]
    perm = permutations_within_blocks(shape, rng)
    got_p = recover_parameters(shape.permuted(perm))
    out.append(
        Check(
            "recover",
            f"recovery invariant under factor permutation {[i + 1 for i in perm]}",
            PASS if got_p == got else FAIL,
            "permuting tensor factors gives an isomorphic module",
            _fmt_params(got_p),
        )
    )
    return out


SUITE_FUNCS: dict[str, SuiteFn] = {
    "axioms": _suite_axioms,
    "det": _suite_det,
    "dg": _suite_dg,
    "simplicity": _suite_simplicity,
    "generation": _suite_generation,
    "recover": _suite_recover,
}


def run(config: ExperimentConfig) -> Report:
    """Run the selected suites in canonical order; each suite has its own seeded stream."""
    shape = config.shape()
    b = config.bounds
    header = {
        "version": __version__,
        "shape": " ⊗ ".join([str(p) for p in shape.params] + [shape.V.name]),
        "m": [shape.m1, shape.m2],
        "distinct_lambdas": shape.distinct_lambdas,
        "seed": b.seed,
        "degree_bound": b.degree_bound,
        "generator_degree_bound": b.generator_degree_bound,
        "sample_count": b.sample_count,
        "suites": list(config.suites),
    }
    report = Report(header)
    for name in config.suites:
        rng = random.Random(f"{b.seed}:{name}")
        report.checks.extend(SUITE_FUNCS[name](shape, b, rng))
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planar-gca", description=__doc__.split("\n")[0])
    p.add_argument("--config", required=True, help="YAML experiment config")
    p.add_argument("--suite", help=f"override the suite: one of {', '.join(SUITES)}, all")
    p.add_argument("--seed", type=int, help="RNG seed (non-negative)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--gen-bound", type=int)
    p.add_argument("--sample-count", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"planar-gca: cannot read config: {e}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
        if args.suite is not None:
            node = yaml.compose(args.suite) if args.suite else yaml.ScalarNode("tag:yaml.org,2002:str", "")
            config.suites = _suites(node)
        for attr, value in (
            ("seed", args.seed),
            ("degree_bound", args.degree_bound),
            ("generator_degree_bound", args.gen_bound),
            ("sample_count", args.sample_count),
        ):
            if value is not None:
                if value < (1 if attr == "sample_count" else 0):
                    raise ConfigError(f"{attr} out of range: {value}")
                setattr(config.bounds, attr, value)
        config.shape()
    except ConfigError as e:
        print(f"{args.config}: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"{args.config}: validation error: {e}", file=sys.stderr)
        return 2
    report = run(config)
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
