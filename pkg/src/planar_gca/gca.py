"""The planar Galilean conformal algebra: basis L_n, H_n, I_n, J_n and its bracket."""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, NamedTuple

from .exactfield import ONE, Scalar, as_scalar

__all__ = [
    "FAMILIES",
    "Generator",
    "LieElement",
    "bracket",
    "bracket_basis",
    "grade_of",
    "basis",
    "parse_generator",
    "MIXED",
]

FAMILIES = ("L", "H", "I", "J")
_FAMILY_RANK = {f: i for i, f in enumerate(FAMILIES)}
MIXED = "mixed"
DEGREE_LIMIT = 1 << 62


class Generator(NamedTuple):
    """Basis symbol X_n. Tuple order sorts by family (L<H<I<J) then degree."""

    family: str
    degree: int

    @classmethod
    def make(cls, family: str, degree: int) -> Generator:
        if family not in _FAMILY_RANK:
            raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
        degree = int(degree)
        if abs(degree) > DEGREE_LIMIT:
            raise OverflowError(f"generator degree {degree} out of range")
        return cls(family, degree)

    def sort_key(self) -> tuple[int, int]:
        return (_FAMILY_RANK[self.family], self.degree)

    def __str__(self) -> str:
        return f"{self.family}[{self.degree}]"


_GEN_RE = re.compile(r"\s*([LHIJ])\s*\[\s*([+-]?\d+)\s*\]\s*$")


def parse_generator(text: str) -> Generator:
    m = _GEN_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse generator {text!r}; expected e.g. L[3] or H[-2]")
    return Generator.make(m.group(1), int(m.group(2)))


def basis(degrees: Iterable[int], families: Iterable[str] = FAMILIES) -> list[Generator]:
    degrees = list(degrees)
    return [Generator.make(f, n) for f in families for n in degrees]


def bracket_basis(a: Generator, b: Generator) -> tuple[int, Generator] | None:
    """Bracket of two basis elements as ``(coefficient, generator)``, or None if zero."""
    fa, m = a
    fb, n = b
    if fa == "L":
        if fb == "H":
            return (n, Generator("H", m + n)) if n else None
        c = n - m
        return (c, Generator(fb, m + n)) if c else None
    if fb == "L":
        r = bracket_basis(b, a)
        return None if r is None else (-r[0], r[1])
    if fa == "H":
        if fb == "I":
            return (1, Generator("I", m + n))
        if fb == "J":
            return (-1, Generator("J", m + n))
        return None
    if fb == "H":
        r = bracket_basis(b, a)
        return None if r is None else (-r[0], r[1])
    return None


class LieElement:
    """Finite linear combination of generators; no zero coefficients stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Generator, object] | None = None) -> None:
        clean: dict[Generator, Scalar] = {}
        if terms:
            for g, c in terms.items():
                c = as_scalar(c)
                if c:
                    clean[g] = c
        self.terms = clean

    @classmethod
    def gen(cls, family: str, degree: int, coeff=ONE) -> LieElement:
        return cls({Generator.make(family, degree): coeff})

    @classmethod
    def parse(cls, text: str) -> LieElement:
        """Parse ``L[1] + 2*H[-3] - 1/2*I[0]`` style input."""
        out: dict[Generator, Scalar] = {}
        for sign, chunk in _split_signed(text):
            if "*" in chunk:
                coeff_text, gen_text = chunk.rsplit("*", 1)
                coeff = as_scalar(coeff_text.strip().strip("()"))
            else:
                coeff_text, gen_text = "", chunk
                coeff = ONE
            g = parse_generator(gen_text)
            out[g] = out.get(g, Scalar(0)) + (coeff if sign > 0 else -coeff)
        return cls(out)

    def __iter__(self) -> Iterator[tuple[Generator, Scalar]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LieElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: LieElement) -> LieElement:
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, Scalar(0)) + c
        return LieElement(out)

    def __neg__(self) -> LieElement:
        return LieElement({g: -c for g, c in self.terms.items()})

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def __rmul__(self, scalar) -> LieElement:
        s = as_scalar(scalar)
        return LieElement({g: s * c for g, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"LieElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for g, c in self:
            if c == 1:
                parts.append(str(g))
            elif c == -1:
                parts.append(f"-{g}")
            else:
                cs = str(c)
                parts.append(f"({cs})*{g}" if not c.is_real and c.re else f"{cs}*{g}")
        return " + ".join(parts).replace("+ -", "- ")


def _split_signed(text: str) -> list[tuple[int, str]]:
    out = []
    depth = 0
    sign = 1
    buf = ""
    for ch in text.strip():
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and buf.strip() and not buf.rstrip().endswith(("[", "*", "/")):
            out.append((sign, buf.strip()))
            sign, buf = (1 if ch == "+" else -1), ""
            continue
        if depth == 0 and ch in "+-" and not buf.strip():
            sign *= 1 if ch == "+" else -1
            continue
        buf += ch
    if buf.strip():
        out.append((sign, buf.strip()))
    return out


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """Bilinear extension of the basis bracket."""
    out: dict[Generator, Scalar] = {}
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            r = bracket_basis(ga, gb)
            if r is None:
                continue
            k, g = r
            out[g] = out.get(g, Scalar(0)) + ca * cb * k
    return LieElement(out)


def grade_of(e: LieElement) -> int | str:
    """Common degree n of all terms, or ``"mixed"``."""
    if not e:
        raise ValueError("grade_of: zero element has no grade")
    degrees = {g.degree for g in e.terms}
    return degrees.pop() if len(degrees) == 1 else MIXED
