"""Exact sparse linear algebra over Q(i) and generalized Vandermonde systems.

Sparse vectors are plain dicts ``coordinate -> Scalar`` with no zero entries;
coordinates are opaque hashables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Hashable, Iterable, Mapping, Sequence

from .exactfield import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "SparseVec",
    "Echelon",
    "rank",
    "in_span",
    "express",
    "GenVanSpec",
    "genvan_matrix",
    "lemma2_det",
    "cofactor_det",
    "elimination_det",
    "superfactorial",
    "SingularExtraction",
    "vandermonde_extract",
    "exp_poly_coeff",
]

SparseVec = dict


def _axpy(y: dict, a: Scalar, x: Mapping) -> None:
    """y += a*x in place, dropping zeros."""
    for k, c in x.items():
        v = y.get(k)
        if v is None:
            y[k] = a * c
        else:
            v = v + a * c
            if v:
                y[k] = v
            else:
                del y[k]


def scale_vec(a, x: Mapping) -> SparseVec:
    a = as_scalar(a)
    if not a:
        return {}
    return {k: a * c for k, c in x.items()}


def add_vecs(*vs: Mapping) -> SparseVec:
    out: dict = {}
    for v in vs:
        _axpy(out, ONE, v)
    return out


class Echelon:
    """Incremental row-echelon basis of a subspace.

    Each stored row has coefficient 1 at its pivot and 0 at the pivots of all
    earlier rows. Rows also record which combination of the inserted vectors
    produced them, so membership can be certified by explicit coefficients.
    """

    def __init__(self, vectors: Iterable[Mapping] = (), labels: Iterable[Hashable] | None = None) -> None:
        self.rows: list[tuple[Hashable, dict, dict]] = []  # (pivot, row, combination)
        self.inputs: dict[Hashable, dict] = {}
        labels = list(labels) if labels is not None else None
        for i, v in enumerate(vectors):
            self.add(v, labels[i] if labels is not None else None)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, v: Mapping) -> tuple[dict, dict]:
        r = {k: c for k, c in v.items() if c}
        combo: dict = {}
        for pivot, row, rc in self.rows:
            c = r.get(pivot)
            if c is not None:
                _axpy(r, -c, row)
                _axpy(combo, -c, rc)
        return r, combo

    def add(self, v: Mapping, label: Hashable = None) -> bool:
        """Insert v; return True if it enlarged the span."""
        if label is None:
            label = len(self.inputs)
        if label in self.inputs:
            raise ValueError(f"duplicate label {label!r}")
        r, combo = self._reduce(v)
        if not r:
            return False
        self.inputs[label] = dict(v)
        # pivot choice: any nonzero coordinate works; take the first for determinism
        pivot = next(iter(r))
        inv = r[pivot].inv()
        _axpy(combo, ONE, {label: ONE})
        row = {k: c * inv for k, c in r.items()}
        combo = {k: c * inv for k, c in combo.items()}
        self.rows.append((pivot, row, combo))
        return True

    def contains(self, v: Mapping) -> bool:
        r, _ = self._reduce(v)
        return not r

    def express(self, v: Mapping) -> dict | None:
        """Coefficients ``label -> Scalar`` with sum(coeff * input) == v, or None."""
        r, combo = self._reduce(v)
        if r:
            return None
        # v - sum(...) reduced to zero means v = -combo
        return {k: -c for k, c in combo.items()}

    def basis(self) -> list[dict]:
        return [dict(row) for _, row, _ in self.rows]

    def reduced_basis(self) -> list[dict]:
        """Fully reduced rows (each pivot appears in exactly one row)."""
        rows = [(p, dict(r)) for p, r, _ in self.rows]
        for i in range(len(rows) - 1, -1, -1):
            p, r = rows[i]
            for j in range(i):
                c = rows[j][1].get(p)
                if c is not None:
                    _axpy(rows[j][1], -c, r)
        return [r for _, r in rows]


def rank(vs: Iterable[Mapping]) -> int:
    return Echelon(vs).dim


def in_span(v: Mapping, vs: Iterable[Mapping]) -> bool:
    return Echelon(vs).contains(v)


def express(v: Mapping, vs: Sequence[Mapping]) -> list[Scalar] | None:
    """Coefficients c with sum(c_i * vs[i]) == v, or None if v is outside the span."""
    vs = list(vs)
    ech = Echelon(vs, labels=range(len(vs)))
    combo = ech.express(v)
    if combo is None:
        return None
    return [combo.get(i, ZERO) for i in range(len(vs))]


# --- generalized Vandermonde ------------------------------------------------


def superfactorial(m: int) -> int:
    """m!! in the sense m! * (m-1)! * ... * 1!, with 0!! = 1."""
    out = 1
    for k in range(1, m + 1):
        out *= factorial(k)
    return out


@dataclass(frozen=True)
class GenVanSpec:
    """Distinct nonzero ``lambdas``, block ``sizes`` (each >= 1) and row shift ``r`` (>= 0)."""

    lambdas: tuple
    sizes: tuple
    r: int = 0

    def __post_init__(self):
        lams = tuple(as_scalar(x) for x in self.lambdas)
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "sizes", sizes)
        if len(lams) != len(sizes):
            raise ValueError("lambdas and sizes differ in length")
        if any(not x for x in lams):
            raise ValueError("lambdas must be nonzero")
        if len(set(lams)) != len(lams):
            raise ValueError("lambdas must be pairwise distinct")
        if any(s < 1 for s in sizes):
            raise ValueError("sizes must be >= 1")
        if self.r < 0:
            raise ValueError("shift r must be >= 0")

    @property
    def order(self) -> int:
        return sum(self.sizes)

    def columns(self) -> list[tuple[Scalar, int]]:
        """Column q as ``(lambda_t, power)`` so that f_q(n) = n**power * lambda_t**n."""
        return [(lam, j) for lam, s in zip(self.lambdas, self.sizes) for j in range(s)]


def exp_poly_coeff(lam: Scalar, power: int, n: int) -> Scalar:
    """n**power * lam**n with 0**0 == 1."""
    return lam**n * (n**power)


def genvan_matrix(spec: GenVanSpec) -> list[list[Scalar]]:
    cols = spec.columns()
    return [[exp_poly_coeff(lam, j, p + spec.r) for lam, j in cols] for p in range(spec.order)]


def lemma2_det(spec: GenVanSpec) -> Scalar:
    """Closed-form determinant of :func:`genvan_matrix`."""
    r = spec.r
    out = ONE
    for lam, s in zip(spec.lambdas, spec.sizes):
        # s(s + 2r - 1) is always even
        out = out * superfactorial(s - 1) * lam ** (s * (s + 2 * r - 1) // 2)
    lams, sizes = spec.lambdas, spec.sizes
    for j in range(len(lams)):
        for i in range(j):
            out = out * (lams[j] - lams[i]) ** (sizes[i] * sizes[j])
    return out


def cofactor_det(matrix: Sequence[Sequence]) -> Scalar:
    """Determinant by Laplace expansion along rows, memoized on the used-column set.

    Independent of elimination; O(n 2^n), fine for n up to ~14.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        return ONE
    rows = [[as_scalar(x) for x in row] for row in matrix]
    memo: dict[int, Scalar] = {}

    def minor(row: int, used: int) -> Scalar:
        if row == n:
            return ONE
        cached = memo.get(used)
        if cached is not None:
            return cached
        total = ZERO
        sign_pos = 0
        for col in range(n):
            bit = 1 << col
            if used & bit:
                continue
            a = rows[row][col]
            if a:
                term = a * minor(row + 1, used | bit)
                total = total + term if sign_pos % 2 == 0 else total - term
            sign_pos += 1
        memo[used] = total
        return total

    return minor(0, 0)


def elimination_det(matrix: Sequence[Sequence]) -> Scalar:
    """Determinant by exact Gaussian elimination."""
    a = [[as_scalar(x) for x in row] for row in matrix]
    n = len(a)
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inv()
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


class SingularExtraction(ArithmeticError):
    """The exponential-polynomial system cannot be solved uniquely.

    ``terms`` is the offending ``(lambda, power)`` list, ``labels`` their
    caller-side labels and ``collisions`` the groups of term positions that
    coincide (empty if the matrix is singular for another reason).
    """

    def __init__(self, terms, labels=None, collisions=None, message: str | None = None) -> None:
        self.terms = list(terms)
        self.labels = list(labels) if labels is not None else list(range(len(self.terms)))
        self.collisions = [tuple(g) for g in (collisions or [])]
        if message is None:
            if self.collisions:
                groups = "; ".join(
                    ", ".join(str(self.labels[i]) for i in g) for g in self.collisions
                )
                message = f"repeated (lambda, power) terms: {groups}"
            else:
                message = "singular generalized Vandermonde system"
        super().__init__(message)

    def colliding_labels(self) -> list[tuple]:
        return [tuple(self.labels[i] for i in g) for g in self.collisions]


def _collisions(terms: Sequence[tuple[Scalar, int]]) -> list[tuple[int, ...]]:
    groups: dict = {}
    for i, t in enumerate(terms):
        groups.setdefault(t, []).append(i)
    return [tuple(g) for g in groups.values() if len(g) > 1]


def _invert(a: list[list[Scalar]]) -> list[list[Scalar]] | None:
    n = len(a)
    m = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = m[c][c].inv()
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def vandermonde_extract(
    samples: Sequence[tuple[int, Mapping]],
    terms: Sequence[tuple],
    labels: Sequence[Hashable] | None = None,
) -> list[SparseVec]:
    """Recover the w_k in F(n) = sum_k lambda_k**n * n**j_k * w_k from samples of F.

    ``samples`` are ``(n, F(n))`` pairs; the first ``len(terms)`` of them are
    solved exactly, any further samples are checked against the solution.
    """
    terms = [(as_scalar(lam), int(j)) for lam, j in terms]
    if not terms:
        for n, vec in samples:
            if vec:
                raise ValueError(f"nonzero sample at n={n} but no terms")
        return []
    coll = _collisions(terms)
    if coll:
        raise SingularExtraction(terms, labels, coll)
    S = len(terms)
    if len(samples) < S:
        raise ValueError(f"need at least {S} samples, got {len(samples)}")
    head = samples[:S]
    a = [[exp_poly_coeff(lam, j, n) for lam, j in terms] for n, _ in head]
    inv = _invert(a)
    if inv is None:
        raise SingularExtraction(terms, labels)
    ws: list[SparseVec] = []
    for k in range(S):
        w: dict = {}
        for i, (_, vec) in enumerate(head):
            c = inv[k][i]
            if c:
                _axpy(w, c, vec)
        ws.append(w)
    for n, vec in samples[S:]:
        model: dict = {}
        for (lam, j), w in zip(terms, ws):
            _axpy(model, exp_poly_coeff(lam, j, n), w)
        _axpy(model, -ONE, vec)
        if model:
            raise ValueError(f"sample at n={n} is inconsistent with the term model")
    return ws
