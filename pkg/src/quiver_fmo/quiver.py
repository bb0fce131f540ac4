"""Quivers, symmetric Cartan matrices, dimension-vector bookkeeping, and the
conicity / goodness classifiers.

All linear algebra is exact rational arithmetic; no floating point anywhere.
"""

from __future__ import annotations

import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from typing import NamedTuple

BOX_WARN_LIMIT = 10 ** 7


@dataclass(frozen=True)
class Quiver:
    """Finite quiver: ordered vertices, directed edges by vertex index.

    Parallel edges are allowed, edge loops are not.  The vertex order is part
    of the data; every downstream output depends on it.
    """

    vertices: tuple
    edges: tuple  # tuple of (source_index, target_index)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        n = len(self.vertices)
        for s, t in self.edges:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError("edge endpoint out of range")
            if s == t:
                raise ValueError("edge loops are not allowed")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def out_edges(self, i):
        return [e for e in self.edges if e[0] == i]

    def in_edges(self, i):
        return [e for e in self.edges if e[1] == i]

    def flip_edge(self, k: int) -> "Quiver":
        s, t = self.edges[k]
        edges = list(self.edges)
        edges[k] = (t, s)
        return Quiver(self.vertices, tuple(edges))

    @staticmethod
    def from_json(data) -> "Quiver":
        verts = tuple(str(v) for v in data["vertices"])
        index = {v: i for i, v in enumerate(verts)}
        edges = []
        for e in data["edges"]:
            s, t = str(e["source"]), str(e["target"])
            if s not in index or t not in index:
                raise ValueError("edge endpoint %r not a vertex" % (e,))
            edges.append((index[s], index[t]))
        return Quiver(verts, tuple(edges))

    @staticmethod
    def load(path) -> "Quiver":
        with open(path) as fh:
            return Quiver.from_json(json.load(fh))

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": [{"source": self.vertices[s], "target": self.vertices[t]}
                      for s, t in self.edges],
        }


def a1_quiver() -> Quiver:
    return Quiver(("0",), ())


def a2_quiver() -> Quiver:
    return Quiver(("0", "1"), ((0, 1),))


def affine_sl2_quiver() -> Quiver:
    return Quiver(("0", "1"), ((0, 1), (0, 1)))


def cartan_matrix(q: Quiver):
    """C = 2*Id - adjacency, counting parallel edges; symmetric by design."""
    n = q.n
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for s, t in q.edges:
        C[s][t] -= 1
        C[t][s] -= 1
    return tuple(tuple(row) for row in C)


def mat_vec(C, x):
    return tuple(sum(C[i][j] * x[j] for j in range(len(x))) for i in range(len(C)))


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


@dataclass(frozen=True)
class DimData:
    """Framing vector w and gauge vector v, both componentwise >= 0."""

    w: tuple
    v: tuple

    def __post_init__(self):
        if len(self.w) != len(self.v):
            raise ValueError("w and v must have the same length")
        if any(x < 0 for x in self.w) or any(x < 0 for x in self.v):
            raise ValueError("w and v must be componentwise non-negative")

    @staticmethod
    def make(w, v) -> "DimData":
        return DimData(tuple(w), tuple(v))


class MuPairing(NamedTuple):
    vector: tuple
    dominant: bool


def mu_pairing(d: DimData, C) -> MuPairing:
    """w - C v, the simple-root pairings of the lower coweight; dominant iff
    all entries are >= 0."""
    vec = tuple(wi - cv for wi, cv in zip(d.w, mat_vec(C, d.v)))
    return MuPairing(vec, all(x >= 0 for x in vec))


def two_delta_minuscule(d: DimData, C, m) -> int:
    """m.(w - Cv) + m.(Cm) for 0 <= m <= v."""
    m = tuple(m)
    if any(not 0 <= mi <= vi for mi, vi in zip(m, d.v)):
        raise ValueError("need 0 <= m <= v componentwise")
    return dot(m, mu_pairing(d, C).vector) + dot(m, mat_vec(C, m))


class BoxReport(NamedTuple):
    holds: bool
    min_value: int | None
    witness: tuple | None


def _box_minimum(d: DimData, C) -> tuple:
    """Minimum of u.(w - Cv) + u.(Cu) over nonzero 0 <= u <= v, with the
    lexicographically least minimizer.  Returns (None, None) for the empty
    box (v = 0)."""
    pairing = mu_pairing(d, C).vector
    best = None
    witness = None
    size = 1
    for vi in d.v:
        size *= vi + 1
    if size > BOX_WARN_LIMIT:
        print("warning: conicity box has %d points; this may take a while" % size,
              file=sys.stderr)
    for u in itertools.product(*(range(vi + 1) for vi in d.v)):
        if not any(u):
            continue
        val = dot(u, pairing) + dot(u, mat_vec(C, u))
        if best is None or val < best:
            best, witness = val, u
    return best, witness


def check_conicity(d: DimData, C) -> BoxReport:
    """u.(w - Cv) + u.(Cu) >= 1 for all nonzero 0 <= u <= v (vacuous if v=0)."""
    best, witness = _box_minimum(d, C)
    if best is None:
        return BoxReport(True, None, None)
    return BoxReport(best >= 1, best, witness)


def check_good(d: DimData, C) -> BoxReport:
    """Same box minimum with threshold 2."""
    best, witness = _box_minimum(d, C)
    if best is None:
        return BoxReport(True, None, None)
    return BoxReport(best >= 2, best, witness)


# ---------------------------------------------------------------------------
# finite / affine / indefinite trichotomy


def _inertia(M):
    """Sylvester inertia (n_pos, n_neg, n_zero) of a symmetric matrix, by
    exact congruence diagonalization."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] for i in range(n)]
    pos = neg = zero = 0
    rows = list(range(n))
    while rows:
        pivot = None
        for i in rows:
            if A[i][i] != 0:
                pivot = i
                break
        if pivot is None:
            hot = None
            for i in rows:
                for j in rows:
                    if i != j and A[i][j] != 0:
                        hot = (i, j)
                        break
                if hot:
                    break
            if hot is None:
                zero += len(rows)
                break
            i, j = hot
            # congruence: row/col i += row/col j makes A[i][i] = 2*A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            pivot = i
        p = A[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rows.remove(pivot)
        for i in rows:
            if A[i][pivot] != 0:
                f = A[i][pivot] / p
                for k in range(n):
                    A[i][k] -= f * A[pivot][k]
                for k in range(n):
                    A[k][i] -= f * A[k][pivot]
    return pos, neg, zero


def _kernel_vector(M):
    """A nonzero rational kernel vector of M, or None if M is invertible.
    Only called when the kernel is one-dimensional."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(n):
        sel = None
        for i in range(r, n):
            if A[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        A[r], A[sel] = A[sel], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(n) if c not in piv_cols]
    if not free:
        return None
    c0 = free[0]
    x = [Fraction(0)] * n
    x[c0] = Fraction(1)
    for row, c in zip(range(r), piv_cols):
        x[c] = -A[row][c0]
    return tuple(x)


@dataclass(frozen=True)
class AffineData:
    """Trichotomy of a symmetric Cartan matrix; in the affine case also the
    primitive positive kernel vector (the marks)."""

    kind: str  # "finite" | "affine" | "indefinite"
    marks: tuple | None = None

    def level(self, d: DimData, C) -> int:
        if self.kind != "affine":
            raise ValueError("level is defined only in affine type")
        return dot(self.marks, mu_pairing(d, C).vector)


def affine_classify(C) -> AffineData:
    n = len(C)
    pos, neg, zero = _inertia(C)
    if neg == 0 and zero == 0:
        return AffineData("finite")
    if neg == 0 and zero == 1:
        ker = _kernel_vector(C)
        lcm = 1
        for x in ker:
            lcm = lcm * x.denominator // int_gcd(lcm, x.denominator)
        ints = [int(x * lcm) for x in ker]
        g = 0
        for x in ints:
            g = int_gcd(g, x)
        ints = [x // g for x in ints]
        if all(x < 0 for x in ints):
            ints = [-x for x in ints]
        if not all(x > 0 for x in ints):
            return AffineData("indefinite")
        return AffineData("affine", tuple(ints))
    return AffineData("indefinite")


def theorem_prediction(C, d: DimData) -> str | None:
    """Level-based classification of the pair, valid when both coweights are
    dominant and v != 0: 'good', 'conical-not-good', or 'not-conical'."""
    info = affine_classify(C)
    if not mu_pairing(d, C).dominant or not any(d.v):
        return None
    if info.kind == "finite":
        return "good"
    if info.kind == "affine":
        lvl = info.level(d, C)
        if lvl >= 2:
            return "good"
        if lvl == 1:
            return "conical-not-good"
        return "not-conical"
    return None
