"""Sparse Gaussian elimination over Q.

Vectors are plain dicts ``key -> Rat`` with no zero entries. Keys only
need to be hashable and totally ordered.
"""

from __future__ import annotations

from .exact import Rat


def axpy(y: dict, a, x: dict) -> None:
    """In place ``y += a*x``, dropping cancelled entries."""
    if not a:
        return
    for key, v in x.items():
        s = y.get(key, 0) + a * v
        if s:
            y[key] = s
        else:
            y.pop(key, None)


class Echelon:
    """Reduced row-echelon basis of a growing subspace.

    Each stored row has coefficient 1 at its pivot and 0 at every other
    pivot, so reducing a vector is a single pass over its pivot entries.
    Rows may optionally carry a ``tag`` vector that is transformed
    alongside, which is how kernels are extracted.
    """

    def __init__(self):
        self.rows = {}   # pivot -> row
        self.tags = {}   # pivot -> tag

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, tag: dict | None = None) -> dict:
        vec = dict(vec)
        for piv in [k for k in vec if k in self.rows]:
            c = vec.get(piv)
            if c:
                axpy(vec, -c, self.rows[piv])
                if tag is not None:
                    axpy(tag, -c, self.tags[piv])
        return vec

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict, tag: dict | None = None) -> dict:
        """Insert ``vec``; return its residual (empty dict if it was dependent).

        When ``tag`` is given it is reduced in step and, for a dependent
        vector, ends up describing the vanishing combination.
        """
        res = self.reduce(vec, tag)
        if not res:
            return res
        piv = min(res)
        c = res[piv]
        row = {k: v / c for k, v in res.items()}
        t = {k: v / c for k, v in tag.items()} if tag is not None else None
        for p, other in self.rows.items():
            d = other.get(piv)
            if d:
                axpy(other, -d, row)
                if t is not None:
                    axpy(self.tags[p], -d, t)
        self.rows[piv] = row
        if t is not None:
            self.tags[piv] = t
        return res

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


def nullspace(columns: list[dict]) -> list[dict]:
    """Basis of ``{c : sum_i c[i] * columns[i] = 0}`` as dicts ``index -> Rat``."""
    ech = Echelon()
    kernel = []
    for i, col in enumerate(columns):
        tag = {i: Rat(1)}
        res = ech.add(col, tag)
        if not res:
            kernel.append(tag)
    return kernel


def rank(vectors: list[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.dim


def determinant(rows: list[list]) -> Rat:
    """Determinant of a dense square matrix by fraction-exact elimination."""
    n = len(rows)
    a = [[Rat(x) for x in r] for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    det = Rat(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Rat(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row_r, row_c = a[r], a[col]
                for cc in range(col, n):
                    row_r[cc] -= f * row_c[cc]
    return det
