"""Exact dense linear algebra over prime fields GF(p).

Matrices are immutable, stored as numpy int64 arrays with entries reduced
to [0, p).  Everything downstream (representations, intertwiners, cocycle
values) is carried by these matrices, so elimination order is kept strictly
deterministic: pivots are always the first nonzero entry in column order.
"""

from __future__ import annotations

import numpy as np


class ContractViolation(ValueError):
    """Raised when an operation is called outside its stated preconditions."""


def is_prime(p: int) -> bool:
    if p < 2 or p >= 2**31:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ContractViolation(f"modulus {p} is not a prime < 2^31")


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(x, p - 2, p)


class GFMatrix:
    """Dense matrix over GF(p)."""

    __slots__ = ("a", "p")

    def __init__(self, data, p: int, _checked: bool = False):
        if not _checked:
            _check_prime(p)
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ContractViolation("matrix data must be 2-dimensional")
        if not _checked:
            arr = np.mod(arr, p)
        arr.setflags(write=False)
        self.a = arr
        self.p = p

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int, p: int) -> "GFMatrix":
        return GFMatrix(np.eye(n, dtype=np.int64), p)

    @staticmethod
    def zeros(rows: int, cols: int, p: int) -> "GFMatrix":
        return GFMatrix(np.zeros((rows, cols), dtype=np.int64), p)

    # -- basic structure ----------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GFMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def key(self) -> bytes:
        """Canonical byte key, used for set membership of matrices."""
        return self.a.tobytes()

    def __repr__(self):
        return f"GFMatrix(p={self.p},\n{self.a})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))
        )

    # -- arithmetic ----------------------------------------------------

    def _same_field(self, other: "GFMatrix") -> None:
        if self.p != other.p:
            raise ContractViolation(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        return GFMatrix((self.a + other.a) % self.p, self.p, _checked=True)

    def __sub__(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        return GFMatrix((self.a - other.a) % self.p, self.p, _checked=True)

    def __neg__(self) -> "GFMatrix":
        return GFMatrix((-self.a) % self.p, self.p, _checked=True)

    def scale(self, c: int) -> "GFMatrix":
        return GFMatrix((self.a * (c % self.p)) % self.p, self.p, _checked=True)

    def __matmul__(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ContractViolation(
                f"dimension mismatch: {self.shape} @ {other.shape}"
            )
        # int64 is safe as long as cols * (p-1)^2 stays below 2^63
        if self.cols * (self.p - 1) ** 2 < 2**62:
            prod = (self.a @ other.a) % self.p
        else:
            prod = np.array(
                [
                    [
                        sum(int(x) * int(y) for x, y in zip(row, col)) % self.p
                        for col in other.a.T
                    ]
                    for row in self.a
                ],
                dtype=np.int64,
            )
        return GFMatrix(prod, self.p, _checked=True)

    def transpose(self) -> "GFMatrix":
        return GFMatrix(self.a.T.copy(), self.p, _checked=True)

    def kron(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        return GFMatrix(np.kron(self.a, other.a) % self.p, self.p, _checked=True)

    def hstack(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        return GFMatrix(np.hstack([self.a, other.a]), self.p, _checked=True)

    def vstack(self, other: "GFMatrix") -> "GFMatrix":
        self._same_field(other)
        return GFMatrix(np.vstack([self.a, other.a]), self.p, _checked=True)

    def submatrix(self, rows, cols) -> "GFMatrix":
        return GFMatrix(self.a[np.ix_(rows, cols)].copy(), self.p, _checked=True)

    def flatten(self) -> "GFMatrix":
        """Row-major flattening to a 1 x (rows*cols) vector."""
        return GFMatrix(self.a.reshape(1, -1).copy(), self.p, _checked=True)

    # -- elimination ----------------------------------------------------

    def rref(self):
        """Reduced row echelon form.

        Returns (R, rank, pivot_columns).  Pivot choice is the first
        nonzero entry scanning rows top-down within each column, so the
        result is deterministic.
        """
        p = self.p
        m = self.a.copy()
        rows, cols = m.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
            m[r] = (m[r] * inv_mod(int(m[r, c]), p)) % p
            col = m[:, c].copy()
            col[r] = 0
            m = (m - np.outer(col, m[r])) % p
            pivots.append(c)
            r += 1
        return GFMatrix(m, p, _checked=True), r, pivots

    def rank(self) -> int:
        return self.rref()[1]

    def nullspace(self) -> "GFMatrix":
        """Basis of {x : self @ x = 0}, returned as rows of a matrix.

        The basis is the canonical one read off the rref: one vector per
        free column, with -coefficients at the pivot positions.
        """
        p = self.p
        red, rank, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((len(free), self.cols), dtype=np.int64)
        for k, fc in enumerate(free):
            basis[k, fc] = 1
            for r, pc in enumerate(pivots):
                basis[k, pc] = (-red.a[r, fc]) % p
        return GFMatrix(basis, p, _checked=True)

    def inverse(self):
        """Inverse matrix, or None if singular.  Raises if not square."""
        if self.rows != self.cols:
            raise ContractViolation("inverse of a non-square matrix")
        n = self.rows
        aug = self.hstack(GFMatrix.identity(n, self.p))
        red, rank, pivots = aug.rref()
        if rank < n or pivots[:n] != list(range(n)):
            return None
        return GFMatrix(red.a[:, n:].copy(), self.p, _checked=True)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [int(x) for x in self.a.reshape(-1)],
        }

    @staticmethod
    def from_json(obj: dict) -> "GFMatrix":
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows * cols:
            raise ContractViolation("entry count does not match dimensions")
        arr = np.array(entries, dtype=np.int64).reshape(rows, cols)
        return GFMatrix(arr, int(obj["p"]))


def solve(a: GFMatrix, b: GFMatrix):
    """Solve a @ x = b.

    Returns (x, nullspace_rows) where x is a particular solution (cols of b
    many columns) and nullspace_rows has a basis of ker(a) as rows; returns
    None when the system is inconsistent.
    """
    a._same_field(b)
    if a.rows != b.rows:
        raise ContractViolation(
            f"solve: incompatible row counts {a.rows} vs {b.rows}"
        )
    aug = a.hstack(b)
    red, rank, pivots = aug.rref()
    if any(c >= a.cols for c in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red.a[r, a.cols:]
    return GFMatrix(x, a.p, _checked=True), a.nullspace()


def block_diag(mats) -> GFMatrix:
    mats = list(mats)
    if not mats:
        raise ContractViolation("block_diag of empty list")
    p = mats[0].p
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = np.zeros((n, c), dtype=np.int64)
    r0 = c0 = 0
    for m in mats:
        if m.p != p:
            raise ContractViolation("modulus mismatch in block_diag")
        out[r0 : r0 + m.rows, c0 : c0 + m.cols] = m.a
        r0 += m.rows
        c0 += m.cols
    return GFMatrix(out, p, _checked=True)


# -- subspace utilities ---------------------------------------------------
# Subspaces of GF(p)^n are represented by matrices whose *rows* span them;
# row_space gives the canonical (rref) basis so equal subspaces compare equal.


def row_space(m: GFMatrix) -> GFMatrix:
    red, rank, _ = m.rref()
    return GFMatrix(red.a[:rank].copy(), m.p, _checked=True)


def subspace_contains(basis_rows: GFMatrix, vectors: GFMatrix) -> bool:
    """True if every row of `vectors` lies in the row space of basis_rows."""
    if vectors.rows == 0:
        return True
    combined = basis_rows.vstack(vectors)
    return row_space(combined).rows == row_space(basis_rows).rows


def subspace_equal(b1: GFMatrix, b2: GFMatrix) -> bool:
    return row_space(b1) == row_space(b2)


def subspace_sum(b1: GFMatrix, b2: GFMatrix) -> GFMatrix:
    return row_space(b1.vstack(b2))


def annihilator_functionals(basis_rows: GFMatrix, dim: int, p: int) -> GFMatrix:
    """Rows f with f(v) = 0 for all v in the given row space.

    The returned matrix T satisfies: T @ v == 0 iff v lies in the subspace
    (for column vectors v), so it serves as quotient coordinates.
    """
    if basis_rows.rows == 0:
        return GFMatrix.identity(dim, p)
    return basis_rows.nullspace()


def coordinates_in_span(basis_rows: GFMatrix, vector: GFMatrix):
    """Coordinates of a row vector in the given (row) basis, or None."""
    res = solve(basis_rows.transpose(), vector.transpose())
    if res is None:
        return None
    return res[0].transpose()
