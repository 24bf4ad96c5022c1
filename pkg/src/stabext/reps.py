"""Representations of enumerated groups over GF(p) and their module theory.

A Representation stores one invertible matrix per group element, so the
homomorphism law and every identity built on it can be checked exhaustively.
Subspaces of the module are carried as row bases; subspaces of matrix space
(algebras, ideals, hom spaces) as lists of matrices with flattened-row
canonical spans.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .gfmat import (
    ContractViolation,
    GFMatrix,
    annihilator_functionals,
    block_diag,
    row_space,
    solve,
    subspace_contains,
)
from .groups import FiniteGroup, Subgroup, SizeLimitError

DEFAULT_DIM_CAP = 2000


class RelationViolation(ValueError):
    """Generator matrices fail a relation of the group."""


# -- spans of matrix lists --------------------------------------------------


def mats_to_rows(mats, p, shape=None):
    """Stack matrices as flattened rows of a single GFMatrix."""
    if not mats:
        if shape is None:
            raise ContractViolation("empty matrix list needs an explicit shape")
        return GFMatrix.zeros(0, shape[0] * shape[1], p)
    rows = np.vstack([m.a.reshape(1, -1) for m in mats])
    return GFMatrix(rows, p, _checked=True)


def rows_to_mats(rows: GFMatrix, shape):
    r, c = shape
    return [
        GFMatrix(rows.a[i].reshape(r, c).copy(), rows.p, _checked=True)
        for i in range(rows.rows)
    ]


def mat_span_basis(mats, p, shape):
    """Canonical basis (rref of flattened rows) of the span of a matrix list."""
    return rows_to_mats(row_space(mats_to_rows(mats, p, shape)), shape)


def mat_in_span(basis, m: GFMatrix) -> bool:
    stacked = mats_to_rows(basis, m.p, m.shape)
    return subspace_contains(stacked, m.flatten())


def span_product(basis1, basis2, p, shape):
    """Canonical basis of span{u v : u in span1, v in span2}."""
    prods = [u @ v for u in basis1 for v in basis2]
    return mat_span_basis(prods, p, shape)


def span_is_nilpotent(basis, p, shape, max_index=None):
    """(nilpotent?, index) for the span of a matrix list under products.

    Index is the least n with span^n = 0.  A multiplicatively closed span
    of d x d matrices is nilpotent iff span^d = 0, so d bounds the search.
    """
    if max_index is None:
        max_index = shape[0] + 1
    power = list(basis)
    n = 1
    while power:
        if n > max_index:
            return False, None
        if all(m.is_zero() for m in power):
            return True, n - 1
        power = span_product(power, basis, p, shape)
        n += 1
    return True, n - 1


# -- representations --------------------------------------------------------


class Representation:
    """Total map: group element index -> invertible GFMatrix."""

    def __init__(self, group: FiniteGroup, p: int, mats, _verify=True):
        self.group = group
        self.p = p
        self.mats = list(mats)
        if len(self.mats) != group.n:
            raise ContractViolation("need one matrix per group element")
        self.dim = self.mats[0].rows
        for m in self.mats:
            if m.p != p or m.shape != (self.dim, self.dim):
                raise ContractViolation("inconsistent matrix table")
        if _verify:
            self.verify()

    def verify(self):
        if not self.mats[0].is_identity():
            raise ContractViolation("identity element must map to I")
        g = self.group
        if g.n * g.n <= 10_000:
            pairs = ((a, b) for a in range(g.n) for b in range(g.n))
        else:
            rng = random.Random(0)
            pairs = (
                (rng.randrange(g.n), rng.randrange(g.n)) for _ in range(10_000)
            )
        for a, b in pairs:
            if self.mats[g.mult(a, b)] != self.mats[a] @ self.mats[b]:
                raise RelationViolation(
                    f"homomorphism law fails at elements ({a}, {b})"
                )

    def __call__(self, idx: int) -> GFMatrix:
        return self.mats[idx]

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "p": self.p,
            "dim": self.dim,
            "matrices": [m.to_json() for m in self.mats],
        }


def rep_from_generators(group: FiniteGroup, generator_matrices, p=None) -> Representation:
    """Extend matrices on the generators to the whole group by BFS.

    Raises RelationViolation when the generator matrices do not satisfy the
    group's relations (some element would receive two different matrices).
    """
    gens = group.generator_indices
    generator_matrices = list(generator_matrices)
    if len(generator_matrices) != len(gens):
        raise ContractViolation(
            f"need {len(gens)} generator matrices, got {len(generator_matrices)}"
        )
    if p is None:
        if not generator_matrices:
            raise ContractViolation("trivial generator list requires explicit p")
        p = generator_matrices[0].p
    dim = generator_matrices[0].rows if generator_matrices else 1
    for m in generator_matrices:
        if m.rows != m.cols or m.rows != dim:
            raise ContractViolation("generator matrices must be square, same size")
        if m.inverse() is None:
            raise ContractViolation("generator matrix is singular")
    mats = [None] * group.n
    mats[0] = GFMatrix.identity(dim, p)
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, gm in zip(gens, generator_matrices):
                y = group.mult(x, gi)
                cand = mats[x] @ gm
                if mats[y] is None:
                    mats[y] = cand
                    nxt.append(y)
                elif mats[y] != cand:
                    raise RelationViolation(
                        f"generator matrices inconsistent at element {y}"
                    )
        frontier = nxt
    if any(m is None for m in mats):
        raise ContractViolation("generators do not generate the group")
    return Representation(group, p, mats)


def trivial_rep(group: FiniteGroup, p: int, dim: int = 1) -> Representation:
    ident = GFMatrix.identity(dim, p)
    return Representation(group, p, [ident] * group.n, _verify=False)


def regular_rep(group: FiniteGroup, p: int) -> Representation:
    mats = []
    for g in range(group.n):
        m = np.zeros((group.n, group.n), dtype=np.int64)
        for x in range(group.n):
            m[group.mult(g, x), x] = 1
        mats.append(GFMatrix(m, p, _checked=True))
    return Representation(group, p, mats, _verify=False)


def permutation_rep(group: FiniteGroup, p: int) -> Representation:
    """Permutation matrices of the group's defining action on its domain."""
    deg = group.elements[0].degree
    mats = []
    for e in group.elements:
        m = np.zeros((deg, deg), dtype=np.int64)
        for j in range(deg):
            m[e.images[j], j] = 1
        mats.append(GFMatrix(m, p, _checked=True))
    return Representation(group, p, mats, _verify=False)


def twist(rho: Representation, nsub: Subgroup, g: int) -> Representation:
    """The conjugate module Q^g: n acts by rho(g n g^{-1}).

    rho must be a representation of nsub.as_group(); g is an element index
    of the parent group.  N must be normal for conjugation to stay inside.
    """
    G = nsub.parent
    if not 0 <= g < G.n:
        raise ContractViolation(f"element {g} not in the parent group")
    mats = [None] * len(nsub.members)
    for i, n in enumerate(nsub.members):
        c = G.conj(g, n)
        if c not in nsub:
            raise ContractViolation("subgroup not closed under conjugation")
        mats[i] = rho.mats[nsub.pos[c]]
    return Representation(rho.group, rho.p, mats, _verify=False)


def restrict(rho: Representation, hsub: Subgroup) -> Representation:
    """Restrict a representation of hsub.parent to hsub.as_group()."""
    mats = [rho.mats[m] for m in hsub.members]
    return Representation(hsub.as_group(), rho.p, mats, _verify=False)


def tensor(r1: Representation, r2: Representation) -> Representation:
    if r1.group is not r2.group or r1.p != r2.p:
        raise ContractViolation("tensor of representations of different groups")
    mats = [a.kron(b) for a, b in zip(r1.mats, r2.mats)]
    return Representation(r1.group, r1.p, mats, _verify=False)


def dual(rho: Representation) -> Representation:
    g = rho.group
    mats = [rho.mats[g.inv(x)].transpose() for x in range(g.n)]
    return Representation(g, rho.p, mats, _verify=False)


def direct_sum(reps) -> Representation:
    reps = list(reps)
    g = reps[0].group
    p = reps[0].p
    for r in reps:
        if r.group is not g or r.p != p:
            raise ContractViolation("direct sum of mismatched representations")
    mats = [block_diag([r.mats[x] for r in reps]) for x in range(g.n)]
    return Representation(g, p, mats, _verify=False)


# -- hom spaces and isomorphism ---------------------------------------------


def hom_space(m1: Representation, m2: Representation):
    """Basis of {X : X m1(s) = m2(s) X over generators} as d2 x d1 matrices.

    Generator equations suffice since matrices multiply along words.
    """
    if m1.group is not m2.group or m1.p != m2.p:
        raise ContractViolation("hom space of representations of different groups")
    p = m1.p
    d1, d2 = m1.dim, m2.dim
    gens = m1.group.generator_indices
    if not gens:
        # trivial group: every matrix intertwines
        basis = GFMatrix.identity(d1 * d2, p)
        return rows_to_mats(basis, (d2, d1))
    blocks = []
    eye1 = np.eye(d1, dtype=np.int64)
    eye2 = np.eye(d2, dtype=np.int64)
    for s in gens:
        a = m1.mats[s].a
        b = m2.mats[s].a
        # row-major vec: vec(X A) = (I kron A^T) vec(X); vec(B X) = (B kron I) vec(X)
        blocks.append((np.kron(eye2, a.T) - np.kron(b, eye1)) % p)
    system = GFMatrix(np.vstack(blocks), p, _checked=True)
    return rows_to_mats(system.nullspace(), (d2, d1))


def module_isomorphism(m1: Representation, m2: Representation, seed: int = 0,
                       trials: int = 64, exhaustive_cap: int = 4096):
    """Search for an invertible intertwiner m1 -> m2.

    Returns (status, witness) with status in {"iso", "none", "unresolved"}.
    Ladder: scan the hom basis, then seeded random combinations, then full
    enumeration when p^dim(hom) <= exhaustive_cap.  "none" is only returned
    when it is provably correct (zero or exhausted hom space).
    """
    if m1.dim != m2.dim:
        return "none", None
    basis = hom_space(m1, m2)
    if not basis:
        return "none", None
    p = m1.p
    for x in basis:
        if x.inverse() is not None:
            return "iso", x
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randrange(p) for _ in basis]
        if not any(coeffs):
            continue
        x = basis[0].scale(coeffs[0])
        for c, b in zip(coeffs[1:], basis[1:]):
            x = x + b.scale(c)
        if x.inverse() is not None:
            return "iso", x
    if p ** len(basis) <= exhaustive_cap:
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            if not any(coeffs):
                continue
            x = basis[0].scale(coeffs[0])
            for c, b in zip(coeffs[1:], basis[1:]):
                x = x + b.scale(c)
            if x.inverse() is not None:
                return "iso", x
        return "none", None
    return "unresolved", None


def is_iso_to_power(m: Representation, q: Representation, n: int, seed: int = 0):
    """Test m ~ q^{+n} with an explicit witness.

    Returns (status, witness) as in module_isomorphism; immediate "none"
    when dimensions rule it out.
    """
    if m.dim != n * q.dim:
        return "none", None
    return module_isomorphism(m, direct_sum([q] * n), seed=seed)


# -- enveloping algebra and radical -----------------------------------------


@dataclass
class EnvelopingAlgebra:
    basis: list  # list of GFMatrix, canonical span basis, contains I in span
    p: int
    matdim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: GFMatrix) -> bool:
        return mat_in_span(self.basis, m)


def enveloping_algebra(rho: Representation) -> EnvelopingAlgebra:
    """k-span of the representing matrices, with closure verified."""
    shape = (rho.dim, rho.dim)
    basis = mat_span_basis(rho.mats, rho.p, shape)
    alg = EnvelopingAlgebra(basis, rho.p, rho.dim)
    for u in basis:
        for v in basis:
            if not alg.contains(u @ v):
                raise ContractViolation("span of a group image not closed")
    return alg


def matrix_algebra_closure(seed_mats, p, matdim, include_identity=True):
    """Smallest multiplicatively closed span containing the seeds (and I)."""
    shape = (matdim, matdim)
    mats = list(seed_mats)
    if include_identity:
        mats.append(GFMatrix.identity(matdim, p))
    basis = mat_span_basis(mats, p, shape)
    while True:
        prods = [u @ v for u in basis for v in basis]
        bigger = mat_span_basis(basis + prods, p, shape)
        if len(bigger) == len(basis):
            return EnvelopingAlgebra(basis, p, matdim)
        basis = bigger


def charpoly(m: GFMatrix):
    """Characteristic polynomial coefficients of det(xI - M), degree-descending.

    Division-free (Berkowitz), so valid in any characteristic.
    """
    p = m.p
    a = m.a
    n = a.shape[0]
    if n == 0:
        return [1]
    poly = np.array([1, (-int(a[0, 0])) % p], dtype=np.int64)
    for r in range(1, n):
        top = a[:r, :r]
        row = a[r, :r]
        colv = a[:r, r]
        d = int(a[r, r])
        s = []
        v = colv.copy()
        for _ in range(r):
            s.append(int(row @ v % p))
            v = (top @ v) % p
        col = [1, (-d) % p] + [(-x) % p for x in s]
        t = np.zeros((r + 2, r + 1), dtype=np.int64)
        for i in range(r + 2):
            for j in range(r + 1):
                k = i - j
                if 0 <= k < len(col):
                    t[i, j] = col[k]
        poly = (t @ poly) % p
    return [int(c) for c in poly]


def _charpoly_esym(m: GFMatrix, k: int) -> int:
    """k-th elementary symmetric function of the eigenvalues, mod p."""
    coeffs = charpoly(m)
    return (pow(-1, k, m.p) * coeffs[k]) % m.p


def algebra_radical(alg: EnvelopingAlgebra):
    """Basis of rad(A), the largest nilpotent two-sided ideal.

    Characteristic-p chain of trace-like forms: start from the kernel of
    the trace form, then repeatedly cut by the p^i-th elementary symmetric
    functions of products.  The result is verified to be a nilpotent
    two-sided ideal before it is returned.
    """
    p = alg.p
    d = alg.matdim
    shape = (d, d)
    current = list(alg.basis)

    def cut(form_k, space):
        if not space:
            return space
        rows = []
        for y in space:
            rows.append([_charpoly_esym(x @ y, form_k) for x in space])
        system = GFMatrix(np.array(rows, dtype=np.int64), p)
        coords = system.nullspace()
        out = []
        for ci in range(coords.rows):
            m = GFMatrix.zeros(d, d, p)
            for j, c in enumerate(coords.a[ci]):
                if c:
                    m = m + space[j].scale(int(c))
            out.append(m)
        return mat_span_basis(out, p, shape)

    current = cut(1, current)  # trace form
    level = 0
    while p ** (level + 1) <= d:
        level += 1
        current = cut(p**level, current)

    rad = mat_span_basis(current, p, shape)
    # certify: two-sided ideal, nilpotent
    for b in rad:
        for a in alg.basis:
            if not mat_in_span(rad, a @ b) or not mat_in_span(rad, b @ a):
                raise ContractViolation("radical computation produced a non-ideal")
    nilp, _ = span_is_nilpotent(rad, p, shape)
    if not nilp:
        raise ContractViolation("radical computation produced a non-nilpotent set")
    return rad


def radical_oracle(alg: EnvelopingAlgebra):
    """Exhaustive radical: elements whose generated ideal is nilpotent.

    Feasible only for tiny algebras (p^dim element enumeration); used as an
    independent cross-check of algebra_radical.
    """
    p = alg.p
    d = alg.matdim
    shape = (d, d)
    members = []
    for coeffs in itertools.product(range(p), repeat=alg.dim):
        if not any(coeffs):
            continue
        x = GFMatrix.zeros(d, d, p)
        for c, b in zip(coeffs, alg.basis):
            if c:
                x = x + b.scale(c)
        ideal = mat_span_basis(
            [a @ x @ b for a in alg.basis for b in alg.basis], p, shape
        )
        nilp, _ = span_is_nilpotent(ideal, p, shape)
        if nilp:
            members.append(x)
    rad = mat_span_basis(members, p, shape)
    # the collected set must itself be the subspace it spans
    expected = (p ** len(rad) - 1) if rad else 0
    if len(members) != expected:
        raise ContractViolation("nilpotent-ideal elements do not form a subspace")
    return rad


# -- filtrations -------------------------------------------------------------


@dataclass
class Filtration:
    kind: str  # "socle" (ascending) or "radical" (descending)
    layers: list  # row-basis GFMatrix per step, endpoints included

    @property
    def length(self) -> int:
        return len(self.layers) - 1

    def layer_dims(self):
        dims = [b.rows for b in self.layers]
        if self.kind == "socle":
            return [dims[i + 1] - dims[i] for i in range(len(dims) - 1)]
        return [dims[i] - dims[i + 1] for i in range(len(dims) - 1)]


def _subspace_powers(rad_basis, p, d):
    """Bases of rad^1, rad^2, ... until zero."""
    shape = (d, d)
    powers = []
    cur = mat_span_basis(rad_basis, p, shape) if rad_basis else []
    while cur and not all(m.is_zero() for m in cur):
        powers.append(cur)
        cur = span_product(cur, rad_basis, p, shape)
    return powers


def socle_series(rho: Representation, rad_basis=None) -> Filtration:
    """Ascending chain 0 = soc_0 < soc_1 < ... < Q with soc_k = ker(rad^k)."""
    p, d = rho.p, rho.dim
    if rad_basis is None:
        rad_basis = algebra_radical(enveloping_algebra(rho))
    layers = [GFMatrix.zeros(0, d, p)]
    for power in _subspace_powers(rad_basis, p, d):
        stacked = power[0]
        for m in power[1:]:
            stacked = stacked.vstack(m)
        layers.append(row_space(stacked.nullspace()))
    layers.append(GFMatrix.identity(d, p))
    # the rad^k chain stops one step before annihilating everything, so the
    # final appended layer is the first full one; drop duplicates
    out = [layers[0]]
    for b in layers[1:]:
        if b.rows != out[-1].rows:
            out.append(b)
    # ascending order is layers reversed? no: soc_k = ker(rad^k) grows with k
    # but _subspace_powers yields rad^1, rad^2, ... so ker grows: already ascending
    return Filtration("socle", out)


def radical_series(rho: Representation, rad_basis=None) -> Filtration:
    """Descending chain Q = rad^0 Q > rad^1 Q > ... > 0."""
    p, d = rho.p, rho.dim
    if rad_basis is None:
        rad_basis = algebra_radical(enveloping_algebra(rho))
    layers = [GFMatrix.identity(d, p)]
    for power in _subspace_powers(rad_basis, p, d):
        cols = [m.transpose() for m in power]
        stacked = cols[0]
        for m in cols[1:]:
            stacked = stacked.vstack(m)
        layers.append(row_space(stacked))
    layers.append(GFMatrix.zeros(0, d, p))
    out = [layers[0]]
    for b in layers[1:]:
        if b.rows != out[-1].rows:
            out.append(b)
    return Filtration("radical", out)


# -- annihilator ideals -------------------------------------------------------


@dataclass
class AnnihilatorIdeal:
    ambient: list  # basis of End_N(Q)
    ideal_basis: list
    mode: str  # "socle" (kills target) or "head" (image inside rad Q)
    nilpotency_index: int | None
    p: int
    matdim: int

    @property
    def dim(self) -> int:
        return len(self.ideal_basis)

    def contains(self, m: GFMatrix) -> bool:
        if not self.ideal_basis:
            return m.is_zero()
        return mat_in_span(self.ideal_basis, m)

    def coordinates(self, m: GFMatrix):
        """Coordinates of m in the ideal basis (row vector), or None."""
        if not self.ideal_basis:
            return GFMatrix.zeros(1, 0, self.p) if m.is_zero() else None
        stacked = mats_to_rows(self.ideal_basis, self.p, m.shape)
        res = solve(stacked.transpose(), m.flatten().transpose())
        if res is None:
            return None
        return res[0].transpose()

    def from_coordinates(self, coords) -> GFMatrix:
        m = GFMatrix.zeros(self.matdim, self.matdim, self.p)
        for c, b in zip(coords.a.reshape(-1), self.ideal_basis):
            if c:
                m = m + b.scale(int(c))
        return m

    @property
    def square_zero(self) -> bool:
        return all(
            (u @ v).is_zero() for u in self.ideal_basis for v in self.ideal_basis
        )


def annihilator_ideal(end_basis, target_rows: GFMatrix, mode: str,
                      rad_q_rows: GFMatrix | None = None) -> AnnihilatorIdeal:
    """J (mode 'socle': kills the target subspace) or J' (mode 'head':
    image lands inside rad Q), inside the span of end_basis.
    """
    if not end_basis:
        raise ContractViolation("empty endomorphism basis")
    p = end_basis[0].p
    d = end_basis[0].rows
    shape = (d, d)
    cols = []
    if mode == "socle":
        for e in end_basis:
            # e applied to each target row vector (as a column)
            cols.append((e @ target_rows.transpose()).flatten().a.reshape(-1))
    elif mode == "head":
        if rad_q_rows is None:
            raise ContractViolation("head mode needs the rad Q subspace")
        t = annihilator_functionals(rad_q_rows, d, p)
        for e in end_basis:
            cols.append((t @ e).flatten().a.reshape(-1))
    else:
        raise ContractViolation(f"unknown annihilator mode {mode!r}")
    system = GFMatrix(np.array(cols, dtype=np.int64).T, p)
    coords = system.nullspace()
    mats = []
    for i in range(coords.rows):
        m = GFMatrix.zeros(d, d, p)
        for c, b in zip(coords.a[i], end_basis):
            if c:
                m = m + b.scale(int(c))
        mats.append(m)
    ideal = mat_span_basis(mats, p, shape)
    # two-sided ideal check inside the ambient algebra
    for b in ideal:
        for e in end_basis:
            if not mat_in_span(ideal, e @ b) or not mat_in_span(ideal, b @ e):
                raise ContractViolation("annihilator is not a two-sided ideal")
    nilp, idx = span_is_nilpotent(ideal, p, shape)
    return AnnihilatorIdeal(
        list(end_basis), ideal, mode, idx if nilp else None, p, d
    )


# -- induction ----------------------------------------------------------------


def right_coset_representatives(g: FiniteGroup, n: Subgroup) -> list:
    """One representative per right coset Nx, identity first, minimal index."""
    seen = set()
    reps = []
    for x in range(g.n):
        if x in seen:
            continue
        coset = {g.mult(m, x) for m in n.members}
        reps.append(min(coset))
        seen |= coset
    reps.sort()
    assert reps[0] == 0
    return reps


def induce(G: FiniteGroup, nsub: Subgroup, rho: Representation,
           dim_cap: int = DEFAULT_DIM_CAP):
    """Induced G-module, realized on N-equivariant functions G -> Q.

    A function f with f(ng) = rho(n) f(g) is stored by its values on right
    coset representatives s_i; G acts by (h f)(g) = f(gh).  Returns
    (Representation of G, representative list).  Restriction to N is exactly
    block-diagonal with blocks rho(s_i n s_i^{-1}).
    """
    reps = right_coset_representatives(G, nsub)
    t = len(reps)
    d = rho.dim
    if t * d > dim_cap:
        raise SizeLimitError(f"induced dimension {t*d} exceeds cap {dim_cap}")
    coset_of = {}
    for j, s in enumerate(reps):
        for m in nsub.members:
            coset_of[G.mult(m, s)] = j
    p = rho.p
    mats = []
    for h in range(G.n):
        big = np.zeros((t * d, t * d), dtype=np.int64)
        for i, s in enumerate(reps):
            z = G.mult(s, h)
            j = coset_of[z]
            n = G.mult(z, G.inv(reps[j]))
            blk = rho.mats[nsub.pos[n]].a
            big[i * d : (i + 1) * d, j * d : (j + 1) * d] = blk
        mats.append(GFMatrix(big, p, _checked=True))
    return Representation(G, p, mats), reps


# -- seeded corpus helper -------------------------------------------------------


def random_quotient_module(group: FiniteGroup, p: int, target_dim: int,
                           seed: int) -> Representation:
    """Random quotient of the regular module with dimension <= target_dim.

    Deterministic in the seed: grows a submodule from random vectors until
    the quotient is small enough, then conjugates the action into quotient
    coordinates.
    """
    reg = regular_rep(group, p)
    d = reg.dim
    rng = random.Random(seed)
    sub_rows = GFMatrix.zeros(0, d, p)
    guard = 0
    while d - sub_rows.rows > target_dim:
        guard += 1
        if guard > 200:
            break
        v = GFMatrix([[rng.randrange(p) for _ in range(d)]], p)
        if v.is_zero():
            continue
        orbit = [(m @ v.transpose()).transpose() for m in reg.mats]
        stacked = sub_rows
        for w in orbit:
            stacked = stacked.vstack(w)
        cand = row_space(stacked)
        if cand.rows == d:
            continue  # would kill the whole module
        sub_rows = cand
    t = annihilator_functionals(sub_rows, d, p)
    q = t.rows
    mats = []
    for m in reg.mats:
        res = solve(t.transpose(), (t @ m).transpose())
        if res is None:
            raise ContractViolation("submodule not invariant (internal bug)")
        mats.append(res[0].transpose())
    return Representation(group, p, mats)
