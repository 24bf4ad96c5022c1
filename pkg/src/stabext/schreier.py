"""Schreier systems (kappa, gamma) and the extension groups they define.

A system consists of a per-element action kappa of a base group G on a
coefficient group U together with a factor set gamma: G x G -> U obeying
the twisted cocycle identities.  The extension group lives on the set
U x G with product (x,g)(y,h) = (x (g.y) gamma(g,h), gh).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .gfmat import ContractViolation, GFMatrix
from .groups import FiniteGroup, Perm, QuotientMap, Subgroup, SizeLimitError
from .reps import Representation, mats_to_rows
from .stability import CertificationError, FactorSet, StructureMap

DEFAULT_EXT_CAP = 4096
DEFAULT_SEARCH_BOUND = 2**20


class CoefficientGroup:
    """Group of coefficients: either an abstract enumerated group or a
    finite matrix group (typically 1+J for a nilpotent ideal J).

    Elements are referred to by index; index 0 is the identity.
    """

    def __init__(self, kind, *, group=None, matrices=None, ideal=None,
                 square_zero=False):
        self.kind = kind
        self.group = group
        self.matrices = matrices
        self.ideal = ideal
        self.square_zero = square_zero
        if kind == "enumerated":
            self.size = group.n
        elif kind == "matrix":
            self.size = len(matrices)
            self._index = {m.key(): i for i, m in enumerate(matrices)}
            if len(self._index) != self.size:
                raise ContractViolation("duplicate coefficient matrices")
            if not matrices[0].is_identity():
                raise ContractViolation("coefficient element 0 must be I")
            self._mult = [
                [self.lookup(matrices[i] @ matrices[j]) for j in range(self.size)]
                for i in range(self.size)
            ]
            self._inv = [None] * self.size
            for i in range(self.size):
                for j in range(self.size):
                    if self._mult[i][j] == 0:
                        self._inv[i] = j
            if any(v is None for v in self._inv):
                raise ContractViolation("coefficient set not inverse-closed")
        else:
            raise ContractViolation(f"unknown coefficient kind {kind!r}")

    def lookup(self, m: GFMatrix) -> int:
        idx = self._index.get(m.key())
        if idx is None:
            raise KeyError("matrix not in the coefficient group")
        return idx

    def contains_matrix(self, m: GFMatrix) -> bool:
        return m.key() in self._index

    def mult(self, i: int, j: int) -> int:
        if self.kind == "enumerated":
            return self.group.mult(i, j)
        return self._mult[i][j]

    def inv(self, i: int) -> int:
        if self.kind == "enumerated":
            return self.group.inv(i)
        return self._inv[i]

    def generating_indices(self):
        """A (greedy, deterministic) generating set."""
        if self.kind == "enumerated" and self.group.generator_indices:
            return list(self.group.generator_indices)
        gens = []
        closure = {0}
        for x in range(self.size):
            if x in closure:
                continue
            gens.append(x)
            frontier = list(closure)
            closure.add(x)
            frontier.append(x)
            while frontier:
                nxt = []
                for a in frontier:
                    for b in list(closure):
                        for c in (self.mult(a, b), self.mult(b, a)):
                            if c not in closure:
                                closure.add(c)
                                nxt.append(c)
                frontier = nxt
        return gens

    @staticmethod
    def from_group(group: FiniteGroup) -> "CoefficientGroup":
        return CoefficientGroup("enumerated", group=group)

    @staticmethod
    def from_matrices(mats, cap=DEFAULT_EXT_CAP) -> "CoefficientGroup":
        """Multiplicative closure of a matrix list (identity prepended)."""
        p = mats[0].p
        d = mats[0].rows
        ident = GFMatrix.identity(d, p)
        elements = [ident]
        seen = {ident.key(): 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in mats:
                    y = x @ g
                    if y.key() not in seen:
                        if len(elements) >= cap:
                            raise SizeLimitError(
                                f"coefficient closure exceeds cap {cap}"
                            )
                        seen[y.key()] = len(elements)
                        elements.append(y)
                        nxt.append(y)
            frontier = nxt
        return CoefficientGroup("matrix", matrices=elements)

    @staticmethod
    def one_plus_j(ideal, cap=DEFAULT_EXT_CAP) -> "CoefficientGroup":
        """The group 1 + J for a nilpotent ideal J (given as AnnihilatorIdeal)."""
        if ideal.nilpotency_index is None:
            raise ContractViolation("1+J requires a nilpotent ideal")
        p = ideal.p
        d = ideal.matdim
        m = ideal.dim
        if p**m > cap:
            raise SizeLimitError(f"|1+J| = {p}^{m} exceeds cap {cap}")
        ident = GFMatrix.identity(d, p)
        mats = []
        for coeffs in itertools.product(range(p), repeat=m):
            x = ident
            for c, b in zip(coeffs, ideal.ideal_basis):
                if c:
                    x = x + b.scale(c)
            mats.append(x)
        return CoefficientGroup(
            "matrix", matrices=mats, ideal=ideal, square_zero=ideal.square_zero
        )

    @staticmethod
    def unit_group(end_basis, p, cap=DEFAULT_EXT_CAP) -> "CoefficientGroup":
        """All invertible elements of the span of an endomorphism basis."""
        m = len(end_basis)
        if p**m > 4 * cap:
            raise SizeLimitError(f"unit enumeration {p}^{m} too large")
        d = end_basis[0].rows
        mats = [GFMatrix.identity(d, p)]
        seen = {mats[0].key()}
        for coeffs in itertools.product(range(p), repeat=m):
            x = GFMatrix.zeros(d, d, p)
            for c, b in zip(coeffs, end_basis):
                if c:
                    x = x + b.scale(c)
            if x.key() in seen:
                continue
            if x.inverse() is not None:
                if len(mats) >= cap:
                    raise SizeLimitError(f"unit group exceeds cap {cap}")
                seen.add(x.key())
                mats.append(x)
        return CoefficientGroup("matrix", matrices=mats)

    def to_json(self) -> dict:
        if self.kind == "enumerated":
            return {"kind": "enumerated", "group": self.group.to_json()}
        tag = "one_plus_J" if self.ideal is not None else "matrix"
        return {"kind": tag, "elements": [m.to_json() for m in self.matrices]}


@dataclass
class SchreierSystem:
    base: FiniteGroup
    coeff: CoefficientGroup
    kappa: list  # [g][u] -> u index
    gamma: list  # [g][h] -> u index

    def act(self, g: int, u: int) -> int:
        return self.kappa[g][u]

    def to_json(self) -> dict:
        return {
            "group": self.base.to_json(),
            "coeff": self.coeff.to_json(),
            "kappa": [list(row) for row in self.kappa],
            "gamma": [list(row) for row in self.gamma],
        }


@dataclass
class SchreierReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked_exhaustively: bool = True


def verify_schreier(sys: SchreierSystem, seed: int = 0,
                    cap: int = 300_000) -> SchreierReport:
    """Check the twisted 2-cocycle identities and the action axioms."""
    G, U = sys.base, sys.coeff
    fails = []
    if sys.gamma[0][0] != 0:
        fails.append(("gamma(1,1)=1", (0, 0)))
    for g in range(G.n):
        if sys.gamma[0][g] != 0:
            fails.append(("gamma(1,g)=1", (0, g)))
        if sys.gamma[g][0] != 0:
            fails.append(("gamma(g,1)=1", (g, 0)))
    for u in range(U.size):
        if sys.kappa[0][u] != u:
            fails.append(("identity acts trivially", (0, u)))
    for g in range(G.n):
        if sorted(sys.kappa[g]) != list(range(U.size)):
            fails.append(("action not bijective", (g,)))
        for u in range(U.size):
            for v in range(U.size):
                if sys.kappa[g][U.mult(u, v)] != U.mult(
                    sys.kappa[g][u], sys.kappa[g][v]
                ):
                    fails.append(("action not multiplicative", (g, u, v)))
    exhaustive = True
    count1 = G.n * G.n * U.size
    if count1 <= cap:
        pairs_u = itertools.product(range(G.n), range(G.n), range(U.size))
    else:
        exhaustive = False
        rng = random.Random(seed)
        pairs_u = (
            (rng.randrange(G.n), rng.randrange(G.n), rng.randrange(U.size))
            for _ in range(100_000)
        )
    for g, h, u in pairs_u:
        lhs = sys.kappa[g][sys.kappa[h][u]]
        c = sys.gamma[g][h]
        rhs = U.mult(U.mult(c, sys.kappa[G.mult(g, h)][u]), U.inv(c))
        if lhs != rhs:
            fails.append(("twisted action identity", (g, h, u)))
            break
    count2 = G.n**3
    if count2 <= cap:
        triples = itertools.product(range(G.n), range(G.n), range(G.n))
    else:
        exhaustive = False
        rng = random.Random(seed + 1)
        triples = (
            (rng.randrange(G.n), rng.randrange(G.n), rng.randrange(G.n))
            for _ in range(100_000)
        )
    for f, g, h in triples:
        lhs = U.mult(sys.kappa[f][sys.gamma[g][h]], sys.gamma[f][G.mult(g, h)])
        rhs = U.mult(sys.gamma[f][g], sys.gamma[G.mult(f, g)][h])
        if lhs != rhs:
            fails.append(("factor-set cocycle identity", (f, g, h)))
            break
    return SchreierReport(not fails, fails, exhaustive)


@dataclass
class ExtensionGroup:
    group: FiniteGroup
    system: SchreierSystem
    proj: list  # extension index -> base index
    iota: list  # base index -> extension index of (1, g)
    pairs: list  # extension index -> (u, g)

    def idx(self, u: int, g: int) -> int:
        return u * self.system.base.n + g


def build_extension(sys: SchreierSystem, cap: int = DEFAULT_EXT_CAP,
                    skip_verify: bool = False) -> ExtensionGroup:
    """Materialize the extension group on pairs (u, g)."""
    if not skip_verify:
        report = verify_schreier(sys)
        if not report.ok:
            raise CertificationError(f"system fails verification: {report.failures[:3]}")
    G, U = sys.base, sys.coeff
    size = U.size * G.n
    if size > cap:
        raise SizeLimitError(f"extension of order {size} exceeds cap {cap}")

    def idx(u, g):
        return u * G.n + g

    table = [[0] * size for _ in range(size)]
    for x in range(U.size):
        for g in range(G.n):
            i = idx(x, g)
            for y in range(U.size):
                for h in range(G.n):
                    u = U.mult(U.mult(x, sys.kappa[g][y]), sys.gamma[g][h])
                    table[i][idx(y, h)] = (u, G.mult(g, h))
    flat = [[idx(*table[i][j]) for j in range(size)] for i in range(size)]
    elems = [Perm(flat[i]) for i in range(size)]
    gen_idx = sorted(
        {idx(0, g) for g in G.generator_indices}
        | {idx(u, 0) for u in U.generating_indices()}
    )
    group = FiniteGroup(elems, gen_idx)  # constructor re-verifies associativity
    # sanity: the left-regular realization must reproduce the table
    for i in range(size):
        for j in range(size):
            if group.mult(i, j) != flat[i][j]:
                raise CertificationError("left-regular realization mismatch")
    proj = [g for _ in range(U.size) for g in range(G.n)]
    iota = [idx(0, g) for g in range(G.n)]
    pairs = [(u, g) for u in range(U.size) for g in range(G.n)]
    ext = ExtensionGroup(group, sys, proj, iota, pairs)
    _certify_extension(ext)
    return ext


def _certify_extension(ext: ExtensionGroup):
    G, U = ext.system.base, ext.system.coeff
    grp = ext.group
    sys = ext.system
    # projection is a homomorphism with kernel U x {1}
    for i in range(grp.n):
        for j in range(grp.n):
            if ext.proj[grp.mult(i, j)] != G.mult(ext.proj[i], ext.proj[j]):
                raise CertificationError("projection is not a homomorphism")
    kernel = {i for i in range(grp.n) if ext.proj[i] == 0}
    if kernel != {ext.idx(u, 0) for u in range(U.size)}:
        raise CertificationError("kernel of projection is not U x {1}")
    if ext.iota[0] != 0:
        raise CertificationError("section does not send 1 to the identity")
    # inverse formula (x,g)^{-1} = (gamma(g^-1,g)^{-1} (g^-1 . x)^{-1}, g^-1)
    for i in range(grp.n):
        x, g = ext.pairs[i]
        gi = G.inv(g)
        u = U.mult(U.inv(sys.gamma[gi][g]), U.inv(sys.kappa[gi][x]))
        if grp.inv(i) != ext.idx(u, gi):
            raise CertificationError(f"inverse formula fails at element {i}")


def inflate_system(sys_quot: SchreierSystem, qmap: QuotientMap) -> SchreierSystem:
    """Pull a system on (G/N, U) back to (G, U) along the projection."""
    report = verify_schreier(sys_quot)
    if not report.ok:
        raise CertificationError("refusing to inflate an uncertified system")
    G = qmap.parent
    kappa = [sys_quot.kappa[qmap.project(g)] for g in range(G.n)]
    gamma = [
        [sys_quot.gamma[qmap.project(g)][qmap.project(h)] for h in range(G.n)]
        for g in range(G.n)
    ]
    out = SchreierSystem(G, sys_quot.coeff, kappa, gamma)
    report = verify_schreier(out)
    if not report.ok:
        raise CertificationError("inflated system fails verification")
    return out


def certify_inflation(ext: ExtensionGroup, qmap: QuotientMap):
    """The structural consequences of inflation on the built extension:
    iota restricted to N is a homomorphism, its image commutes elementwise
    with U x {1}, is normal in the extension, and together they exhaust
    the preimage of N as a direct product.
    """
    grp = ext.group
    U = ext.system.coeff
    nmembers = qmap.normal.members
    iota_n = [ext.iota[n] for n in nmembers]
    for a in nmembers:
        for b in nmembers:
            if grp.mult(ext.iota[a], ext.iota[b]) != ext.iota[qmap.parent.mult(a, b)]:
                raise CertificationError("iota|_N is not a homomorphism")
    for u in range(U.size):
        k = ext.idx(u, 0)
        for i in iota_n:
            if grp.mult(k, i) != grp.mult(i, k):
                raise CertificationError("iota(N) does not commute with U")
    iset = set(iota_n)
    for x in range(grp.n):
        for i in iota_n:
            if grp.conj(x, i) not in iset:
                raise CertificationError("iota(N) is not normal")
    preimage = {x for x in range(grp.n) if ext.proj[x] in set(nmembers)}
    product = {grp.mult(ext.idx(u, 0), i) for u in range(U.size) for i in iota_n}
    if preimage != product:
        raise CertificationError("preimage of N is not U x iota(N)")
    if len(product) != U.size * len(nmembers):
        raise CertificationError("U and iota(N) overlap nontrivially")


# -- equivalence and splitting -------------------------------------------------


def _abelian_coords(coeff: CoefficientGroup):
    """Coordinates u -> J-coordinate row for a square-zero 1+J group."""
    ideal = coeff.ideal
    d = ideal.matdim
    ident = GFMatrix.identity(d, ideal.p)
    coords = []
    for m in coeff.matrices:
        c = ideal.coordinates(m - ident)
        if c is None:
            raise ContractViolation("coefficient element not of the form 1+J")
        coords.append(c.a.reshape(-1))
    return coords


def _coords_to_index(coeff: CoefficientGroup, coord_row) -> int:
    ideal = coeff.ideal
    m = GFMatrix.identity(ideal.matdim, ideal.p)
    for c, b in zip(coord_row, ideal.ideal_basis):
        if c:
            m = m + b.scale(int(c))
    return coeff.lookup(m)


def _solve_beta_linear(sys: SchreierSystem, rhs_of, action_sign: int):
    """Solve the additive beta-equation over a square-zero 1+J coefficient
    group.  Unknowns are b(g) for g != 1; the equation at (g,h) reads
    action_sign * (b(g) + K_g b(h) - b(gh)) = rhs(g,h) in J-coordinates.
    Returns a beta index list or None.
    """
    G, U = sys.base, sys.coeff
    ideal = U.ideal
    m = ideal.dim
    p = ideal.p
    # conjugation action of g on J in coordinates
    act = []
    coords = _abelian_coords(U)
    for g in range(G.n):
        cols = []
        for j in range(m):
            img = coords[sys.kappa[g][_coords_to_index(U, np.eye(m, dtype=np.int64)[j])]]
            cols.append(img)
        act.append(np.array(cols, dtype=np.int64).T % p)
    nvars = (G.n - 1) * m
    rows, rhs = [], []
    for g in range(G.n):
        for h in range(G.n):
            gh = G.mult(g, h)
            for k in range(m):
                row = np.zeros(nvars, dtype=np.int64)
                if g != 0:
                    row[(g - 1) * m + k] += action_sign
                if h != 0:
                    row[(h - 1) * m : h * m] += action_sign * act[g][k]
                if gh != 0:
                    row[(gh - 1) * m + k] -= action_sign
                rows.append(row % p)
                rhs.append(rhs_of(g, h)[k] % p)
    a = GFMatrix(np.array(rows, dtype=np.int64), p)
    b = GFMatrix(np.array(rhs, dtype=np.int64).reshape(-1, 1), p)
    res = None
    from .gfmat import solve as _solve

    res = _solve(a, b)
    if res is None:
        return None
    x = res[0].a.reshape(-1)
    beta = [0]
    for g in range(1, G.n):
        beta.append(_coords_to_index(U, x[(g - 1) * m : g * m]))
    return beta


def _beta_candidates(sys: SchreierSystem, bound: int):
    G, U = sys.base, sys.coeff
    total = U.size ** (G.n - 1)
    if total > bound:
        return None
    return (
        [0] + list(tail)
        for tail in itertools.product(range(U.size), repeat=G.n - 1)
    )


def _equivalence_holds(s1, s2, beta) -> bool:
    G, U = s1.base, s1.coeff
    for g in range(G.n):
        for u in range(U.size):
            lhs = s2.kappa[g][u]
            rhs = U.mult(U.mult(beta[g], s1.kappa[g][u]), U.inv(beta[g]))
            if lhs != rhs:
                return False
    for g in range(G.n):
        for h in range(G.n):
            rhs = U.mult(
                U.mult(U.mult(beta[g], s1.kappa[g][beta[h]]), s1.gamma[g][h]),
                U.inv(beta[G.mult(g, h)]),
            )
            if s2.gamma[g][h] != rhs:
                return False
    return True


def systems_equivalent(s1: SchreierSystem, s2: SchreierSystem,
                       bound: int = DEFAULT_SEARCH_BOUND):
    """Search for beta: G -> U carrying s1 to s2.

    Returns (status, beta) with status "equivalent" | "inequivalent" |
    "unresolved".  Square-zero matrix coefficients use an exact linear
    solve; otherwise the search is exhaustive up to the bound.
    """
    if s1.base is not s2.base or s1.coeff is not s2.coeff:
        raise ContractViolation("systems must share the base and coefficients")
    G, U = s1.base, s1.coeff
    if U.kind == "matrix" and U.square_zero and U.ideal is not None:
        if s1.kappa != s2.kappa:
            # conjugation by 1+J is trivial on a square-zero J, so the
            # actions must agree exactly for an equivalence to exist
            return "inequivalent", None
        coords = _abelian_coords(U)

        def rhs_of(g, h):
            # c2(g,h) - c1(g,h) with u = 1 + c(u)
            return (coords[s2.gamma[g][h]] - coords[s1.gamma[g][h]]) % U.ideal.p

        beta = _solve_beta_linear(s1, rhs_of, action_sign=1)
        if beta is None:
            return "inequivalent", None
        if not _equivalence_holds(s1, s2, beta):
            raise CertificationError("linear equivalence witness failed recheck")
        return "equivalent", beta
    cands = _beta_candidates(s1, bound)
    if cands is None:
        return "unresolved", None
    for beta in cands:
        if _equivalence_holds(s1, s2, beta):
            return "equivalent", beta
    return "inequivalent", None


def _split_holds(sys: SchreierSystem, beta) -> bool:
    """sigma(g) = (beta(g), g) is a homomorphism."""
    G, U = sys.base, sys.coeff
    for g in range(G.n):
        for h in range(G.n):
            u = U.mult(U.mult(beta[g], sys.kappa[g][beta[h]]), sys.gamma[g][h])
            if u != beta[G.mult(g, h)]:
                return False
    return True


def is_split(sys: SchreierSystem, bound: int = DEFAULT_SEARCH_BOUND):
    """Search for beta making sigma(g) = (beta(g), g) a homomorphism.

    Returns (status, beta) with status "split" | "nonsplit" | "unresolved".
    """
    G, U = sys.base, sys.coeff
    if U.kind == "matrix" and U.square_zero and U.ideal is not None:
        coords = _abelian_coords(U)

        def rhs_of(g, h):
            return coords[sys.gamma[g][h]]

        # gamma(g,h) = kappa(g,beta(h))^-1 beta(g)^-1 beta(gh), additively
        # c(g,h) = -K_g b(h) - b(g) + b(gh)
        beta = _solve_beta_linear(sys, rhs_of, action_sign=-1)
        if beta is None:
            return "nonsplit", None
        if not _split_holds(sys, beta):
            raise CertificationError("linear splitting witness failed recheck")
        return "split", beta
    cands = _beta_candidates(sys, bound)
    if cands is None:
        return "unresolved", None
    for beta in cands:
        if _split_holds(sys, beta):
            return "split", beta
    return "nonsplit", None


def complement_search(ext: ExtensionGroup):
    """Independent splitting oracle on the built extension.

    Enumerates candidate images for the base generators and tries to close
    each candidate into a homomorphic section of the projection.  Complete:
    any complement determines such a section, whose generator images occur
    among the candidates.
    """
    G, U = ext.system.base, ext.system.coeff
    grp = ext.group
    gens = G.generator_indices
    if not gens:
        return [0] * G.n  # trivial base group splits trivially
    for choice in itertools.product(range(U.size), repeat=len(gens)):
        sigma = [None] * G.n
        sigma[0] = 0
        images = {g: ext.idx(u, g) for g, u in zip(gens, choice)}
        ok = True
        frontier = [0]
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.mult(x, g)
                    cand = grp.mult(sigma[x], images[g])
                    if sigma[y] is None:
                        sigma[y] = cand
                        nxt.append(y)
                    elif sigma[y] != cand:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if not ok or any(s is None for s in sigma):
            continue
        if all(ext.proj[sigma[g]] == g for g in range(G.n)) and all(
            grp.mult(sigma[a], sigma[b]) == sigma[G.mult(a, b)]
            for a in range(G.n)
            for b in range(G.n)
        ):
            return sigma
    return None


# -- systems from representations and from concrete extensions ------------------


def extension_acting_on_module(smap: StructureMap, U: CoefficientGroup,
                      fs: FactorSet | None = None, cap: int = DEFAULT_EXT_CAP):
    """The extension of G by U carried by alpha, with its action on Q.

    Preconditions (verified): U is a matrix group inside Aut_N(Q), stable
    under conjugation by every alpha(g), containing every gamma(g,h).
    Returns (ExtensionGroup, Representation of it, SchreierSystem).
    """
    if U.kind != "matrix":
        raise ContractViolation("representation-derived systems need matrix U")
    G, nsub, rho = smap.G, smap.nsub, smap.rho
    if fs is None:
        fs = FactorSet(smap)
    for u in U.matrices:
        for i in range(len(nsub.members)):
            if u @ rho.mats[i] != rho.mats[i] @ u:
                raise CertificationError("U does not centralize the N-action")
    alpha_inv = [smap.alpha[g].inverse() for g in range(G.n)]
    kappa = []
    for g in range(G.n):
        row = []
        for u in range(U.size):
            conj = smap.alpha[g] @ U.matrices[u] @ alpha_inv[g]
            if not U.contains_matrix(conj):
                raise CertificationError(
                    f"U not stable under conjugation at (g={g}, u={u})"
                )
            row.append(U.lookup(conj))
        kappa.append(row)
    gamma = []
    for g in range(G.n):
        row = []
        for h in range(G.n):
            val = fs.gamma[g][h]
            if not U.contains_matrix(val):
                raise CertificationError(f"gamma({g},{h}) lies outside U")
            row.append(U.lookup(val))
        gamma.append(row)
    sys = SchreierSystem(G, U, kappa, gamma)
    ext = build_extension(sys, cap=cap)
    mats = [U.matrices[u] @ smap.alpha[g] for (u, g) in ext.pairs]
    rho_ext = Representation(ext.group, rho.p, mats)
    # the section recovers alpha and the kernel acts as U
    for g in range(G.n):
        if rho_ext.mats[ext.iota[g]] != smap.alpha[g]:
            raise CertificationError("extension action does not restrict to alpha")
    for u in range(U.size):
        if rho_ext.mats[ext.idx(u, 0)] != U.matrices[u]:
            raise CertificationError("extension action does not restrict to U")
    return ext, rho_ext, sys


def section_structure_map(ext: ExtensionGroup, module: Representation,
                     nsub: Subgroup) -> StructureMap:
    """Restrict a module of the extension group along the section to get a
    certified structure map for (G, N) on the same space.
    """
    if module.group is not ext.group:
        raise ContractViolation("module must live on the extension group")
    G = ext.system.base
    alpha = [module.mats[ext.iota[g]] for g in range(G.n)]
    rho_mats = [module.mats[ext.iota[n]] for n in nsub.members]
    rho = Representation(nsub.as_group(), module.p, rho_mats)
    return StructureMap(G, nsub, rho, alpha, normalized=True)


def system_from_extension(E: FiniteGroup, usub: Subgroup, qmap: QuotientMap):
    """Read off (kappa, gamma) from a concrete extension with normal U.

    qmap must be quotient(E, usub).  The transversal is the quotient map's
    representative list; gamma(g,h) = t(g) t(h) t(gh)^{-1} lands in U.
    Returns a verified SchreierSystem on (E/U, U-as-group).
    """
    if not usub.is_normal:
        raise ContractViolation("coefficient subgroup must be normal")
    U = CoefficientGroup.from_group(usub.as_group())
    base = qmap.quotient
    t = qmap.representatives
    kappa = []
    for g in range(base.n):
        row = []
        for u in range(U.size):
            c = E.conj(t[g], usub.members[u])
            if c not in usub:
                raise ContractViolation("U is not normal after all")
            row.append(usub.pos[c])
        kappa.append(row)
    gamma = []
    for g in range(base.n):
        row = []
        for h in range(base.n):
            x = E.mult(E.mult(t[g], t[h]), E.inv(t[base.mult(g, h)]))
            if x not in usub:
                raise ContractViolation("factor-set value escapes U")
            row.append(usub.pos[x])
        gamma.append(row)
    sys = SchreierSystem(base, U, kappa, gamma)
    report = verify_schreier(sys)
    if not report.ok:
        raise CertificationError("derived system fails verification")
    return sys
