"""Finite groups as fully enumerated permutation groups.

Elements are permutations of a fixed domain; a FiniteGroup carries a
complete multiplication table so structure maps, factor sets, and cocycle
identities downstream can be checked exhaustively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .gfmat import ContractViolation


DEFAULT_GROUP_CAP = 4096


class SizeLimitError(RuntimeError):
    pass


class Perm:
    """Permutation of {0..n-1}, stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ContractViolation(f"not a permutation of 0..{n-1}: {images}")
        self.images = images

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        # (self * other)(x) = self(other(x))
        if self.degree != other.degree:
            raise ContractViolation("permutation degree mismatch")
        return Perm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Perm{self.images}"

    @staticmethod
    def from_cycles(n: int, cycles) -> "Perm":
        images = list(range(n))
        for cyc in cycles:
            for i, pt in enumerate(cyc):
                images[pt] = cyc[(i + 1) % len(cyc)]
        return Perm(images)


class FiniteGroup:
    """Fully enumerated group: element list, multiplication and inverse tables.

    Element 0 is always the identity.  Elements are referred to by index
    everywhere downstream.
    """

    def __init__(self, elements, generator_indices, _verify=True, _seed=0):
        self.elements = list(elements)
        self.n = len(self.elements)
        self.generator_indices = list(generator_indices)
        if self.n == 0 or self.elements[0] != Perm.identity(self.elements[0].degree):
            raise ContractViolation("element 0 must be the identity")
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != self.n:
            raise ContractViolation("duplicate elements")
        self.mult_table = [
            [self.index[a * b] for b in self.elements] for a in self.elements
        ]
        self.inv_table = [self.index[a.inverse()] for a in self.elements]
        if _verify:
            self._verify_associativity(_seed)

    def _verify_associativity(self, seed):
        n = self.n
        import numpy as np

        m = np.array(self.mult_table, dtype=np.intp)
        if n <= 256:
            for a in range(n):
                # (a*b)*c over all b,c vs a*(b*c)
                if not np.array_equal(m[m[a]], m[a][m]):
                    raise ContractViolation(f"associativity fails at a={a}")
        else:
            rng = random.Random(seed)
            for _ in range(10_000):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if m[m[a, b], c] != m[a, m[b, c]]:
                    raise ContractViolation(f"associativity fails at {(a, b, c)}")

    # -- element arithmetic (by index) ----------------------------------

    def mult(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def conj(self, g: int, n: int) -> int:
        """g n g^{-1}"""
        return self.mult(self.mult(g, n), self.inv(g))

    def order(self) -> int:
        return self.n

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mult(x, a)
            k += 1
        return k

    def word(self, gen_indices_word) -> int:
        x = 0
        for g in gen_indices_word:
            x = self.mult(x, g)
        return x

    def to_json(self) -> dict:
        return {
            "domain": self.elements[0].degree,
            "generators": [list(self.elements[i].images) for i in self.generator_indices],
        }

    @staticmethod
    def from_json(obj: dict) -> "FiniteGroup":
        n = int(obj["domain"])
        gens = [Perm(imgs) for imgs in obj["generators"]]
        for g in gens:
            if g.degree != n:
                raise ContractViolation("generator degree does not match domain")
        return cayley_close(gens, domain=n)


def cayley_close(generators, domain=None, cap=DEFAULT_GROUP_CAP) -> FiniteGroup:
    """BFS closure of a generator list into a FiniteGroup.

    An empty generator list needs an explicit domain and yields the
    trivial group.
    """
    generators = list(generators)
    if not generators:
        if domain is None:
            raise ContractViolation("empty generator list requires a domain size")
        return FiniteGroup([Perm.identity(domain)], [])
    deg = generators[0].degree
    for g in generators:
        if g.degree != deg:
            raise ContractViolation("generators act on different domains")
    ident = Perm.identity(deg)
    elements = [ident]
    seen = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y not in seen:
                    if len(elements) >= cap:
                        raise SizeLimitError(
                            f"group closure exceeds cap of {cap} elements"
                        )
                    seen[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    gen_idx = [seen[g] for g in generators]
    return FiniteGroup(elements, gen_idx)


@dataclass
class Subgroup:
    """Subgroup of a FiniteGroup, held as a sorted index set.

    members[0] is the identity (index 0 of the parent sorts first).
    """

    parent: FiniteGroup
    members: list
    generator_indices: list
    is_normal: bool = field(default=False)

    def __post_init__(self):
        self.pos = {m: i for i, m in enumerate(self.members)}

    def __contains__(self, idx: int) -> bool:
        return idx in self.pos

    @property
    def order(self) -> int:
        return len(self.members)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone FiniteGroup (left regular action).

        Elements are realized as permutations of the member list by left
        translation, preserving member order, so index i here corresponds
        to members[i] in the parent.  The result is cached so repeated
        calls hand back the same group object.
        """
        if getattr(self, "_as_group", None) is not None:
            return self._as_group
        G = self.parent
        k = len(self.members)
        elems = []
        for m in self.members:
            images = [self.pos[G.mult(m, x)] for x in self.members]
            elems.append(Perm(images))
        gens = [self.pos[g] for g in self.generator_indices]
        self._as_group = FiniteGroup(elems, gens, _verify=False)
        return self._as_group


def subgroup(g: FiniteGroup, member_generators) -> Subgroup:
    """Closure of generator indices inside g, with normality computed."""
    member_generators = list(member_generators)
    for i in member_generators:
        if not 0 <= i < g.n:
            raise ContractViolation(f"element index {i} out of range")
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in member_generators:
                y = g.mult(x, s)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    members = sorted(members)
    mset = set(members)
    parent_gens = g.generator_indices if g.generator_indices else range(g.n)
    normal = all(
        g.conj(x, n) in mset for x in parent_gens for n in member_generators
    )
    if normal:
        # generator-level check suffices for generators of both sides, but
        # confirm on full member set to be safe at this scale
        normal = all(g.conj(x, n) in mset for x in range(g.n) for n in members)
    return Subgroup(g, members, member_generators, normal)


def coset_representatives(g: FiniteGroup, n: Subgroup) -> list:
    """One representative per left coset rN.

    The identity comes first; within each other coset the minimal element
    index is chosen, and cosets are listed in order of that minimum.
    """
    seen = set()
    reps = []
    for x in range(g.n):
        if x in seen:
            continue
        coset = {g.mult(x, m) for m in n.members}
        reps.append(min(coset))
        seen |= coset
    reps.sort()
    assert reps[0] == 0
    return reps


@dataclass
class QuotientMap:
    parent: FiniteGroup
    normal: Subgroup
    quotient: FiniteGroup
    projection: list  # parent index -> quotient index
    representatives: list  # quotient index -> parent index (the transversal)

    def project(self, x: int) -> int:
        return self.projection[x]

    def lift(self, q: int) -> int:
        return self.representatives[q]


def quotient(g: FiniteGroup, n: Subgroup) -> QuotientMap:
    """Quotient group G/N realized on coset representatives.

    Cosets are permuted by left translation; the quotient element for a
    coset rN is the permutation of coset indices induced by r.
    """
    if not n.is_normal:
        raise ContractViolation("quotient by a non-normal subgroup")
    reps = coset_representatives(g, n)
    coset_of = [0] * g.n
    for qi, r in enumerate(reps):
        for m in n.members:
            coset_of[g.mult(r, m)] = qi
    elems = []
    for r in reps:
        elems.append(Perm([coset_of[g.mult(r, reps[j])] for j in range(len(reps))]))
    gen_idx = sorted({coset_of[x] for x in g.generator_indices} - {0}) or []
    q = FiniteGroup(elems, gen_idx, _verify=False)
    # verify homomorphism
    for x in range(g.n):
        for y in range(g.n):
            if coset_of[g.mult(x, y)] != q.mult(coset_of[x], coset_of[y]):
                raise ContractViolation(
                    f"projection not a homomorphism at ({x}, {y})"
                )
    return QuotientMap(g, n, q, coset_of, reps)


# -- stock constructions ---------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return cayley_close([Perm.from_cycles(n, [tuple(range(n))])])


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return cayley_close([], domain=1)
    gens = [Perm.from_cycles(n, [(0, 1)]), Perm.from_cycles(n, [tuple(range(n))])]
    if n == 2:
        gens = gens[:1]
    return cayley_close(gens)


def heisenberg_group(p: int) -> FiniteGroup:
    """Unitriangular 3x3 matrices over GF(p), as permutations of p^3 tuples.

    A matrix is the triple (a, b, c) = entries (1,2), (2,3), (1,3); the
    group acts on itself by right translation, giving a faithful degree-p^3
    permutation action.  For p = 2 this group is dihedral of order 8.
    """
    n = p**3

    def enc(a, b, c):
        return (a * p + b) * p + c

    def mul(t1, t2):
        a1, b1, c1 = t1
        a2, b2, c2 = t2
        return ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p)

    tuples = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]

    def right_translation(t):
        return Perm([enc(*mul(s, t)) for s in tuples])

    x = right_translation((1, 0, 0))
    y = right_translation((0, 1, 0))
    return cayley_close([x, y])


def heisenberg_center(g: FiniteGroup) -> Subgroup:
    """Center of a heisenberg_group output (or any group; computed directly)."""
    central = [
        z
        for z in range(g.n)
        if all(g.mult(z, x) == g.mult(x, z) for x in range(g.n))
    ]
    return subgroup(g, central)
