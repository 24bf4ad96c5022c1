"""Bundled example suite: named instances exercised by the CLI and tests.

Four families:
  - plain N-modules (socle/radical/annihilator checks),
  - strongly stable pairs (G, N, Q, V) with a G-action on V,
  - extension-existence cases with known verdicts,
  - Schreier systems with known splitting behavior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gfmat import GFMatrix, solve, subspace_sum
from .groups import (
    FiniteGroup,
    Perm,
    Subgroup,
    cayley_close,
    cyclic_group,
    heisenberg_group,
    quotient,
    subgroup,
    symmetric_group,
)
from .reps import (
    Representation,
    algebra_radical,
    enveloping_algebra,
    permutation_rep,
    radical_series,
    random_quotient_module,
    regular_rep,
    rep_from_generators,
    restrict,
    socle_series,
    trivial_rep,
)
from .schreier import CoefficientGroup, SchreierSystem


def abelian_group(orders) -> FiniteGroup:
    """Direct product of cyclic groups, one disjoint cycle per factor."""
    total = sum(orders)
    gens = []
    start = 0
    for k in orders:
        gens.append(Perm.from_cycles(total, [tuple(range(start, start + k))]))
        start += k
    return cayley_close(gens)


def quaternion_group() -> FiniteGroup:
    """Q8 as a permutation group (right-regular action on its 8 elements)."""
    # elements: 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k
    neg = [1, 0, 3, 2, 5, 4, 7, 6]
    base = {
        (0, 0): 0, (0, 2): 2, (0, 4): 4, (0, 6): 6,
        (2, 0): 2, (2, 2): 1, (2, 4): 6, (2, 6): 5,
        (4, 0): 4, (4, 2): 7, (4, 4): 1, (4, 6): 2,
        (6, 0): 6, (6, 2): 4, (6, 4): 3, (6, 6): 1,
    }

    def mul(a, b):
        sign = 0
        if a in (1, 3, 5, 7):
            sign += 1
            a = neg[a]
        if b in (1, 3, 5, 7):
            sign += 1
            b = neg[b]
        c = base[(a, b)]
        return neg[c] if sign % 2 else c

    def right_translation(t):
        return Perm([mul(s, t) for s in range(8)])

    return cayley_close([right_translation(2), right_translation(4)])


def central_subgroup(g: FiniteGroup) -> Subgroup:
    """The center, generated by its first nonidentity element (cyclic centers
    only, which covers every group used here)."""
    central = [
        z for z in range(1, g.n)
        if all(g.mult(z, x) == g.mult(x, z) for x in range(g.n))
    ]
    zc = subgroup(g, central[:1])
    if zc.order != len(central) + 1:
        raise AssertionError("center is not cyclic; pick generators explicitly")
    return zc


# -- plain module instances ---------------------------------------------------


@dataclass
class ModuleInstance:
    name: str
    rho: Representation


def central_character_module(p: int, q: int, scalar: int, dim: int):
    """(Heisenberg group mod p, its center, z acting as scalar*I over GF(q))."""
    h = heisenberg_group(p)
    zc = central_subgroup(h)
    s = GFMatrix.identity(dim, q).scale(scalar)
    rho = rep_from_generators(zc.as_group(), [s], p=q)
    return h, zc, rho


def module_instances() -> list:
    out = []
    for p in (2, 3, 5):
        out.append(ModuleInstance(f"regular_z{p}_gf{p}", regular_rep(cyclic_group(p), p)))
    out.append(ModuleInstance("regular_z4_gf2", regular_rep(cyclic_group(4), 2)))
    out.append(ModuleInstance("regular_klein_gf2", regular_rep(abelian_group([2, 2]), 2)))
    _, _, rho2 = central_character_module(2, 3, 2, 2)
    out.append(ModuleInstance("heis2_central_gf3", rho2))
    _, _, rho3 = central_character_module(3, 7, 2, 2)
    out.append(ModuleInstance("heis3_central_gf7", rho3))
    for p in (2, 3):
        out.append(ModuleInstance(f"perm_s3_gf{p}", permutation_rep(symmetric_group(3), p)))
        out.append(ModuleInstance(f"perm_s4_gf{p}", permutation_rep(symmetric_group(4), p)))
    randoms = [
        (cyclic_group(4), 2, 3, 1),
        (cyclic_group(8), 2, 5, 3),
        (cyclic_group(9), 3, 5, 4),
        (cyclic_group(6), 3, 4, 2),
        (abelian_group([2, 2]), 2, 3, 1),
        (abelian_group([3, 3]), 3, 6, 2),
        (cyclic_group(4), 2, 2, 4),
        (cyclic_group(8), 2, 5, 4),
        (heisenberg_group(2), 2, 6, 4),
        (symmetric_group(3), 3, 4, 1),
    ]
    for i, (g, p, dim, seed) in enumerate(randoms, start=1):
        out.append(ModuleInstance(
            f"random_{i}_gf{p}", random_quotient_module(g, p, dim, seed=seed)
        ))
    return out


# -- strongly stable pairs ----------------------------------------------------


@dataclass
class StablePair:
    name: str
    G: FiniteGroup
    nsub: Subgroup
    rho: Representation
    v_rows: GFMatrix
    v_action: Representation


def _soc_rows(rho: Representation) -> GFMatrix:
    rad = algebra_radical(enveloping_algebra(rho))
    return socle_series(rho, rad).layers[1]


def _regular_restriction_pair(name, G, n_member_gens, p) -> StablePair:
    """Restrict the regular G-module to N and take V = rad_N + soc_N with
    the G-action inherited from the regular module."""
    nsub = subgroup(G, n_member_gens)
    m = regular_rep(G, p)
    rho = restrict(m, nsub)
    rad = algebra_radical(enveloping_algebra(rho))
    v = subspace_sum(radical_series(rho, rad).layers[1],
                     socle_series(rho, rad).layers[1])
    vt = v.transpose()
    mats = []
    for g in range(G.n):
        res = solve(vt, m.mats[g] @ vt)
        if res is None:
            raise AssertionError("radical not G-stable (internal bug)")
        mats.append(res[0])
    v_action = Representation(G, p, mats)
    return StablePair(name, G, nsub, rho, v, v_action)


def _soc_trivial_pair(name, G, n_member_gens, p, sign=1) -> StablePair:
    """Regular N-module, V = socle, G acting on V through G/N by a scalar."""
    nsub = subgroup(G, n_member_gens)
    rho = regular_rep(nsub.as_group(), p)
    v = _soc_rows(rho)
    qmap = quotient(G, nsub)
    k = v.rows
    if sign == 1:
        v_action = trivial_rep(G, p, k)
    else:
        mats = []
        for g in range(G.n):
            c = sign if qmap.project(g) != 0 else 1
            mats.append(GFMatrix.identity(k, p).scale(c))
        v_action = Representation(G, p, mats)
    return StablePair(name, G, nsub, rho, v, v_action)


def d8_central_pair() -> StablePair:
    """Heisenberg mod 2 with its central 2-dimensional GF(3)-module; V is
    everything, carrying the faithful 2-dimensional G-action."""
    h = heisenberg_group(2)
    zc = central_subgroup(h)
    mx = GFMatrix([[1, 0], [0, 2]], 3)
    my = GFMatrix([[0, 1], [1, 0]], 3)
    big = rep_from_generators(h, [mx, my], p=3)
    rho = restrict(big, zc)
    return StablePair("heis2_central_gf3_full", h, zc, rho,
                      GFMatrix.identity(2, 3), big)


def z4_gf5_pair() -> StablePair:
    g = cyclic_group(4)
    nsub = subgroup(g, [2])
    rho = rep_from_generators(nsub.as_group(), [GFMatrix([[4]], 5)], p=5)
    big = rep_from_generators(g, [GFMatrix([[2]], 5)], p=5)
    return StablePair("z4_z2_gf5_full", g, nsub, rho, GFMatrix.identity(1, 5), big)


def stable_pairs() -> list:
    out = [
        _soc_trivial_pair("z4_z2_reg_f2_socv", cyclic_group(4), [2], 2),
        _soc_trivial_pair("z6_z3_reg_f3_socv", cyclic_group(6), [2], 3),
        _soc_trivial_pair("z6_z3_reg_f3_socv_sign", cyclic_group(6), [2], 3, sign=-1),
        _soc_trivial_pair("z9_z3_reg_f3_socv", cyclic_group(9), [3], 3),
        d8_central_pair(),
        z4_gf5_pair(),
        _regular_restriction_pair("z4_z2_regg_f2_radv", cyclic_group(4), [2], 2),
        _regular_restriction_pair("z8_z4_regg_f2_radv", cyclic_group(8), [2], 2),
        _regular_restriction_pair("z6_z3_regg_f3_radv", cyclic_group(6), [2], 3),
    ]
    s3 = symmetric_group(3)
    a3_member = next(x for x in range(s3.n) if s3.element_order(x) == 3)
    out.append(_soc_trivial_pair("s3_a3_reg_f3_socv", s3, [a3_member], 3))
    out.append(_soc_trivial_pair("s3_a3_reg_f3_socv_sign", s3, [a3_member], 3, sign=-1))
    out.append(_regular_restriction_pair("s3_a3_regg_f3_radv", s3, [a3_member], 3))
    return out


# -- extension-existence cases --------------------------------------------------


@dataclass
class ExtensionCase:
    name: str
    G: FiniteGroup
    nsub: Subgroup
    rho: Representation
    expected: str  # "exists" | "none" | "unresolved" (search bound exceeded)
    v_rows: GFMatrix | None = None
    v_action: Representation | None = None
    ideal_mode: str = "end"  # "end" (all of End_N) or "v" (annihilator of V)


def _character_case(name, G, n_member_gens, q, scalar, expected) -> ExtensionCase:
    nsub = subgroup(G, n_member_gens)
    rho = rep_from_generators(
        nsub.as_group(), [GFMatrix([[scalar]], q)] * len(n_member_gens), p=q
    )
    return ExtensionCase(name, G, nsub, rho, expected)


def _regular_case(name, G, n_member_gens, p, expected, use_v=False) -> ExtensionCase:
    nsub = subgroup(G, n_member_gens)
    rho = regular_rep(nsub.as_group(), p)
    case = ExtensionCase(name, G, nsub, rho, expected)
    if use_v:
        rad = algebra_radical(enveloping_algebra(rho))
        v = subspace_sum(radical_series(rho, rad).layers[1],
                         socle_series(rho, rad).layers[1])
        if v.rows == rho.dim:
            raise AssertionError("V covers everything; case misconfigured")
        case.v_rows = v
        # the socle of a regular module is N-trivial, so the trivial G-action
        # on V is consistent
        case.v_action = trivial_rep(G, p, v.rows)
        case.ideal_mode = "v"
    return case


def s4_v4_case() -> ExtensionCase:
    """Sum of the three nontrivial V4-characters over GF(3), inside S4.

    S4 permutes the characters transitively; the standard 3-dimensional
    permutation-minus-trivial story provides an extension, so the class is
    trivial.
    """
    s4 = symmetric_group(4)
    dts = [
        x for x in range(1, s4.n)
        if s4.element_order(x) == 2
        and all(s4.elements[x].images[i] != i for i in range(4))
    ]
    assert len(dts) == 3
    nsub = subgroup(s4, dts[:2])
    assert nsub.order == 4 and nsub.is_normal
    zg = nsub.as_group()
    # members are [identity, m1, m2, m3]; character k is +1 on m_k, -1 on the
    # other two double transpositions
    mats = [GFMatrix.identity(3, 3)]
    for i in range(1, 4):
        diag = [1 if k == i - 1 else 2 for k in range(3)]
        mats.append(GFMatrix(np.diag(diag), 3))
    rho = Representation(zg, 3, mats)
    return ExtensionCase("s4_v4_gf3", s4, nsub, rho, "exists")


def heis2_dim2_case() -> ExtensionCase:
    h = heisenberg_group(2)
    zc = central_subgroup(h)
    rho = rep_from_generators(
        zc.as_group(), [GFMatrix.identity(2, 3).scale(2)], p=3
    )
    return ExtensionCase("heis2_gf3_dim2", h, zc, rho, "exists")


def extension_cases() -> list:
    z4 = cyclic_group(4)
    z6 = cyclic_group(6)
    z8 = cyclic_group(8)
    z9 = cyclic_group(9)
    h2 = heisenberg_group(2)
    h3 = heisenberg_group(3)
    s3 = symmetric_group(3)
    a3_member = next(x for x in range(s3.n) if s3.element_order(x) == 3)
    q8 = quaternion_group()
    cases = [
        _character_case("z4_z2_gf5", z4, [2], 5, 4, "exists"),
        _character_case("z4_z2_gf3", z4, [2], 3, 2, "none"),
        _character_case("z4_z2_gf13", z4, [2], 13, 12, "exists"),
        _character_case("z4_z2_gf7", z4, [2], 7, 6, "none"),
        _character_case("heis2_gf3_dim1", h2,
                        central_subgroup(h2).generator_indices, 3, 2, "none"),
        # |U|^(|G/N|-1) = 6^8 exceeds the 2^20 search bound, so both the
        # solver and the oracle report "unresolved" (consistently)
        _character_case("heis3_gf7_dim1", h3,
                        central_subgroup(h3).generator_indices, 7, 2, "unresolved"),
        _character_case("z8_z4_gf5", z8, [2], 5, 2, "none"),
        _character_case("z8_z4_gf17", z8, [2], 17, 4, "exists"),
        _character_case("z6_z3_gf7", z6, [2], 7, 2, "exists"),
        _character_case("q8_z2_gf3", q8,
                        central_subgroup(q8).generator_indices, 3, 2, "none"),
        _regular_case("z4_z2_reg_f2", z4, [2], 2, "none", use_v=True),
        _regular_case("z6_z3_reg_f3", z6, [2], 3, "exists"),
        _regular_case("z9_z3_reg_f3", z9, [3], 3, "none"),
        _regular_case("s3_a3_reg_f3", s3, [a3_member], 3, "exists"),
        s4_v4_case(),
        heis2_dim2_case(),
    ]
    return cases


# -- Schreier systems ------------------------------------------------------------


@dataclass
class SchreierCase:
    name: str
    system: SchreierSystem
    expect_split: bool


def _cyclic_coeff(n: int) -> CoefficientGroup:
    return CoefficientGroup.from_group(cyclic_group(n))


def _trivial_system(base: FiniteGroup, coeff: CoefficientGroup) -> SchreierSystem:
    kappa = [list(range(coeff.size)) for _ in range(base.n)]
    gamma = [[0] * base.n for _ in range(base.n)]
    return SchreierSystem(base, coeff, kappa, gamma)


def schreier_cases() -> list:
    z2 = cyclic_group(2)
    z3 = cyclic_group(3)
    z4 = cyclic_group(4)
    u2 = _cyclic_coeff(2)
    u3 = _cyclic_coeff(3)
    u4 = _cyclic_coeff(4)
    cases = []

    # both extensions of Z/2 by Z/2
    klein = _trivial_system(z2, u2)
    cases.append(SchreierCase("klein", klein, True))
    twisted = _trivial_system(z2, u2)
    twisted.gamma[1][1] = 1  # gamma(s,s) = u gives Z/4
    cases.append(SchreierCase("z4_as_extension", twisted, False))

    # Z/3 by Z/3: split and Z/9 (carry cocycle)
    cases.append(SchreierCase("z3xz3", _trivial_system(z3, u3), True))
    z9sys = _trivial_system(z3, u3)
    for a in range(3):
        for b in range(3):
            z9sys.gamma[a][b] = (a + b) // 3
    cases.append(SchreierCase("z9_as_extension", z9sys, False))

    # D8 and Q8 as Z/4-by-Z/2 with the inversion action
    inv_kappa = [list(range(4)), [0, 3, 2, 1]]
    cases.append(SchreierCase(
        "d8", SchreierSystem(z2, u4, inv_kappa, [[0, 0], [0, 0]]), True))
    cases.append(SchreierCase(
        "q8", SchreierSystem(z2, u4, inv_kappa, [[0, 0], [0, 2]]), False))

    # S3 = Z/3 by Z/2, inversion action, trivial factor set
    cases.append(SchreierCase(
        "s3_split",
        SchreierSystem(z2, u3, [list(range(3)), [0, 2, 1]], [[0, 0], [0, 0]]),
        True))

    # nonabelian coefficients: U = S3 with an inner involution acting
    s3 = symmetric_group(3)
    t = next(x for x in range(1, s3.n) if s3.element_order(x) == 2)
    us3 = CoefficientGroup.from_group(s3)
    cases.append(SchreierCase(
        "s3_coeff_split",
        SchreierSystem(z2, us3,
                       [list(range(6)), [s3.conj(t, u) for u in range(6)]],
                       [[0, 0], [0, 0]]),
        True))

    # nonabelian coefficients with a central twist: U = D8, trivial action,
    # gamma(s,s) = the central involution; splits via a square root of z
    d8 = heisenberg_group(2)
    z = central_subgroup(d8).generator_indices[0]
    ud8 = CoefficientGroup.from_group(d8)
    d8twist = _trivial_system(z2, ud8)
    d8twist.gamma[1][1] = z
    cases.append(SchreierCase("d8_coeff_central_twist", d8twist, True))

    cases.append(SchreierCase("z2_on_u4_trivial", _trivial_system(z2, u4), True))
    cases.append(SchreierCase("z4_on_u2_trivial", _trivial_system(z4, u2), True))
    z8sys = _trivial_system(z4, u2)
    for a in range(4):
        for b in range(4):
            z8sys.gamma[a][b] = (a + b) // 4
    cases.append(SchreierCase("z8_as_extension", z8sys, False))
    return cases


def schreier_inflation_sources():
    """(name, quotient-level system, QuotientMap) triples for inflation tests:
    the small systems pulled back along Z/4 -> Z/2, Z/6 -> Z/3, Z/9 -> Z/3."""
    out = []
    z4 = cyclic_group(4)
    q4 = quotient(z4, subgroup(z4, [2]))
    z6 = cyclic_group(6)
    q6 = quotient(z6, subgroup(z6, [2]))  # N = Z/3, quotient = Z/2
    z9 = cyclic_group(9)
    q9 = quotient(z9, subgroup(z9, [3]))
    u2 = _cyclic_coeff(2)
    u3 = _cyclic_coeff(3)
    z2 = cyclic_group(2)
    z3 = cyclic_group(3)
    klein = _trivial_system(z2, u2)
    twisted = _trivial_system(z2, u2)
    twisted.gamma[1][1] = 1
    out.append(("klein_inflated_z4", klein, q4))
    out.append(("z4ext_inflated_z4", twisted, q4))
    out.append(("klein_inflated_z6", klein, q6))
    z9sys = _trivial_system(z3, u3)
    for a in range(3):
        for b in range(3):
            z9sys.gamma[a][b] = (a + b) // 3
    out.append(("z9ext_inflated_z9", z9sys, q9))
    return out
