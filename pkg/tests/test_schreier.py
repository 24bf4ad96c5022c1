import pytest

from stabext.groups import cyclic_group, quotient, subgroup
from stabext.schreier import (
    CoefficientGroup,
    SchreierSystem,
    build_extension,
    certify_inflation,
    complement_search,
    inflate_system,
    is_split,
    system_from_extension,
    systems_equivalent,
    verify_schreier,
)
from stabext.stability import CertificationError
from stabext import corpus


def test_corpus_systems_verify_and_build():
    for case in corpus.schreier_cases():
        rep = verify_schreier(case.system)
        assert rep.ok, (case.name, rep.failures[:3])
        ext = build_extension(case.system)
        assert ext.group.n == case.system.base.n * case.system.coeff.size


def test_split_matches_complement_search():
    for case in corpus.schreier_cases():
        status, beta = is_split(case.system)
        expect = "split" if case.expect_split else "nonsplit"
        assert status == expect, case.name
        ext = build_extension(case.system, skip_verify=True)
        comp = complement_search(ext)
        assert (comp is not None) == case.expect_split, case.name


def test_split_beta_really_splits():
    for case in corpus.schreier_cases():
        status, beta = is_split(case.system)
        if status != "split":
            continue
        sys = case.system
        G, U = sys.base, sys.coeff
        assert beta[0] == 0
        for g in range(G.n):
            for h in range(G.n):
                lhs = U.mult(U.mult(beta[g], sys.act(g, beta[h])),
                             sys.gamma[g][h])
                assert lhs == beta[G.mult(g, h)], case.name


def test_z4_from_klein_system_is_cyclic():
    case = next(c for c in corpus.schreier_cases()
                if c.name == "z4_as_extension")
    ext = build_extension(case.system)
    e = ext.group
    orders = []
    for x in range(e.n):
        k, y = 1, x
        while y != 0:
            y = e.mult(y, x)
            k += 1
        orders.append(k)
    assert max(orders) == 4


def test_q8_system_nonsplit_with_unique_involution():
    case = next(c for c in corpus.schreier_cases() if c.name == "q8")
    ext = build_extension(case.system)
    e = ext.group
    involutions = [x for x in range(1, e.n) if e.mult(x, x) == 0]
    assert len(involutions) == 1  # the quaternion signature


def test_invalid_gamma_rejected():
    z2 = cyclic_group(2)
    u = CoefficientGroup.from_group(cyclic_group(4))
    kappa = [[0, 1, 2, 3], [0, 1, 2, 3]]
    gamma = [[0, 0], [0, 1]]
    good = SchreierSystem(z2, u, kappa, gamma)
    assert verify_schreier(good).ok
    bad = SchreierSystem(z2, u, kappa, [[1, 0], [0, 1]])
    assert not verify_schreier(bad).ok


def test_inflation_certified():
    for name, sysm, qmap in corpus.schreier_inflation_sources():
        big = inflate_system(sysm, qmap)
        assert verify_schreier(big).ok, name
        ext = build_extension(big)
        certify_inflation(ext, qmap)
        assert ext.group.n == big.base.n * big.coeff.size


def test_system_from_extension_roundtrip():
    case = next(c for c in corpus.schreier_cases() if c.name == "q8")
    ext = build_extension(case.system)
    # read the cocycle data back off the concrete extension group
    u_members = [ext.idx(u, 0) for u in range(case.system.coeff.size)]
    usub = subgroup(ext.group, u_members)
    qmap = quotient(ext.group, usub)
    sys2 = system_from_extension(ext.group, usub, qmap)
    assert verify_schreier(sys2).ok
    # same splitting behaviour as the original
    assert is_split(sys2)[0] == "nonsplit"
    ext2 = build_extension(sys2)
    involutions = [x for x in range(1, ext2.group.n)
                   if ext2.group.mult(x, x) == 0]
    assert len(involutions) == 1


def test_equivalence_decides_shared_base():
    z2 = cyclic_group(2)
    u = CoefficientGroup.from_group(cyclic_group(2))
    kappa = [[0, 1], [0, 1]]
    split_sys = SchreierSystem(z2, u, kappa, [[0, 0], [0, 0]])
    twisted = SchreierSystem(z2, u, kappa, [[0, 0], [0, 1]])
    status, _ = systems_equivalent(split_sys, twisted)
    assert status == "inequivalent"
    status, beta = systems_equivalent(split_sys, split_sys)
    assert status == "equivalent"


def test_extension_action_and_section_roundtrip():
    from stabext.gfmat import GFMatrix
    from stabext.reps import hom_space, rep_from_generators
    from stabext.stability import structure_map_for
    from stabext.schreier import extension_acting_on_module, section_structure_map
    from stabext.obstruction import make_ideal, _unit_group_of_ideal

    z4 = cyclic_group(4)
    n = subgroup(z4, [2])
    rho = rep_from_generators(n.as_group(), [GFMatrix([[4]], 5)], p=5)
    status, smap = structure_map_for(z4, n, rho)
    assert status == "ok"
    units = _unit_group_of_ideal(make_ideal(hom_space(rho, rho), 5, 1))
    ext, rho_ext, sys = extension_acting_on_module(smap, units)
    assert rho_ext.group is ext.group
    back = section_structure_map(ext, rho_ext, n)
    for g in range(z4.n):
        assert back.alpha[g] == smap.alpha[g]
