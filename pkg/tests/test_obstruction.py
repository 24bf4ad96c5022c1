import pytest

from stabext.gfmat import ContractViolation, GFMatrix
from stabext.groups import cyclic_group, quotient, subgroup
from stabext.reps import (
    algebra_radical,
    annihilator_ideal,
    enveloping_algebra,
    hom_space,
    radical_series,
    regular_rep,
    rep_from_generators,
    socle_series,
)
from stabext.stability import structure_map_for
from stabext.obstruction import (
    additive_cocycle,
    brute_force_extension_oracle,
    extend_by_layers,
    extend_module_structure,
    gr_module,
    gr_radical_module,
    gr_radical_via_dual,
    h1_twist_class,
    make_ideal,
    solve_coboundary,
    tensor_kill,
    _unit_group_of_ideal,
)
from stabext.pipeline import (
    _gamma_fn,
    obstruction_analysis,
    pick_ideal,
    seed_independence,
    stability_cycle,
)
from stabext import corpus


def _z4_gf(p, gen_entry):
    z4 = cyclic_group(4)
    n = subgroup(z4, [2])
    rho = rep_from_generators(n.as_group(), [GFMatrix([[gen_entry]], p)], p=p)
    return z4, n, rho


def test_extension_exists_gf5():
    z4, n, rho = _z4_gf(5, 4)
    out = obstruction_analysis(z4, n, rho, run_oracle=True)
    assert out.status == "solved"
    # the square root of -1 mod 5
    assert out.extended.mats[1].a[0, 0] == 2
    assert out.oracle_status == "exists"


def test_extension_missing_gf3():
    z4, n, rho = _z4_gf(3, 2)
    out = obstruction_analysis(z4, n, rho, run_oracle=True)
    assert out.status == "none"
    assert out.oracle_status == "none"


def test_oracle_matches_solver_on_corpus():
    for case in corpus.extension_cases()[:6]:
        out = obstruction_analysis(
            case.G, case.nsub, case.rho, v_rows=case.v_rows,
            v_action=case.v_action, ideal_mode=case.ideal_mode,
            run_oracle=True,
        )
        verdict = {"solved": "exists"}.get(out.status, out.status)
        assert verdict == case.expected, case.name
        assert out.oracle_status == case.expected, case.name


def test_additive_cocycle_identity():
    # on a square-zero ideal the 1-gamma coordinates satisfy the 2-cocycle law
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z4_z2_reg_f2_socv")
    status, smap = structure_map_for(pair.G, pair.nsub, pair.rho,
                                     v_rows=pair.v_rows,
                                     v_action=pair.v_action)
    assert status == "ok"
    ideal = pick_ideal(pair.rho, pair.v_rows, "v")
    assert ideal.square_zero
    qmap = quotient(pair.G, pair.nsub)
    j = additive_cocycle(_gamma_fn(smap), ideal, smap, qmap)
    assert j.exact
    status, beta = solve_coboundary(j)
    assert status in ("solved", "none")


def test_extend_module_structure_certifies():
    z4, n, rho = _z4_gf(5, 4)
    qmap = quotient(z4, n)
    status, smap = structure_map_for(z4, n, rho)
    ideal = make_ideal(hom_space(rho, rho), 5, 1)
    j = additive_cocycle(_gamma_fn(smap), ideal, smap, qmap, strict=False)
    status, beta = solve_coboundary(j, gamma=_gamma_fn(smap))
    assert status == "solved"
    rep = extend_module_structure(smap, beta, qmap)
    assert rep.mats[2] == rho.mats[1]  # restriction recovers rho


def test_tensor_kill_regular_quotient():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z4_z2_reg_f2_socv")
    status, smap = structure_map_for(pair.G, pair.nsub, pair.rho,
                                     v_rows=pair.v_rows,
                                     v_action=pair.v_action)
    ideal = pick_ideal(pair.rho, pair.v_rows, "v")
    qmap = quotient(pair.G, pair.nsub)
    y = regular_rep(qmap.quotient, pair.rho.p)
    report = tensor_kill(smap, ideal, qmap, y, v_rows=pair.v_rows)
    assert report.status == "solved"
    assert report.extended.dim == pair.rho.dim * y.dim


def test_extend_by_layers_z6():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z6_z3_reg_f3_socv")
    status, data = extend_by_layers(pair.G, pair.nsub, pair.rho,
                                    pair.v_rows, pair.v_action)
    assert status == "solved"
    assert data["module"].dim % pair.rho.dim == 0


def test_gr_module_layers():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z4_z2_reg_f2_socv")
    status, smap = structure_map_for(pair.G, pair.nsub, pair.rho,
                                     v_rows=pair.v_rows,
                                     v_action=pair.v_action)
    rad = algebra_radical(enveloping_algebra(pair.rho))
    filt = socle_series(pair.rho, rad)
    ideal = pick_ideal(pair.rho, pair.v_rows, "v")
    gm = gr_module(smap, filt, ideal)
    assert gm.layer_dims == [1, 1]
    assert gm.rep.mats[0].is_identity()


def test_gr_radical_direct_route():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z4_z2_regg_f2_radv")
    status, smap = structure_map_for(pair.G, pair.nsub, pair.rho,
                                     v_rows=pair.v_rows,
                                     v_action=pair.v_action)
    rad = algebra_radical(enveloping_algebra(pair.rho))
    filt = radical_series(pair.rho, rad)
    ideal = pick_ideal(pair.rho, pair.v_rows, "v")
    gm = gr_radical_module(smap, filt, ideal)
    assert sum(gm.layer_dims) == pair.rho.dim


def test_gr_radical_dual_route():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "z4_z2_reg_f2_socv")
    status, out = gr_radical_via_dual(pair.G, pair.nsub, pair.rho)
    assert status == "ok"
    gm_star, gr_rad = out
    assert gr_rad.dim == pair.rho.dim
    assert sum(gm_star.layer_dims) == pair.rho.dim


def test_stability_cycle_on_corpus_sample():
    for pair in corpus.stable_pairs()[:3]:
        status, cw = stability_cycle(pair.G, pair.nsub, pair.rho,
                                   pair.v_rows, pair.v_action)
        assert status == "ok", pair.name
        assert cw.power.dim % pair.rho.dim == 0
        assert cw.shuffle.inverse() is not None


def test_seed_independence_on_corpus_sample():
    for pair in corpus.stable_pairs()[:4]:
        status, _ = seed_independence(pair.G, pair.nsub, pair.rho,
                                      v_rows=pair.v_rows,
                                      v_action=pair.v_action)
        assert status == "ok", pair.name


def test_h1_twist_class_of_two_extensions():
    z4, n, rho = _z4_gf(5, 4)
    qmap = quotient(z4, n)
    ideal = make_ideal(hom_space(rho, rho), 5, 1)
    rho1 = rep_from_generators(z4, [GFMatrix([[2]], 5)], p=5)
    rho2 = rep_from_generators(z4, [GFMatrix([[3]], 5)], p=5)
    assert rho1.mats[2] == rho.mats[1] and rho2.mats[2] == rho.mats[1]
    same = h1_twist_class(rho1, rho1, n, ideal, qmap, rho)
    assert same["conjugate"]
    diff = h1_twist_class(rho1, rho2, n, ideal, qmap, rho)
    assert diff["tensor_iso"] is not None or diff["conjugate"]


def test_oracle_bound_respected():
    z4, n, rho = _z4_gf(5, 4)
    status, smap = structure_map_for(z4, n, rho)
    qmap = quotient(z4, n)
    ideal = make_ideal(hom_space(rho, rho), 5, 1)
    units = _unit_group_of_ideal(ideal)
    status, rep = brute_force_extension_oracle(smap, qmap, units, bound=1)
    assert status == "unresolved"
