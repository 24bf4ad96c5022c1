"""End-to-end analysis drivers built from the core modules.

Each driver returns (status, payload) where every positive payload is a
witness object already certified by the layer that produced it.  The CLI
and the test suite both run through these entry points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gfmat import GFMatrix
from .groups import FiniteGroup, Subgroup, quotient
from .reps import (
    Representation,
    annihilator_ideal,
    hom_space,
    regular_rep,
    tensor,
)
from .stability import (
    StructureMap,
    TensorWitness,
    structure_map_for,
    tensor_to_numerical,
    test_numerical_stability,
    test_pair_numerical_stability,
)
from .obstruction import (
    DEFAULT_SEARCH_BOUND,
    additive_cocycle,
    brute_force_extension_oracle,
    extend_by_layers,
    extend_module_structure,
    make_ideal,
    solve_coboundary,
    tensor_kill,
    _unit_group_of_ideal,
)


def _gamma_fn(smap: StructureMap):
    G = smap.G
    inv = [smap.alpha[g].inverse() for g in range(G.n)]

    def gamma(g, h):
        return smap.alpha[g] @ smap.alpha[h] @ inv[G.mult(g, h)]

    return gamma


def pick_ideal(rho: Representation, v_rows, mode: str):
    """The coefficient ideal: J_V for mode "v", all of End_N(Q) for "end"."""
    end = hom_space(rho, rho)
    if mode == "v":
        return annihilator_ideal(end, v_rows, "socle")
    return make_ideal(end, rho.p, rho.dim)


@dataclass
class ObstructionOutcome:
    status: str  # "solved" | "none" | "unresolved" | chooser failure
    smap: StructureMap | None = None
    beta: dict | None = None
    extended: Representation | None = None
    cocycle_dim: int | None = None
    oracle_status: str | None = None
    oracle_rep: Representation | None = None


def obstruction_analysis(G: FiniteGroup, nsub: Subgroup, rho: Representation,
                         v_rows=None, v_action=None, ideal_mode: str = "end",
                         seed: int = 0, bound: int = DEFAULT_SEARCH_BOUND,
                         run_oracle: bool = False) -> ObstructionOutcome:
    """Decide whether the N-action extends to G (within the chosen
    coefficient class), optionally cross-checking with the exhaustive oracle.
    """
    qmap = quotient(G, nsub)
    status, smap = structure_map_for(G, nsub, rho, seed=seed,
                                     v_rows=v_rows, v_action=v_action)
    if status != "ok":
        return ObstructionOutcome(status)
    ideal = pick_ideal(rho, v_rows, ideal_mode)
    gamma = _gamma_fn(smap)
    cocycle = additive_cocycle(gamma, ideal, smap, qmap,
                               strict=ideal.square_zero)
    sc, beta = solve_coboundary(cocycle, gamma=gamma, bound=bound)
    out = ObstructionOutcome(sc, smap=smap, beta=beta, cocycle_dim=ideal.dim)
    if sc == "solved":
        out.extended = extend_module_structure(smap, beta, qmap,
                                               v_rows=v_rows, v_action=v_action)
    if run_oracle:
        units = _unit_group_of_ideal(ideal)
        out.oracle_status, out.oracle_rep = brute_force_extension_oracle(
            smap, qmap, units, v_rows=v_rows, v_action=v_action, bound=bound
        )
    return out


@dataclass
class CycleWitness:
    smap: StructureMap  # strong stability, V-compatible
    tensor: TensorWitness  # G-structure on Q tensor Y
    y_total: Representation  # the G/N-module Y actually used
    layer_count: int
    power: Representation  # numerical witness: G-structure on Q^{+n^2}
    shuffle: GFMatrix
    pair: object  # PairWitness closing the cycle
    smap_back: StructureMap


def stability_cycle(G: FiniteGroup, nsub: Subgroup, rho: Representation,
                  v_rows: GFMatrix, v_action: Representation,
                  seed: int = 0, max_steps: int = 4):
    """Strong -> tensor (Y regular) -> numerical -> strong, witnesses at
    every arrow.

    Requires soc(Q) inside V with a G-action on V.  When the annihilator of
    V is square-zero a single tensor step kills the class; otherwise the
    socle layers are peeled one at a time, tensoring repeatedly.
    """
    qmap = quotient(G, nsub)
    p = rho.p
    status, smap = structure_map_for(G, nsub, rho, seed=seed,
                                     v_rows=v_rows, v_action=v_action)
    if status != "ok":
        return status, None
    y = regular_rep(qmap.quotient, p)
    ideal = pick_ideal(rho, v_rows, "v")
    if ideal.square_zero:
        report = tensor_kill(smap, ideal, qmap, y, v_rows=v_rows)
        if report.status != "solved":
            return report.status, None
        tw = TensorWitness(y.dim, report.extended)
        y_total = y
        layers = 1
    else:
        status, data = extend_by_layers(G, nsub, rho, v_rows, v_action,
                                        seed=seed, max_steps=max_steps)
        if status != "solved":
            return status, None
        final = data["module"]
        layers = max(len(data["steps"]), 1)
        y_total = y
        for _ in range(layers - 1):
            y_total = tensor(y_total, y)
        if final.dim != rho.dim * y_total.dim:
            raise AssertionError("layer-peeling dimension bookkeeping is off")
        tw = TensorWitness(y_total.dim, final)
    power, shuffle = tensor_to_numerical(G, nsub, rho, qmap, y_total, tw)
    status, pw = test_pair_numerical_stability(G, nsub, rho, v_rows, v_action,
                                               seed=seed)
    if status != "ok":
        return status, None
    status, smap_back = structure_map_for(G, nsub, rho, seed=seed,
                                          v_rows=v_rows, v_action=v_action)
    if status != "ok":
        return status, None
    return "ok", CycleWitness(smap, tw, y_total, layers, power, shuffle,
                              pw, smap_back)


def seed_independence(G: FiniteGroup, nsub: Subgroup, rho: Representation,
                      v_rows=None, v_action=None, seeds=(0, 1)):
    """Two structure maps from different seeds differ by units of End_N(Q),
    elementwise and as cosets, so U alpha(G) = U alpha'(G) exactly.

    Verifies, for every g: alpha(g)^{-1} alpha'(g) lies in End_N(Q) and is
    invertible, and alpha(g)-conjugation maps End_N(Q) into itself; these
    two facts give U alpha'(g) = U alpha(g) for each coset, hence equality
    of the full matrix sets.  Returns (status, details).
    """
    maps = []
    for s in seeds:
        status, smap = structure_map_for(G, nsub, rho, seed=s,
                                         v_rows=v_rows, v_action=v_action)
        if status != "ok":
            return status, None
        maps.append(smap)
    a, b = maps
    end = hom_space(rho, rho)
    from .reps import mat_in_span

    for g in range(G.n):
        u = a.alpha[g].inverse() @ b.alpha[g]
        if not mat_in_span(end, u) or u.inverse() is None:
            return "mismatch", g
        conj_ok = all(
            mat_in_span(end, a.alpha[g] @ e @ a.alpha[g].inverse())
            for e in end
        )
        if not conj_ok:
            return "mismatch", g
    return "ok", (a, b)


def induced_restriction_witness(G, nsub, rho, seed: int = 0):
    """Certified isomorphism res_N ind_N^G Q = Q^{+|G:N|}."""
    return test_numerical_stability(G, nsub, rho, seed=seed)
