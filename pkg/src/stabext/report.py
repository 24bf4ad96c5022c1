"""Problem specs and witness-carrying reports, as versioned JSON.

A report embeds every witness needed to re-check its positive verdicts by
direct equation checking; verify_report never repeats a search.  Negative
verdicts ("no extension", "not stable") are search results and are echoed
as-is; their supporting evidence is the named failure data.
"""

from __future__ import annotations

import time

from .gfmat import ContractViolation, GFMatrix
from .groups import FiniteGroup, Subgroup, quotient, subgroup
from .reps import (
    Representation,
    algebra_radical,
    annihilator_ideal,
    enveloping_algebra,
    hom_space,
    rep_from_generators,
    socle_series,
)
from .stability import (
    CertificationError,
    StructureMap,
    structure_map_for,
    test_split_observability,
)
from .schreier import (
    CoefficientGroup,
    SchreierSystem,
    build_extension,
    complement_search,
    is_split,
    verify_schreier,
)
from .obstruction import gr_module
from .pipeline import obstruction_analysis

PROBLEM_SCHEMA = "stabext.problem/1"
SCHREIER_SCHEMA = "stabext.schreier/1"
REPORT_SCHEMA = "stabext.report/1"

KNOWN_ANALYSES = ("stability", "obstruction", "extension", "gr", "observability")


class SpecError(ValueError):
    """Problem description fails validation; the message names the field."""


def _mat(obj) -> GFMatrix:
    return GFMatrix.from_json(obj)


def _mats(objs) -> list:
    return [GFMatrix.from_json(o) for o in objs]


def _require(obj, field, ctx):
    if field not in obj:
        raise SpecError(f"{ctx}: missing field {field!r}")
    return obj[field]


class Problem:
    """Parsed and validated problem description."""

    def __init__(self, obj: dict):
        if obj.get("schema") != PROBLEM_SCHEMA:
            raise SpecError(f"schema: expected {PROBLEM_SCHEMA}")
        self.raw = obj
        self.p = int(_require(obj, "p", "problem"))
        try:
            self.G = FiniteGroup.from_json(_require(obj, "group", "problem"))
        except ContractViolation as e:
            raise SpecError(f"group: {e}")
        ngens = _require(obj, "normal_generators", "problem")
        for x in ngens:
            if not 0 <= int(x) < self.G.n:
                raise SpecError(f"normal_generators: index {x} out of range")
        self.nsub = subgroup(self.G, [int(x) for x in ngens])
        rho_gens = _mats(_require(obj, "rho_generators", "problem"))
        for m in rho_gens:
            if m.p != self.p:
                raise SpecError("rho_generators: modulus disagrees with p")
        try:
            self.rho = rep_from_generators(self.nsub.as_group(), rho_gens, p=self.p)
        except (ContractViolation, ValueError) as e:
            raise SpecError(f"rho_generators: {e}")
        self.v_rows = None
        self.v_action = None
        if obj.get("v_basis") is not None:
            self.v_rows = GFMatrix(obj["v_basis"], self.p)
            if self.v_rows.cols != self.rho.dim:
                raise SpecError("v_basis: wrong ambient dimension")
            va = obj.get("v_action_generators")
            if va is None:
                raise SpecError("v_action_generators: required when v_basis is set")
            try:
                self.v_action = rep_from_generators(self.G, _mats(va), p=self.p)
            except (ContractViolation, ValueError) as e:
                raise SpecError(f"v_action_generators: {e}")
            if self.v_action.dim != self.v_rows.rows:
                raise SpecError("v_action_generators: dimension != |v_basis|")
            # the G-action on V must agree with rho where both are defined
            vt = self.v_rows.transpose()
            for i, n in enumerate(self.nsub.members):
                if self.rho.mats[i] @ vt != vt @ self.v_action.mats[n]:
                    raise SpecError(
                        f"v_action_generators: disagrees with rho at element {n}"
                    )
        self.analyses = list(_require(obj, "analyses", "problem"))
        for a in self.analyses:
            if a not in KNOWN_ANALYSES:
                raise SpecError(f"analyses: unknown analysis {a!r}")
        self.seed = int(obj.get("seed", 0))
        self.cap = int(obj.get("cap", 2**20))


def load_schreier(obj: dict) -> SchreierSystem:
    if obj.get("schema") != SCHREIER_SCHEMA:
        raise SpecError(f"schema: expected {SCHREIER_SCHEMA}")
    base = FiniteGroup.from_json(_require(obj, "group", "schreier"))
    cob = _require(obj, "coeff", "schreier")
    kind = cob.get("kind")
    if kind == "enumerated":
        coeff = CoefficientGroup.from_group(FiniteGroup.from_json(cob["group"]))
    elif kind in ("matrix", "one_plus_J"):
        coeff = CoefficientGroup("matrix", matrices=_mats(cob["elements"]))
    else:
        raise SpecError(f"coeff: unknown kind {kind!r}")
    kappa = [[int(u) for u in row] for row in _require(obj, "kappa", "schreier")]
    gamma = [[int(u) for u in row] for row in _require(obj, "gamma", "schreier")]
    if len(kappa) != base.n or len(gamma) != base.n:
        raise SpecError("kappa/gamma: row count must equal |base|")
    return SchreierSystem(base, coeff, kappa, gamma)


# -- running ----------------------------------------------------------------------


def _rep_json(rep: Representation) -> list:
    return [m.to_json() for m in rep.mats]


def _stability_result(prob: Problem) -> dict:
    status, smap = structure_map_for(
        prob.G, prob.nsub, prob.rho, seed=prob.seed,
        v_rows=prob.v_rows, v_action=prob.v_action,
    )
    if status == "ok":
        return {"g_stable": True,
                "alpha": [m.to_json() for m in smap.alpha]}
    if status == "unstable":
        return {"g_stable": False, "failure_witness": int(smap)}
    return {"g_stable": "unresolved"}


def _obstruction_result(prob: Problem) -> dict:
    mode = "v" if prob.v_rows is not None else "end"
    out = obstruction_analysis(
        prob.G, prob.nsub, prob.rho, v_rows=prob.v_rows,
        v_action=prob.v_action, ideal_mode=mode, seed=prob.seed,
        bound=prob.cap,
    )
    if out.status in ("unstable", "unresolved") and out.smap is None:
        return {"trivial": "unresolved", "reason": f"no structure map: {out.status}"}
    res = {"cocycle_dim": out.cocycle_dim}
    if out.status == "solved":
        res["trivial"] = True
        res["beta"] = [out.beta[a].to_json() for a in sorted(out.beta)]
        res["extended_rep"] = _rep_json(out.extended)
    elif out.status == "none":
        res["trivial"] = False
    else:
        res["trivial"] = "unresolved"
    return res


def _gr_result(prob: Problem) -> dict:
    if prob.v_rows is None:
        raise SpecError("gr analysis requires v_basis and v_action_generators")
    status, smap = structure_map_for(
        prob.G, prob.nsub, prob.rho, seed=prob.seed,
        v_rows=prob.v_rows, v_action=prob.v_action,
    )
    if status != "ok":
        return {"status": status}
    rad = algebra_radical(enveloping_algebra(prob.rho))
    filt = socle_series(prob.rho, rad)
    ideal = annihilator_ideal(hom_space(prob.rho, prob.rho), prob.v_rows, "socle")
    gm = gr_module(smap, filt, ideal)
    return {
        "status": "ok",
        "layer_dims": gm.layer_dims,
        "basis": gm.basis.to_json(),
        "alpha": [m.to_json() for m in smap.alpha],
        "rep": _rep_json(gm.rep),
    }


def _observability_result(prob: Problem) -> dict:
    status, data = test_split_observability(
        prob.G, prob.nsub, prob.rho, seed=prob.seed
    )
    if status == "true":
        return {"summand": True,
                "psi": data["psi"].to_json(), "phi": data["phi"].to_json()}
    if status == "false":
        return {"summand": False}
    return {"summand": "unresolved"}


def run(prob: Problem) -> dict:
    """Execute the requested analyses; deterministic given the seed."""
    results = {}
    timing = {}
    for analysis in prob.analyses:
        t0 = time.time()
        if analysis == "stability":
            results[analysis] = _stability_result(prob)
        elif analysis in ("obstruction", "extension"):
            results[analysis] = _obstruction_result(prob)
        elif analysis == "gr":
            results[analysis] = _gr_result(prob)
        elif analysis == "observability":
            results[analysis] = _observability_result(prob)
        timing[analysis] = round(time.time() - t0, 6)
    return {
        "schema": REPORT_SCHEMA,
        "problem": prob.raw,
        "results": results,
        "timing": timing,
    }


def negative_verdicts(report: dict) -> list:
    """Names of analyses whose verdict is a mathematical negative."""
    out = []
    for name, res in report.get("results", {}).items():
        for key in ("g_stable", "trivial", "summand", "status"):
            if key in res and res[key] is False:
                out.append(name)
    return out


# -- verification -------------------------------------------------------------------


def verify_report(report: dict) -> list:
    """Re-certify every embedded witness by direct equation checking.

    Returns a list of failure strings (empty = pass).  No searches are
    repeated: positive verdicts are checked against their witnesses and
    negative or unresolved verdicts are accepted as recorded.
    """
    fails = []
    if report.get("schema") != REPORT_SCHEMA:
        raise SpecError(f"schema: expected {REPORT_SCHEMA}")
    prob = Problem(report["problem"])
    results = report.get("results", {})
    for name, res in results.items():
        try:
            _verify_one(prob, name, res)
        except (CertificationError, ContractViolation, ValueError, KeyError) as e:
            fails.append(f"{name}: {e}")
    return fails


def _structure_map_from(prob: Problem, alpha_json) -> StructureMap:
    alpha = _mats(alpha_json)
    smap = StructureMap(prob.G, prob.nsub, prob.rho, alpha, normalized=True)
    if prob.v_rows is not None:
        vt = prob.v_rows.transpose()
        for g in range(prob.G.n):
            if alpha[g] @ vt != vt @ prob.v_action.mats[g]:
                raise CertificationError(f"alpha({g}) breaks the V-action")
    return smap


def _verify_one(prob: Problem, name: str, res: dict):
    if name == "stability":
        if res.get("g_stable") is True:
            _structure_map_from(prob, res["alpha"])
        return
    if name in ("obstruction", "extension"):
        if res.get("trivial") is True:
            rep = Representation(prob.G, prob.p, _mats(res["extended_rep"]))
            for i, n in enumerate(prob.nsub.members):
                if rep.mats[n] != prob.rho.mats[i]:
                    raise CertificationError("extended_rep does not restrict to rho")
            if prob.v_rows is not None:
                vt = prob.v_rows.transpose()
                for g in range(prob.G.n):
                    if rep.mats[g] @ vt != vt @ prob.v_action.mats[g]:
                        raise CertificationError(
                            f"extended_rep breaks the V-action at {g}"
                        )
        return
    if name == "gr":
        if res.get("status") != "ok":
            return
        smap = _structure_map_from(prob, res["alpha"])
        s = _mat(res["basis"])
        s_inv = s.inverse()
        if s_inv is None:
            raise CertificationError("gr basis is singular")
        dims = list(res["layer_dims"])
        rep = Representation(prob.G, prob.p, _mats(res["rep"]))
        if sum(dims) != prob.rho.dim:
            raise CertificationError("gr layer dimensions do not add up")
        # socle layer dims must match the recorded ones
        filt = socle_series(prob.rho)
        if dims != [d for d in filt.layer_dims() if d]:
            raise CertificationError("gr layer dims disagree with the socle series")
        # each alpha(g) block-triangular with the recorded diagonal blocks
        for g in range(prob.G.n):
            c = s_inv @ smap.alpha[g] @ s
            off = 0
            for k, dk in enumerate(dims):
                blk = c.submatrix(range(off, off + dk), range(off, off + dk))
                low = c.a[off + dk:, off:off + dk]
                if low.any():
                    raise CertificationError(f"alpha({g}) not filtration-preserving")
                if rep.mats[g].a[off:off + dk, off:off + dk].tolist() != blk.a.tolist():
                    raise CertificationError(f"gr rep block mismatch at ({g},{k})")
                off += dk
        return
    if name == "observability":
        if res.get("summand") is not True:
            return
        from .reps import induce, restrict

        psi, phi = _mat(res["psi"]), _mat(res["phi"])
        ind, _ = induce(prob.G, prob.nsub, prob.rho)
        resind = restrict(ind, prob.nsub)
        if psi @ phi != GFMatrix.identity(prob.rho.dim, prob.p):
            raise CertificationError("psi phi is not the identity")
        for i in range(len(prob.nsub.members)):
            if psi @ resind.mats[i] != prob.rho.mats[i] @ psi:
                raise CertificationError("psi is not an H-map")
            if resind.mats[i] @ phi != phi @ prob.rho.mats[i]:
                raise CertificationError("phi is not an H-map")
        return
    raise CertificationError(f"unknown analysis {name!r} in report")


# -- standalone schreier runs ----------------------------------------------------


def run_schreier(sys: SchreierSystem, build: bool = True,
                 bound: int = 2**20) -> dict:
    rep = verify_schreier(sys)
    out = {
        "schema": "stabext.schreier-report/1",
        "valid": rep.ok,
        "checked_exhaustively": rep.checked_exhaustively,
        "failures": [list(map(str, f)) for f in rep.failures[:10]],
    }
    if rep.ok and build:
        ext = build_extension(sys)
        status, beta = is_split(sys, bound=bound)
        comp = complement_search(ext)
        out["extension_order"] = ext.group.n
        out["is_split"] = {"split": True, "nonsplit": False}.get(status, "unresolved")
        out["complement_found"] = comp is not None
        if comp is not None:
            out["complement"] = comp
    return out
