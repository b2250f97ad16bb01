"""HTTP service wrapping the library; the CLI reuses the same handlers.

Each subcommand is one POST endpoint taking a typed request model and
returning a ReportResponse.  Handlers are plain functions from request
model to (document, status) so they can be invoked in-process without a
server; mathematical check failures are reported in the document status,
malformed input maps to HTTP 400.
"""

from __future__ import annotations

import itertools
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import deformation, dessins, lifting, tails, tree
from .errors import MalformedInput, MathematicalFailure, StableRedError
from .reports import (STATUS_CHECK_FAILED, STATUS_OK, make_document,
                      parse_fraction)
from .superelliptic import eigencharacter


class AnalyzeDessinRequest(BaseModel):
    p: int
    types: list[str] = Field(min_length=3, max_length=3)
    n_prime: Optional[int] = None
    aut_orders: Optional[list[str]] = None   # each entry "1" or "1|2"
    group_order: Optional[int] = None


class VerifyDatumRequest(BaseModel):
    p: int
    sigma: list[str] = Field(min_length=3, max_length=3)
    epsilon: int = 1


class EnumerateSignaturesRequest(BaseModel):
    p: int
    max_new_tails: int = 0
    denominators_divide_p_minus_1: bool = True


class TreeCheckRequest(BaseModel):
    tree: dict
    three_point: bool = True
    p: Optional[int] = None    # enables the exceptional-degree report


class TailNormalizeRequest(BaseModel):
    p: int
    m: int
    a: int
    coefficients: list[int]
    precision: Optional[int] = None


class GermReduceRequest(BaseModel):
    p: int
    m: int
    h: int
    valuation_ratio: str


class ReportResponse(BaseModel):
    schema_version: str
    command: str
    status: str
    inputs: dict
    results: dict
    provenance: list[str]


def _aut_variants(aut_orders, width):
    """Expand '1,1,1|2' style per-tail candidates into combinations."""
    if aut_orders is None:
        return [None]
    if len(aut_orders) != width:
        raise MalformedInput(
            f"need {width} aut orders, got {len(aut_orders)}")
    slots = [[int(x) for x in entry.split("|")] for entry in aut_orders]
    return [list(combo) for combo in itertools.product(*slots)]


def handle_analyze_dessin(req: AnalyzeDessinRequest) -> dict:
    parsed = [dessins.CycleType.parse(t, req.p) for t in req.types]
    base = dessins.analyze_dessin(req.p, parsed,
                                  require_group_order=req.group_order)
    if base.failure is not None:
        results = {"failure": base.failure,
                   "genus": base.genus,
                   "types": [str(t) for t in parsed]}
        return make_document(
            "analyze-dessin", req.model_dump(), results,
            ["ramification invariant: sigma = (fiber count - 1)/(p - 1)"],
            status=STATUS_CHECK_FAILED)

    nonwild = len(base.lifting.h_values)
    variants = _aut_variants(req.aut_orders, nonwild)
    candidate_sets = []
    for variant in variants:
        report = lifting.assemble_report(
            req.p, base.signature.entries, aut_orders=variant,
            n_prime=req.n_prime,
            n_prime_bounds=None if req.n_prime is not None
            else base.n_prime_bounds,
            chi_injective=True)
        candidate_sets.append({
            "aut_orders": variant or [1] * nonwild,
            "candidates": report.moduli_candidates,
        })
    ram = sorted({c.moduli_degree
                  for cs in candidate_sets for c in cs["candidates"]})

    results = {
        "class_count": base.class_count,
        "classes": [{"g0": list(d.g0), "g1": list(d.g1),
                     "g_inf": list(d.g_inf), "group_order": d.group_order}
                    for d in base.classes],
        "group_ids": base.group_ids,
        "genus": base.genus,
        "signature": list(base.signature.entries),
        "wild_indices": list(base.signature.wild),
        "datum_witness": base.datum_witness,
        "stable_field_degree": base.lifting.stable_degree,
        "patching": base.lifting.patching,
        "n_prime_bounds": base.n_prime_bounds,
        "moduli": candidate_sets,
        "predicted_ramification_exponents": ram,
        "disk_thresholds": base.lifting.disk_thresholds,
        "mildness": base.lifting.mildness,
        "notes": base.notes,
    }
    provenance = [
        "ramification invariant: sigma = (fiber count - 1)/(p - 1)",
        "stable-field degree: N = (p-1) * lcm(h_j)",
        "patching count: (p-1) * prod(h_j), orbits of length N",
        "field-of-moduli degree: N' = (p-1)/n' * lcm(h_j / aut_j)",
        "n' bracket: gcd(m_j) <= n' <= [normalizer : centralizer] of a "
        "p-Sylow",
        "germ disk threshold: p*m/((p-1)*h)",
    ]
    return make_document("analyze-dessin", req.model_dump(), results,
                         provenance, status=STATUS_OK)


def handle_verify_datum(req: VerifyDatumRequest) -> dict:
    sigma = [parse_fraction(s) for s in req.sigma]
    datum = deformation.build_normalized_special(req.p, sigma,
                                                 epsilon=req.epsilon)
    points = deformation.critical_invariants(datum)
    vcf = deformation.check_local_vcf(datum)
    verdict = deformation.is_special(datum)
    status = STATUS_OK if (vcf.passed and verdict.special) else \
        STATUS_CHECK_FAILED
    results = {
        "classification": datum.classification,
        "curve_leading": datum.curve_leading,
        "epsilon": datum.epsilon,
        "scalar_twist": datum.scalar_twist,
        "field_degree": datum.curve.s,
        "eigencharacter": eigencharacter(datum.omega, datum.curve),
        "critical_points": [
            {"tau": "inf" if c.tau == "inf" else c.tau,
             "m": c.m_tau, "h": c.h_tau, "sigma": c.sigma, "kind": c.kind}
            for c in points],
        "local_vcf": vcf,
        "special": verdict,
        "chi_kernel_order": datum.chi_kernel_order,
    }
    provenance = [
        "critical invariants: m = stabilizer order, h = ord(omega) + 1",
        "vanishing-cycle identity: sum(sigma_j - 1) = 2g - 2",
        "logarithmic forms are the Cartier-fixed ones; exact forms are "
        "the kernel",
    ]
    return make_document("verify-datum", req.model_dump(), results,
                         provenance, status=status)


def handle_enumerate_signatures(req: EnumerateSignaturesRequest) -> dict:
    sigs = deformation.enumerate_signatures(
        req.p, req.max_new_tails, req.denominators_divide_p_minus_1)
    results = {
        "count": len(sigs),
        "signatures": [
            {"entries": list(s.entries), "prim": list(s.prim),
             "new": list(s.new), "wild": list(s.wild)}
            for s in sigs],
    }
    provenance = [
        "fractional parts of an admissible signature sum to 1",
        "injective character forces denominators dividing p - 1",
    ]
    return make_document("enumerate-signatures", req.model_dump(), results,
                         provenance, status=STATUS_OK)


def handle_tree_check(req: TreeCheckRequest) -> dict:
    t = tree.tree_from_document(req.tree)
    validation = tree.validate_tree(t)
    results = {"validation": validation}
    provenance = [
        "edge law: sigma_e + sigma_reverse = 0",
        "local identity: sum over edges at v of (sigma_e - 1) = 2 g_v - 2",
    ]
    if validation.passed:
        g = tree.global_vcf(t)
        results["global_vcf"] = {
            "passed": g.passed,
            "chain": [{"vertex": v, "cut_sum": c, "expected": e}
                      for v, c, e in g.chain],
            "lhs": g.lhs, "rhs": g.rhs, "violations": g.violations,
        }
        verdict = tree.classify_structure(t, three_point=req.three_point)
        results["structure"] = verdict
        if verdict.kind in ("Exceptional1", "Exceptional2") and req.p:
            tail = next(n for n, k in t.leaves.items()
                        if k in (tree.PRIMITIVE, tree.NEW))
            _, _, m_t, h_t = t.leaf_edge(tail)
            results["exceptional_stable_degree"] = \
                lifting.exceptional_field_degree(req.p, h_t)
            provenance.append(
                "exceptional stable-reduction degree: h (p - 1)")
        try:
            profile = tree.nu_profile(t)
            results["nu_profile"] = {
                "passed": profile.passed,
                "violations": profile.violations,
                "nu": {f"{s}->{tt}": v for (s, tt), v in
                       sorted(profile.nu.items())},
            }
        except StableRedError as exc:
            results["nu_profile"] = {"skipped": str(exc)}
        provenance.append(
            "global identity: sum_prim sigma + sum_new (sigma - 1) "
            "= 2g - 2 + |B_0|")
        ok = g.passed and verdict.kind != "Inconsistent"
        status = STATUS_OK if ok else STATUS_CHECK_FAILED
    else:
        status = STATUS_CHECK_FAILED
    return make_document("tree-check", req.model_dump(), results, provenance,
                         status=status)


def handle_tail_normalize(req: TailNormalizeRequest) -> dict:
    cover = tails.TailCover(req.p, req.m, req.a, req.coefficients,
                            precision=req.precision)
    canonical, chain = tails.normalize_tail(cover)
    replay = tails.apply_chain(cover, chain)
    metrics = tails.tail_metrics(canonical)
    klass = tails.classify_tail(canonical)
    results = {
        "h": canonical.h,
        "sigma": canonical.sigma,
        "canonical": canonical.is_canonical(),
        "replay_matches": replay.is_canonical(),
        "field_degree": canonical.field.s,
        "chain": [{"kind": s.kind, "data": s.data} for s in chain],
        "metrics": metrics,
        "classification": klass,
    }
    provenance = [
        "Hasse-Arf divisibility: m | (p-1) h",
        "normal form: y^p - y = z^h after homothety, shift and y-shift",
        "tail curve genus: (p-1)(h-1)/2",
        "pointed automorphisms: cyclic of order (p-1) h",
    ]
    status = STATUS_OK if results["canonical"] and results["replay_matches"] \
        else STATUS_CHECK_FAILED
    return make_document("tail-normalize", req.model_dump(), results,
                         provenance, status=status)


def handle_germ_reduce(req: GermReduceRequest) -> dict:
    ratio = parse_fraction(req.valuation_ratio)
    verdict = tails.germ_reduction(req.p, req.m, req.h, ratio)
    results = {"verdict": verdict}
    provenance = [
        "germ-reduction threshold: p*m/((p-1)*h), inclusive on the good "
        "side",
        "bad reduction obstruction: d(w z^a + z^h) with a zero of order "
        "a-1 at the origin and m simple zeros",
    ]
    return make_document("germ-reduce", req.model_dump(), results,
                         provenance, status=STATUS_OK)


HANDLERS = {
    "analyze-dessin": (AnalyzeDessinRequest, handle_analyze_dessin),
    "verify-datum": (VerifyDatumRequest, handle_verify_datum),
    "enumerate-signatures": (EnumerateSignaturesRequest,
                             handle_enumerate_signatures),
    "tree-check": (TreeCheckRequest, handle_tree_check),
    "tail-normalize": (TailNormalizeRequest, handle_tail_normalize),
    "germ-reduce": (GermReduceRequest, handle_germ_reduce),
}


app = FastAPI(title="stablered",
              description="Exact invariants of three point covers with bad "
                          "reduction: deformation data, tree identities, "
                          "tail normal forms and lifting counts.")


def _endpoint(handler):
    def run(req):
        try:
            return handler(req)
        except MalformedInput as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except MathematicalFailure as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
    return run


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/analyze-dessin", response_model=ReportResponse)
def analyze_dessin_endpoint(req: AnalyzeDessinRequest):
    return _endpoint(handle_analyze_dessin)(req)


@app.post("/verify-datum", response_model=ReportResponse)
def verify_datum_endpoint(req: VerifyDatumRequest):
    return _endpoint(handle_verify_datum)(req)


@app.post("/enumerate-signatures", response_model=ReportResponse)
def enumerate_signatures_endpoint(req: EnumerateSignaturesRequest):
    return _endpoint(handle_enumerate_signatures)(req)


@app.post("/tree-check", response_model=ReportResponse)
def tree_check_endpoint(req: TreeCheckRequest):
    return _endpoint(handle_tree_check)(req)


@app.post("/tail-normalize", response_model=ReportResponse)
def tail_normalize_endpoint(req: TailNormalizeRequest):
    return _endpoint(handle_tail_normalize)(req)


@app.post("/germ-reduce", response_model=ReportResponse)
def germ_reduce_endpoint(req: GermReduceRequest):
    return _endpoint(handle_germ_reduce)(req)
