"""HTTP service exposing the evaluators, oracles, scans, and verifiers.

Thin JSON layer over the library: requests are validated with pydantic,
errors from the core surface as HTTP 400 with the exception message, and
every exact value is serialized through the CycloSum / fraction JSON forms
so nothing is lost to floating point.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .bounds import CSV_HEADER, delta_scan
from .bruhat import (
    PadicParam,
    b_word_product,
    bruhat_decompose,
    closed_form_triple,
    is_p_integral,
    triple_product,
)
from .errors import KloostermanError
from .gl4 import Gl4Weyl, gl4_full
from .klsums import CharacterPair, kl_full
from .strata import (
    ExponentMatrix,
    ModulusSpec,
    WeylElement,
    coset_cardinality,
    dr_count,
    enumerate_strata,
)
from .verification import SUITES, run_suite

app = FastAPI(title="kloosterman", version=__version__)


def _weyl(tag: str) -> WeylElement:
    try:
        return WeylElement(tag)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown weyl element {tag!r}")


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (KloostermanError, ValueError, KeyError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


class ComputeRequest(BaseModel):
    group: str = Field("gln", pattern="^(gln|gl4)$")
    weyl: str
    p: int
    r: list[int]
    psi: list[int]
    psi_prime: list[int]
    budget: int | None = None
    companion: bool = False


class CountRequest(BaseModel):
    weyl: str
    p: int
    r: list[int]


class DecomposeParam(BaseModel):
    i: int
    j: int
    m: int
    c: int


class DecomposeRequest(BaseModel):
    weyl: str
    n: int
    p: int
    params: list[DecomposeParam]


class ScanRequest(BaseModel):
    weyl: str
    p: int
    n: int
    r_budget: int
    psi: list[int]
    psi_prime: list[int]
    budget: int | None = None


class VerifyRequest(BaseModel):
    suite: str


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/compute")
def compute(req: ComputeRequest):
    spec = _run(ModulusSpec, req.p, tuple(req.r))
    chars = _run(CharacterPair, tuple(req.psi), tuple(req.psi_prime))
    if req.group == "gl4":
        try:
            gw = Gl4Weyl(req.weyl)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown GL(4) element {req.weyl!r}")
        result = _run(gl4_full, gw, spec, chars, req.budget, companion=req.companion)
    else:
        w = _weyl(req.weyl)
        if w not in (WeylElement.LONG, WeylElement.STAR):
            raise HTTPException(
                status_code=400,
                detail="group 'gln' supports the long and star elements; use group 'gl4'",
            )
        result = _run(kl_full, w, spec, chars, req.budget)
    return result.to_json()


@app.post("/count")
def count(req: CountRequest):
    w = _weyl(req.weyl)
    spec = _run(ModulusSpec, req.p, tuple(req.r))
    strata = _run(enumerate_strata, w, spec.r)
    return {
        "weyl": w.value,
        "p": spec.p,
        "r": list(spec.r),
        "strata": [
            {
                "m": m.to_json(),
                "height": m.height(),
                "kappa": m.kappa(),
                "coset_cardinality": coset_cardinality(w, m, spec.p),
                "dr_count": dr_count(m, spec.r, spec.p),
            }
            for m in strata
        ],
    }


def _fraction_matrix(mat) -> list[list[str]]:
    return [[str(Fraction(x)) for x in row] for row in mat]


@app.post("/decompose")
def decompose(req: DecomposeRequest):
    w = _weyl(req.weyl)
    entries = {(q.i, q.j): q.m for q in req.params}
    m = _run(ExponentMatrix, req.n, w, entries)
    params = {(q.i, q.j): PadicParam(q.c, q.m) for q in req.params}
    g = _run(b_word_product, w, params, req.n, req.p)
    triple = _run(bruhat_decompose, g)
    out = {
        "weyl": w.value,
        "p": req.p,
        "product": _fraction_matrix(g),
        "L": _fraction_matrix(triple.L),
        "N": _fraction_matrix(triple.N),
        "R": _fraction_matrix(triple.R),
        "p_integral": is_p_integral(g, req.p),
        "round_trip": triple_product(triple) == g,
    }
    if w in (WeylElement.LONG, WeylElement.STAR) and all(
        q.m >= 1 for q in req.params
    ):
        closed = _run(closed_form_triple, w, m, {(q.i, q.j): q.c for q in req.params}, req.p)
        out["closed_form_match"] = (
            closed.L == triple.L and closed.N == triple.N and closed.R == triple.R
        )
    return out


@app.post("/scan")
def scan(req: ScanRequest):
    w = _weyl(req.weyl)
    chars = _run(CharacterPair, tuple(req.psi), tuple(req.psi_prime))
    rows = _run(delta_scan, w, req.p, req.n, req.r_budget, chars, req.budget)
    return {
        "header": CSV_HEADER,
        "rows": [row.as_csv_row() for row in rows],
    }


@app.post("/verify")
def verify(req: VerifyRequest):
    if req.suite not in SUITES:
        raise HTTPException(
            status_code=400,
            detail=f"unknown suite {req.suite!r}; choose from {sorted(SUITES)}",
        )
    results = run_suite(req.suite)
    return {
        "suite": req.suite,
        "passed": all(r.passed for r in results),
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": round(r.seconds, 3),
            }
            for r in results
        ],
    }
