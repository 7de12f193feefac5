"""Worked mappings with every published property as an executable claim.

Two families serve as the ground-truth regression suite:

* ``example21``: w = 2|z|^4 z^2 - |z|^10 z^2, a proper degree-two disk
  self-map that admits a gradient-squared offset bound but no plain
  dilatation bound, and that defeats both product-type Laplacian bounds.
* ``example41(n)``: w = ((2n+1) z - z |z|^{2n}) / (2n), a disk
  homeomorphism fixing the rim that is Lipschitz but whose inverse has
  unbounded gradient.

Limit statements ("the dilatation ratio diverges") are encoded as
divergence witnesses over shrinking rim margins with a required growth
factor of at least 5 per margin decade; a finite sample can witness a
blow-up, never prove it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .calculus import (
    SampleGrid,
    lipschitz_estimate,
    pde_inequality_check,
    product_inequality_check,
)
from .expr import MappingExpr, parse
from .qrclass import k_qr_blowup, profile_of, properness_check, qr_deficiency

__all__ = ["Claim", "ClaimResult", "GalleryCase", "CaseReport", "example21", "example41", "verify_case"]

GROWTH_FACTOR = 5.0  # required per margin decade by divergence claims


@dataclass(frozen=True)
class Claim:
    claim_id: int
    kind: str
    params: dict
    description: str


@dataclass(frozen=True)
class ClaimResult:
    claim_id: int
    kind: str
    description: str
    passed: bool
    details: dict


@dataclass(frozen=True)
class GalleryCase:
    name: str
    mapping: MappingExpr
    claims: tuple[Claim, ...]
    closed_forms: dict[str, MappingExpr] = field(default_factory=dict)


@dataclass(frozen=True)
class CaseReport:
    name: str
    results: tuple[ClaimResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "case": self.name,
            "passed": self.passed,
            "claims": [
                {
                    "claim": r.claim_id,
                    "kind": r.kind,
                    "description": r.description,
                    "passed": r.passed,
                    "details": r.details,
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def example21() -> GalleryCase:
    w = parse("2*|z|^4*z^2 - |z|^10*z^2")
    claims = (
        Claim(1, "minimal_offset", {"K": 1.0, "bound": 144.0},
              "gradient-squared exceeds the Jacobian by at most 144 at K=1"),
        Claim(2, "proper", {"margins": (1e-1, 1e-2, 1e-3), "min_last": 0.99},
              "boundary modulus marches to 1 (properness witness)"),
        Claim(3, "dilatation_divergence",
              {"margins": (1e-3, 1e-4, 1e-5), "growth": GROWTH_FACTOR, "final_min": 1e3},
              "dilatation ratio blows up toward the rim: no offset-free bound"),
        Claim(4, "pde_holds", {"M": 1.0, "N": 76.0},
              "|lap w| <= |grad w|^2 + 76 on the grid"),
        Claim(5, "pde_fails_all", {"Ms": (1.0, 10.0, 1e3, 1e6), "N": 0.0, "witness_radius": 0.35},
              "|lap w| <= M |grad w|^2 fails for every tested M (witness near 0)"),
        Claim(6, "product_fails_all", {"Ms": (1.0, 1e3, 1e6), "witness_radius": 0.35},
              "|lap w| <= M |w_z w_zbar| fails for every tested M (witness near 0)"),
        Claim(7, "lipschitz_at_most", {"bound": 12.0, "strict": True},
              "largest stretch stays below 12"),
    )
    closed = {
        "wz": parse("8*|z|^4*z - 7*|z|^10*z"),
        "wzbar": parse("4*|z|^2*z^3 - 5*|z|^8*z^3"),
        "lap": parse("64*|z|^2*z^2 - 140*|z|^8*z^2"),
    }
    return GalleryCase("quartic-decic double cover", w, claims, closed)


def example41(n: int) -> GalleryCase:
    if n < 1:
        raise ValueError("n must be >= 1")
    two_n = 2 * n
    w = parse(f"((2*{n}+1)*z - z*|z|^{two_n}) / (2*{n})")
    lip_bound = (two_n + 1) / two_n
    claims = (
        Claim(1, "minimal_offset", {"K": 1.0, "bound": (1.0 + 1.0 / two_n) ** 2},
              f"gradient-squared exceeds the Jacobian by at most (1+1/{two_n})^2 at K=1"),
        Claim(2, "dilatation_divergence",
              {"margins": (1e-2, 1e-3, 1e-4), "growth": GROWTH_FACTOR, "final_min": None},
              "dilatation ratio blows up toward the rim"),
        Claim(3, "inverse_gradient_divergence",
              {"margins": (1e-2, 1e-3, 1e-4), "growth": GROWTH_FACTOR},
              "1/l(grad w) (the inverse map's largest stretch) blows up toward the rim"),
        Claim(4, "lipschitz_and_colip_vanishing",
              {"bound": lip_bound + 1e-12, "margins": (1e-2, 1e-3, 1e-4),
               "max_last": 0.05, "shrink": GROWTH_FACTOR},
              "Lipschitz with constant (2n+1)/(2n) while the smallest stretch dies at the rim"),
    )
    closed = {
        "wz": parse(f"((2*{n}+1) - ({n}+1)*|z|^{two_n}) / (2*{n})"),
        "wzbar": parse(f"-(1/2)*z^2*|z|^{two_n - 2}"),
        "lap": parse(f"-2*({n}+1)*z^{n}" + (f"*conj(z)^{n - 1}" if n > 1 else "")),
    }
    return GalleryCase(f"radial shrink family (n={n})", w, claims, closed)


# ----------------------------------------------------------------------
# claim evaluation
# ----------------------------------------------------------------------

def _circle_l_grad(e: MappingExpr, margin: float, n_theta: int = 256) -> np.ndarray:
    from .calculus import jet_grid

    pts = (1.0 - margin) * np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    _, wz, wzb, _ = jet_grid(e, pts)
    return np.abs(np.abs(wz) - np.abs(wzb))


def _diverges(values: list[float], growth: float, final_min: float | None) -> bool:
    ok = all(b > a for a, b in zip(values, values[1:]))
    ok = ok and all(b >= growth * a for a, b in zip(values, values[1:]))
    if final_min is not None:
        ok = ok and values[-1] > final_min
    return ok


def _eval_claim(case: GalleryCase, claim: Claim, grid: SampleGrid, profile) -> ClaimResult:
    e = case.mapping
    p = claim.params
    kind = claim.kind
    details: dict[str, Any] = {}

    if kind == "minimal_offset":
        value = qr_deficiency(profile, p["K"])
        passed = value <= p["bound"]
        details = {"K": p["K"], "value": value, "bound": p["bound"]}
    elif kind == "proper":
        vals = properness_check(e, p["margins"])
        passed = all(b > a for a, b in zip(vals, vals[1:])) and vals[-1] >= p["min_last"]
        details = {"margins": list(p["margins"]), "values": vals, "min_last": p["min_last"]}
    elif kind == "dilatation_divergence":
        vals = k_qr_blowup(e, p["margins"])
        passed = _diverges(vals, p["growth"], p["final_min"])
        details = {"margins": list(p["margins"]), "values": vals}
    elif kind == "pde_holds":
        rep = pde_inequality_check(e, p["M"], p["N"], grid)
        passed = rep.holds
        details = {"M": p["M"], "N": p["N"], "worst_margin": rep.worst_margin}
    elif kind == "pde_fails_all":
        passed = True
        rows = []
        for M in p["Ms"]:
            rep = pde_inequality_check(e, M, p["N"], grid)
            fail_ok = not rep.holds
            if M >= 1e3:
                fail_ok = fail_ok and abs(rep.witness) <= p["witness_radius"]
            rows.append({"M": M, "worst_margin": rep.worst_margin, "witness_radius": abs(rep.witness)})
            passed = passed and fail_ok
        details = {"cases": rows}
    elif kind == "product_fails_all":
        passed = True
        rows = []
        for M in p["Ms"]:
            rep = product_inequality_check(e, M, grid)
            fail_ok = not rep.holds
            if M >= 1e3:
                fail_ok = fail_ok and abs(rep.witness) <= p["witness_radius"]
            rows.append({"M": M, "worst_margin": rep.worst_margin, "witness_radius": abs(rep.witness)})
            passed = passed and fail_ok
        details = {"cases": rows}
    elif kind == "lipschitz_at_most":
        value = lipschitz_estimate(e, grid)
        passed = value < p["bound"] if p.get("strict") else value <= p["bound"]
        details = {"value": value, "bound": p["bound"]}
    elif kind == "inverse_gradient_divergence":
        vals = [float((1.0 / _circle_l_grad(e, m)).max()) for m in p["margins"]]
        passed = _diverges(vals, p["growth"], None)
        details = {"margins": list(p["margins"]), "values": vals}
    elif kind == "lipschitz_and_colip_vanishing":
        lip = lipschitz_estimate(e, grid)
        colip = [float(_circle_l_grad(e, m).min()) for m in p["margins"]]
        shrinks = all(a >= p["shrink"] * b for a, b in zip(colip, colip[1:]))
        passed = lip <= p["bound"] and shrinks and colip[-1] <= p["max_last"]
        details = {"lipschitz": lip, "bound": p["bound"], "colip_values": colip,
                   "max_last": p["max_last"]}
    else:
        raise ValueError(f"unknown claim kind {kind!r}")

    return ClaimResult(claim.claim_id, kind, claim.description, bool(passed), details)


def verify_case(case: GalleryCase, grid: SampleGrid = SampleGrid()) -> CaseReport:
    """Run every claim of the case on the grid and collect a report.

    Reports are deterministic: rerunning with the same grid reproduces the
    same JSON byte for byte.
    """
    profile = profile_of(case.mapping, grid)
    results = tuple(_eval_claim(case, c, grid, profile) for c in case.claims)
    return CaseReport(case.name, results)
