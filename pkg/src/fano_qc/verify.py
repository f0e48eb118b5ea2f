"""Run every consistency check for one ``(N, k)`` and collect the outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .birkhoff import Pipeline, run_pipeline, verify_gauge
from .errors import FanoQCError
from .gw import (
    gw_invariants,
    homogeneity_check,
    pairing_symmetry_check,
    quantum_relation_check,
    structural_constants,
)
from .picard_fuchs import FanoParams, picard_fuchs_operator
from .weyl import adapted_check, reduced_operator


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    params: FanoParams
    checks: list[Check] = field(default_factory=list)
    integral: bool | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def to_dict(self) -> dict:
        return {
            "N": self.params.N,
            "k": self.params.k,
            "ok": self.ok,
            "integral": self.integral,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


def run_checks(p: FanoParams, pipeline: Pipeline | None = None) -> VerifyReport:
    rep = VerifyReport(p)
    try:
        pl = pipeline or run_pipeline(p)
    except FanoQCError as exc:
        rep.add("solve", False, str(exc))
        return rep
    rep.add("solve", True, f"{len(pl.qsystem.Q)} nonzero Q_i^a, all banded")

    F, C, D = pl.family, pl.omega_hat, pl.dubrovin
    a_pf = adapted_check(F)
    rep.add("adapted(omega_pf)", a_pf.passed, str(a_pf))
    a_hat = adapted_check(C.as_family())
    rep.add("adapted(omega_hat)", a_hat.passed, str(a_hat))
    rep.add("1/h-linear(omega_hat)", C.is_inverse_h_linear())

    P = picard_fuchs_operator(p)
    if a_pf.passed:
        rep.add("reduced(omega_pf) == P", reduced_operator(F) == P)
    else:
        rep.add("reduced(omega_pf) == P", False, "family not adapted")
    if a_hat.passed:
        red = reduced_operator(C.as_family())
        rep.add("reduced(omega_hat) == P", red == P, "" if red == P else str(red))
    else:
        rep.add("reduced(omega_hat) == P", False, "family not adapted")

    rep.add("gauge identity", verify_gauge(pl.lplus, F, C))
    rep.add("pairing symmetry", pairing_symmetry_check(D))
    rep.add("quantum relation", quantum_relation_check(D))
    bad = homogeneity_check(D)
    rep.add("homogeneity", not bad, "; ".join(bad[:5]))
    try:
        table = structural_constants(D)
    except FanoQCError as exc:
        rep.add("vanishing range", False, str(exc))
    else:
        records = gw_invariants(table)
        rep.add("vanishing range", True, f"{len(table.L)} admissible L_m^d")
        rep.add("degree axiom", all(r.degree_balanced(p) for r in records))
        rep.integral = table.is_integral() and pl.qsystem.is_integral()
    return rep


def fano_pairs(n_max: int, n_min: int = 5):
    for N in range(n_min, n_max + 1):
        for k in range(1, N):
            yield N, k
