"""Run a validated problem file and assemble its report."""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import serialize as ser
from .dilation import (
    boundedness_table,
    build_dilation,
    check_positive_definite,
    verify_dilation,
)
from .errors import (
    Condition1Violation,
    Condition2Violation,
    InputError,
    PositivityBroken,
    QuotientLeak,
    ZeroF,
)
from .framing import (
    check_generator_pair,
    compute_fmax,
    dual_framing,
    generate_framing,
    largest_generator_subspace,
    synthesis_operator,
    verify_reconstruction,
)
from .naimark import naimark_dilate, verify_pvm
from .numlin import Subspace, Tolerance
from .ovm import FramingOVM, framing_to_povm, ovm_total_check, ovm_transform_check
from .schemas import validate_problem
from .semigroup import validate as validate_semigroup

__all__ = ["Settings", "Outcome", "run_problem", "build_report"]


@dataclass
class Settings:
    tol: Tolerance = field(default_factory=Tolerance)
    seed: int = 0
    trials: int = 20


@dataclass
class Outcome:
    passed: bool
    results: dict
    summary: list[str]


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def _ok(flag: bool) -> str:
    return "ok" if flag else "FAIL"


def _run_framing(payload: dict, s: Settings) -> Outcome:
    fr = ser.framing_from_json(payload["framing"], "payload.framing")
    fmax = compute_fmax(fr, s.tol)
    F = (ser.subspace_from_json(payload["F"], "payload.F", s.tol)
         if "F" in payload else fmax)
    recon = verify_reconstruction(fr, F, trials=s.trials, tol=s.tol, seed=s.seed)
    span_h = Subspace.span(fr.h.T, s.tol)
    span_dist = span_h.distance(fmax.basis) if fmax.rank else 0.0
    span_ok = span_dist <= s.tol.scaled(1.0)
    passed = fmax.rank > 0 and recon.passed and span_ok
    results = {
        "dim": fr.dim,
        "size": fr.size,
        "synthesis_operator": synthesis_operator(fr),
        "fmax": fmax,
        "fmax_rank": fmax.rank,
        "fmax_full": fmax.rank == fr.dim,
        "fmax_distance_to_span_h": span_dist,
        "F_rank": F.rank,
        "reconstruction": recon,
    }
    summary = [
        f"F_max: dimension {fmax.rank} of {fr.dim}"
        + (" (full space)" if fmax.rank == fr.dim else ""),
        f"F_max inside span(h): {_ok(span_ok)} (distance {_fmt(span_dist)})",
        f"reconstruction on F (dim {F.rank}): {_ok(recon.passed)} "
        f"(terminal error {_fmt(recon.terminal_error)}, "
        f"max partial norm {recon.max_partial_norm:.4g} <= {recon.partial_sum_bound:.4g})",
    ]
    if fmax.rank == 0:
        summary.append("F_max is zero: not a framing for any nonzero vector")
    return Outcome(passed, results, summary)


def _generator_pair(payload: dict, fr, s: Settings):
    A = ser.cmat_from_json(payload["A"], "payload.A")
    B = ser.cmat_from_json(payload["B"], "payload.B")
    if A.shape != (fr.dim, fr.dim) or B.shape != (fr.dim, fr.dim):
        raise InputError(f"payload.A/B: expected {fr.dim}x{fr.dim} matrices")
    if "F" in payload:
        F = ser.subspace_from_json(payload["F"], "payload.F", s.tol)
        source = "given"
    else:
        F = largest_generator_subspace(fr, A, B, s.tol)
        source = "largest valid subspace"
    return A, B, F, source


def _run_generator(payload: dict, s: Settings) -> Outcome:
    fr = ser.framing_from_json(payload["framing"], "payload.framing")
    A, B, F, source = _generator_pair(payload, fr, s)
    results: dict = {"F_source": source, "F": F, "F_rank": F.rank}
    try:
        gp = check_generator_pair(fr, A, B, F, s.tol)
    except (Condition1Violation, Condition2Violation, ZeroF) as exc:
        results["hypothesis_error"] = f"{type(exc).__name__}: {exc}"
        return Outcome(False, results, [f"generator hypotheses fail: {exc}"])
    new, gen = generate_framing(gp, fr, s.tol, trials=s.trials, seed=s.seed)
    results.update(
        condition1_residual=gp.condition1_residual,
        condition2_distance=gp.condition2_distance,
        generated=new,
        generation=gen,
    )
    summary = [
        f"F ({source}): dimension {F.rank} of {fr.dim}",
        f"B A* = I on F: residual {_fmt(gp.condition1_residual)}; "
        f"A* F in F_max: distance {_fmt(gp.condition2_distance)}",
        f"generated framing frames F: {_ok(gen.passed)} "
        f"(containment {_fmt(gen.containment_residual)}, "
        f"terminal error {_fmt(gen.reconstruction.terminal_error)})",
    ]
    if payload.get("dual"):
        dual, drep = dual_framing(gp, fr, s.tol, trials=s.trials, seed=s.seed)
        results["dual"] = drep
        if dual is not None:
            results["dual_framing"] = dual
        summary.append(f"dual framing: {'valid' if drep.valid else 'invalid'} "
                       f"on a subspace of dimension {drep.f_rank} ({drep.reason})")
    return Outcome(gen.passed, results, summary)


def _run_ovm(payload: dict, s: Settings) -> Outcome:
    fr = ser.framing_from_json(payload["framing"], "payload.framing")
    m = FramingOVM(fr)
    total = ovm_total_check(m, s.tol)
    results: dict = {"total": total}
    summary = [f"F(all) = I on F_max: {_ok(total.passed)} "
               f"(residual {_fmt(total.residual)}, scope {total.scope})"]
    passed = total.passed
    if "A" in payload:
        A, B, F, source = _generator_pair(payload, fr, s)
        try:
            gp = check_generator_pair(fr, A, B, F, s.tol)
        except (Condition1Violation, Condition2Violation, ZeroF) as exc:
            results["hypothesis_error"] = f"{type(exc).__name__}: {exc}"
            summary.append(f"generator hypotheses fail: {exc}")
            passed = False
        else:
            tr = ovm_transform_check(m, gp, s.tol, seed=s.seed)
            results["transform"] = tr
            results["F"] = F
            summary.append(f"F_AB(sigma) = B F(sigma) A* on F: {_ok(tr.passed)} "
                           f"({tr.subsets_checked} subsets, max residual {_fmt(tr.max_residual)})")
            passed = passed and tr.passed
    if payload.get("naimark"):
        conv = framing_to_povm(m, s.tol)
        results["povm"] = {
            "accepted": conv.accepted,
            "reason": conv.reason,
            "failing_atom": conv.failing_atom,
            "total_defect": conv.total_defect,
        }
        if not conv.accepted:
            summary.append(f"measure is not a POVM: {conv.reason}")
            passed = False
        else:
            sub = _naimark_outcome(conv.povm, s)
            results["naimark"] = sub.results
            summary.extend(sub.summary)
            passed = passed and sub.passed
    return Outcome(passed, results, summary)


def _run_dilation(payload: dict, s: Settings) -> Outcome:
    om = ser.operator_map_from_json(payload)
    violations = validate_semigroup(om.sg)
    if violations:
        raise InputError("payload.semigroup: not a *-semigroup with unit: "
                         + "; ".join(violations[:5]))
    pd = check_positive_definite(om, s.tol)
    results: dict = {"positive_definite": pd}
    summary = [f"positive definite: {_ok(pd.positive_definite)} "
               f"(min Gram eigenvalue {pd.min_eigenvalue:.6g})"]
    if not pd.positive_definite:
        return Outcome(False, results, summary)
    try:
        dil = build_dilation(om, s.tol)
    except QuotientLeak as exc:
        results["quotient_leak"] = str(exc)
        summary.append(str(exc))
        return Outcome(False, results, summary)
    rep = verify_dilation(dil, om, s.tol)
    ctab = boundedness_table(dil, om, s.tol)
    norms2 = [float(np.linalg.norm(P, 2) ** 2) if dil.rank else 0.0 for P in dil.Phi]
    results.update(
        rank=dil.rank,
        verification=rep,
        c_table={om.sg.label(u): c for u, c in enumerate(ctab)},
        phi_norm_squared={om.sg.label(u): v for u, v in enumerate(norms2)},
        T=dil.T,
        S=dil.Sop,
    )
    summary.append(f"dilation space dimension: {dil.rank}")
    summary += [f"{name}: {_ok(c.passed)} (residual {_fmt(c.residual)})"
                for name, c in rep.checks.items()]
    bounded = all(c is not None for c in ctab)
    summary.append(f"condition (alpha) for every element: {_ok(bounded)}")
    return Outcome(rep.passed and bounded, results, summary)


def _naimark_outcome(p, s: Settings) -> Outcome:
    try:
        pd = naimark_dilate(p, s.tol)
    except PositivityBroken as exc:
        return Outcome(False, {"positivity_broken": str(exc)}, [str(exc)])
    rep = verify_pvm(pd, s.tol)
    cert = pd.certificate
    results = {
        "k_dim": cert.k_dim,
        "atoms": p.m,
        "dimE": p.dim_e,
        "normalized": cert.normalized,
        "defect_norm": cert.defect_norm,
        "certificate": cert,
        "pvm": rep,
        "V": pd.V,
    }
    summary = [
        f"dilation space K: dimension {cert.k_dim} (atom projection ranks {rep.atom_ranks})",
        f"phi(sigma) = V* Phi(sigma) V: {_ok(cert.compression.passed)} "
        f"(residual {_fmt(cert.compression.residual)})",
        f"|V| = {cert.v_norm:.6g} <= sqrt(c) = {np.sqrt(max(cert.c_total, 0)):.6g}: "
        f"{_ok(cert.v_bound.passed)}",
    ]
    if cert.normalized:
        summary.append(f"V isometric: {_ok(cert.isometry.passed)} "
                       f"(residual {_fmt(cert.isometry.residual)})")
    else:
        summary.append(f"not normalized: |I - sum E| = {cert.defect_norm:.6g}")
    summary += [f"{name}: {_ok(c.passed)} (residual {_fmt(c.residual)})"
                for name, c in rep.checks.items()]
    return Outcome(cert.passed and rep.passed, results, summary)


def _run_naimark(payload: dict, s: Settings) -> Outcome:
    return _naimark_outcome(ser.povm_from_json(payload, s.tol), s)


_RUNNERS = {
    "framing": _run_framing,
    "generator": _run_generator,
    "ovm": _run_ovm,
    "dilation": _run_dilation,
    "naimark": _run_naimark,
}


def settings_for(problem: dict, tol_rel=None, tol_abs=None, seed=None, trials=None) -> Settings:
    """Command-line values override the problem file, which overrides defaults."""
    base = Tolerance()
    file_tol = problem.get("tolerance", {})
    tol = Tolerance(
        rel=tol_rel if tol_rel is not None else file_tol.get("rel", base.rel),
        abs=tol_abs if tol_abs is not None else file_tol.get("abs", base.abs),
    )
    return Settings(
        tol=tol,
        seed=seed if seed is not None else problem.get("seed", 0),
        trials=trials if trials is not None else problem.get("trials", 20),
    )


def run_problem(problem: dict, settings: Settings) -> Outcome:
    """Validate and run one problem.  Raises ``InputError`` on bad input."""
    validate_problem(problem)
    if settings.trials < 1:
        raise InputError("trials must be at least 1")
    try:
        return _RUNNERS[problem["kind"]](problem["payload"], settings)
    except KeyError as exc:  # pragma: no cover - schema guarantees keys
        raise InputError(f"missing field {exc}") from exc


def build_report(command: str, kind: str, outcome: Outcome, settings: Settings) -> dict:
    return {
        "report_version": 1,
        "command": command,
        "kind": kind,
        "passed": bool(outcome.passed),
        "exit_code": 0 if outcome.passed else 1,
        "tolerance": settings.tol.to_json(),
        "seed": settings.seed,
        "trials": settings.trials,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "summary": list(outcome.summary),
        "results": ser.encode(outcome.results),
    }
