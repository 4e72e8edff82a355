"""End-to-end solve: bootstrap the (1, ..., 1) plane, walk to the target, certify."""

from dataclasses import dataclass, field

from .certificates import (
    Certificate,
    InternalError,
    colorful_to_partition,
    convert_walk_outcome,
    fallback_certificate,
    g1_certificate,
    gv1_certificate,
    verify_certificate,
)
from .instance import ColorFrame, Instance
from .oracle import BudgetExceeded, enumerate_cuts
from .reduction import LineProcedures, bootstrap_H0, first_partner, split_tuple, walk_line
from .rotation import plane_through


@dataclass
class SolveResult:
    certificate: Certificate
    trace: list = field(default_factory=list)
    outcome: object = None
    bootstrap: object = None
    proc: object = None  # forward line procedures, when a forward walk ran


def _cut_or_gv1(inst: Instance, refs, seed):
    """G1 for a verified cut; GV1 instead when its plane holds extra points."""
    h = plane_through(inst, refs)
    if len(h.incident) > inst.d:
        cert = gv1_certificate(inst, h.incident, "cut plane holds more than d points")
        if cert is not None:
            return cert
    cert = g1_certificate(inst, refs, inst.alpha)
    ok, why = verify_certificate(cert, inst)
    if not ok:
        raise InternalError(f"solver produced an invalid cut: {why}")
    return cert


def _solve_line(inst: Instance, seed):
    """d = 1: the cut is a single point, found by direct enumeration."""
    cert = fallback_certificate(inst, seed)
    if cert is not None:
        return cert
    refs = enumerate_cuts(inst).by_alpha(inst.alpha)
    if not refs:
        raise InternalError("no cut on a duplicate-free line")
    return _cut_or_gv1(inst, refs[0], seed)


def _check_budget(outcome, budget):
    if outcome is not None and outcome.kind == "UV1" and outcome.reason == "step budget exceeded":
        raise BudgetExceeded("the walk", f"more than {budget}", budget, unit="steps")


def solve(inst: Instance, seed=0, budget=None, trace=False) -> SolveResult:
    """Certificate for the instance's own target α-vector.

    Raises BudgetExceeded when an explicit step budget stops a walk early.
    """
    d = inst.d
    if d == 1:
        return SolveResult(_solve_line(inst, seed))
    work = inst.integral()
    boot = bootstrap_H0(work.with_alpha((1,) * d), budget, trace)
    records = list(boot.outcome.trace) if boot.outcome is not None else []
    if boot.seed is not None:
        cert = None
        if boot.seed.kind == "rank":
            pts = [inst.point(r) for r in boot.seed.refs]
            cert = colorful_to_partition(inst, pts, seed, reason="every colorful tuple is rank deficient")
        if cert is None:
            cert = fallback_certificate(inst, seed, reason=boot.seed.message)
        if cert is None:
            raise InternalError("bootstrap failed on a clean instance")
        return SolveResult(cert, records, None, boot)
    if boot.h0 is None:
        _check_budget(boot.outcome, budget)
        cert = convert_walk_outcome(boot.outcome, boot.proc, inst, boot.frame, seed)
        return SolveResult(cert, records, boot.outcome, boot)
    target = inst.alpha
    if target == (1,) * d:
        return SolveResult(_cut_or_gv1(inst, boot.h0, seed), records, None, boot)

    frame = ColorFrame.leading_non_unit(work, target)
    w_inst = frame.working
    h0 = tuple(sorted(frame.to_working(r) for r in boot.h0))
    anchor, p0 = split_tuple(h0, 1)
    q0 = first_partner(w_inst, anchor, p0)
    if q0 is None:
        cert = fallback_certificate(inst, seed, reason="no wedge below the (1, ..., 1) plane")
        if cert is None:
            raise InternalError("no start wedge on a clean instance")
        return SolveResult(cert, records, None, boot)
    proc = LineProcedures(w_inst, frame.alpha_to_working(target), (anchor, p0, q0))
    outcome = walk_line(proc, budget, trace, phase="forward", frame=frame)
    records.extend(outcome.trace)
    _check_budget(outcome, budget)
    cert = convert_walk_outcome(outcome, proc, inst, frame, seed)
    if cert.kind == "G1":
        cert = _cut_or_gv1(inst, cert.refs, seed)
    return SolveResult(cert, records, outcome, boot, proc)
