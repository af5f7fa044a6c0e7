"""Majorization and submajorization verdicts with partial-sum certificates."""

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import DomainViolation, NotInMasa
from .tolerances import DEFAULT
from .tracial import _same_ctx, as_operator, eigenvalues
from .validation import check_same_length, check_vector


class Mode(str, enum.Enum):
    MAJORIZE = "majorize"
    SUBMAJORIZE = "submajorize"


@dataclass(frozen=True, eq=False)
class MajorizationVerdict:
    """Outcome of comparing ``a`` against ``b``.

    ``margins[k]`` is the partial integral (or sum) of ``b`` minus that of
    ``a`` up to cell ``k + 1``; the last margin equals ``trace_gap``.
    """

    holds: bool
    margins: np.ndarray = field(repr=False)
    trace_gap: float
    mode: Mode
    tol: float
    in_masa: bool | None = None

    @property
    def worst_margin(self):
        return float(np.min(self.margins))

    @property
    def status(self):
        """``"HOLDS"``, ``"FAILS"`` or ``"MARGINAL"`` (holds, worst margin within tol of 0).

        Under MAJORIZE the final margin is the trace gap, which is zero for
        every holding pair, so only the interior margins are inspected.
        """
        if not self.holds:
            return "FAILS"
        inner = self.margins[:-1] if self.mode is Mode.MAJORIZE else self.margins
        if inner.size and abs(float(np.min(inner))) <= self.tol:
            return "MARGINAL"
        return "HOLDS"

    def to_dict(self, include_margins=False):
        out = {
            "holds": bool(self.holds),
            "status": self.status,
            "mode": self.mode.value,
            "worst_margin": self.worst_margin,
            "trace_gap": float(self.trace_gap),
        }
        if self.in_masa is not None:
            out["in_masa"] = bool(self.in_masa)
        if include_margins:
            out["margins"] = [float(m) for m in self.margins]
        return out


def _verdict(alpha, beta, mode, tol):
    alpha = np.sort(alpha)[::-1]
    beta = np.sort(beta)[::-1]
    margins = np.cumsum(beta) - np.cumsum(alpha)
    trace_gap = float(np.sum(beta) - np.sum(alpha))
    margins[-1] = trace_gap
    tol_value = tol.maj_tol(alpha.size, float(np.max(np.abs(beta))))
    holds = bool(np.all(margins >= -tol_value))
    if mode is Mode.MAJORIZE:
        holds = holds and abs(trace_gap) <= tol_value
    return MajorizationVerdict(holds, margins, trace_gap, mode, tol_value)


def check_vector_majorization(alpha, beta, mode=Mode.MAJORIZE, tol=DEFAULT):
    """Decide ``alpha < beta`` (or ``alpha <_w beta``) by partial sums."""
    alpha = check_vector(alpha, "alpha")
    beta = check_vector(beta, "beta")
    check_same_length(alpha, beta)
    return _verdict(alpha, beta, Mode(mode), tol)


def check_operator_majorization(a, b, mode=Mode.MAJORIZE, tol=DEFAULT):
    """Decide ``a < b`` through the spectral scales.

    The decision is that of :func:`check_vector_majorization` on the
    eigenvalues; margins and trace gap are reported as normalized integrals.
    Checking at the breakpoints ``k / N`` suffices because both partial
    integrals are piecewise linear between them.
    """
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    _same_ctx(a, b)
    v = _verdict(eigenvalues(a, tol), eigenvalues(b, tol), Mode(mode), tol)
    n = a.dim
    return replace(v, margins=v.margins / n, trace_gap=v.trace_gap / n, tol=v.tol / n)


def omega_membership(a, b, tol=DEFAULT):
    """Membership of a diagonal ``a`` in the set of masa elements majorized by ``b``."""
    a = as_operator(a, tol)
    off = a.entries - np.diag(np.diag(a.entries))
    off_mass = float(np.max(np.abs(off))) if a.dim > 1 else 0.0
    if off_mass > 1e3 * tol.herm_tol(a.max_abs):
        raise NotInMasa(f"operator has off-diagonal mass {off_mass:.3e}")
    verdict = check_operator_majorization(a, b, Mode.MAJORIZE, tol)
    return replace(verdict, in_masa=off_mass == 0.0)


@dataclass(frozen=True)
class BankFunction:
    """A convex function for the trace-inequality probe.

    ``domain`` is an open interval ``(lo, hi)``; ``increasing`` marks the
    functions admissible for submajorization.
    """

    name: str
    func: object
    increasing: bool = False
    domain: tuple = (-math.inf, math.inf)


def default_function_bank(spectrum):
    """Hinges over a 9-point grid of the spectral range plus smooth convex functions."""
    lo, hi = float(np.min(spectrum)), float(np.max(spectrum))
    bank = [
        BankFunction("abs", np.abs),
        BankFunction("square", np.square),
        BankFunction("exp", np.exp, increasing=True),
    ]
    for c in np.linspace(lo, hi, 9):
        c = float(c)
        bank.append(BankFunction(f"hinge({c:.6g})", lambda x, c=c: np.maximum(x - c, 0.0), increasing=True))
    if lo > 0:
        bank.append(BankFunction("neg_log", lambda x: -np.log(x), domain=(0.0, math.inf)))
    return bank


def convex_criterion_probe(a, b, function_bank=None, mode=Mode.MAJORIZE, tol=DEFAULT):
    """Compare ``tau(f(a))`` with ``tau(f(b))`` over a bank of convex functions.

    Returns a dict with the majorization verdict and, per function, the slack
    ``tau(f(a)) - tau(f(b))``.  When the verdict holds every slack must be at
    most the tolerance (``consistent``).  When it fails a witness is
    reported if one is found; a finite bank need not contain one.
    """
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    _same_ctx(a, b)
    mode = Mode(mode)
    ea, eb = eigenvalues(a, tol), eigenvalues(b, tol)
    if function_bank is None:
        function_bank = default_function_bank(np.concatenate([ea, eb]))
    verdict = _verdict(ea, eb, mode, tol)
    limit = verdict.tol
    entries = []
    for fn in function_bank:
        if mode is Mode.SUBMAJORIZE and not fn.increasing:
            continue
        lo, hi = fn.domain
        for spec in (ea, eb):
            if np.min(spec) <= lo or np.max(spec) >= hi:
                raise DomainViolation(f"spectrum leaves the domain of {fn.name}")
        slack = float(np.mean(fn.func(ea)) - np.mean(fn.func(eb)))
        entries.append({"name": fn.name, "slack": slack, "witness": slack > limit})
    witnesses = [e["name"] for e in entries if e["witness"]]
    return {
        "verdict": verdict,
        "tol": limit,
        "entries": entries,
        "witnesses": witnesses,
        "consistent": (not verdict.holds) or not witnesses,
    }
