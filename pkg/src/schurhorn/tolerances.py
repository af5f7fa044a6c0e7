"""Numerical tolerances and the ``MJ_TOL_OVERRIDE`` environment hook."""

import os
from dataclasses import dataclass, replace

ENV_VAR = "MJ_TOL_OVERRIDE"


@dataclass(frozen=True)
class Tolerances:
    """Base tolerances.

    ``maj`` is the floor of the partial-sum slack, ``horn`` the per-entry
    coefficient of the Horn residual budget.
    """

    eig: float = 1e-10
    maj: float = 1e-10
    horn: float = 1e-10

    def herm_tol(self, max_abs):
        return 1e-12 * max(1.0, max_abs)

    def maj_tol(self, n, scale_sup):
        return max(self.maj, 1e-12 * n * scale_sup)

    def horn_tol(self, n, beta_sup):
        return self.horn * max(1.0, beta_sup) * n


DEFAULT = Tolerances()


def parse_override(text, base=DEFAULT):
    """Parse ``"maj=1e-9,eig=1e-11"`` into a :class:`Tolerances`."""
    if not text or not text.strip():
        return base
    fields = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in ("maj", "eig", "horn"):
            raise ValueError(f"bad tolerance override item: {item!r}")
        fields[key] = float(value)
    return replace(base, **fields)


def from_environment():
    return parse_override(os.environ.get(ENV_VAR, ""))
