"""Numerical tolerances shared by every module.

All tuning knobs live in one record so that the oracle suite and the
command line can override them from a single JSON file.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

CONFIG_ENV_VAR = "RIESZSPHERE_CONFIG"

# Default tolerance for every acceptance criterion, keyed by criterion id.
ACCEPTANCE_DEFAULTS: dict[str, float] = {
    "golden_ratio": 1e-10,
    "plastic_constant": 1e-9,
    "interior_harmonic": 1e-12,
    "potential_quadrature": 1e-8,
    "special_closed_forms": 1e-10,
    "superharmonic_minimizer": 1e-6,
    "cap_nu_norm": 1e-9,
    "cap_mass": 1e-8,
    "cap_constancy": 1e-6,
    "cap_exponents": 1e-2,
    "poly_roots": 1e-12,
    "force_residual": 1e-8,
    "asymptotic_constant": 10.0,
    "log_limit": 1e-4,
    "log_critical": 1e-10,
}


@dataclass(frozen=True)
class Tolerances:
    series_rtol: float = 1e-14
    series_max_terms: int = 100_000
    quad_rtol: float = 1e-10
    quad_atol: float = 1e-13
    quad_limit: int = 400
    root_xtol: float = 1e-13
    branch_eps: float = 1e-12
    degenerate_rtol: float = 1e-10
    log_series_max_terms: int = 1_000_000
    z_switch: float = 0.5
    acceptance: dict[str, float] = field(default_factory=lambda: dict(ACCEPTANCE_DEFAULTS))

    def acceptance_tol(self, key: str) -> float:
        return self.acceptance.get(key, ACCEPTANCE_DEFAULTS[key])

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)


DEFAULT = Tolerances()
_active = DEFAULT


def get() -> Tolerances:
    """Return the active tolerance record."""
    return _active


def set_active(tol: Tolerances) -> None:
    global _active
    _active = tol


def from_mapping(data: dict) -> Tolerances:
    """Build a record from a (possibly partial) mapping of overrides.

    A scalar ``acceptance_tolerance`` entry overrides every acceptance
    criterion at once; an ``acceptance`` mapping overrides individual ones.
    """
    data = dict(data)
    names = {f.name for f in dataclasses.fields(Tolerances)}
    acc = dict(ACCEPTANCE_DEFAULTS)
    blanket = data.pop("acceptance_tolerance", None)
    if blanket is not None:
        acc = {k: float(blanket) for k in acc}
    for k, v in (data.pop("acceptance", None) or {}).items():
        if k not in ACCEPTANCE_DEFAULTS:
            raise KeyError(f"unknown acceptance criterion {k!r}")
        acc[k] = float(v)
    unknown = set(data) - names
    if unknown:
        raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
    return Tolerances(**data, acceptance=acc)


def load(path: str | os.PathLike | None = None) -> Tolerances:
    """Load overrides from ``path`` or from ``$RIESZSPHERE_CONFIG``.

    Returns the defaults when neither is given.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return DEFAULT
    with open(Path(path), encoding="utf-8") as fh:
        return from_mapping(json.load(fh))
