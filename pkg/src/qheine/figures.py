"""Bundled boundary-curve presets.

Five preset configurations exercise the main map families: a classical
Gauss ratio, the three shifted Heine ratios at parameter sets satisfying
their respective mapping hypotheses, and the degenerate Gauss ratio
z F(0,2;c;z)/F(-1,2;c;z) whose image approaches the unit circle for
large c.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .geomtest import CurveMap, map_gauss_ratio, map_shift_a, map_shift_all, map_shift_bc
from .qcore import ParamSet

DEFAULT_FIGURE_SAMPLES = 4096


@dataclass(frozen=True)
class FigurePreset:
    number: int
    curve_map: CurveMap
    r: float
    meta: dict


def figure_preset(number: int, c_override: Optional[float] = None) -> FigurePreset:
    """Preset number 1..5; preset 5 takes an optional c override."""
    if number == 1:
        a, b, c = 0.0, 0.0199, 0.1
        return FigurePreset(1, map_gauss_ratio(a, b, c), 0.999,
                            {"map": "gauss_ratio", "a": a, "b": b, "c": c})
    if number == 2:
        p = ParamSet(0.9, 0.7, 0.6, 0.8)
        return FigurePreset(2, map_shift_bc(p), 0.998,
                            {"map": "shift_bc", "a": p.a, "b": p.b, "c": p.c, "q": p.q})
    if number == 3:
        p = ParamSet(0.99, 0.998, 0.98, 0.9)
        return FigurePreset(3, map_shift_a(p), 0.999,
                            {"map": "shift_a", "a": p.a, "b": p.b, "c": p.c, "q": p.q})
    if number == 4:
        p = ParamSet(0.99, 0.998, 0.98, 0.9)
        return FigurePreset(4, map_shift_all(p), 0.999,
                            {"map": "shift_all", "a": p.a, "b": p.b, "c": p.c, "q": p.q})
    if number == 5:
        c = 50.0 if c_override is None else float(c_override)
        return FigurePreset(5, map_gauss_ratio(-1.0, 2.0, c), 0.999,
                            {"map": "gauss_ratio", "a": -1.0, "b": 2.0, "c": c})
    raise DomainError(f"figure number must be 1..5, got {number}")
