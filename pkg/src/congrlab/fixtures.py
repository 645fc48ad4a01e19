"""Newform fixtures and tabulated constants.

Fixture files are JSON objects::

    {"label": str, "k": int, "p": int, "al_sign": +1 | -1,
     "minpoly": [c0, c1, ..., 1],          # ascending, monic
     "coeffs": [[c_0, c_1, ...] per n for n = 1..N]}

where each coefficient of a(n) is a rational string ``"num/den"`` and
a(n) = c_0 + c_1 a + ... for a root a of minpoly. A degree-1 minpoly yields
a series over Q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import BadParameters
from .qseries import QQ, NumberFieldRing, QSeries

SHIPPED = ("ex1", "ex1_plus", "ex2", "ex4")

# Euler-Kronecker constants gamma_{tau;ell}, read-only.
GAMMA_TAU = {
    3: 0.534921,
    5: 0.399547,
    7: 0.231640,
    23: 0.216691,
    691: 0.571714,
}
# gamma_{sigma_5;37} as quoted for the weight 6, level 11 example.
GAMMA_1_37 = 0.47464


@dataclass(frozen=True)
class Newform:
    label: str
    k: int
    p: int
    al_sign: int
    series: QSeries
    raw: dict

    @property
    def last_index(self) -> int:
        return self.series.prec - 1


def _read(name_or_path: Union[str, Path]) -> dict:
    path = Path(name_or_path)
    if path.exists():
        return json.loads(path.read_text())
    stem = path.stem if path.suffix == ".json" else str(name_or_path)
    if stem not in SHIPPED:
        raise BadParameters(f"no fixture named {name_or_path!r}")
    return json.loads(resources.files("congrlab.data").joinpath(f"{stem}.json").read_text())


def parse_fixture(obj: dict) -> Newform:
    for key in ("label", "k", "p", "al_sign", "minpoly", "coeffs"):
        if key not in obj:
            raise BadParameters(f"fixture lacks {key!r}")
    minpoly = [int(c) for c in obj["minpoly"]]
    deg = len(minpoly) - 1
    rows = obj["coeffs"]
    if any(len(r) != deg for r in rows):
        raise BadParameters("every coefficient must have deg(minpoly) entries")
    if deg == 1:
        ring = QQ
        coeffs = [Fraction(0)] + [Fraction(r[0]) for r in rows]
    else:
        ring = NumberFieldRing(minpoly)
        field = ring.field
        coeffs = [field.zero()] + [field([Fraction(c) for c in r]) for r in rows]
    series = QSeries(coeffs, ring, weight=int(obj["k"]))
    return Newform(obj["label"], int(obj["k"]), int(obj["p"]), int(obj["al_sign"]), series, obj)


def load_fixture(name_or_path: Union[str, Path]) -> Newform:
    """Load a shipped fixture by name (``ex1``, ``ex2``, ...) or any JSON path."""
    return parse_fixture(_read(name_or_path))
