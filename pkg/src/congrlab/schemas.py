"""JSON schemas for every CLI report."""
from __future__ import annotations

import jsonschema

_INT = {"type": "integer"}
_NUM = {"type": "number"}
_BOOL = {"type": "boolean"}
_STR = {"type": "string"}
_FACTORS = {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}}


def _obj(props: dict, required=None, extra: bool = True) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
        "additionalProperties": extra,
    }


CERTIFICATE = _obj(
    {
        "lhs": _STR,
        "rhs": _STR,
        "modulus": {"type": "object", "required": ["kind"]},
        "checked_bound": _INT,
        "sturm_bound": {"type": ["integer", "null"]},
        "verdict": {"enum": ["holds", "fails"]},
        "first_failure": {"type": ["integer", "null"]},
        "details": {"type": "object"},
        "theorem_level": _BOOL,
    }
)

ERROR = _obj({"error": _obj({"type": _STR, "message": _STR})})

SCHEMAS = {
    "moduli": _obj({"k": _INT, "p": _INT, "eps": _INT, "N": _INT, "N_factors": _FACTORS, "M": _INT, "M_factors": _FACTORS}),
    "hypotheses": _obj({"reports": {"type": "array", "items": _obj({"theorem": _STR, "conditions": {"type": "array"}, "overall": _BOOL})}}),
    "construct": _obj({"certificate": CERTIFICATE, "series": {"type": "object"}}),
    "verify": CERTIFICATE,
    "verify-nf": _obj({"ell": _INT, "factors": {"type": "array", "items": CERTIFICATE}, "any_holds": _BOOL}),
    "up-eigen": CERTIFICATE,
    "sieve": _obj(
        {
            "ell": _INT,
            "m": _INT,
            "h1": _INT,
            "fitted_C": _NUM,
            "rows": {
                "type": "array",
                "items": _obj(
                    {
                        "x": _INT,
                        "count": _INT,
                        "landau": _NUM,
                        "ramanujan": _NUM,
                        "second_order": {"type": ["number", "null"]},
                        "fitted_C": _NUM,
                    }
                ),
            },
        }
    ),
    "euler-factor": _obj({"p1": _INT, "r": _INT, "ell": _INT, "mu": _INT, "indicator": {"type": "array", "items": {"enum": [0, 1]}}}),
    "gamma-delta": _obj(
        {"p": _INT, "ell": _INT, "mu": _NUM, "delta_with_log": _NUM, "delta_without_log": _NUM, "readings_differ": _BOOL},
        required=["p", "ell", "mu", "delta_with_log", "delta_without_log", "readings_differ"],
    ),
    "rho": _obj({"u": _NUM, "rho": _NUM}),
    "psi": _obj({"x": _INT, "y": _INT, "psi": _INT, "ratio": _NUM}),
    "shifted": _obj(
        {"x": _INT, "s": _INT, "u": _NUM, "hits": _INT, "total": _INT, "density": _NUM, "conjectural_density": _NUM, "unconditional_floor": _NUM}
    ),
    "degree-bound": _obj({"k": _INT, "p": _INT, "dk_lower_bound": {"type": ["number", "null"]}, "dknew_lower_bound": {"type": ["number", "null"]}}),
    "special-primes": _obj({"bound": _INT, "primes": {"type": "array", "items": _INT}}),
    "evertse": _obj({"X": _INT, "x": _INT, "count": _INT, "bound": _INT, "ok": _BOOL}),
}


def validate(command: str, doc: dict) -> None:
    """Raise jsonschema.ValidationError if ``doc`` does not fit the command's schema."""
    if "error" in doc:
        jsonschema.validate(doc, ERROR)
    else:
        jsonschema.validate(doc, SCHEMAS[command])
