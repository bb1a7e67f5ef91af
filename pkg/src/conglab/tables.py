"""JSON form of eigenvalue tables.

A table is an object with fields ``prime``, ``precision``, ``ext_modulus``
(null or a list of coefficients, constant term first), ``generators``
(labels), ``systems`` (a list of ``{"label", "values"}``) and
``distinguished``.  Integers are written as decimal strings so that p-adic
residues of any size survive the round trip; a value over an extension is
a list of power-basis coordinates.
"""

from __future__ import annotations

import json
from pathlib import Path

from .congruence import EigenTable
from .errors import SchemaError

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "table_from_dict", "table_to_dict", "load_table", "dump_table"]


def _int(x, what: str) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"{what}: expected a decimal integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise SchemaError(f"{what}: expected a decimal integer, got {x!r}")


def _value(x, what: str) -> tuple[int, ...]:
    if isinstance(x, list):
        if not x:
            raise SchemaError(f"{what}: empty coefficient array")
        return tuple(_int(c, what) for c in x)
    return (_int(x, what),)


def table_from_dict(data: dict, ext_modulus=None) -> EigenTable:
    """Validate a decoded JSON table; ``ext_modulus`` overrides the one in the file."""
    if not isinstance(data, dict):
        raise SchemaError("table must be a JSON object")
    missing = [k for k in ("prime", "precision", "generators", "systems", "distinguished") if k not in data]
    if missing:
        raise SchemaError("missing fields: " + ", ".join(missing))
    version = data.get("schema_version", SCHEMA_VERSION)
    if _int(version, "schema_version") > SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}")
    p = _int(data["prime"], "prime")
    K = _int(data["precision"], "precision")
    if p < 2 or K < 1:
        raise SchemaError("prime must be >= 2 and precision >= 1")
    gens = data["generators"]
    if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
        raise SchemaError("generators must be a non-empty list of labels")
    mod = ext_modulus if ext_modulus is not None else data.get("ext_modulus")
    if mod is not None:
        if not isinstance(mod, (list, tuple)) or len(mod) < 2:
            raise SchemaError("ext_modulus must be a coefficient list of length >= 2")
        mod = tuple(_int(c, "ext_modulus") for c in mod)
    systems = data["systems"]
    if not isinstance(systems, list) or not systems:
        raise SchemaError("systems must be a non-empty list")
    parsed = []
    for k, sysobj in enumerate(systems):
        if not isinstance(sysobj, dict) or "label" not in sysobj or "values" not in sysobj:
            raise SchemaError(f"systems[{k}] must have label and values")
        label = sysobj["label"]
        if not isinstance(label, str):
            raise SchemaError(f"systems[{k}].label must be a string")
        vals = sysobj["values"]
        if not isinstance(vals, list):
            raise SchemaError(f"systems[{k}].values must be a list")
        parsed.append((label, [_value(v, f"{label} value") for v in vals]))
    if not isinstance(data["distinguished"], str):
        raise SchemaError("distinguished must be a label")
    try:
        table = EigenTable(p, K, list(gens), parsed, data["distinguished"], mod)
        table.ring
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return table


def table_to_dict(table: EigenTable) -> dict:
    def enc(v):
        v = tuple(v)
        return str(v[0]) if table.ext_modulus is None else [str(c) for c in v]

    return {
        "schema_version": SCHEMA_VERSION,
        "prime": str(table.prime),
        "precision": str(table.precision),
        "ext_modulus": None if table.ext_modulus is None else [str(c) for c in table.ext_modulus],
        "generators": list(table.generators),
        "systems": [{"label": lab, "values": [enc(v) for v in vals]} for lab, vals in table.systems],
        "distinguished": table.distinguished,
    }


def load_table(path, ext_modulus=None) -> EigenTable:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return table_from_dict(data, ext_modulus)


def dump_table(table_or_dict, path) -> None:
    data = table_or_dict if isinstance(table_or_dict, dict) else table_to_dict(table_or_dict)
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
