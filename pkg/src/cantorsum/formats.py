"""Reading IFS description files and writing reports.

An IFS file is UTF-8 JSON::

    {"lambda_system": {"maps": [{"o": 1, "r": "1/3", "b": "0"}, ...]},
     "gamma_system":  {"maps": [...]},
     "eta": "1"}

Numbers are strings, decimal or rational, and are read exactly.
"""

from __future__ import annotations

import csv
import io
import json
import json.decoder
import json.scanner
from fractions import Fraction
from typing import Any, Iterable

from ._exact import to_fraction
from .errors import CantorSumError, ParseError
from .ifs import AffineCantorSystem, ContractionMap, SumSystem, validate_system
from .squares import WitnessPair, make_square, make_witness


class _Obj(dict):
    """A JSON object that remembers the line it starts on."""

    line: int = 0


def _decoder(text: str) -> json.JSONDecoder:
    dec = json.JSONDecoder()

    def parse_object(s_and_end, *args):
        s, end = s_and_end
        obj, new_end = json.decoder.JSONObject(s_and_end, *args)
        out = _Obj(obj)
        out.line = text.count("\n", 0, end) + 1
        return out, new_end

    dec.parse_object = parse_object
    dec.scan_once = json.scanner.py_make_scanner(dec)
    return dec


def _number(value, field: str, line: int) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError("expected a decimal or rational string", field, line)
    try:
        return to_fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ParseError(f"cannot read number {value!r}", field, line) from None


def _parse_system(obj, field: str, line: int) -> AffineCantorSystem:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", field, line)
    line = getattr(obj, "line", line)
    maps = obj.get("maps")
    if not isinstance(maps, list) or not maps:
        raise ParseError("expected a non-empty array", f"{field}.maps", line)
    built = []
    for i, m in enumerate(maps):
        where = f"{field}.maps[{i}]"
        if not isinstance(m, dict):
            raise ParseError("expected an object with keys o, r, b", where, line)
        mline = getattr(m, "line", line)
        extra = set(m) - {"o", "r", "b"}
        if extra:
            raise ParseError(f"unknown keys {sorted(extra)}", where, mline)
        for key in ("o", "r", "b"):
            if key not in m:
                raise ParseError(f"missing key {key!r}", where, mline)
        o = m["o"]
        if isinstance(o, str):
            o = o.strip()
            o = int(o) if o.lstrip("+-").isdigit() else o
        if isinstance(o, bool) or o not in (1, -1):
            raise ParseError(f"orientation must be 1 or -1, got {m['o']!r}", f"{where}.o", mline)
        r = _number(m["r"], f"{where}.r", mline)
        if not 0 < r < 1:
            raise ParseError(f"ratio must lie in (0, 1), got {m['r']!r}", f"{where}.r", mline)
        b = _number(m["b"], f"{where}.b", mline)
        built.append(ContractionMap(int(o), r, b))
    try:
        return validate_system(built)
    except CantorSumError as exc:
        raise ParseError(str(exc), field, line) from None


def parse_sum_system(text: str) -> SumSystem:
    """Parse an IFS description, reporting the offending field and line."""
    try:
        data = _decoder(text).decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", None, exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", None, 1)
    line = getattr(data, "line", 1)
    extra = set(data) - {"lambda_system", "gamma_system", "eta"}
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)}", None, line)
    for key in ("lambda_system", "gamma_system"):
        if key not in data:
            raise ParseError("missing key", key, line)
    lam = _parse_system(data["lambda_system"], "lambda_system", line)
    gam = _parse_system(data["gamma_system"], "gamma_system", line)
    eta = _number(data.get("eta", "1"), "eta", line)
    if eta <= 0:
        raise ParseError("eta must be positive", "eta", line)
    return SumSystem(lam, gam, eta)


def load_sum_system(path) -> SumSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_sum_system(fh.read())


def system_to_dict(system: AffineCantorSystem) -> dict:
    return {"maps": [{"o": m.orientation, "r": str(m.ratio), "b": str(m.offset)} for m in system.maps]}


def sum_system_to_dict(system: SumSystem) -> dict:
    return {
        "lambda_system": system_to_dict(system.lambda_system),
        "gamma_system": system_to_dict(system.gamma_system),
        "eta": str(system.eta),
    }


def witness_from_dict(data: dict, system: SumSystem) -> WitnessPair:
    """Rebuild a witness from its words and recompute every condition."""
    try:
        a = make_square(system, data["square1"]["u"], data["square1"]["v"])
        b = make_square(system, data["square2"]["u"], data["square2"]["v"])
        eps = to_fraction(data["epsilon"])
        delta = data.get("delta")
        return make_witness(a, b, eps, None if delta is None else to_fraction(delta))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed witness: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def fmt(x) -> str:
    """Fixed 17 significant digits, so CSV output is byte-stable."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def csv_text(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()
