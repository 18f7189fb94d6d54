"""Deterministic text and JSON rendering.

Floats are always formatted with 12 significant digits and negative zero
normalized away, so identical inputs produce byte-identical output.  Complex
values render as ``a``, ``bi`` or ``a+bi`` / ``a-bi`` with trailing zeros
trimmed, the way spectrum tables are conventionally printed.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence


def fmt_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".12g")


def fmt_complex(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    if im == 0.0:
        return fmt_float(re)
    if abs(im) == 1.0:
        imag = "i" if im > 0 else "-i"
    else:
        imag = fmt_float(im) + "i"
    if re == 0.0:
        return imag
    sign = "+" if im > 0 else "-"
    return fmt_float(re) + sign + imag.lstrip("-")


def complex_json(z: complex) -> dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag)}


def dumps(payload: Any) -> str:
    """Canonical JSON: insertion-ordered keys, floats at 12 significant digits."""
    pieces: list[str] = []
    _write(payload, pieces)
    return "".join(pieces)


def _write(value: Any, out: list[str]) -> None:
    if value is None or isinstance(value, (bool, str, int)):
        out.append(json.dumps(value))
    elif isinstance(value, float):
        text = fmt_float(value)
        # ".12g" may produce bare exponents like 1e-09, which JSON accepts.
        out.append(text)
    elif isinstance(value, complex):
        _write(complex_json(value), out)
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _write(item, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(", ")
            _write(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot render {type(value).__name__} as JSON")


def element_label(levels: Sequence[Sequence[str]], components: Iterable[int]) -> str:
    """Label a group element by the level symbols at its per-factor components.

    Symbols are concatenated when every symbol is a single character
    (Table-style labels like ``aab``), otherwise joined with commas.
    """
    symbols = [levels[i][c] for i, c in enumerate(components)]
    joiner = "" if all(len(sym) == 1 for alphabet in levels for sym in alphabet) else ","
    return joiner.join(symbols)


def gwlp_text(values: Iterable[float]) -> str:
    return "(" + ", ".join(fmt_float(a) for a in values) + ")"
