"""The map-spec file format.

A spec is a sequence of blocks ``name { key="value" ... }``; ``#`` starts a
comment.  Blocks and keys::

    field   { uniformizer="t" coefficients="quadratic-closure" ramification="24" }
    tau     { lambda="1/2" unit="1" }
    map     { num="z^2 + t^-1" den="1" }
    options { precision="24" depth="8" alpha2="2" }

Every block is optional except ``map``.  Values may be quoted or bare, and
keys may be separated by commas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import SpecSemanticError, SpecSyntaxError
from .parsing import parse_polynomial, parse_rational
from .puiseux import Tau
from .twisted import TwistedMap

_SCHEMA = {
    "field": {"uniformizer": "uniformizer", "coefficients": "coefficients", "ramification": "ramification"},
    "tau": {"lambda": "lam", "unit": "unit"},
    "map": {"num": "num", "den": "den"},
    "options": {"precision": "precision", "depth": "depth", "alpha2": "alpha2"},
}

_RESERVED = {"z", "i", "sqrt", "O"}

_LEX = re.compile(
    r'(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<string>"[^"\n]*")'
    r"|(?P<comma>,)|(?P<punct>[{}=])|(?P<word>[^\s{}=\"#,]+)"
)


@dataclass
class MapSpec:
    num: str
    den: str = "1"
    lam: str = "1"
    unit: str = "1"
    uniformizer: str = "t"
    coefficients: str = "quadratic-closure"
    ramification: str = "24"
    precision: str = "24"
    depth: str = "8"
    alpha2: str = "2"

    def lam_value(self) -> Fraction:
        return parse_rational(self.lam)

    def to_map(self) -> TwistedMap:
        num = parse_polynomial(self._rename(self.num))
        den = parse_polynomial(self._rename(self.den))
        return TwistedMap(num, den, Tau(self.lam_value(), self.unit))

    def _rename(self, text: str) -> str:
        if self.uniformizer == "t":
            return text
        return re.sub(rf"\b{re.escape(self.uniformizer)}\b", "t", text)

    def format(self) -> str:
        """Canonical text; parse_spec(spec.format()) == spec."""
        out = []
        for block, keys in _SCHEMA.items():
            parts = [f'{key}="{getattr(self, attr)}"' for key, attr in keys.items()]
            out.append(f"{block} {{ {' '.join(parts)} }}")
        return "\n".join(out) + "\n"

    def to_json(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _tokens(text):
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind not in ("ws", "comment", "comma"):
            yield kind, value, line, col
        if kind != "nl":
            col += len(value)
        pos = m.end()
    yield "end", "", line, col


def parse_spec(text: str) -> MapSpec:
    toks = list(_tokens(text))
    i = 0
    values = {}
    where = {}
    seen_blocks = set()

    def expect(kind, value=None):
        nonlocal i
        k, v, ln, cl = toks[i]
        if k != kind or (value is not None and v != value):
            wanted = value or kind
            raise SpecSyntaxError(f"expected {wanted!r}, found {v or 'end of input'!r}", ln, cl)
        i += 1
        return v, ln, cl

    while toks[i][0] != "end":
        name, ln, cl = expect("word")
        if name not in _SCHEMA:
            raise SpecSyntaxError(f"unknown block {name!r}", ln, cl)
        if name in seen_blocks:
            raise SpecSyntaxError(f"block {name!r} given twice", ln, cl)
        seen_blocks.add(name)
        expect("punct", "{")
        while not (toks[i][0] == "punct" and toks[i][1] == "}"):
            key, kl, kc = expect("word")
            if key not in _SCHEMA[name]:
                raise SpecSyntaxError(f"unknown key {key!r} in block {name!r}", kl, kc)
            expect("punct", "=")
            k, v, vl, vc = toks[i]
            if k == "string":
                v, vc = v[1:-1], vc + 1
            elif k != "word":
                raise SpecSyntaxError(f"expected a value for {key!r}", vl, vc)
            i += 1
            attr = _SCHEMA[name][key]
            values[attr] = v
            where[attr] = (vl, vc)
        expect("punct", "}")
    if "map" not in seen_blocks or "num" not in values:
        raise SpecSemanticError("the spec needs a map block with num")
    spec = MapSpec(**values)
    _validate(spec, where)
    return spec


def _validate(spec: MapSpec, where):
    def at(attr):
        return where.get(attr, (1, 1))

    if spec.uniformizer in _RESERVED or not re.fullmatch(r"[A-Za-z_]\w*", spec.uniformizer):
        raise SpecSemanticError(f"cannot use {spec.uniformizer!r} as the uniformizer")
    if spec.coefficients != "quadratic-closure":
        raise SpecSemanticError(f"unsupported coefficient field {spec.coefficients!r}")
    lam = parse_rational(spec.lam, *at("lam"))
    if lam <= 0:
        raise SpecSemanticError(f"lambda must be positive, got {spec.lam}")
    for attr in ("ramification", "precision", "depth", "alpha2"):
        raw = getattr(spec, attr)
        if not re.fullmatch(r"\d+", raw) or int(raw) <= 0:
            raise SpecSemanticError(f"{attr} must be a positive integer, got {raw!r}")
    ln, cl = at("num")
    parse_polynomial(spec._rename(spec.num), ln, cl)
    ln, cl = at("den")
    den = parse_polynomial(spec._rename(spec.den), ln, cl)
    if den.is_zero():
        raise SpecSemanticError("the denominator is identically zero")
    try:
        spec.to_map()
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecSemanticError(f"invalid map: {exc}") from exc
