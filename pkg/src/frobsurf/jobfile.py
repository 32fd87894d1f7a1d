"""Job files: a declared field, one surface, named curves, and assertions.

Format (UTF-8, '#' comments, blank lines ignored):

    field p=5 e=1
    modulus 0 1              # optional check: little-endian coefficients
    surface f = <poly>
    curve C = <poly> ; <poly> ; <poly>
    assert irreducible C
    assert complete C
    assert degree C 6
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import JobFileError
from .fields import FieldDesc, make_field
from .geometry import CurveSpec, Surface
from .poly import Poly, parse_poly


@dataclass
class JobFile:
    field: FieldDesc
    surface_name: str
    surface_poly: Poly
    curves: dict                       # name -> list of Poly
    assertions: dict = dc_field(default_factory=dict)  # name -> set/values

    def surface(self) -> Surface:
        flags = self.assertions.get(self.surface_name, {})
        return Surface.from_poly(self.surface_poly,
                                 irreducible_asserted="irreducible" in flags)

    def curve(self, name: str) -> CurveSpec:
        if name not in self.curves:
            raise KeyError(f"no curve named {name!r} in the job file")
        flags = self.assertions.get(name, {})
        return CurveSpec(tuple(self.curves[name]),
                         delta=flags.get("degree"),
                         irreducible_asserted="irreducible" in flags,
                         complete_asserted="complete" in flags)

    def curve_names(self):
        return list(self.curves)


def parse_jobfile(text: str) -> JobFile:
    field = None
    surface = None
    curves = {}
    assertions = {}
    declared_modulus = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "field":
            kv = dict()
            for chunk in rest.split():
                if "=" not in chunk:
                    raise JobFileError(f"expected p=<int> e=<int>, found {chunk!r}", lineno)
                k, v = chunk.split("=", 1)
                kv[k] = v
            if "p" not in kv:
                raise JobFileError("field line needs p=<int>", lineno)
            try:
                p = int(kv["p"])
                e = int(kv.get("e", "1"))
            except ValueError:
                raise JobFileError("p and e must be integers", lineno)
            field = make_field(p, e)
        elif head == "modulus":
            try:
                declared_modulus = tuple(int(c) for c in rest.split())
            except ValueError:
                raise JobFileError("modulus must be a list of integers", lineno)
        elif head == "surface":
            if field is None:
                raise JobFileError("surface before field declaration", lineno)
            name, _, expr = rest.partition("=")
            name, expr = name.strip(), expr.strip()
            if not name or not expr:
                raise JobFileError("expected: surface <name> = <poly>", lineno)
            if surface is not None:
                raise JobFileError("only one surface per job file", lineno)
            surface = (name, _parse(expr, field, lineno))
        elif head == "curve":
            if field is None:
                raise JobFileError("curve before field declaration", lineno)
            name, _, expr = rest.partition("=")
            name, expr = name.strip(), expr.strip()
            if not name or not expr:
                raise JobFileError("expected: curve <name> = <poly> [; <poly>]*", lineno)
            if name in curves:
                raise JobFileError(f"curve {name!r} declared twice", lineno)
            curves[name] = [_parse(chunk.strip(), field, lineno)
                            for chunk in expr.split(";")]
        elif head == "assert":
            parts = rest.split()
            if len(parts) < 2:
                raise JobFileError("expected: assert <kind> <name> [value]", lineno)
            kind, name = parts[0], parts[1]
            entry = assertions.setdefault(name, {})
            if kind in ("irreducible", "complete"):
                entry[kind] = True
            elif kind == "degree":
                if len(parts) != 3:
                    raise JobFileError("expected: assert degree <name> <int>", lineno)
                try:
                    entry["degree"] = int(parts[2])
                except ValueError:
                    raise JobFileError("degree must be an integer", lineno)
            else:
                raise JobFileError(f"unknown assertion kind {kind!r}", lineno)
        else:
            raise JobFileError(f"unknown directive {head!r}", lineno)
    if field is None:
        raise JobFileError("missing field declaration", 1)
    if surface is None:
        raise JobFileError("missing surface declaration", 1)
    if declared_modulus is not None and declared_modulus != field.modulus:
        raise JobFileError(
            f"declared modulus {declared_modulus} differs from the deterministic "
            f"choice {field.modulus} for GF({field.p}^{field.e})", 1)
    for name in assertions:
        if name != surface[0] and name not in curves:
            raise JobFileError(f"assertion about unknown name {name!r}", 1)
    return JobFile(field=field, surface_name=surface[0], surface_poly=surface[1],
                   curves=curves, assertions=assertions)


def _parse(expr: str, field, lineno):
    try:
        return parse_poly(expr, field)
    except Exception as exc:
        raise JobFileError(f"bad polynomial {expr!r}: {exc}", lineno)


def load_jobfile(path: str) -> JobFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_jobfile(fh.read())
