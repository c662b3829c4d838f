"""JSON serialization of curves, measures, normal forms and relations.

Complex numbers are encoded as [re, im] pairs throughout; matrices as
nested lists of such pairs.  Densities that are not constant, polynomial
or tabulated are sampled onto a table on write, so every measure has a
faithful-enough round trip without a registry of density classes.
"""

from __future__ import annotations

import json

import numpy as np

from curvecalc.curves import CurveSystem, LipschitzCurve, make_curve
from curvecalc.errors import CurveCalcError
from curvecalc.linrel import LinearRelation
from curvecalc.measures import (
    Atom,
    ConstDensity,
    CurveMeasure,
    PolyDensity,
    TableDensity,
)
from curvecalc.moebius import MoebiusMap
from curvecalc.normalform import Frame, NormalForm, build_named


class FormatError(CurveCalcError):
    pass


def to_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise FormatError(f"expected [re, im], got {obj!r}")


def from_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _matrix_from(obj):
    try:
        return np.array([[to_complex(e) for e in row] for row in obj], dtype=complex)
    except (TypeError, FormatError) as exc:
        raise FormatError(f"bad matrix: {exc}") from exc


def _matrix_to(M):
    return [[from_complex(e) for e in row] for row in np.atleast_2d(M)]


# ---------------------------------------------------------------------------
# curves


def curve_from_json(obj) -> LipschitzCurve:
    if "vertices" not in obj:
        raise FormatError("curve object needs a 'vertices' field")
    pts = [to_complex(v) for v in obj["vertices"]]
    return make_curve(pts)


def curve_to_json(c: LipschitzCurve) -> dict:
    return {"vertices": [from_complex(v) for v in c.vertices]}


def system_from_json(obj) -> CurveSystem:
    if "vertices" in obj:
        return CurveSystem.of(curve_from_json(obj))
    if "curves" not in obj:
        raise FormatError("curve system needs a 'curves' field")
    return CurveSystem.of(*[curve_from_json(c) for c in obj["curves"]])


def system_to_json(system: CurveSystem) -> dict:
    return {"curves": [curve_to_json(c) for c in system.curves], "nodes_auto": True}


# ---------------------------------------------------------------------------
# measures


def density_from_json(obj):
    kind = obj.get("kind")
    data = obj.get("data")
    if kind == "const":
        return ConstDensity(to_complex(data))
    if kind == "poly":
        return PolyDensity([to_complex(c) for c in data])
    if kind == "table":
        d = TableDensity(
            np.asarray(data["ts"], dtype=float),
            np.array([to_complex(v) for v in data["values"]]),
        )
        if data.get("hoelder"):
            d.hoelder = True
        return d
    raise FormatError(f"unknown density kind {kind!r}")


def density_to_json(curve: LipschitzCurve, d) -> dict:
    if isinstance(d, ConstDensity):
        return {"kind": "const", "data": from_complex(d.value)}
    if isinstance(d, PolyDensity):
        return {"kind": "poly", "data": [from_complex(c) for c in d.coeffs]}
    if isinstance(d, TableDensity):
        return {
            "kind": "table",
            "data": {
                "ts": [float(t) for t in d.ts],
                "values": [from_complex(v) for v in d.values],
                "hoelder": bool(getattr(d, "hoelder", False)),
            },
        }
    # anything exotic is tabulated; endpoint singularities are clipped off
    eps = 1e-6 * curve.length
    ts = np.linspace(eps, curve.length - eps, 257)
    vals = np.asarray(d(ts), dtype=complex)
    return {
        "kind": "table",
        "data": {
            "ts": [float(t) for t in ts],
            "values": [from_complex(v) for v in vals],
            "hoelder": True,
        },
    }


def measure_from_json(obj, system: CurveSystem) -> CurveMeasure:
    atoms = [
        Atom(int(a["curve"]), float(a["t"]), to_complex(a["w"]))
        for a in obj.get("atoms", [])
    ]
    densities = {}
    for entry in obj.get("densities", []):
        densities[int(entry["curve"])] = density_from_json(entry)
    return CurveMeasure(system, atoms=atoms, densities=densities)


def measure_to_json(mu: CurveMeasure) -> dict:
    out = {
        "atoms": [
            {"curve": a.curve, "t": float(a.t), "w": from_complex(a.weight)}
            for a in mu.atoms
        ],
        "densities": [
            dict(curve=ci, **density_to_json(mu.system.curves[ci], d))
            for ci, d in sorted(mu.densities.items())
        ],
    }
    return out


# ---------------------------------------------------------------------------
# normal forms


def _chart_from(obj):
    a, b, c, d = (to_complex(e) for e in obj)
    return MoebiusMap(a, b, c, d)


def _chart_to(h: MoebiusMap):
    return [from_complex(h.a), from_complex(h.b), from_complex(h.c), from_complex(h.d)]


def normal_form_from_json(obj, system: CurveSystem | None = None) -> NormalForm:
    if "named" in obj:
        kwargs = {k: v for k, v in obj.items() if k != "named"}
        if "alpha" in kwargs:
            kwargs["alpha"] = to_complex(kwargs["alpha"])
        if "curve" in kwargs:
            kwargs["curve"] = curve_from_json(kwargs["curve"])
        if "poles" in kwargs:
            kwargs["poles"] = [
                (to_complex(w), to_complex(c), int(k)) for w, c, k in kwargs["poles"]
            ]
        return build_named(obj["named"], **kwargs)
    if "curves" in obj:
        system = system_from_json(obj)
    if system is None:
        raise FormatError("normal form needs an embedded or supplied curve system")
    arg_map = _chart_from(obj["chart"]) if "chart" in obj else MoebiusMap.identity()
    node_map = _chart_from(obj["node_chart"]) if "node_chart" in obj else MoebiusMap.identity()
    terms = {}
    for t in obj.get("terms", []):
        k = int(t["k"])
        mu = measure_from_json(t["measure"], system)
        terms[k] = terms[k] + mu if k in terms else mu
    const = to_complex(obj.get("const", 0.0))
    return NormalForm(
        system,
        Frame(node_map=node_map, arg_map=arg_map),
        const=const,
        terms=terms,
    )


def normal_form_to_json(nf: NormalForm, embed_curves=True) -> dict:
    out = {
        "chart": _chart_to(nf.frame.arg_map),
        "const": from_complex(nf.const),
        "terms": [
            {"k": k, "measure": measure_to_json(mu)} for k, mu in nf.term_list()
        ],
    }
    if not nf.frame.node_map.is_identity():
        out["node_chart"] = _chart_to(nf.frame.node_map)
    if embed_curves:
        out["curves"] = system_to_json(nf.system)["curves"]
    return out


# ---------------------------------------------------------------------------
# relations and vectors


def relation_from_json(obj) -> LinearRelation:
    if "matrix" in obj:
        return LinearRelation.from_matrix(_matrix_from(obj["matrix"]))
    if "Y" in obj and "X" in obj:
        Y = _matrix_from(obj["Y"])
        X = _matrix_from(obj["X"])
        if "dim" in obj and int(obj["dim"]) != Y.shape[0]:
            raise FormatError("declared dim does not match the generator matrices")
        return LinearRelation(Y, X)
    raise FormatError("relation needs 'matrix' or 'Y'/'X' fields")


def relation_to_json(A: LinearRelation) -> dict:
    return {"dim": A.dim, "Y": _matrix_to(A.Y), "X": _matrix_to(A.X)}


def vector_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        obj = obj.get("v", obj.get("vector"))
    if obj is None:
        raise FormatError("vector object needs a 'v' field")
    return np.array([to_complex(e) for e in obj], dtype=complex)


def vector_to_json(u) -> dict:
    return {"v": [from_complex(e) for e in np.asarray(u, dtype=complex).ravel()]}


# ---------------------------------------------------------------------------
# file helpers


def load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def dump_json(path, obj):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")
