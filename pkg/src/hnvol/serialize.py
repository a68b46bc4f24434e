"""JSON wire format: rationals as "p/q" strings, deterministic dumps.

Builder functions (`*_to_doc`) produce plain dict/list trees whose numeric
leaves are Fraction objects; `render_tree` converts those to strings for a
chosen output mode, and `json_bytes` serializes with fixed key order and
separators so identical inputs give byte-identical output.  Parsers
(`*_from_doc`) validate shape and raise ValueError with a field path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cones import ClassVector, ConeMembership, PolyCone, class_vector
from .measures import SpectralMeasure, make_measure
from .poly import Poly
from .profiles import HNProfile, make_profile
from .rationals import decimal_str, format_rat, parse_rat
from .volume import VolumeReport

OUTPUT_MODES = ("exact", "decimal", "both")


def render_tree(node: Any, mode: str) -> Any:
    """Replace Fraction leaves: "p/q" for exact, 20-digit decimal strings
    for decimal."""
    if isinstance(node, Fraction):
        return format_rat(node) if mode == "exact" else decimal_str(node)
    if isinstance(node, dict):
        return {k: render_tree(v, mode) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [render_tree(v, mode) for v in node]
    return node


def json_bytes(document: dict) -> bytes:
    return (
        json.dumps(document, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
    ).encode("utf-8")


def profile_to_doc(p: HNProfile) -> dict:
    return {
        "pieces": [[mu, r] for mu, r in p.pieces],
        "rank": p.rank,
        "degree": p.degree,
        "slope": p.slope,
        "mu_min": p.mu_min,
        "mu_max": p.mu_max,
    }


def profile_from_doc(node: Any, where: str = "profile") -> HNProfile:
    """Accepts either a bare piece list [["p/q", r], ...] or a full profile
    document with a "pieces" field."""
    if isinstance(node, dict):
        node = node.get("pieces")
    if not isinstance(node, list) or not node:
        raise ValueError(f"{where}: expected a nonempty list of [slope, rank] pairs")
    pairs = []
    for i, entry in enumerate(node):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValueError(f"{where}[{i}]: expected a [slope, rank] pair, got {entry!r}")
        slope, rank = entry
        if not isinstance(slope, str) and not isinstance(slope, int):
            raise ValueError(f'{where}[{i}]: slope must be an int or "p/q" string')
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
            raise ValueError(f"{where}[{i}]: rank must be a positive integer, got {rank!r}")
        try:
            pairs.append((parse_rat(str(slope)), rank))
        except ValueError as exc:
            raise ValueError(f"{where}[{i}]: {exc}") from exc
    return make_profile(pairs)


def measure_to_doc(m: SpectralMeasure) -> dict:
    return {
        "atoms": [[p, w] for p, w in m.atoms],
        "pieces": [
            {"lo": lo, "hi": hi, "coeffs": list(poly.coeffs)} for lo, hi, poly in m.pieces
        ],
        "total_mass": m.total_mass,
        "mean": m.mean,
    }


def measure_from_doc(node: Any, where: str = "measure") -> SpectralMeasure:
    if not isinstance(node, dict):
        raise ValueError(f"{where}: expected a measure object")
    atoms = []
    for i, entry in enumerate(node.get("atoms", [])):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValueError(f"{where}.atoms[{i}]: expected [point, mass]")
        atoms.append((parse_rat(str(entry[0])), parse_rat(str(entry[1]))))
    pieces = []
    for i, entry in enumerate(node.get("pieces", [])):
        if not isinstance(entry, dict) or not {"lo", "hi", "coeffs"} <= set(entry):
            raise ValueError(f"{where}.pieces[{i}]: expected lo/hi/coeffs")
        poly = Poly.of([parse_rat(str(c)) for c in entry["coeffs"]])
        pieces.append((parse_rat(str(entry["lo"])), parse_rat(str(entry["hi"])), poly))
    return make_measure(atoms, pieces)


def cone_to_doc(c: PolyCone) -> dict:
    return {
        "basis": list(c.basis),
        "generators": [list(g.coords) for g in c.generators],
    }


def cone_from_doc(node: Any, where: str = "cone") -> PolyCone:
    if not isinstance(node, dict) or "basis" not in node or "generators" not in node:
        raise ValueError(f"{where}: expected an object with basis and generators")
    basis = node["basis"]
    if not isinstance(basis, list) or not all(isinstance(x, str) for x in basis):
        raise ValueError(f"{where}.basis: expected a list of labels")
    gens = []
    for i, row in enumerate(node["generators"]):
        if not isinstance(row, list) or len(row) != len(basis):
            raise ValueError(f"{where}.generators[{i}]: expected {len(basis)} coordinates")
        gens.append(class_vector(basis, [parse_rat(str(x)) for x in row]))
    return PolyCone(tuple(basis), tuple(gens))


def membership_to_doc(m: ConeMembership) -> dict:
    doc: dict[str, Any] = {"inside": m.inside}
    if m.coords is not None:
        doc["coordinates"] = list(m.coords)
    if m.separator is not None:
        doc["separating_functional"] = list(m.separator.coords)
    return doc


def report_to_doc(r: VolumeReport) -> dict:
    return {
        "dim_x": r.dim_x,
        "vol_generic_fiber": r.vol_generic_fiber,
        "integral": r.integral,
        "volume": r.volume,
        "knot_scaling": r.knot_scaling,
        "oracle_samples": [[n, v] for n, v in r.oracle_samples],
        "notes": list(r.notes),
    }
