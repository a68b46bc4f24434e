"""Deterministic command-line front end.

One job per invocation: a subcommand picks the computation, `--input`
supplies a JSON payload (rationals as "p/q" strings), and a single JSON
document goes to standard output.  Exact values are the default; decimal
renderings are opt-in and labeled approximate.  Exit codes: 0 success,
2 validation error (with a field diagnostic on stderr), 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .cones import (
    PolyCone,
    class_vector,
    cone_membership,
    cones_split_rank2_picard1,
    cones_split_rank2_ruled,
    duality_check,
    eff_cone_semistable,
    eff_cone_split_rank3_picard1,
    triform_pe_over_surface,
)
from .measures import sample_table, w1_distance
from .profiles import sym_profile, tensor_profile, tensor_profile_bruteforce, trivial_profile
from .rationals import parse_rat
from .serialize import (
    OUTPUT_MODES,
    cone_to_doc,
    json_bytes,
    measure_to_doc,
    membership_to_doc,
    profile_from_doc,
    profile_to_doc,
    render_tree,
    report_to_doc,
)
from .volume import (
    BundleInput,
    InternalInvariantError,
    discrete_slope_measure,
    limit_measure_for,
    volume_discrete_oracle,
    volume_exact,
)

CONE_CASES = (
    "split-rank2-picard1",
    "split-rank3-picard1",
    "split-rank2-ruled",
    "semistable-pullbacks",
)


@dataclass(frozen=True)
class JobSpec:
    command: str
    payload: dict


def _field(payload: dict, key: str, where: str) -> Any:
    if key not in payload:
        raise ValueError(f"{where}: missing required field {key!r}")
    return payload[key]


def _int_field(payload: dict, key: str, where: str, default: Any = None, minimum: int | None = None) -> Any:
    if key not in payload:
        if default is not None:
            return default
        raise ValueError(f"{where}: missing required field {key!r}")
    v = payload[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValueError(f"{where}: field {key!r} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ValueError(f"{where}: field {key!r} must be >= {minimum}, got {v}")
    return v


def _rat_field(payload: dict, key: str, where: str, default: Any = None) -> Fraction:
    if key not in payload:
        if default is None:
            raise ValueError(f"{where}: missing required field {key!r}")
        return Fraction(default)
    v = payload[key]
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ValueError(f'{where}: field {key!r} must be an int or "p/q" string, got {v!r}')
    try:
        return parse_rat(str(v))
    except ValueError as exc:
        raise ValueError(f"{where}: field {key!r}: {exc}") from exc


def _bundle_input(payload: dict, where: str) -> BundleInput:
    prof_e = profile_from_doc(_field(payload, "profile_e", where), f"{where}.profile_e")
    prof_f = (
        profile_from_doc(payload["profile_f"], f"{where}.profile_f")
        if "profile_f" in payload
        else trivial_profile()
    )
    m = _int_field(payload, "m", where, default=1)
    l = _int_field(payload, "l", where, default=0)
    a = _rat_field(payload, "a", where, default=0)
    return BundleInput(prof_e, prof_f, m, l, a)


def _bundle_echo(inp: BundleInput) -> dict:
    return {
        "profile_e": [[mu, r] for mu, r in inp.prof_e.pieces],
        "profile_f": [[mu, r] for mu, r in inp.prof_f.pieces],
        "m": inp.m,
        "l": inp.l,
        "a": inp.a,
    }


def _n_values(payload: dict, where: str, required: bool) -> list[int]:
    if "n_values" not in payload:
        if required:
            raise ValueError(f"{where}: missing n values (use --n or payload n_values)")
        return []
    values = payload["n_values"]
    if not isinstance(values, list) or not values:
        raise ValueError(f"{where}: n_values must be a nonempty list of integers")
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{where}: n values must be positive integers, got {v!r}")
    return values


def _run_hn_tensor(payload: dict) -> tuple[dict, dict]:
    where = "hn-tensor"
    p = profile_from_doc(_field(payload, "profile_e", where), f"{where}.profile_e")
    q = profile_from_doc(_field(payload, "profile_f", where), f"{where}.profile_f")
    result = tensor_profile(p, q)
    doc = {"tensor": profile_to_doc(result)}
    if payload.get("check_oracle", False):
        doc["oracle_agrees"] = tensor_profile_bruteforce(p, q) == result
    inputs = {
        "profile_e": [[mu, r] for mu, r in p.pieces],
        "profile_f": [[mu, r] for mu, r in q.pieces],
    }
    return inputs, doc


def _run_hn_sym(payload: dict) -> tuple[dict, dict]:
    where = "hn-sym"
    p = profile_from_doc(_field(payload, "profile", where), f"{where}.profile")
    n = _int_field(payload, "power", where, minimum=0)
    strategy = payload.get("strategy", "dp")
    if strategy not in ("dp", "enumerate"):
        raise ValueError(f"{where}: strategy must be 'dp' or 'enumerate', got {strategy!r}")
    result = sym_profile(p, n, strategy=strategy)
    doc = {"sym": profile_to_doc(result), "strategy": strategy}
    if payload.get("check_strategies", False):
        other = "enumerate" if strategy == "dp" else "dp"
        doc["strategies_agree"] = sym_profile(p, n, strategy=other) == result
    inputs = {"profile": [[mu, r] for mu, r in p.pieces], "power": n}
    return inputs, doc


def _run_measure_limit(payload: dict) -> tuple[dict, dict]:
    where = "measure-limit"
    inp = _bundle_input(payload, where)
    scaling = payload.get("knot_scaling", "derivation")
    measure = limit_measure_for(inp, scaling)
    doc: dict[str, Any] = {"measure": measure_to_doc(measure), "knot_scaling": scaling}
    if "plot_points" in payload:
        count = _int_field(payload, "plot_points", where, minimum=2)
        doc["plot"] = [
            {"x": x, "density": d, "cdf": c} for x, d, c in sample_table(measure, count)
        ]
    return _bundle_echo(inp), doc


def _run_measure_discrete(payload: dict) -> tuple[dict, dict]:
    where = "measure-discrete"
    inp = _bundle_input(payload, where)
    n = _int_field(payload, "n", where, minimum=1)
    grid = _int_field(payload, "grid", where, default=100_000, minimum=1)
    discrete = discrete_slope_measure(inp, n)
    limit = limit_measure_for(inp, "derivation")
    doc: dict[str, Any] = {
        "n": n,
        "measure": measure_to_doc(discrete),
    }
    if discrete.total_mass == 1 and limit.total_mass == 1:
        est = w1_distance(discrete, limit, grid_size=grid)
        doc["w1_vs_limit"] = {
            "value_approx": est.value,
            "error_bound": est.error_bound,
            "grid_size": est.grid_size,
        }
    inputs = _bundle_echo(inp)
    inputs["n"] = n
    return inputs, doc


def _run_volume(payload: dict) -> tuple[dict, dict]:
    where = "volume"
    inp = _bundle_input(payload, where)
    ns = tuple(_n_values(payload, where, required=False))
    report = volume_exact(inp, "derivation", oracle_ns=ns)
    doc: dict[str, Any] = {"report": report_to_doc(report)}
    if payload.get("both_scalings", False):
        literal = volume_exact(inp, "literal", oracle_ns=())
        doc["report_literal_scaling"] = report_to_doc(literal)
    inputs = _bundle_echo(inp)
    if ns:
        inputs["n_values"] = list(ns)
    return inputs, doc


def _run_volume_oracle(payload: dict) -> tuple[dict, dict]:
    where = "volume-oracle"
    inp = _bundle_input(payload, where)
    ns = _n_values(payload, where, required=True)
    report = volume_exact(inp, "derivation")
    rows = []
    for n in ns:
        v = volume_discrete_oracle(inp, n)
        rows.append({"n": n, "value": v, "delta_vs_exact": v - report.volume})
    doc = {"volume_exact": report.volume, "table": rows}
    inputs = _bundle_echo(inp)
    inputs["n_values"] = ns
    return inputs, doc


def _run_cone(payload: dict) -> tuple[dict, dict]:
    where = "cone"
    case = payload.get("case")
    if case not in CONE_CASES:
        raise ValueError(f"{where}: --case must be one of {', '.join(CONE_CASES)}; got {case!r}")
    inputs: dict[str, Any] = {"case": case}
    doc: dict[str, Any]
    eff: PolyCone
    if case == "split-rank2-picard1":
        n = _int_field(payload, "n", where, minimum=1)
        eff, nef = cones_split_rank2_picard1(n)
        form = triform_pe_over_surface(class_vector(("H",), (n,)), 0, [[1]])
        doc = {
            "eff": cone_to_doc(eff),
            "nef": cone_to_doc(nef),
            "duality_check": duality_check(eff, nef, form),
        }
        inputs["n"] = n
    elif case == "split-rank3-picard1":
        m = _int_field(payload, "m", where, minimum=1)
        n = _int_field(payload, "n", where, minimum=1)
        eff = eff_cone_split_rank3_picard1(m, n)
        doc = {
            "eff": cone_to_doc(eff),
            "note": "4-fold case: no 3-fold intersection form attached",
        }
        inputs["m"], inputs["n"] = m, n
    elif case == "split-rank2-ruled":
        a = _rat_field(payload, "a", where)
        b = _rat_field(payload, "b", where)
        mu = _rat_field(payload, "mu_min", where)
        deg = _rat_field(payload, "deg", where)
        eff, nef = cones_split_rank2_ruled(a, b, mu, deg)
        form = triform_pe_over_surface(
            class_vector(("section", "fiber"), (a, b)), 0, [[deg, 1], [1, 0]]
        )
        doc = {
            "eff": cone_to_doc(eff),
            "nef": cone_to_doc(nef),
            "duality_check": duality_check(eff, nef, form),
        }
        inputs.update({"a": a, "b": b, "mu_min": mu, "deg": deg})
    else:
        labels = _field(payload, "base_labels", where)
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise ValueError(f"{where}: base_labels must be a list of strings")
        gens_node = _field(payload, "eff_gens_base", where)
        if not isinstance(gens_node, list) or not gens_node:
            raise ValueError(f"{where}: eff_gens_base must be a nonempty list of rows")
        gens = []
        for i, row in enumerate(gens_node):
            if not isinstance(row, list) or len(row) != len(labels):
                raise ValueError(
                    f"{where}.eff_gens_base[{i}]: expected {len(labels)} coordinates"
                )
            gens.append(class_vector(labels, [parse_rat(str(x)) for x in row]))
        c1_node = _field(payload, "c1_over_rank", where)
        if not isinstance(c1_node, list) or len(c1_node) != len(labels):
            raise ValueError(f"{where}.c1_over_rank: expected {len(labels)} coordinates")
        c1 = class_vector(labels, [parse_rat(str(x)) for x in c1_node])
        eff = eff_cone_semistable(gens, c1)
        doc = {"eff": cone_to_doc(eff)}
        inputs.update(
            {
                "base_labels": labels,
                "eff_gens_base": [list(g.coords) for g in gens],
                "c1_over_rank": list(c1.coords),
            }
        )
    if "membership" in payload:
        row = payload["membership"]
        if not isinstance(row, list) or len(row) != len(eff.basis):
            raise ValueError(f"{where}.membership: expected {len(eff.basis)} coordinates")
        vec = class_vector(eff.basis, [parse_rat(str(x)) for x in row])
        doc["membership"] = membership_to_doc(cone_membership(eff, vec))
        inputs["membership"] = list(vec.coords)
    return inputs, doc


_RUNNERS: dict[str, Callable[[dict], tuple[dict, dict]]] = {
    "hn-tensor": _run_hn_tensor,
    "hn-sym": _run_hn_sym,
    "measure-limit": _run_measure_limit,
    "measure-discrete": _run_measure_discrete,
    "volume": _run_volume,
    "volume-oracle": _run_volume_oracle,
    "cone": _run_cone,
}


def run(job: JobSpec, output_mode: str = "exact") -> dict:
    """Execute one job and assemble the output document (exact leaves are
    Fraction objects until rendered)."""
    if output_mode not in OUTPUT_MODES:
        raise ValueError(f"output mode must be one of {OUTPUT_MODES}, got {output_mode!r}")
    if job.command not in _RUNNERS:
        raise ValueError(f"unknown command {job.command!r}")
    if not isinstance(job.payload, dict):
        raise ValueError(f"{job.command}: payload must be a JSON object")
    inputs, result = _RUNNERS[job.command](job.payload)
    document: dict[str, Any] = {
        "command": job.command,
        "inputs": render_tree(inputs, "exact"),
    }
    if output_mode in ("exact", "both"):
        document["result"] = render_tree(result, "exact")
    if output_mode in ("decimal", "both"):
        document["result_approx_decimal"] = render_tree(result, "decimal")
        document["approx_note"] = "decimal values are approximate (20 significant digits)"
    return document


def _load_payload(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read input file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"input file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"input file {path!r} must contain a JSON object")
    return data


def _parse_n_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(int(part))
        except ValueError as exc:
            raise ValueError(f"--n expects a comma list of integers, got {part!r}") from exc
    if not out:
        raise ValueError("--n expects at least one integer")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hnvol",
        description="Exact slope profiles, limit measures, volumes and cones "
        "for projectivized bundles over a curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="JSON payload file")
        p.add_argument(
            "--output-mode", choices=OUTPUT_MODES, default="exact", dest="output_mode"
        )
        if name in ("volume", "volume-oracle", "cone"):
            p.add_argument("--n", help="comma list of integers", dest="n_list")
        if name == "cone":
            p.add_argument("--case", choices=CONE_CASES)
        if name == "volume":
            p.add_argument("--both-scalings", action="store_true", dest="both_scalings")
        if name == "measure-discrete":
            p.add_argument("--grid", type=int, help="W1 grid size")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = _load_payload(args.input)
        if getattr(args, "n_list", None):
            values = _parse_n_list(args.n_list)
            if args.command == "cone":
                payload.setdefault("n", values[0])
            else:
                payload.setdefault("n_values", values)
        if getattr(args, "case", None):
            payload["case"] = args.case
        if getattr(args, "both_scalings", False):
            payload["both_scalings"] = True
        if getattr(args, "grid", None):
            payload["grid"] = args.grid
        document = run(JobSpec(args.command, payload), args.output_mode)
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(json_bytes(document))
    sys.stdout.buffer.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
