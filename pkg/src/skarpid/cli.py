"""Command-line interface.

Subcommands cover every computation in the library, on either a catalog
distribution (``--catalog NAME --param k=v``) or a JSON file
(``--dist FILE``, schema: ``{"variables": [...], "events": [{"outcome":
[...], "p": ...}]}``).

Exit codes: 0 success, 1 inconsistent decomposition, 2 invalid input,
3 convergence failure.  ``--json`` swaps the human tables for structured
records; with a fixed ``--seed`` the JSON output is byte-identical across
runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from . import catalog
from .distributions import JointDistribution
from .errors import ConvergenceFailure, InconsistentDecomposition, SkarpidError
from .gacs_korner import skar_no_comm
from .key_rates import (
    OptimizerConfig,
    RateBounds,
    intrinsic_mutual_information_result,
    skar_one_way_result,
    skar_two_way_bounds_result,
)
from .marginal import (
    MarginalPolytope,
    broja_intermediate_entropy_report,
    broja_minimize,
    connected_information,
    maxent_with_marginals,
)
from .pid import PidComponents, PidScheme, decompose
from .shannon import conditional_mutual_information, entropy, mutual_information

CROSS = "✗"

_SCHEME_CAVEATS = {
    PidScheme.NO_COMM,
    PidScheme.CAMEL,
    PidScheme.TWO_WAY,
}


def _fmt(x) -> str:
    if isinstance(x, RateBounds):
        return f"[{x.lower:.4f}, {x.upper:.4f}]" + (" (exact)" if x.exact else "")
    return f"{x:.4f}"


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise SkarpidError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = float(v)
        except ValueError:
            raise SkarpidError(f"--param {k}: {v!r} is not a number") from None
    return out


def _parse_sweep(spec: str):
    """``p=0.1:0.9:0.1`` -> (name, [values])."""
    if "=" not in spec:
        raise SkarpidError(f"--sweep expects k=start:stop:step, got {spec!r}")
    name, _, rng = spec.partition("=")
    parts = rng.split(":")
    if len(parts) != 3:
        raise SkarpidError(f"--sweep expects k=start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise SkarpidError(f"--sweep range {rng!r} is not numeric") from None
    if step <= 0:
        raise SkarpidError(f"--sweep step must be positive, got {step}")
    if stop < start:
        raise SkarpidError(f"--sweep stop {stop} below start {start}")
    values = []
    v = start
    while v <= stop + 1e-12:
        values.append(round(v, 12))
        v += step
    return name, values


def _load(args) -> tuple[JointDistribution, str]:
    if bool(args.dist) == bool(args.catalog):
        raise SkarpidError("provide exactly one of --dist FILE or --catalog NAME")
    if args.dist:
        if args.param:
            raise SkarpidError("--param only applies to --catalog entries")
        with open(args.dist, encoding="utf-8") as fh:
            return JointDistribution.from_json_dict(json.load(fh)), args.dist
    params = _parse_params(args.param)
    return catalog.get(args.catalog, params), args.catalog


def _config(args) -> OptimizerConfig:
    kwargs = {}
    if getattr(args, "restarts", None) is not None:
        kwargs["restarts"] = args.restarts
    if getattr(args, "seed", None) is not None:
        kwargs["seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        kwargs["result_tol"] = args.tol
    return OptimizerConfig(**kwargs)


def _emit(args, text: str, payload) -> int:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)
    return 0


def _reference_column(source_name: str, sweep_name: str):
    """Analytic reference curve for parameterized catalog sweeps."""
    if source_name == "gb-erased" and sweep_name == "p":
        return "p(1-p)^2", lambda p: p * (1.0 - p) ** 2
    return None


# ----------------------------------------------------------------- handlers


def _info_lines(d: JointDistribution) -> tuple[list[str], dict]:
    lines = []
    record = {"variables": list(d.variables), "support": len(d)}
    lines.append(f"variables: {', '.join(d.variables)}   support: {len(d)} outcomes")
    ents = {v: entropy(d, v) for v in d.variables}
    record["entropy"] = {**{v: ents[v] for v in d.variables}, "joint": entropy(d)}
    lines.append("  " + "   ".join(f"H({v}) = {ents[v]:.4f}" for v in d.variables))
    lines.append(f"  H({','.join(d.variables)}) = {entropy(d):.4f}")
    mis = {}
    for x, y in combinations(d.variables, 2):
        mis[f"I({x}:{y})"] = mutual_information(d, x, y)
    record["mutual_information"] = mis
    lines.append("  " + "   ".join(f"{k} = {v:.4f}" for k, v in mis.items()))
    if len(d.variables) == 3:
        cmis = {}
        for x, y in combinations(d.variables, 2):
            (z,) = set(d.variables) - {x, y}
            cmis[f"I({x}:{y}|{z})"] = conditional_mutual_information(d, x, y, z)
        record["conditional_mutual_information"] = cmis
        lines.append("  " + "   ".join(f"{k} = {v:.4f}" for k, v in cmis.items()))
    return lines, record


def _cmd_info(args) -> int:
    if args.sweep:
        if not args.catalog:
            raise SkarpidError("--sweep requires a parameterized --catalog entry")
        name, values = _parse_sweep(args.sweep)
        ref = _reference_column(args.catalog, name)
        rows = []
        base_params = _parse_params(args.param)
        for v in values:
            d = catalog.get(args.catalog, {**base_params, name: v})
            _, record = _info_lines(d)
            row = {"params": {name: v}, **record}
            if ref:
                row["reference"] = {ref[0]: ref[1](v)}
            rows.append(row)
        header = f"sweep {name} over catalog {args.catalog}"
        lines = [header]
        for row in rows:
            cmis = row.get("conditional_mutual_information", {})
            cols = "  ".join(f"{k}={val:.4f}" for k, val in cmis.items())
            extra = ""
            if ref:
                extra = f"  {ref[0]}={row['reference'][ref[0]]:.4f}"
            lines.append(f"  {name}={row['params'][name]:<6g} {cols}{extra}")
        return _emit(args, "\n".join(lines), {"sweep": rows})

    d, label = _load(args)
    lines, record = _info_lines(d)
    return _emit(args, f"distribution: {label}\n" + "\n".join(lines),
                 {"source": label, **record})


def _skar_once(d, args, cfg):
    a, b, e = args.party_a, args.party_b, args.eve
    mode = args.mode
    if mode == "none":
        value = skar_no_comm(d, a, b, e)
        return {"mode": mode, "value": value}, f"S_none = {value:.4f}"
    if mode == "one-way-a":
        res = skar_one_way_result(d, a, b, e, cfg)
        return {"mode": mode, **res.to_json_dict()}, f"S_one-way(A communicates) = {res.value:.4f}"
    if mode == "one-way-b":
        res = skar_one_way_result(d, b, a, e, cfg)
        return {"mode": mode, **res.to_json_dict()}, f"S_one-way(B communicates) = {res.value:.4f}"
    if mode == "two-way":
        res = skar_two_way_bounds_result(d, a, b, e, cfg)
        return {"mode": mode, **res.to_json_dict()}, f"S_two-way bounds: {_fmt(res.bounds)}"
    if mode == "intrinsic":
        res = intrinsic_mutual_information_result(d, a, b, e, cfg, args.ebar_size)
        return {"mode": mode, **res.to_json_dict()}, f"intrinsic MI = {res.value:.4f}"
    raise SkarpidError(f"unknown mode {mode!r}")


def _cmd_skar(args) -> int:
    cfg = _config(args)
    if args.sweep:
        if not args.catalog:
            raise SkarpidError("--sweep requires a parameterized --catalog entry")
        name, values = _parse_sweep(args.sweep)
        ref = _reference_column(args.catalog, name)
        base_params = _parse_params(args.param)
        rows, lines = [], [f"sweep {name} over catalog {args.catalog} (mode {args.mode})"]
        for v in values:
            d = catalog.get(args.catalog, {**base_params, name: v})
            record, text = _skar_once(d, args, cfg)
            row = {"params": {name: v}, **record}
            extra = ""
            if ref:
                row["reference"] = {ref[0]: ref[1](v)}
                extra = f"   {ref[0]}={ref[1](v):.4f}"
            rows.append(row)
            lines.append(f"  {name}={v:<6g} {text}{extra}")
        return _emit(args, "\n".join(lines), {"sweep": rows})

    d, label = _load(args)
    record, text = _skar_once(d, args, cfg)
    head = (f"secret key agreement on {label}: "
            f"A={args.party_a} B={args.party_b} eve={args.eve}")
    payload = {"source": label, "party_a": args.party_a, "party_b": args.party_b,
               "eve": args.eve, **record}
    if not record.get("converged", True):
        print("warning: optimizer did not converge; value is best-found",
              file=sys.stderr)
        _emit(args, f"{head}\n  {text}", payload)
        return 3
    return _emit(args, f"{head}\n  {text}", payload)


def _pid_table(label, scheme, sources, target, pid: PidComponents) -> str:
    s0, s1 = sources
    width = max(13, len(s0) + 7, len(s1) + 7)
    lines = [
        f"PID of {label}  (scheme: {scheme.value}; sources {s0},{s1}; target {target})",
        f"  {'redundancy':<{width}s} {_fmt(pid.redundancy)}",
        f"  {'unique ' + s0:<{width}s} {_fmt(pid.unique_0)}",
        f"  {'unique ' + s1:<{width}s} {_fmt(pid.unique_1)}",
        f"  {'synergy':<{width}s} {_fmt(pid.synergy)}",
        f"  consistent (residual {pid.residual:.3e})",
    ]
    if pid.clamped:
        lines.append(f"  clamped to 0: {', '.join(pid.clamped)}")
    return "\n".join(lines)


def _pid_cross_table(label, scheme, sources, target, exc: InconsistentDecomposition) -> str:
    s0, s1 = sources
    partial = exc.partial or {}
    width = max(13, len(s0) + 7, len(s1) + 7)

    def fmt_u(key):
        v = partial.get(key)
        if isinstance(v, dict):
            return f"[{v['lower']:.4f}, {v['upper']:.4f}]"
        return f"{v:.4f}" if v is not None else CROSS

    return "\n".join([
        f"PID of {label}  (scheme: {scheme.value}; sources {s0},{s1}; target {target})",
        f"  {'redundancy':<{width}s} {CROSS}",
        f"  {'unique ' + s0:<{width}s} {fmt_u('unique_0')}",
        f"  {'unique ' + s1:<{width}s} {fmt_u('unique_1')}",
        f"  {'synergy':<{width}s} {CROSS}",
        f"  inconsistent: {exc}",
    ])


def _cmd_pid(args) -> int:
    d, label = _load(args)
    cfg = _config(args)
    scheme = PidScheme.from_tag(args.scheme)
    sources = tuple(args.sources.split(","))
    if len(sources) != 2:
        raise SkarpidError(f"--sources expects two comma-separated names, got {args.sources!r}")
    caveat = None
    if scheme in _SCHEME_CAVEATS:
        caveat = (f"note: the {scheme.value!r} scheme is known to admit "
                  f"inconsistent decompositions (the catalog entry 'problem' "
                  f"is a counterexample); 'elephant' is the default.")
    try:
        pid = decompose(d, sources, args.target, scheme, cfg, tol=args.tol)
    except InconsistentDecomposition as exc:
        if args.json:
            def enc(c):
                return list(c) if isinstance(c, tuple) else c
            print(json.dumps({
                "source": label,
                "scheme": scheme.value,
                "consistent": False,
                "error": str(exc),
                "candidates": [enc(c) for c in (exc.candidates or ())],
                "residual": exc.residual,
                "partial": exc.partial,
            }, sort_keys=True, ensure_ascii=False))
        else:
            if caveat:
                print(caveat, file=sys.stderr)
            print(_pid_cross_table(label, scheme, sources, args.target, exc))
        return 1
    if caveat and not args.json:
        print(caveat, file=sys.stderr)
    payload = {"source": label, "sources": list(sources), "target": args.target,
               **pid.to_json_dict()}
    return _emit(args, _pid_table(label, scheme, sources, args.target, pid), payload)


def _cmd_broja(args) -> int:
    d, label = _load(args)
    cfg = _config(args)
    sources = tuple(args.sources.split(","))
    if len(sources) != 2:
        raise SkarpidError(f"--sources expects two comma-separated names, got {args.sources!r}")
    result = broja_minimize(d, sources, args.target, cfg)
    report = broja_intermediate_entropy_report(d, sources, args.target, cfg)
    text = "\n".join([
        _pid_table(label, PidScheme.BROJA, sources, args.target, result.pid),
        f"  min I({sources[0]},{sources[1]}:{args.target}) = {result.min_mi:.4f}",
        f"  entropies: original {report['h_original']:.4f}, "
        f"minimizer {report['h_broja']:.4f}, maxent {report['h_maxent']:.4f}",
        "  minimizer support:",
        *(f"    {' '.join(o)}  {p:.6f}" for o, p in result.q_star.items()),
    ])
    payload = {"source": label, **result.to_json_dict(), "entropies": report}
    return _emit(args, text, payload)


def _cmd_maxent(args) -> int:
    d, label = _load(args)
    cfg = _config(args)
    if not args.pin:
        raise SkarpidError("provide at least one --pin SET (e.g. --pin S0,T)")
    sets = tuple(tuple(s.split(",")) for s in args.pin)
    poly = MarginalPolytope(d, sets)
    result = maxent_with_marginals(poly, cfg)
    text = "\n".join([
        f"maximum-entropy distribution for {label} with pinned "
        f"{'; '.join(','.join(s) for s in poly.constraint_sets)}",
        f"  entropy: {entropy(result):.4f}  (base {entropy(d):.4f})",
        *(f"    {' '.join(o)}  {p:.6f}" for o, p in result.items()),
    ])
    payload = {
        "source": label,
        "constraints": [list(s) for s in poly.constraint_sets],
        "entropy": entropy(result),
        "distribution": result.to_json_dict(),
    }
    return _emit(args, text, payload)


def _cmd_connected(args) -> int:
    d, label = _load(args)
    cfg = _config(args)
    value = connected_information(d, args.order, cfg)
    text = f"connected information of order {args.order} for {label}: {value:.4f}"
    return _emit(args, text, {"source": label, "order": args.order, "value": value})


def _cmd_catalog(args) -> int:
    if args.name:
        d = catalog.get(args.name, _parse_params(args.param))
        text = "\n".join([
            f"catalog entry {args.name}: {len(d)} outcomes over {', '.join(d.variables)}",
            *(f"  {' '.join(o)}  {p:.6f}" for o, p in d.items()),
        ])
        return _emit(args, text, {"name": args.name, "distribution": d.to_json_dict()})
    lines = []
    records = []
    for e in catalog.entries():
        params = ", ".join(
            f"{k} in [{s.low:g}, {s.high:g}] (default {s.default:g})"
            for k, s in e.parameters.items()
        ) or "none"
        lines.append(f"{e.name:17s} {e.description}")
        lines.append(f"{'':17s} parameters: {params}")
        records.append({
            "name": e.name,
            "description": e.description,
            "parameters": {
                k: {"default": s.default, "low": s.low, "high": s.high, "doc": s.doc}
                for k, s in e.parameters.items()
            },
        })
    return _emit(args, "\n".join(lines), {"entries": records})


# -------------------------------------------------------------------- parser


def _add_source_opts(sub):
    sub.add_argument("--dist", help="distribution JSON file")
    sub.add_argument("--catalog", help="catalog entry name")
    sub.add_argument("--param", action="append", metavar="K=V",
                     help="catalog parameter (repeatable)")
    sub.add_argument("--json", action="store_true", help="structured output")


def _add_optimizer_opts(sub):
    sub.add_argument("--restarts", type=int, help="random restarts (default 64)")
    sub.add_argument("--seed", type=int, help="restart seed (default 0)")
    sub.add_argument("--tol", type=float,
                     help="result/consistency tolerance (default 1e-3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skarpid",
        description="partial information decomposition via secret key agreement rates",
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("info", help="entropies and mutual informations")
    _add_source_opts(p)
    p.add_argument("--sweep", metavar="K=A:B:STEP", help="sweep a catalog parameter")
    p.set_defaults(handler=_cmd_info)

    p = cmds.add_parser("skar", help="secret key agreement rates")
    _add_source_opts(p)
    _add_optimizer_opts(p)
    p.add_argument("--party-a", required=True, help="Alice's variable(s)")
    p.add_argument("--party-b", required=True, help="Bob's variable(s)")
    p.add_argument("--eve", required=True, help="eavesdropper variable(s)")
    p.add_argument("--mode", default="two-way",
                   choices=["none", "one-way-a", "one-way-b", "two-way", "intrinsic"])
    p.add_argument("--ebar-size", type=int,
                   help="output alphabet size for the intrinsic-MI channel")
    p.add_argument("--sweep", metavar="K=A:B:STEP", help="sweep a catalog parameter")
    p.set_defaults(handler=_cmd_skar)

    p = cmds.add_parser("pid", help="partial information decomposition")
    _add_source_opts(p)
    _add_optimizer_opts(p)
    p.add_argument("--sources", required=True, metavar="S0,S1")
    p.add_argument("--target", required=True)
    p.add_argument("--scheme", default="elephant",
                   choices=[s.value for s in PidScheme])
    p.set_defaults(handler=_cmd_pid)

    p = cmds.add_parser("broja", help="convex minimization over pinned source-target marginals")
    _add_source_opts(p)
    _add_optimizer_opts(p)
    p.add_argument("--sources", required=True, metavar="S0,S1")
    p.add_argument("--target", required=True)
    p.set_defaults(handler=_cmd_broja)

    p = cmds.add_parser("maxent", help="maximum entropy with pinned marginals")
    _add_source_opts(p)
    _add_optimizer_opts(p)
    p.add_argument("--pin", action="append", metavar="V1,V2",
                   help="pin this marginal (repeatable)")
    p.set_defaults(handler=_cmd_maxent)

    p = cmds.add_parser("connected", help="connected information of a given order")
    _add_source_opts(p)
    _add_optimizer_opts(p)
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(handler=_cmd_connected)

    p = cmds.add_parser("catalog", help="list or show catalog distributions")
    p.add_argument("name", nargs="?", help="entry to display")
    p.add_argument("--param", action="append", metavar="K=V")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SkarpidError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
