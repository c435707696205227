"""Command-line front end.

Subcommands: simulate, sample, paths, curve, coherent, scan, optimize,
report.  Exit codes: 0 success, 2 validation error, 3 engine
disagreement, 4 exact-arithmetic capacity exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import circuit as circuit_mod
from . import design, fock_oracle, path_engine, statistics
from .amplitude import CapacityError, to_float
from .circuit import CircuitError, HardyParams, build_double_mzi, build_hom, build_mzi
from .outcomes import Outcome
from .sources import Coherent, SinglePhoton, make_diagonal, source_from_dict

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DISAGREEMENT = 3
EXIT_CAPACITY = 4

AGREEMENT_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def _parse_grid(text: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise CliError(f"bad grid spec {text!r}, expected START:STOP:STEP") from exc
    if step <= 0:
        raise CliError("grid step must be positive")
    values = []
    x = start
    while x <= stop + 1e-12:
        values.append(min(x, stop))
        x += step
    return values


def _parse_complex(text: str) -> complex:
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    return complex(float(text), 0.0)


def _load_circuit(args):
    """Circuit plus default input sources for the chosen preset or file."""
    if args.circuit:
        try:
            with open(args.circuit) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read {args.circuit}: {exc}")
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.circuit}:{exc.lineno}: {exc.msg}")
        try:
            circ = circuit_mod.from_dict(doc)
        except (CircuitError, KeyError) as exc:
            raise CliError(f"{args.circuit}: {exc}")
        inputs = {}
        for port, spec in doc.get("sources", {}).items():
            inputs[port] = source_from_dict(spec)
        if not inputs:
            inputs = _default_two_photon_inputs(circ, args)
        return circ, inputs

    preset = args.preset or "hardy5050"
    if preset == "mzi":
        circ = build_mzi()
        return circ, {"src": SinglePhoton.of({"H": 1})}
    if preset == "hom":
        circ = build_hom()
    elif preset == "hardy5050":
        circ = build_double_mzi()
    elif preset == "hardy":
        params = HardyParams(
            R0=circuit_mod.parse_reflectivity(args.R0),
            Rc=circuit_mod.parse_reflectivity(args.Rc),
            Rm=circuit_mod.parse_reflectivity(args.Rm),
            Rf=circuit_mod.parse_reflectivity(args.Rf),
        )
        circ = build_double_mzi(params)
    else:
        raise CliError(f"unknown preset {preset!r}")
    return circ, _default_two_photon_inputs(circ, args)


def _default_two_photon_inputs(circ, args):
    order = circ.input_order()
    if len(order) != 2:
        raise CliError("circuit does not have exactly two inputs; "
                       "supply a sources block in the circuit file")
    overlap = getattr(args, "overlap", 1.0)
    return {order[0]: SinglePhoton.of({"H": 1}), order[1]: make_diagonal(overlap)}


def _write_output(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _rows_to_text(rows: list[dict]) -> str:
    if not rows:
        return "(empty)\n"
    cols = list(rows[0])
    table = [[_fmt(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in table)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    for row in table:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _emit_rows(args, rows: list[dict], extra: dict | None = None):
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        doc = {"rows": rows}
        if extra:
            doc.update(extra)
        _write_output(args, json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        _write_output(args, _rows_to_csv(rows))
    else:
        header = ""
        if extra:
            header = "".join(f"# {k}: {_fmt(v)}\n" for k, v in extra.items())
        _write_output(args, header + _rows_to_text(rows))


# ---------------------------------------------------------------------------
# Commands


def _distribution(circ, inputs, engine: str):
    if engine == "path":
        return path_engine.full_distribution(circ, inputs), None
    if engine == "fock":
        return fock_oracle.simulate(circ, inputs), None
    table = path_engine.full_distribution(circ, inputs)
    oracle = fock_oracle.simulate(circ, inputs)
    gap = table.max_discrepancy(oracle)
    if gap > AGREEMENT_TOL:
        raise CliError(
            f"engine disagreement: max |path - fock| = {gap:.3e} > {AGREEMENT_TOL}",
            code=EXIT_DISAGREEMENT,
        )
    return table, gap


def cmd_simulate(args) -> int:
    circ, inputs = _load_circuit(args)
    report = circuit_mod.validate(circ)
    if not report.ok:
        raise CliError("invalid circuit: " + "; ".join(report.errors))
    table, gap = _distribution(circ, inputs, args.engine)
    extra = {"engine": args.engine, "total": to_float(table.total())}
    if gap is not None:
        extra["max_engine_discrepancy"] = gap
    _emit_rows(args, table.rows(), extra)
    return EXIT_OK


def cmd_sample(args) -> int:
    circ, inputs = _load_circuit(args)
    report = statistics.study(circ, inputs, args.trials, args.seed,
                              args.confidence)
    _emit_rows(args, report.to_dicts(), {
        "trials": report.n_trials,
        "seed": report.seed,
        "confidence": report.confidence,
    })
    return EXIT_OK


def cmd_paths(args) -> int:
    circ, inputs = _load_circuit(args)
    rows = []
    for source in circ.input_order():
        for path in path_engine.enumerate_paths(circ, source):
            d = path.to_dict()
            d["steps"] = " ".join(f"{el}:{act[0]}" for el, act in path.steps)
            d["phase"] = f"i^{path.n_reflections}"
            rows.append(d)
    if args.format == "json":
        _write_output(args, json.dumps(rows, indent=2) + "\n")
    else:
        flat = [{
            "source": r["source"],
            "terminal": r["terminal"],
            "steps": r["steps"],
            "phase": r["phase"],
            "amp_re": r["amplitude"][0],
            "amp_im": r["amplitude"][1],
            "exact": str(r.get("amplitude_exact", "")),
        } for r in rows]
        if args.format == "csv":
            _write_output(args, _rows_to_csv(flat))
        else:
            _write_output(args, _rows_to_text(flat))
    return EXIT_OK


def cmd_curve(args) -> int:
    circ, _ = _load_circuit(args)
    grid = _parse_grid(args.grid)
    rows_out = []
    curve = path_engine.partial_distinguishability_curve(circ, grid)
    outcome_labels = sorted({o.label() for _, t in curve for o in t})
    for c, table in curve:
        row = {"overlap": c}
        for label in outcome_labels:
            row[label] = table.get_float(Outcome.parse(label))
        rows_out.append(row)
    _emit_rows(args, rows_out)
    return EXIT_OK


def cmd_coherent(args) -> int:
    circ, _ = _load_circuit(args)
    alpha = _parse_complex(args.alpha)
    order = circ.input_order()
    if len(order) != 2:
        raise CliError("coherent pipeline needs a two-input circuit")
    if args.beta is not None:
        beta = _parse_complex(args.beta)
        inputs = {order[0]: Coherent(alpha, args.n_max),
                  order[1]: Coherent(beta, args.n_max)}
        channels = fock_oracle.coherent_channel_probabilities(alpha, beta, args.n_max)
    else:
        beta = None
        inputs = {order[0]: SinglePhoton.of({"H": 1}),
                  order[1]: Coherent(alpha, args.n_max)}
        channels = {}
    table = fock_oracle.simulate(circ, inputs, n_max=2 * args.n_max)
    sector = fock_oracle.two_photon_sector(table)
    rows = sector.rows()
    extra = {"alpha": str(alpha), "two_photon_weight": sector.meta["sector_weight"]}
    if beta is not None:
        extra["beta"] = str(beta)
        extra.update(channels)
    _emit_rows(args, rows, extra)
    return EXIT_OK


def cmd_scan(args) -> int:
    fixed = {
        "Rc": circuit_mod.parse_reflectivity(args.Rc),
        "Rm": circuit_mod.parse_reflectivity(args.Rm),
        "Rf": circuit_mod.parse_reflectivity(args.Rf),
    }
    grid = _parse_grid(args.grid)
    params = [HardyParams(R0=r0, **fixed) for r0 in grid]
    _emit_rows(args, design.scan_rows(params))
    return EXIT_OK


def cmd_optimize(args) -> int:
    opt = design.maximize_p23()
    rows = [{
        "R0": float(opt.params.R0),
        "Rc": float(opt.params.Rc),
        "Rm": float(opt.params.Rm),
        "Rf": float(opt.params.Rf),
        "amplitude": opt.amplitude,
        "p23": opt.value,
    }]
    _emit_rows(args, rows)
    return EXIT_OK


def cmd_report(args) -> int:
    from . import report as report_mod

    circ, inputs = _load_circuit(args)
    base = args.out or "report"
    written = []
    if args.what == "distribution":
        table, _ = _distribution(circ, inputs, "both")
        with open(base + ".csv", "w") as fh:
            fh.write(_rows_to_csv(table.rows()))
        report_mod.plot_distribution(table, base + ".png",
                                     title="two-photon detection probabilities")
    elif args.what == "curve":
        grid = _parse_grid(args.grid)
        curve = path_engine.partial_distinguishability_curve(circ, grid)
        labels = sorted({o.label() for _, t in curve for o in t})
        rows = []
        for c, table in curve:
            row = {"overlap": abs(complex(c))}
            row.update({lb: table.get_float(Outcome.parse(lb)) for lb in labels})
            rows.append(row)
        with open(base + ".csv", "w") as fh:
            fh.write(_rows_to_csv(rows))
        report_mod.plot_curve(curve, labels, base + ".png",
                              title="probabilities vs distinguishability")
    else:
        study = statistics.study(circ, inputs, args.trials, args.seed,
                                 args.confidence)
        with open(base + ".csv", "w") as fh:
            fh.write(_rows_to_csv(study.to_dicts()))
        report_mod.plot_study(study, base + ".png",
                              title=f"sampling study, N={study.n_trials}")
    written.extend([base + ".csv", base + ".png"])
    sys.stdout.write("".join(f"wrote {p}\n" for p in written))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_circuit_flags(parser, overlap=True):
    parser.add_argument("--preset", choices=["mzi", "hom", "hardy5050", "hardy"])
    parser.add_argument("--circuit", metavar="FILE")
    parser.add_argument("--R0", default="1/2")
    parser.add_argument("--Rc", default="1/2")
    parser.add_argument("--Rm", default="1/2")
    parser.add_argument("--Rf", default="1/2")
    if overlap:
        parser.add_argument("--overlap", type=float, default=1.0,
                            help="internal-state overlap of the two photons")
        parser.add_argument("--identical", action="store_const", const=1.0,
                            dest="overlap", help="shorthand for --overlap 1")


def _add_output_flags(parser):
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fewphoton",
        description="Few-photon linear-optical interference simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="full two-photon outcome distribution")
    _add_circuit_flags(p)
    _add_output_flags(p)
    p.add_argument("--engine", choices=["path", "fock", "both"], default="both")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="seeded trial study with CP intervals")
    _add_circuit_flags(p)
    _add_output_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--confidence", type=float, default=0.95)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("paths", help="list all single-photon paths")
    _add_circuit_flags(p, overlap=False)
    _add_output_flags(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("curve", help="probabilities over an overlap grid")
    _add_circuit_flags(p, overlap=False)
    _add_output_flags(p)
    p.add_argument("--grid", default="0:1:0.05", metavar="START:STOP:STEP")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("coherent", help="weak-coherent-state input pipeline")
    _add_circuit_flags(p, overlap=False)
    _add_output_flags(p)
    p.add_argument("--alpha", default="0.1", metavar="RE[,IM]")
    p.add_argument("--beta", metavar="RE[,IM]",
                   help="second coherent input; omitted = single photon")
    p.add_argument("--n-max", type=int, default=2, dest="n_max")
    p.set_defaults(func=cmd_coherent)

    p = sub.add_parser("scan", help="reflectivity scan diagnostics")
    _add_output_flags(p)
    p.add_argument("--grid", default="0.05:0.95:0.05", metavar="START:STOP:STEP",
                   help="R0 grid")
    p.add_argument("--Rc", default="1/2")
    p.add_argument("--Rm", default="1")
    p.add_argument("--Rf", default="1/2")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="maximize the inner coincidence")
    _add_output_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("report", help="render figures + CSV for a run")
    _add_circuit_flags(p)
    p.add_argument("--what", choices=["study", "distribution", "curve"],
                   default="study")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--grid", default="0:1:0.05")
    p.add_argument("--out", metavar="BASE", help="output base path")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (CircuitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
