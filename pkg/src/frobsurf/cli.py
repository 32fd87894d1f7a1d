"""Command-line front end: every analysis as a subcommand.

Exit codes: 0 all assertions hold, 1 an assertion or bound check failed,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .bounds import compare, figure_csv, main_bound
from .errors import FrobsurfError
from .examples_data import JOBS, replay
from .frobsurface import analyze_surface, curve_in_phi, is_frobenius_classical, phi_curve
from .geometry import count_points, enumerate_points
from .jobfile import load_jobfile
from .orders import classify, profile_curve
from .poly import serialize
from .scan import ScanConfig, export_records, scan_conjecture, summarize

USAGE_ERROR = 2
CHECK_FAILED = 1


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-points", type=int, default=10 ** 8)
    p.add_argument("--max-ext", type=int, default=6)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frobsurf",
                                 description="Tangency curves of surfaces in P^3 "
                                             "over finite fields")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-fcs", help="Frobenius classicality of the job surface")
    p.add_argument("job")
    _add_common(p)

    p = sub.add_parser("phi", help="tangency curve report (degree, lines, counts)")
    p.add_argument("job")
    p.add_argument("--ext-budget", type=int, default=2)
    p.add_argument("--no-lines", action="store_true")
    _add_common(p)

    p = sub.add_parser("points", help="count (or list) points of a named system")
    p.add_argument("job")
    p.add_argument("--name", default=None, help="curve name; default the surface")
    p.add_argument("--ext", type=int, default=1)
    p.add_argument("--list", action="store_true")
    _add_common(p)

    p = sub.add_parser("orders", help="order profile of a named curve")
    p.add_argument("job")
    p.add_argument("--name", required=True)
    _add_common(p)

    p = sub.add_parser("classify", help="curve position w.r.t. the surface tangency curve")
    p.add_argument("job")
    p.add_argument("--name", required=True)
    _add_common(p)

    p = sub.add_parser("bound", help="main point-count bound floor(delta*(d+q-1)/2)")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("compare", help="all bounds at (delta, d, q) or a CSV sweep")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--nu1", type=int, default=1)
    p.add_argument("--nu2", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("scan", help="scan a surface family and emit JSONL records")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--ext-budget", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume-after", type=str, default=None)
    p.add_argument("--max-surfaces", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("replay-example", help="run a bundled scenario and assert its outcomes")
    p.add_argument("example", choices=sorted(JOBS))
    _add_common(p)
    return ap


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True)
    else:
        out = text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + ("\n" if not out.endswith("\n") else ""))
    else:
        print(out)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except FrobsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "check-fcs":
        job = load_jobfile(args.job)
        S = job.surface()
        fc = is_frobenius_classical(S)
        report = analyze_surface(S, ext_budget=2, budget=args.budget_points,
                                 extract_lines=False)
        _emit(args, report.to_json(),
              f"surface {job.surface_name} over GF({S.field.order}): "
              f"{'Frobenius classical' if fc else 'Frobenius non-classical'}")
        return 0

    if cmd == "phi":
        job = load_jobfile(args.job)
        S = job.surface()
        report = analyze_surface(S, ext_budget=args.ext_budget,
                                 budget=args.budget_points,
                                 extract_lines=not args.no_lines)
        lines = [f"surface {job.surface_name}: degree {S.d} over GF({S.field.order})",
                 f"frobenius_classical: {report.frobenius_classical}"]
        if report.frobenius_classical:
            phi = phi_curve(S)
            lines.append(f"tangency curve degree: {report.phi_degree}")
            lines.append("system: " + "; ".join(serialize(g) for g in phi.polys))
        for k, n in report.point_counts.items():
            lines.append(f"points over extension {k}: {n}")
        if not args.no_lines and report.frobenius_classical:
            lines.append(f"rational lines contained: {len(report.contained_lines)}")
            for L in report.contained_lines:
                lines.append(f"  {L.key()}")
            lines.append(f"residual degree: {report.residual_degree}")
        _emit(args, report.to_json(), "\n".join(lines))
        return 0

    if cmd == "points":
        job = load_jobfile(args.job)
        polys = [job.surface_poly] if args.name is None else list(job.curve(args.name).polys)
        n = count_points(polys, args.ext, budget=args.budget_points)
        name = args.name or job.surface_name
        if args.list:
            pts = enumerate_points(polys, args.ext, budget=args.budget_points)
            text = "\n".join([f"{name} over extension {args.ext}: {n} points"]
                             + [repr(P) for P in pts])
            _emit(args, {"name": name, "ext": args.ext, "count": n,
                         "points": [repr(P) for P in pts]}, text)
        else:
            _emit(args, {"name": name, "ext": args.ext, "count": n},
                  f"{name} over extension {args.ext}: {n} points")
        return 0

    if cmd == "orders":
        job = load_jobfile(args.job)
        C = job.curve(args.name)
        profile = profile_curve(C, trials=args.trials, max_ext=args.max_ext,
                                seed=args.seed, budget=args.budget_points)
        text = [f"curve {args.name} (seed {args.seed})",
                f"degenerate: {profile.degenerate}"]
        if not profile.degenerate:
            text += [f"generic orders: {profile.eps}",
                     f"frobenius orders: {profile.nu}",
                     f"deleted index: {profile.deleted_index}",
                     f"classical: {profile.classical}",
                     f"frobenius_classical: {profile.frobenius_classical}"]
        for note in profile.notes:
            text.append(f"note: {note}")
        for alert in profile.alerts:
            text.append(f"ALERT: {alert}")
        _emit(args, profile.to_json(), "\n".join(text))
        return CHECK_FAILED if profile.alerts else 0

    if cmd == "classify":
        job = load_jobfile(args.job)
        S = job.surface()
        C = job.curve(args.name)
        report = classify(C, S, trials=args.trials, max_ext=args.max_ext,
                          seed=args.seed, budget=args.budget_points)
        profile = report["profile"]
        payload = {"profile": profile.to_json(), "prediction": report["prediction"],
                   "verdict": report["verdict"], "discrepancy": report["discrepancy"]}
        text = [f"curve {args.name} on surface {job.surface_name} (seed {args.seed})",
                f"prediction: {report['prediction']}",
                f"containment verdict: {report['verdict']}"]
        if report["discrepancy"]:
            text.append("DISCREPANCY between prediction and verdict")
        for alert in profile.alerts:
            text.append(f"ALERT: {alert}")
        _emit(args, payload, "\n".join(text))
        return CHECK_FAILED if (report["discrepancy"] or profile.alerts) else 0

    if cmd == "bound":
        exact, floor = main_bound(args.delta, args.d, args.q)
        _emit(args, {"exact": f"{exact.numerator}/{exact.denominator}", "floor": floor},
              str(floor))
        return 0

    if cmd == "compare":
        if args.delta is None:
            csv = figure_csv(args.q, args.d)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(csv)
            else:
                print(csv, end="")
            return 0
        report = compare(args.delta, args.d, args.q, g=args.genus,
                         nu=(args.nu1, args.nu2))
        text = [f"bounds at delta={args.delta}, d={args.d}, q={args.q} "
                f"(genus bound {report.genus_bound})",
                f"main: {report.main_exact} (floor {report.main_floor})",
                f"homma: {report.homma}",
                f"stohr_voloch: {report.stohr_voloch}",
                f"serre_weil: {report.serre_weil}",
                f"winner: {'+'.join(report.winners)}"]
        text += [f"note: {n}" for n in report.notes]
        _emit(args, report.to_json(), "\n".join(text))
        return 0

    if cmd == "scan":
        config = ScanConfig(p=args.p, e=args.e, d=args.degree,
                            point_budget=args.budget_points,
                            ext_budget=args.ext_budget, seed=args.seed,
                            resume_after_key=args.resume_after,
                            max_surfaces=args.max_surfaces)
        records = scan_conjecture(config, jobs=args.jobs)
        if args.out:
            collected = []

            def tee():
                for rec in records:
                    collected.append(rec)
                    yield rec

            n = export_records(tee(), args.out)
            summ = summarize(collected)
        else:
            collected = list(records)
            for rec in collected:
                print(json.dumps(rec))
            n = len(collected)
            summ = summarize(collected)
        print(f"scanned {n} surfaces (seed {args.seed}): {json.dumps(summ, sort_keys=True)}",
              file=sys.stderr)
        return CHECK_FAILED if summ["alerts"] else 0

    if cmd == "replay-example":
        result = replay(args.example, seed=args.seed, budget=args.budget_points)
        _emit(args, result.to_json(), result.render())
        return 0 if result.ok else CHECK_FAILED

    raise AssertionError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
