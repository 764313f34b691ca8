"""Command-line front end: validate, run, fss, synth.

File formats (UTF-8 CSV, comma-separated, header row):

  roster.csv        researcher_id,year,university_id,sds_code,uda_code,rank
  publications.csv  pub_id,year,citations,subject_categories (semicolon-joined)
  authorships.csv   pub_id,position,university_id,researcher_id (last two optional)
  salaries.csv      rank,weight

``run`` writes mobility_summary.csv, recruitment.csv, turnover.csv,
mobility.csv, correlations.csv, productivity.csv, and manifest.json into
the output directory. Ratio indicators are serialized with 2 decimals,
share indicators as percentages with 1 decimal, percentile ranks as
integers; identical inputs and config give byte-identical reports.

Exit codes: 0 success, 1 data error, 2 I/O or usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import _kernels, __version__
from .indicators import EffectivenessReport, FullReport, full_report
from .mobility import build_cohorts, derive_events, summarize_mobility
from .model import (
    AssessmentConfig,
    ConfigError,
    Dataset,
    DataQualityIssue,
    LoadResult,
    load_dataset,
    load_salary_weights,
    restrict_to_bibliometric,
)
from .scoring import build_scores, university_productivity
from .stats import correlation_matrix
from .synth import SynthSpec, generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="facultymetrics",
        description=(
            "Field-normalized research productivity and university "
            "recruitment/turnover effectiveness reports"
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p: argparse.ArgumentParser) -> None:
        p.add_argument("--roster", required=True, help="roster CSV path")
        p.add_argument("--pubs", required=True, help="publications CSV path")
        p.add_argument("--authors", required=True, help="authorships CSV path")
        p.add_argument("--salaries", help="rank,weight CSV overriding config salary weights")
        p.add_argument("--config", help="assessment config JSON")
        p.add_argument(
            "--period", nargs=2, type=int, metavar=("START", "END"),
            help="assessment window, overrides the config",
        )
        p.add_argument(
            "--no-positional-credit", action="store_true",
            help="split co-authorship credit equally everywhere",
        )

    p_validate = sub.add_parser("validate", help="check input files, list all data-quality issues")
    add_inputs(p_validate)

    p_run = sub.add_parser("run", help="run the full pipeline and write all reports")
    add_inputs(p_run)
    p_run.add_argument("--out", required=True, help="output directory")

    p_fss = sub.add_parser("fss", help="write per-researcher productivity")
    add_inputs(p_fss)
    p_fss.add_argument("--out", required=True, help="output CSV path")

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--spec", required=True, help="synthesis spec JSON")
    p_synth.add_argument("--out", required=True, help="output directory")
    return parser


def _resolve_config(args) -> AssessmentConfig:
    if args.config:
        config = AssessmentConfig.from_json(args.config)
    elif args.period:
        config = AssessmentConfig(period_start=args.period[0], period_end=args.period[1])
    else:
        raise ConfigError("an assessment period is required (--config or --period)")
    updates: dict = {}
    if args.period:
        updates["period_start"], updates["period_end"] = args.period
    if args.salaries:
        updates["salary_weights"] = load_salary_weights(args.salaries)
    if args.no_positional_credit:
        updates["force_equal_credit"] = True
    return dataclasses.replace(config, **updates) if updates else config


def _apply_thread_cap() -> None:
    raw = os.environ.get("FACULTYMETRICS_THREADS", "").strip()
    if not raw:
        return
    try:
        _kernels.set_thread_cap(int(raw))
    except ValueError:
        print(f"warning: ignoring invalid FACULTYMETRICS_THREADS={raw!r}", file=sys.stderr)


def _load(args) -> LoadResult:
    config = _resolve_config(args)
    return load_dataset(args.roster, args.pubs, args.authors, config)


def _print_issues(issues) -> None:
    for issue in issues:
        print(str(issue))


def cmd_validate(args) -> int:
    result = _load(args)
    _print_issues(result.issues)
    n_err = sum(1 for i in result.issues if i.severity == "error")
    n_warn = len(result.issues) - n_err
    print(f"{n_err} error(s), {n_warn} warning(s)")
    return 0 if result.ok else 1


@dataclasses.dataclass
class PipelineResult:
    dataset: Dataset
    restricted: Dataset
    bibliometric: frozenset[str]
    events: tuple
    cohorts: dict
    summaries: tuple
    scores: object
    report: FullReport
    productivity: dict[str, float]
    matrix: object | None
    issues: tuple[DataQualityIssue, ...]


def run_pipeline(dataset: Dataset, config: AssessmentConfig) -> PipelineResult:
    from .model import classify_bibliometric_sds

    issues: list[DataQualityIssue] = []
    bibliometric, cls_issues = classify_bibliometric_sds(dataset, config)
    issues.extend(cls_issues)
    restricted, res_issues = restrict_to_bibliometric(dataset, bibliometric)
    issues.extend(res_issues)

    events, ev_issues = derive_events(restricted, config.period)
    issues.extend(ev_issues)
    cohorts, co_issues = build_cohorts(events, restricted, config)
    issues.extend(co_issues)
    summaries = summarize_mobility(cohorts, restricted)

    scores = build_scores(restricted, config)
    issues.extend(scores.issues)
    report = full_report(restricted, config, scores=scores, cohorts=cohorts)
    issues.extend(report.issues)
    productivity = university_productivity(restricted, scores)
    matrix = correlation_matrix(report.rows, productivity) if len(report.rows) >= 3 else None
    return PipelineResult(
        dataset=dataset,
        restricted=restricted,
        bibliometric=bibliometric,
        events=events,
        cohorts=cohorts,
        summaries=summaries,
        scores=scores,
        report=report,
        productivity=productivity,
        matrix=matrix,
        issues=tuple(issues),
    )


def _fmt(value, decimals: int) -> str:
    return "" if value is None else f"{value:.{decimals}f}"


def _fmt_share(value) -> str:
    return "" if value is None else f"{100.0 * value:.1f}"


def _fmt_rank(value) -> str:
    return "" if value is None else str(value)


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _indicator_table(
    rows: tuple[EffectivenessReport, ...],
    total: EffectivenessReport | None,
    fields: tuple[str, str, str, str],
) -> tuple[list[str], list[list[str]]]:
    """Ranking-table shape: university, value/rank pairs, sorted by the
    leading (x1.1) indicator, national totals last."""
    lead = fields[0]
    header = ["university"]
    for name in fields:
        header.append(name)
        header.append(f"{name}_rank_pct")

    def sort_key(row):
        v = row.value(lead)
        return (0, -v, row.university_id) if v is not None else (1, 0.0, row.university_id)

    body = []
    for row in sorted(rows, key=sort_key):
        cells = [row.university_id]
        for name in fields:
            value = row.value(name)
            is_share = name.endswith("2")
            cells.append(_fmt_share(value) if is_share else _fmt(value, 2))
            cells.append(_fmt_rank(row.percentiles.get(name)))
        body.append(cells)
    if total is not None:
        cells = [total.university_id]
        for name in fields:
            value = total.value(name)
            is_share = name.endswith("2")
            cells.append(_fmt_share(value) if is_share else _fmt(value, 2))
            cells.append("")
        body.append(cells)
    return header, body


def write_reports(result: PipelineResult, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    header = [
        "uda_code", "incumbents", "recruits", "recruits_pct",
        "turnover", "turnover_pct", "total_mobility", "total_pct",
    ]
    rows = []
    tot = {"incumbents": 0, "recruits": 0, "turnover": 0, "total_mobility": 0}
    for s in result.summaries:
        rows.append([
            s.uda_code, str(s.incumbents),
            str(s.recruits), f"{s.recruits_pct:.1f}",
            str(s.turnover), f"{s.turnover_pct:.1f}",
            str(s.total_mobility), f"{s.total_pct:.1f}",
        ])
        tot["incumbents"] += s.incumbents
        tot["recruits"] += s.recruits
        tot["turnover"] += s.turnover
        tot["total_mobility"] += s.total_mobility
    if rows:
        inc = tot["incumbents"]
        pct = lambda x: f"{100.0 * x / inc:.1f}" if inc else "0.0"  # noqa: E731
        rows.append([
            "TOTAL", str(inc),
            str(tot["recruits"]), pct(tot["recruits"]),
            str(tot["turnover"]), pct(tot["turnover"]),
            str(tot["total_mobility"]), pct(tot["total_mobility"]),
        ])
    path = out_dir / "mobility_summary.csv"
    _write_csv(path, header, rows)
    written.append(path)

    for filename, fields in (
        ("recruitment.csv", ("r11", "r12", "r21", "r22")),
        ("turnover.csv", ("t11", "t12", "t21", "t22")),
        ("mobility.csv", ("m11", "m12", "m21", "m22")),
    ):
        header, body = _indicator_table(result.report.rows, result.report.total, fields)
        path = out_dir / filename
        _write_csv(path, header, body)
        written.append(path)

    path = out_dir / "correlations.csv"
    if result.matrix is not None:
        labels = list(result.matrix.labels)
        header = ["rho"] + labels
        body = []
        for i, row_label in enumerate(labels):
            cells = [row_label]
            for j in range(len(labels)):
                if i > j:
                    cells.append(_fmt(result.matrix.rho[(i, j)], 2))
                else:
                    cells.append("")
            body.append(cells)
        body.append(["n_pairwise"] + labels)
        for i, row_label in enumerate(labels):
            cells = [row_label]
            for j in range(len(labels)):
                cells.append(str(result.matrix.n[(i, j)]) if i > j else "")
            body.append(cells)
        _write_csv(path, header, body)
    else:
        _write_csv(path, ["rho"], [])
    written.append(path)

    header = ["university_id", "n_professors", "productivity"]
    start, end = result.restricted.config.period
    counts: dict[str, set[str]] = {}
    ds = result.restricted
    for i in range(ds.roster_year.shape[0]):
        year = int(ds.roster_year[i])
        if start <= year <= end:
            counts.setdefault(ds.universities[ds.roster_uni[i]], set()).add(
                ds.researchers[ds.roster_res[i]]
            )
    rows = [
        [uni, str(len(counts[uni])), f"{value:.4f}"]
        for uni, value in sorted(
            result.productivity.items(), key=lambda kv: (-kv[1], kv[0])
        )
    ]
    path = out_dir / "productivity.csv"
    _write_csv(path, header, rows)
    written.append(path)
    return written


def _digest_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(result: PipelineResult, args, out_dir: Path) -> Path:
    config_json = json.dumps(
        result.restricted.config.to_dict(), sort_keys=True, separators=(",", ":")
    )
    manifest = {
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config_digest": hashlib.sha256(config_json.encode()).hexdigest(),
        "input_digests": {
            "roster": _digest_file(args.roster),
            "publications": _digest_file(args.pubs),
            "authorships": _digest_file(args.authors),
            **({"salaries": _digest_file(args.salaries)} if args.salaries else {}),
        },
        "counts": {
            "universities": len(
                {
                    result.restricted.universities[u]
                    for u in result.restricted.roster_uni.tolist()
                }
            ),
            "researchers": result.restricted.n_researchers,
            "publications": result.restricted.n_publications,
            "events": len(result.events),
            "eligible_universities": len(result.report.rows),
        },
    }
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def cmd_run(args) -> int:
    result = _load(args)
    _print_issues(result.issues)
    if not result.ok:
        print("aborting: input data has errors", file=sys.stderr)
        return 1
    pipeline = run_pipeline(result.dataset, result.dataset.config)
    _print_issues(pipeline.issues)
    out_dir = Path(args.out)
    written = write_reports(pipeline, out_dir)
    written.append(write_manifest(pipeline, args, out_dir))
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_fss(args) -> int:
    result = _load(args)
    _print_issues(result.issues)
    if not result.ok:
        print("aborting: input data has errors", file=sys.stderr)
        return 1
    restricted, issues = restrict_to_bibliometric(result.dataset)
    _print_issues(issues)
    scores = build_scores(restricted)
    _print_issues(scores.issues)
    header = [
        "researcher_id", "sds_code", "rank", "t",
        "fss", "fss_salary_norm", "percentile", "fss_ratio",
    ]
    rows = []
    for record in scores.records():
        rows.append([
            record.researcher_id, record.sds_code, record.rank, str(record.t),
            f"{record.fss:.6f}", f"{record.fss_salary_norm:.6f}",
            _fmt_rank(record.percentile),
            "" if record.fss_ratio is None else f"{record.fss_ratio:.6f}",
        ])
    out = Path(args.out)
    if out.parent:
        out.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out, header, rows)
    print(f"wrote {out}")
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec.from_json(args.spec)
    paths = generate(spec, args.out)
    for path in paths.values():
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_thread_cap()
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "fss":
            return cmd_fss(args)
        if args.command == "synth":
            return cmd_synth(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
