"""Single command-line entry point wiring the pipeline stages together.

Subcommands mirror the pipeline: classify, rtt-eval, rank, filter,
augment, transliterate, mix, align-check, merge, sweep, average, score,
judge-aggregate, report. Exit codes: 0 success, 1 contract violation,
2 I/O or backend failure, 64 usage error. Every run writes a manifest
(config fingerprint, seed, versions) and emits structured one-line JSON
log events on stderr.
"""

import argparse
import json
import os
import sys
import time

from . import __version__, aggregate, align, atlas, refinery, rtt
from .backends import (
    BackendConfig,
    BackendKind,
    CachingBackend,
    build_backend,
)
from .cache import TranslationCache
from .errors import ByolkitError, ContractViolation, InputFormatError, PipelineIOError
from .merge import MergeRecipe, SweepSpec, average_checkpoints, lambda_merge, merge, sweep
from .provenance import build_manifest, stage_seed, write_manifest
from .tensorfile import load_checkpoint, save_checkpoint

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def log_event(stage, **fields):
    print(json.dumps({"stage": stage, **fields}, sort_keys=True), file=sys.stderr)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise PipelineIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON: {exc}") from exc


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, sort_keys=True, ensure_ascii=False, indent=2)
        handle.write("\n")


def _write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def _read_jsonl(path):
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise InputFormatError(f"invalid JSON: {exc.msg}", line_number=line_number) from exc
    return rows


class PipelineConfig:
    """Shared configuration: a JSON file, overridable by flags."""

    def __init__(self, payload=None, base_dir="."):
        self.payload = payload or {}
        self.base_dir = base_dir

    @classmethod
    def load(cls, path):
        config = cls(_read_json(path), base_dir=os.path.dirname(os.path.abspath(path)))
        config.validate()
        return config

    def validate(self):
        for label, path in self.payload.get("paths", {}).items():
            if not os.path.exists(self._resolve(path)):
                raise ContractViolation(f"configured path {label!r} does not resolve: {path}")
        for name, backend_payload in self.payload.get("backends", {}).items():
            self._backend_config(name, backend_payload)

    def _resolve(self, path):
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def _backend_config(self, name, payload):
        try:
            kind = BackendKind(payload.get("kind", "http"))
        except ValueError:
            raise ContractViolation(
                f"backend {name!r}: unknown kind {payload.get('kind')!r}"
            ) from None
        mapping_path = payload.get("mapping_path")
        if mapping_path:
            mapping_path = self._resolve(mapping_path)
        return BackendConfig(
            kind=kind,
            name=name,
            endpoint=payload.get("endpoint"),
            auth_env_var=payload.get("auth_env_var"),
            mapping_path=mapping_path,
            timeout=payload.get("timeout", 30.0),
            max_in_flight=payload.get("max_in_flight", 4),
            batch_size=payload.get("batch_size", 32),
        )

    @property
    def seed(self):
        return int(self.payload.get("seed", 0))

    @property
    def report_dir(self):
        return self.payload.get("report_dir", ".")

    def tier_thresholds(self):
        section = self.payload.get("tier_thresholds")
        if not section:
            return atlas.DEFAULT_THRESHOLDS
        return atlas.TierThresholds(
            extreme_low_max=int(section["extreme_low_max"]),
            low_max=int(section["low_max"]),
            mid_max=int(section["mid_max"]),
        )

    def filter_config(self):
        section = self.payload.get("filter", {})
        return refinery.FilterConfig(
            min_tokens=section.get("min_tokens", 3),
            max_tokens=section.get("max_tokens", 256),
            max_char_ratio=section.get("max_char_ratio", 1.3),
            dedup=section.get("dedup", True),
        )

    def cache_dir(self):
        return os.environ.get("BYOLKIT_CACHE_DIR") or self.payload.get("cache_dir")

    def resolve_backend(self, name):
        """Backend by configured name, builtin kind, or file:PATH shorthand."""
        configured = self.payload.get("backends", {})
        if name in configured:
            return build_backend(self._backend_config(name, configured[name]))
        if name.startswith("file:"):
            return build_backend(
                BackendConfig(kind=BackendKind.FILE, mapping_path=name[len("file:") :])
            )
        try:
            kind = BackendKind(name)
        except ValueError:
            raise ContractViolation(
                f"unknown backend {name!r}; configure it under \"backends\" or use "
                f"one of {sorted(k.value for k in BackendKind if k is not BackendKind.HTTP and k is not BackendKind.FILE)} "
                f"or file:PATH"
            ) from None
        if kind in (BackendKind.HTTP, BackendKind.FILE):
            raise ContractViolation(f"backend kind {name!r} needs a configuration entry")
        return build_backend(BackendConfig(kind=kind))


def _finish(args, config, subcommand, extra_config=None, counts=None, started=None):
    """Write the run manifest and emit the closing log event."""
    effective = {
        "config": config.payload,
        "args": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
    }
    if extra_config:
        effective["extra"] = extra_config
    manifest = build_manifest(subcommand, effective, args.seed if args.seed is not None else config.seed)
    manifest_path = args.manifest or os.path.join(config.report_dir, f"{subcommand}.manifest.json")
    os.makedirs(os.path.dirname(manifest_path) or ".", exist_ok=True)
    write_manifest(manifest_path, manifest)
    event = {"duration_ms": round(1000 * (time.monotonic() - started), 3)} if started else {}
    log_event(subcommand, status="ok", **event, **(counts or {}))


def _effective_seed(args, config, subcommand):
    base = args.seed if args.seed is not None else config.seed
    return stage_seed(base, subcommand)


# ---------------------------------------------------------------- classify


def _load_profiles(path):
    profiles = []
    if path.endswith((".tsv", ".tab")):
        with open(path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                columns = line.split("\t")
                if len(columns) < 3:
                    raise InputFormatError(
                        "expected code, name, word_count[, speaker_population]",
                        line_number=line_number,
                    )
                speakers = (
                    int(columns[3]) if len(columns) > 3 and columns[3] not in ("", "-") else None
                )
                profiles.append(
                    atlas.LanguageProfile(
                        code=columns[0],
                        name=columns[1],
                        word_count=int(columns[2]),
                        speaker_population=speakers,
                    )
                )
    else:
        for row in _read_jsonl(path):
            profiles.append(
                atlas.LanguageProfile(
                    code=row["code"],
                    name=row.get("name", row["code"]),
                    word_count=int(row["word_count"]),
                    speaker_population=row.get("speaker_population"),
                    script=row.get("script"),
                )
            )
    return profiles


def cmd_classify(args, config):
    started = time.monotonic()
    thresholds = config.tier_thresholds()
    profiles = _load_profiles(args.profiles)
    report = atlas.atlas_report(profiles, thresholds)
    print(report.to_table())
    if args.out_rows:
        _write_jsonl(args.out_rows, report.rows)
    _finish(args, config, "classify", counts={"languages": len(report.rows)}, started=started)
    return EXIT_OK


# ---------------------------------------------------------------- rtt-eval


def cmd_rtt_eval(args, config):
    started = time.monotonic()
    benchmark = rtt.load_benchmark(args.benchmark, pivot_language=args.pivot_lang)
    forward = config.resolve_backend(args.forward)
    backward = config.resolve_backend(args.backward)
    cache_dir = args.cache_dir or config.cache_dir()
    if cache_dir:
        cache = TranslationCache(cache_dir)
        forward = CachingBackend(forward, cache)
        backward = CachingBackend(backward, cache)
    report = rtt.run_round_trip(
        benchmark,
        forward,
        backward,
        metrics=tuple(args.metrics.split(",")),
        concurrency_limit=args.concurrency,
        corpus_bleu_within_domain=args.corpus_bleu,
        target_language=args.target_lang,
        retry=rtt.RetryPolicy(backoff_base=args.retry_backoff),
    )
    with open(args.out, "wb") as handle:
        handle.write(report.to_json_bytes())
    if args.transcript:
        _write_jsonl(args.transcript, report.transcript)
    print(report.to_table())
    _finish(
        args,
        config,
        "rtt-eval",
        counts={
            "sentences": benchmark.sentence_count,
            "failures": sum(report.failure_counts.values()),
        },
        started=started,
    )
    return EXIT_OK


def cmd_rank(args, config):
    started = time.monotonic()
    reports = [rtt.RttReport.from_dict(_read_json(path)) for path in args.reports]
    ranking = rtt.rank_backends(reports)
    _write_json(args.out, ranking)
    print(rtt.render_ranking(ranking))
    _finish(args, config, "rank", counts={"reports": len(reports)}, started=started)
    return EXIT_OK


# ---------------------------------------------------------------- refinery


def _load_pairs(path):
    if path.endswith(".jsonl"):
        return refinery.load_pairs_jsonl(path)
    return refinery.load_pairs_tsv(path)


def _write_pairs(pairs, path):
    if path.endswith(".jsonl"):
        refinery.write_pairs_jsonl(pairs, path)
        return
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(f"{pair.source}\t{pair.target}\n")


def cmd_filter(args, config):
    started = time.monotonic()
    filter_config = config.filter_config()
    if args.min_tokens is not None or args.max_tokens is not None or args.max_char_ratio is not None:
        filter_config = refinery.FilterConfig(
            min_tokens=args.min_tokens if args.min_tokens is not None else filter_config.min_tokens,
            max_tokens=args.max_tokens if args.max_tokens is not None else filter_config.max_tokens,
            max_char_ratio=(
                args.max_char_ratio if args.max_char_ratio is not None else filter_config.max_char_ratio
            ),
            dedup=filter_config.dedup,
        )
    pairs = _load_pairs(args.pairs)
    result = refinery.filter_pairs(pairs, filter_config)
    _write_pairs(result.kept, args.out_kept)
    _write_jsonl(
        args.out_rejected,
        [
            {"index": r.index, "reason": r.reason.value, "detail": r.detail}
            for r in result.rejections
        ],
    )
    _finish(
        args,
        config,
        "filter",
        counts={"kept": len(result.kept), "rejected": len(result.rejections)},
        started=started,
    )
    return EXIT_OK


def cmd_augment(args, config):
    started = time.monotonic()
    seed = _effective_seed(args, config, "augment")
    augment_config = refinery.AugmentationConfig(
        p_punct_removal=args.p_punct_removal,
        p_diacritic_strip=args.p_diacritic_strip,
        p_case_variation=args.p_case_variation,
        p_copy=args.p_copy,
        seed=seed,
    )
    pairs = _load_pairs(args.pairs)
    augmented = [
        refinery.augment_pair(pair, augment_config, index) for index, pair in enumerate(pairs)
    ]
    _write_pairs(augmented, args.out)
    _finish(args, config, "augment", counts={"pairs": len(augmented)}, started=started)
    return EXIT_OK


def cmd_transliterate(args, config):
    started = time.monotonic()
    table = refinery.TransliterationTable.from_tsv(args.table)
    count = 0
    with open(args.infile, encoding="utf-8") as source, open(
        args.out, "w", encoding="utf-8"
    ) as sink:
        for line in source:
            sink.write(table.apply(line.rstrip("\n")) + "\n")
            count += 1
    _finish(args, config, "transliterate", counts={"lines": count}, started=started)
    return EXIT_OK


def cmd_mix(args, config):
    started = time.monotonic()
    seed = _effective_seed(args, config, "mix")
    components = []
    for spec_text in args.component:
        name, _, rest = spec_text.partition("=")
        if not rest:
            raise _UsageError(f"--component must look like name=path[:weight], got {spec_text!r}")
        path, _, weight_text = rest.partition(":")
        weight = float(weight_text) if weight_text else 1.0
        with open(path, encoding="utf-8") as handle:
            records = [line.rstrip("\n") for line in handle if line.strip()]
        components.append(refinery.MixtureComponent(name=name, records=records, weight=weight))
    spec = refinery.MixtureSpec(components=components, unit=refinery.MixUnit(args.unit))
    selected, manifest = refinery.mix_corpora(
        spec, seed=seed, total_units=args.total_units
    )
    _write_jsonl(args.out, [{"component": name, "text": record} for name, record in selected])
    _write_json(args.mix_manifest, manifest)
    _finish(
        args,
        config,
        "mix",
        counts={"records": len(selected), "units": manifest["total_units"]},
        started=started,
    )
    return EXIT_OK


# ---------------------------------------------------------------- align


def cmd_align_check(args, config):
    started = time.monotonic()
    records, parse_rejections = align.parse_alignment_records(args.records)
    source_doc = target_doc = None
    if args.source_doc:
        with open(args.source_doc, encoding="utf-8") as handle:
            source_doc = [line.rstrip("\n") for line in handle if line.strip()]
    if args.target_doc:
        with open(args.target_doc, encoding="utf-8") as handle:
            target_doc = [line.rstrip("\n") for line in handle if line.strip()]
    report = align.validate_alignment(
        records, source_doc, target_doc, overlap_threshold=args.overlap_threshold
    )
    payload = {
        "accepted": report.accepted,
        "parse_rejections": [
            {"line": r.line_number, "byte_offset": r.byte_offset, "message": r.message}
            for r in parse_rejections
        ],
        "rejections": [
            {"ordinal": v.ordinal, "rule": v.rule, "detail": v.detail} for v in report.rejections
        ],
        "histogram": report.histogram,
        "span_checks": "evaluated" if report.span_checks_evaluated else "not evaluated",
        "source_spans": report.source_spans,
    }
    _write_json(args.out, payload)
    print(
        f"accepted {report.accepted}/{report.total} records; "
        f"{len(parse_rejections)} parse rejections; "
        f"histogram {report.histogram}; span checks {payload['span_checks']}"
    )
    _finish(
        args,
        config,
        "align-check",
        counts={"accepted": report.accepted, "rejected": len(report.rejections)},
        started=started,
    )
    return EXIT_OK


# ---------------------------------------------------------------- merging


def cmd_merge(args, config):
    started = time.monotonic()
    g_pt = load_checkpoint(args.g_pt)
    g_it = load_checkpoint(args.g_it)
    expert = load_checkpoint(args.expert)
    if args.lam is not None:
        if args.alpha is not None or args.beta is not None:
            raise _UsageError("--lambda excludes --alpha/--beta")
        merged = lambda_merge(g_pt, g_it, expert, args.lam)
    else:
        if args.alpha is None or args.beta is None:
            raise _UsageError("provide either --lambda or both --alpha and --beta")
        merged = merge(g_pt, g_it, expert, MergeRecipe(alpha=args.alpha, beta=args.beta))
    save_checkpoint(merged, args.out)
    _finish(args, config, "merge", counts={"tensors": len(merged.tensors)}, started=started)
    return EXIT_OK


def _parse_sweep_grid(text):
    try:
        start_text, stop_text, step_text = text.split(":")
        start, stop, step = float(start_text), float(stop_text), float(step_text)
    except ValueError:
        raise _UsageError(f'--sweep must look like "start:stop:step", got {text!r}') from None
    if step <= 0:
        raise _UsageError("--sweep step must be positive")
    values = []
    k = 0
    while True:
        value = round(start + k * step, 10)
        if value > stop + 1e-9:
            break
        values.append(min(value, stop))
        k += 1
    return values


def cmd_sweep(args, config):
    started = time.monotonic()
    g_pt = load_checkpoint(args.g_pt)
    g_it = load_checkpoint(args.g_it)
    expert = load_checkpoint(args.expert)
    spec = SweepSpec(lambdas=_parse_sweep_grid(args.sweep), name_pattern=args.pattern)
    manifest = sweep(g_pt, g_it, expert, spec, args.out_dir)
    _write_json(os.path.join(args.out_dir, "sweep_manifest.json"), manifest)
    _finish(args, config, "sweep", counts={"checkpoints": len(manifest)}, started=started)
    return EXIT_OK


def cmd_average(args, config):
    started = time.monotonic()
    checkpoints = [load_checkpoint(path) for path in args.inputs]
    averaged = average_checkpoints(checkpoints)
    save_checkpoint(averaged, args.out)
    _finish(args, config, "average", counts={"inputs": len(checkpoints)}, started=started)
    return EXIT_OK


# ---------------------------------------------------------------- scoring


def _load_task_specs(path):
    specs = []
    for row in _read_jsonl(path):
        specs.append(
            aggregate.TaskSpec(
                name=row["name"],
                metric=aggregate.MetricKind(row.get("metric", "accuracy_0_100")),
                role=aggregate.TaskRole(row.get("role", "include")),
            )
        )
    return specs


def _load_results(path):
    by_model = {}
    for row in _read_jsonl(path):
        model = by_model.setdefault(row["model"], {})
        model.setdefault(row["task"], {})[row["metric"]] = float(row["value"])
    return [
        aggregate.BenchmarkResult(model=model, values=values)
        for model, values in sorted(by_model.items())
    ]


def cmd_score(args, config):
    started = time.monotonic()
    specs = _load_task_specs(args.tasks)
    results = _load_results(args.results)
    if args.model:
        results = [r for r in results if r.model == args.model]
        if not results:
            raise ContractViolation(f"model {args.model!r} not present in {args.results}")
    averages = {r.model: aggregate.average_score(r, specs) for r in results}
    _write_json(args.out, {"average_scores": averages})
    print(aggregate.render_score_table(results, specs))
    _finish(args, config, "score", counts={"models": len(results)}, started=started)
    return EXIT_OK


def cmd_judge_aggregate(args, config):
    started = time.monotonic()
    judgments = aggregate.load_judgments(args.judgments)
    report = aggregate.aggregate_pairwise(judgments, args.focus)
    table, rows = aggregate.render_win_rate(report)
    _write_json(
        args.out,
        {
            "focus": report.focus,
            "per_opponent": {
                name: {"wins": r.wins, "losses": r.losses, "win_rate": r.win_rate}
                for name, r in report.per_opponent.items()
            },
            "overall_win_rate": report.overall_win_rate,
            "position_bias": report.position_bias,
            "total_judgments": report.total_judgments,
            "rows": rows,
        },
    )
    print(table)
    _finish(
        args,
        config,
        "judge-aggregate",
        counts={"judgments": report.total_judgments},
        started=started,
    )
    return EXIT_OK


def cmd_report(args, config):
    started = time.monotonic()
    outputs = 0
    if args.sweep_scores:
        payload = _read_json(args.sweep_scores)
        entries = [(float(lam), float(score)) for lam, score in payload.items()]
        table, rows = aggregate.render_sweep_curve(entries)
        _write_jsonl(args.out_rows, rows)
        print(table)
        outputs += 1
    if args.win_rate:
        payload = _read_json(args.win_rate)
        rows = payload.get("rows", [])
        _write_jsonl(args.out_rows, rows)
        lines = [
            f"{row['opponent']:<24}{row['wins']:>8}{row['losses']:>8}{100 * row['win_rate']:>9.1f}%"
            for row in rows
        ]
        print("\n".join(lines))
        outputs += 1
    if not outputs:
        raise _UsageError("report requires --sweep-scores or --win-rate")
    _finish(args, config, "report", counts={"sections": outputs}, started=started)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser():
    parser = _Parser(prog="byolkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"byolkit {__version__}")
    parser.add_argument("--config", help="pipeline configuration file (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="global seed (overrides config)")
    parser.add_argument("--manifest", help="run manifest output path")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    sub = subparsers.add_parser("classify", help="tier/pathway table from language profiles")
    sub.add_argument("--profiles", required=True, help="JSONL or TSV profile records")
    sub.add_argument("--out-rows", help="machine-readable rows (JSONL)")
    sub.set_defaults(func=cmd_classify)

    sub = subparsers.add_parser("rtt-eval", help="round-trip translation evaluation")
    sub.add_argument("--benchmark", required=True)
    sub.add_argument("--forward", required=True, help="backend name, builtin kind, or file:PATH")
    sub.add_argument("--backward", required=True)
    sub.add_argument("--metrics", default="bleu,chrf_pp")
    sub.add_argument("--concurrency", type=int, default=1)
    sub.add_argument("--pivot-lang", default="eng")
    sub.add_argument("--target-lang", default="und")
    sub.add_argument("--cache-dir")
    sub.add_argument("--corpus-bleu", action="store_true", help="corpus-level BLEU within domains")
    sub.add_argument("--retry-backoff", type=float, default=0.1)
    sub.add_argument("--transcript", help="round-trip transcript output (JSONL)")
    sub.add_argument("--out", required=True, help="machine-readable report (JSON)")
    sub.set_defaults(func=cmd_rtt_eval)

    sub = subparsers.add_parser("rank", help="leaderboard over rtt-eval reports")
    sub.add_argument("--reports", nargs="+", required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_rank)

    sub = subparsers.add_parser("filter", help="bitext filtering with rejection log")
    sub.add_argument("--pairs", required=True, help="two-column TSV bitext")
    sub.add_argument("--min-tokens", type=int)
    sub.add_argument("--max-tokens", type=int)
    sub.add_argument("--max-char-ratio", type=float)
    sub.add_argument("--out-kept", required=True)
    sub.add_argument("--out-rejected", required=True)
    sub.set_defaults(func=cmd_filter)

    sub = subparsers.add_parser("augment", help="stochastic pair augmentation")
    sub.add_argument("--pairs", required=True)
    sub.add_argument("--p-punct-removal", type=float, default=0.1)
    sub.add_argument("--p-diacritic-strip", type=float, default=0.1)
    sub.add_argument("--p-case-variation", type=float, default=0.1)
    sub.add_argument("--p-copy", type=float, default=0.05)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_augment)

    sub = subparsers.add_parser("transliterate", help="apply a grapheme mapping table")
    sub.add_argument("--table", required=True, help="two-column TSV, longest match first")
    sub.add_argument("--in", dest="infile", required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_transliterate)

    sub = subparsers.add_parser("mix", help="ratio-controlled corpus mixing")
    sub.add_argument(
        "--component",
        action="append",
        required=True,
        metavar="NAME=PATH[:WEIGHT]",
        help="repeatable component spec",
    )
    sub.add_argument("--unit", choices=["pairs", "tokens"], default="tokens")
    sub.add_argument("--total-units", type=int, default=None)
    sub.add_argument("--out", required=True)
    sub.add_argument("--mix-manifest", required=True)
    sub.set_defaults(func=cmd_mix)

    sub = subparsers.add_parser("align-check", help="validate alignment JSONL")
    sub.add_argument("--records", required=True)
    sub.add_argument("--source-doc")
    sub.add_argument("--target-doc")
    sub.add_argument("--overlap-threshold", type=float, default=align.DEFAULT_OVERLAP_THRESHOLD)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_align_check)

    sub = subparsers.add_parser("merge", help="weight-space checkpoint merge")
    sub.add_argument("--g-pt", required=True)
    sub.add_argument("--g-it", required=True)
    sub.add_argument("--expert", required=True)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--beta", type=float)
    sub.add_argument("--lambda", dest="lam", type=float)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_merge)

    sub = subparsers.add_parser("sweep", help="merge checkpoints over a lambda grid")
    sub.add_argument("--g-pt", required=True)
    sub.add_argument("--g-it", required=True)
    sub.add_argument("--expert", required=True)
    sub.add_argument("--sweep", required=True, metavar="START:STOP:STEP")
    sub.add_argument("--pattern", default="merged_lambda_{lam:g}.tns")
    sub.add_argument("--out-dir", required=True)
    sub.set_defaults(func=cmd_sweep)

    sub = subparsers.add_parser("average", help="elementwise checkpoint average")
    sub.add_argument("--inputs", nargs="+", required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_average)

    sub = subparsers.add_parser("score", help="normalized benchmark averages")
    sub.add_argument("--results", required=True, help="JSONL rows: model, task, metric, value")
    sub.add_argument("--tasks", required=True, help="JSONL task specs: name, metric, role")
    sub.add_argument("--model")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_score)

    sub = subparsers.add_parser("judge-aggregate", help="win rates from pairwise judgments")
    sub.add_argument("--judgments", required=True)
    sub.add_argument("--focus", required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_judge_aggregate)

    sub = subparsers.add_parser("report", help="tables and plot rows from saved reports")
    sub.add_argument("--sweep-scores", help="JSON map of lambda -> average score")
    sub.add_argument("--win-rate", help="judge-aggregate output JSON")
    sub.add_argument("--out-rows", required=True)
    sub.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
        return args.func(args, config)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractViolation as exc:
        log_event("error", kind="contract_violation", message=str(exc))
        return EXIT_CONTRACT
    except (PipelineIOError, OSError) as exc:
        log_event("error", kind="io_or_backend", message=str(exc))
        return EXIT_IO
    except ByolkitError as exc:
        log_event("error", kind="toolkit", message=str(exc))
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
