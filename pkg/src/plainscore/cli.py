"""Command-line interface.

Subcommands: index, score, evaluate, perturb, mock-serve. Global flags
(--config, --seed, --jobs, --trace) are accepted by every subcommand and
override the corresponding config fields. Exit codes: 0 success, 1 internal
error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .backend import ModelClient
from .benchmark import (
    read_score_csv,
    run_benchmark,
    write_report_csv,
    write_report_json,
    write_score_csv,
)
from .config import RunConfig, load_config
from .corpus import chunk_document, read_corpus
from .errors import InputError, PlainscoreError, UndefinedStatisticError
from .mockserver import make_server
from .perturb import perturb_dataset
from .pipeline import build_runtime, score_dataset
from .records import read_summary_pairs, write_summary_pairs
from .vindex import build_index, load_cached_vectors, save_index_dir

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML run config (defaults: local heuristics + mock)")
    parser.add_argument("--seed", type=int, help="override eval.seed")
    parser.add_argument("--jobs", type=int, help="per-summary scoring parallelism")
    parser.add_argument("--trace", action="store_true", default=None,
                        help="include per-sentence QA traces in score reports")


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config)
    if args.seed is not None:
        config.eval.seed = args.seed
    if args.jobs is not None:
        if args.jobs < 1:
            raise InputError("--jobs must be >= 1")
        config.jobs = args.jobs
    if args.trace is not None:
        config.trace = args.trace
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plainscore",
        description="Retrieval-augmented QA factual consistency scoring for "
                    "plain-language summaries.",
    )
    parser.add_argument("--version", action="version", version=f"plainscore {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="chunk corpora, embed, and build the vector index")
    _add_common_flags(p_index)
    p_index.add_argument("corpora", nargs="*", help="corpus JSONL files "
                         "(default: retrieval.corpus_paths from the config)")
    p_index.add_argument("--out", required=True, help="index output directory")

    p_score = sub.add_parser("score", help="score a dataset of summary-abstract pairs")
    _add_common_flags(p_score)
    p_score.add_argument("--dataset", required=True, help="dataset JSONL")
    p_score.add_argument("--out", required=True, help="score report JSONL output path")
    p_score.add_argument("--index", help="index directory (overrides retrieval.index_path)")
    p_score.add_argument("--scores-csv", help="id,score CSV output "
                         "(default: report path with .csv suffix)")

    p_eval = sub.add_parser("evaluate", help="correlations, AUC CIs, and paired significance")
    _add_common_flags(p_eval)
    p_eval.add_argument("--dataset", required=True, help="labeled dataset JSONL")
    p_eval.add_argument("--scores", required=True, help="primary metric score CSV (id,score)")
    p_eval.add_argument("--baseline", action="append", default=[], metavar="NAME=PATH",
                        help="baseline score CSV; repeatable; bare PATH uses the file stem")
    p_eval.add_argument("--out-dir", required=True, help="directory for report.json/report.csv")
    p_eval.add_argument("--primary-name", default=None,
                        help="metric name for the primary scores (default: file stem)")
    p_eval.add_argument("--replicates", type=int, help="override eval.replicates")
    p_eval.add_argument("--ci-level", type=float, help="override eval.ci_level")
    p_eval.add_argument("--alpha", type=float, help="override eval.alpha")

    p_perturb = sub.add_parser("perturb", help="emit non-factual twins of a dataset")
    _add_common_flags(p_perturb)
    p_perturb.add_argument("--dataset", required=True, help="dataset JSONL")
    p_perturb.add_argument("--out", required=True, help="perturbed twins JSONL output path")

    p_serve = sub.add_parser("mock-serve", help="serve the deterministic mock endpoint over HTTP")
    _add_common_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8517)
    p_serve.add_argument("--dimension", type=int, default=None,
                         help="embedding dimension (default: retrieval.embed_dimension)")

    return parser


# -- subcommands ----------------------------------------------------------------


def _cmd_index(args: argparse.Namespace) -> int:
    config = _load_config(args)
    corpus_paths = list(args.corpora) or list(config.retrieval.corpus_paths)
    if not corpus_paths:
        raise InputError("no corpora given: pass paths or set retrieval.corpus_paths")
    chunks = []
    doc_count = 0
    for corpus_path in corpus_paths:
        for doc in read_corpus(corpus_path):
            doc_count += 1
            chunks.extend(chunk_document(doc, config.retrieval.chunk_limit))
    embedder = ModelClient(
        config.backends["embedder"].profile,
        embed_dimension=config.retrieval.embed_dimension,
        mock_seed=config.mock_seed,
    )
    reuse = load_cached_vectors(args.out, chunks)
    index = build_index(chunks, embedder, reuse=reuse)
    save_index_dir(
        args.out, index, chunks,
        manifest_extra={
            "corpus_files": corpus_paths,
            "chunk_limit": config.retrieval.chunk_limit,
            "embedder": config.backends["embedder"].echo(),
            "mock_seed": config.mock_seed,
        },
    )
    print(
        f"indexed {doc_count} documents: {len(chunks)} chunks, "
        f"{len(index)} vectors ({len(reuse)} reused from cache) -> {args.out}"
    )
    return EXIT_OK


def _cmd_score(args: argparse.Namespace) -> int:
    config = _load_config(args)
    runtime = build_runtime(config, index_path=args.index)
    out_path = Path(args.out)
    csv_path = Path(args.scores_csv) if args.scores_csv else out_path.with_suffix(".csv")
    scores: list[tuple[str, float | None]] = []
    unscored = 0
    with out_path.open("w", encoding="utf-8") as handle:
        header = {
            "schema": "plainscore-score/1",
            "config": config.to_echo_dict(),
            "seed": config.eval.seed,
        }
        handle.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
        for report in score_dataset(read_summary_pairs(args.dataset), runtime, config.jobs):
            handle.write(
                json.dumps(report.to_json(include_trace=config.trace), ensure_ascii=False)
                + "\n"
            )
            scores.append((report.summary_id, report.final_score))
            if report.final_score is None:
                unscored += 1
    write_score_csv(csv_path, scores)
    print(f"scored {len(scores)} summaries ({unscored} unscored) -> {out_path} and {csv_path}")
    return EXIT_OK


def _parse_baseline(spec: str) -> tuple[str, str]:
    if "=" in spec:
        name, _, path = spec.partition("=")
        if not name or not path:
            raise InputError(f"--baseline expects NAME=PATH, got {spec!r}")
        return name, path
    return Path(spec).stem, spec


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.replicates is not None:
        config.eval.replicates = args.replicates
    if args.ci_level is not None:
        config.eval.ci_level = args.ci_level
    if args.alpha is not None:
        config.eval.alpha = args.alpha
    pairs = list(read_summary_pairs(args.dataset))
    primary_name = args.primary_name or Path(args.scores).stem
    primary = (primary_name, read_score_csv(args.scores))
    baselines = []
    for spec in args.baseline:
        name, path = _parse_baseline(spec)
        baselines.append((name, read_score_csv(path)))
    runs, significance = run_benchmark(
        dataset_id=Path(args.dataset).stem,
        pairs=pairs,
        primary=primary,
        baselines=baselines,
        replicates=config.eval.replicates,
        ci_level=config.eval.ci_level,
        alpha=config.eval.alpha,
        seed=config.eval.seed,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_echo = config.to_echo_dict()
    config_echo["seed"] = config.eval.seed
    write_report_json(out_dir / "report.json", runs, significance, config_echo)
    write_report_csv(out_dir / "report.csv", runs, significance)
    for run in runs:
        print(
            f"{run.metric_name}: tau={run.tau:.4f} pearson={run.pearson:.4f} "
            f"auc={run.auc:.4f} ci=[{run.ci_lo:.4f}, {run.ci_hi:.4f}]"
        )
    for comparison in significance.comparisons:
        verdict = "significant" if comparison.rejected else "not significant"
        print(
            f"  vs {comparison.baseline_name}: delta_auc={comparison.delta_auc:+.4f} "
            f"p_raw={comparison.p_raw:.4f} p_adj={comparison.p_adjusted:.4f} ({verdict})"
        )
    print(f"reports -> {out_dir / 'report.json'} and {out_dir / 'report.csv'}")
    return EXIT_OK


def _cmd_perturb(args: argparse.Namespace) -> int:
    config = _load_config(args)
    setting = config.backends["perturber"]
    if setting.is_local:
        raise InputError("backends.perturber must be 'mock' or an endpoint profile")
    client = ModelClient(
        setting.profile,
        embed_dimension=config.retrieval.embed_dimension,
        mock_seed=config.mock_seed,
    )
    count = write_summary_pairs(
        args.out, perturb_dataset(read_summary_pairs(args.dataset), client)
    )
    print(f"perturbed {count} summaries -> {args.out}")
    return EXIT_OK


def _cmd_mock_serve(args: argparse.Namespace) -> int:
    config = _load_config(args)
    dimension = args.dimension or config.retrieval.embed_dimension
    server = make_server(args.host, args.port, dimension, config.mock_seed)
    host, port = server.server_address[0], server.server_address[1]
    print(f"mock endpoint on http://{host}:{port} (dimension {dimension}); Ctrl-C to stop")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


_COMMANDS = {
    "index": _cmd_index,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "perturb": _cmd_perturb,
    "mock-serve": _cmd_mock_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InputError, UndefinedStatisticError) as exc:
        # degenerate statistics only arise from user-supplied data here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PlainscoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
