"""Command-line pipeline: ingest, annotate, network, stats, pairs, fit,
report, simulate.

Pipeline failures exit 1 with a single machine-parsable line on stderr
(``emopairs: error: <Kind>: <detail>``); usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .annotation import (
    BINARIZE_POLICIES,
    LexiconAnnotator,
    RemoteAnnotator,
    annotate_corpus,
    load_annotations,
    load_lexicon_rules,
    save_annotations,
)
from .cooccurrence import (
    COUNT_MODES,
    EXPORT_FORMATS,
    build_cooccurrence,
    compute_node_stats,
    export_matrix,
    export_network,
    matrix_to_network,
)
from .corpus import load_corpus, parse_iso_bound, save_posts, segment_sentences
from .diststats import (
    FREQUENCY_UNITS,
    emotion_frequency,
    pair_count_histogram,
    top_k_share,
    write_frequency_tsv,
    write_histogram_tsv,
)
from .errors import EmoPairsError
from .logit import (
    CORRECTIONS,
    FitConfig,
    fit_logistic,
    fit_marginal,
    significant_pairs,
    write_results_csv,
)
from .pairfeat import build_design_matrix, build_vocabulary, default_min_support, export_design
from .report import ReportOptions, run_directory, write_report
from .simulate import (
    default_model,
    generate_corpus,
    identity_lexicon,
    load_ground_truth,
    raw_posts_from_annotated,
    save_ground_truth,
)

ANNOTATOR_URL_ENV = "EMOPAIRS_ANNOTATOR_URL"


def _read_config(path) -> dict:
    """key=value file mirroring the CLI flags ('-' or '_' in keys)."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line is not key=value: {line!r}")
            values[key.strip().replace("-", "_")] = _coerce(value.strip())
    return values


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    return value


def _add_neutral_flag(parser):
    parser.add_argument(
        "--include-neutral",
        action="store_true",
        help="keep the neutral label in emotion sets (off by default)",
    )


def _add_fit_flags(parser):
    parser.add_argument("--min-support", type=int, default=None, help="pair support threshold (default max(25, 0.1%% of posts))")
    parser.add_argument("--ordered-pairs", action="store_true", help="directed pair features (sensitivity mode)")
    parser.add_argument("--ridge", type=float, default=0.0)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--correction", choices=CORRECTIONS, default="none")
    parser.add_argument("--max-iterations", type=int, default=100)
    parser.add_argument("--tolerance", type=float, default=1e-8)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="emopairs", description=__doc__)
    parser.add_argument("--config", default=None, help="key=value file applied as flag defaults")
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    def commands(name, **kwargs):
        registry[name] = subparsers.add_parser(name, **kwargs)
        return registry[name]

    p = commands("ingest", help="load and normalize a raw JSON-lines dump")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--since", default=None, help="ISO-8601 inclusive lower bound")
    p.add_argument("--until", default=None, help="ISO-8601 inclusive upper bound")
    p.add_argument("--ignore-titles", action="store_true", help="exclude titles from sentence counts")

    p = commands("annotate", help="attach emotion and depression labels")
    p.add_argument("--input", required=True, help="raw posts JSON-lines")
    p.add_argument("--output", required=True, help="labeled corpus JSON-lines")
    p.add_argument("--backend", choices=("lexicon", "remote"), default="lexicon")
    p.add_argument("--rules", default=None, help="keyword,emotion CSV (lexicon backend)")
    p.add_argument("--depression-rules", default=None, help="keyword,label CSV (lexicon backend)")
    p.add_argument("--endpoint", default=None, help=f"service URL (or ${ANNOTATOR_URL_ENV})")
    p.add_argument("--policy", choices=BINARIZE_POLICIES, default="moderate_or_severe")
    p.add_argument("--concurrency", type=int, default=4)
    p.add_argument("--ignore-titles", action="store_true")

    p = commands("network", help="co-occurrence matrix and network exports")
    p.add_argument("--input", required=True, help="labeled corpus JSON-lines")
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="graphml")
    p.add_argument("--matrix", default=None, help="also write the matrix CSV here")
    p.add_argument("--order", choices=("canonical", "sentiment"), default="canonical")
    p.add_argument("--count-mode", choices=COUNT_MODES, default="distinct")
    _add_neutral_flag(p)

    p = commands("stats", help="frequency ranking, CDF/CCDF, pair histogram")
    p.add_argument("--input", required=True)
    p.add_argument("--unit", choices=FREQUENCY_UNITS, default="sentence")
    p.add_argument("--top-k", type=int, default=None, help="print the top-k cumulative share")
    p.add_argument("--output", default=None, help="frequency TSV destination")
    p.add_argument("--histogram", default=None, help="pair-count TSV destination")
    _add_neutral_flag(p)

    p = commands("pairs", help="pair vocabulary and sparse design export")
    p.add_argument("--input", required=True)
    p.add_argument("--prefix", required=True, help="output prefix for matrix/vocab/outcome CSVs")
    p.add_argument("--min-support", type=int, default=None)
    p.add_argument("--ordered-pairs", action="store_true")
    _add_neutral_flag(p)

    p = commands("fit", help="logistic regression of outcome on pair features")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None, help="results CSV destination")
    p.add_argument("--metadata", default=None, help="fit metadata JSON destination")
    p.add_argument("--marginal", action="store_true", help="per-pair single-feature fits")
    _add_fit_flags(p)
    _add_neutral_flag(p)

    p = commands("report", help="full pipeline into one run directory")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="base directory for the run")
    p.add_argument("--label", default=None, help="run id instead of the UTC timestamp")
    p.add_argument("--unit", choices=FREQUENCY_UNITS, default="sentence")
    p.add_argument("--order", choices=("canonical", "sentiment"), default="sentiment")
    p.add_argument("--count-mode", choices=COUNT_MODES, default="distinct")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    _add_fit_flags(p)
    _add_neutral_flag(p)

    p = commands("simulate", help="synthetic labeled corpus from a planted model")
    p.add_argument("--seed", type=int, default=None, help="override the model seed")
    p.add_argument("--posts", type=int, required=True)
    p.add_argument("--output", required=True, help="labeled corpus JSON-lines")
    p.add_argument("--truth", default=None, help="ground-truth model JSON destination")
    p.add_argument("--model", default=None, help="planted-model JSON (default: bundled model)")
    p.add_argument("--raw-output", default=None, help="also write a raw-post mirror")
    p.add_argument("--rules-output", default=None, help="write the identity lexicon CSV")

    return parser, registry


def _cmd_ingest(args) -> int:
    time_range = None
    if args.since or args.until:
        low = parse_iso_bound(args.since) if args.since else 0
        high = parse_iso_bound(args.until, end=True) if args.until else 2**62
        time_range = (low, high)
    posts, manifest = load_corpus(
        args.input, time_range, include_titles=not args.ignore_titles
    )
    save_posts(posts, args.output)
    print(json.dumps(manifest.__dict__, sort_keys=True))
    return 0


def _make_annotator(args):
    if args.backend == "lexicon":
        if not args.rules:
            raise EmoPairsError("lexicon backend requires --rules")
        depression_rules = (
            load_lexicon_rules(args.depression_rules) if args.depression_rules else ()
        )
        return LexiconAnnotator(load_lexicon_rules(args.rules), depression_rules)
    endpoint = args.endpoint or os.environ.get(ANNOTATOR_URL_ENV)
    if not endpoint:
        raise EmoPairsError(f"remote backend requires --endpoint or ${ANNOTATOR_URL_ENV}")
    return RemoteAnnotator(endpoint)


def _cmd_annotate(args) -> int:
    posts, _ = load_corpus(args.input, include_titles=not args.ignore_titles)
    segmented = [
        (post, segment_sentences(post, include_title=not args.ignore_titles)) for post in posts
    ]
    annotated = annotate_corpus(
        segmented, _make_annotator(args), policy=args.policy, concurrency=args.concurrency
    )
    save_annotations(annotated, args.output)
    print(f"annotated {len(annotated)} posts -> {args.output}")
    return 0


def _cmd_network(args) -> int:
    annotated = load_annotations(args.input)
    matrix = build_cooccurrence(
        annotated, include_neutral=args.include_neutral, count_mode=args.count_mode
    )
    stats = compute_node_stats(annotated, include_neutral=args.include_neutral)
    network = matrix_to_network(matrix, stats)
    export_network(network, args.format, args.output)
    if args.matrix:
        export_matrix(matrix, args.matrix, order=args.order)
    print(f"network: {len(network.nodes)} nodes, {len(network.edges)} edges -> {args.output}")
    return 0


def _cmd_stats(args) -> int:
    annotated = load_annotations(args.input)
    summary = emotion_frequency(annotated, unit=args.unit, include_neutral=args.include_neutral)
    if args.output:
        write_frequency_tsv(summary, args.output)
    if args.histogram:
        histogram = pair_count_histogram(annotated, include_neutral=args.include_neutral)
        write_histogram_tsv(histogram, args.histogram)
    if args.top_k is not None:
        share = top_k_share(summary, args.top_k)
        print(f"top-{args.top_k} share: {share:.6f}")
    else:
        print(f"{len(summary.ranked)} emotions, {summary.total} {args.unit} counts")
    return 0


def _cmd_pairs(args) -> int:
    annotated = load_annotations(args.input)
    min_support = args.min_support or default_min_support(len(annotated))
    vocabulary = build_vocabulary(
        annotated, min_support, include_neutral=args.include_neutral, ordered=args.ordered_pairs
    )
    design = build_design_matrix(annotated, vocabulary, include_neutral=args.include_neutral)
    written = export_design(design, vocabulary, args.prefix)
    print(f"{len(vocabulary)} pairs, {design.n_rows} rows -> {', '.join(written)}")
    return 0


def _fit_config(args) -> FitConfig:
    return FitConfig(
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        ridge=args.ridge,
        alpha=args.alpha,
        correction=args.correction,
    )


def _cmd_fit(args) -> int:
    annotated = load_annotations(args.input)
    min_support = args.min_support or default_min_support(len(annotated))
    vocabulary = build_vocabulary(
        annotated, min_support, include_neutral=args.include_neutral, ordered=args.ordered_pairs
    )
    design = build_design_matrix(annotated, vocabulary, include_neutral=args.include_neutral)
    config = _fit_config(args)
    if args.marginal:
        effects = fit_marginal(design, vocabulary, config)
        for row in effects:
            print(
                f"{row.pair[0]}-{row.pair[1]}: coef={row.coefficient:+.4f} "
                f"se={row.standard_error:.4f} p={row.p:.3g} OR={row.odds_ratio:.3f}"
            )
        return 0
    fit = fit_logistic(design, config)
    if args.output:
        write_results_csv(fit, vocabulary, args.output)
    if args.metadata:
        meta = {
            "config": config.__dict__,
            "iterations": fit.iterations,
            "log_likelihood": fit.log_likelihood,
            "converged": fit.converged,
            "separation_flag": fit.separation_flag,
        }
        with open(args.metadata, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    rows = significant_pairs(fit, vocabulary)
    print(
        f"fit: {design.n_rows} rows, {len(vocabulary)} pairs, "
        f"log-likelihood {fit.log_likelihood:.4f}, {fit.iterations} iterations"
    )
    for row in rows:
        print(
            f"  {row.pair[0]}-{row.pair[1]}: coef={row.coefficient:+.4f} "
            f"p={row.p:.3g} OR={row.odds_ratio:.3f}"
        )
    return 0


def _cmd_report(args) -> int:
    annotated = load_annotations(args.input)
    options = ReportOptions(
        include_neutral=args.include_neutral,
        count_mode=args.count_mode,
        unit=args.unit,
        matrix_order=args.order,
        min_support=args.min_support,
        ordered_pairs=args.ordered_pairs,
        fit=_fit_config(args),
        render_figures=not args.no_figures,
    )
    out_dir = run_directory(args.out, args.label)
    metadata = write_report(annotated, out_dir, options, input_path=args.input)
    print(f"report written to {out_dir} ({len(metadata['artifacts'])} artifacts)")
    return 0


def _cmd_simulate(args) -> int:
    if args.model:
        model = load_ground_truth(args.model)
        if args.seed is not None:
            model.seed = args.seed
    else:
        model = default_model(args.seed) if args.seed is not None else default_model()
    annotated = generate_corpus(model, args.posts)
    save_annotations(annotated, args.output)
    if args.truth:
        save_ground_truth(model, args.truth)
    if args.raw_output:
        save_posts(raw_posts_from_annotated(annotated), args.raw_output)
    if args.rules_output:
        with open(args.rules_output, "w", encoding="utf-8") as fh:
            fh.write("keyword,emotion\n")
            for keyword, emotion in identity_lexicon(model):
                fh.write(f"{keyword},{emotion}\n")
    positive = sum(post.outcome for post in annotated)
    print(f"simulated {len(annotated)} posts ({positive} positive) -> {args.output}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "annotate": _cmd_annotate,
    "network": _cmd_network,
    "stats": _cmd_stats,
    "pairs": _cmd_pairs,
    "fit": _cmd_fit,
    "report": _cmd_report,
    "simulate": _cmd_simulate,
}


def run(argv=None) -> int:
    parser, registry = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--config" in argv:
        config_path = argv[argv.index("--config") + 1]
        values = _read_config(config_path)
        chosen = next((token for token in argv if token in registry), None)
        if chosen is not None:
            sub = registry[chosen]
            dests = {action.dest for action in sub._actions}
            sub.set_defaults(**{k: v for k, v in values.items() if k in dests})
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except EmoPairsError as exc:
        print(f"emopairs: error: {exc.kind}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"emopairs: error: IO: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
