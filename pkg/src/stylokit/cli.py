"""Command-line surface for the attribution pipeline.

Subcommands: extract, select, cluster, eta, sweep, synth. Every command
writes a ``run.json`` reproducibility record beside its outputs and is
deterministic: identical inputs and flags give byte-identical files.
Exit codes: 0 success, 1 analysis error, 2 input/format error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .cluster import to_dot, to_newick, write_text
from .corpus import Corpus, filter_corpus, load_manifest
from .errors import AnalysisError, CorpusFormatError
from .evaluate import (
    SweepRow,
    cluster_purity,
    eta_table,
    format_p_value,
    robustness_sweep,
    write_eta_csv,
    write_sweep_csv,
)
from .features import (
    FeatureKind,
    FeatureSpec,
    build_matrix,
    default_function_words,
    load_word_list,
    write_matrix_csv,
)
from .metrics import Measure, write_distance_csv
from .pipeline import RELIABLE, run_pipeline, shortest_document_length
from .render import dendrogram_svg, write_svg
from .selection import SelectionParams, select_reliable, write_selection_csv
from .synth import SynthConfig, generate_corpus

SWEEP_CUTOFFS = (0.01, 0.10, 0.25, 0.50, 0.75, 1.00)

_FEATURE_FLAGS = {
    "lemma": FeatureKind.LEMMA,
    "rhyme": FeatureKind.RHYME_LEMMA,
    "form": FeatureKind.WORD_FORM,
    "affix": FeatureKind.AFFIX,
    "pos3": FeatureKind.POS_NGRAM,
    "fw": FeatureKind.FUNCTION_WORD,
}


def _parse_select(value: str) -> str | tuple[str, float]:
    if value == RELIABLE:
        return RELIABLE
    if value.startswith("top:"):
        try:
            pct = float(value.split(":", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad selection spec: {value!r}") from None
        if not 0.0 < pct <= 100.0:
            raise argparse.ArgumentTypeError("top:<pct> needs a percentage in (0, 100]")
        return ("top", pct / 100.0)
    raise argparse.ArgumentTypeError(
        f"selection must be 'reliable' or 'top:<pct>', got {value!r}"
    )


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="corpus manifest CSV")
    parser.add_argument("--min-tokens", type=int, default=5000, help="shortest play kept")
    parser.add_argument("--min-plays", type=int, default=3, help="fewest plays per author kept")


def _add_feature_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--features", choices=sorted(_FEATURE_FLAGS), default="fw")
    parser.add_argument("--fw-list", default=None, help="function-word list file (one per line)")


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--select", type=_parse_select, default=RELIABLE,
                        help="'reliable' or 'top:<pct>'")
    parser.add_argument("--distance", choices=[m.value for m in Measure], default="delta")
    parser.add_argument("--linkage", choices=["ward2", "ward1"], default="ward2")
    parser.add_argument("--k", type=int, default=None,
                        help="number of clusters (default: number of authors)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stylokit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"stylokit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="write the feature matrix CSV")
    _add_corpus_flags(p)
    _add_feature_flags(p)
    p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("select", help="write per-feature reliability diagnostics")
    _add_corpus_flags(p)
    _add_feature_flags(p)
    p.add_argument("--out", default="out")

    p = sub.add_parser("cluster", help="full pipeline: dendrogram, assignment, summary")
    _add_corpus_flags(p)
    _add_feature_flags(p)
    _add_analysis_flags(p)
    p.add_argument("--out", default="out")

    p = sub.add_parser("eta", help="rank features by correlation with the clusters")
    _add_corpus_flags(p)
    _add_feature_flags(p)
    _add_analysis_flags(p)
    p.add_argument("--out", default="out")

    p = sub.add_parser("sweep", help="frequency-cutoff robustness table")
    _add_corpus_flags(p)
    _add_feature_flags(p)
    _add_analysis_flags(p)
    p.add_argument("--cutoffs", default=",".join(str(c) for c in SWEEP_CUTOFFS),
                   help="comma-separated fractions in (0,1]")
    p.add_argument("--out", default="out")

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--authors", type=int, default=5)
    p.add_argument("--docs-per-author", type=int, default=6)
    p.add_argument("--separation", type=float, default=1.0)
    p.add_argument("--out", default="out")
    return parser


def _config_record(args: argparse.Namespace) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key == "command":
            continue
        if isinstance(value, tuple):
            value = list(value)
        config[key] = value
    return {"command": args.command, "config": config, "tool": "stylokit", "version": __version__}


def _write_run_record(args: argparse.Namespace, out_dir: Path) -> None:
    record = json.dumps(_config_record(args), sort_keys=True, indent=2) + "\n"
    write_text(record, out_dir / "run.json")


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_corpus(args: argparse.Namespace) -> Corpus:
    corpus = load_manifest(args.manifest)
    return filter_corpus(corpus, args.min_tokens, args.min_plays)


def _feature_spec(args: argparse.Namespace) -> FeatureSpec:
    kind = _FEATURE_FLAGS[args.features]
    if kind is FeatureKind.FUNCTION_WORD:
        words = load_word_list(args.fw_list) if args.fw_list else default_function_words()
        return FeatureSpec(kind=kind, function_words=words)
    return FeatureSpec(kind=kind)


def _resolve_k(args: argparse.Namespace, corpus: Corpus) -> int:
    if args.k is not None:
        return args.k
    return len(set(corpus.alleged_authors().values()))


def _cmd_extract(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus = _load_corpus(args)
    matrix = build_matrix(corpus, _feature_spec(args))
    write_matrix_csv(matrix, out / "matrix.csv")
    _write_run_record(args, out)
    print(f"{matrix.n_docs} docs, {matrix.n_features} features")
    return 0


def _cmd_select(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus = _load_corpus(args)
    matrix = build_matrix(corpus, _feature_spec(args))
    params = SelectionParams(min_doc_len=shortest_document_length(corpus))
    report = select_reliable(matrix, params)
    write_selection_csv(report, out / "selection.csv")
    _write_run_record(args, out)
    print(f"{len(report.retained)} of {matrix.n_features} features retained")
    return 0


def _write_assignment_csv(assignment: dict[str, int], truth: dict[str, str], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["doc_id", "cluster", "author"])
        for doc in sorted(assignment):
            writer.writerow([doc, assignment[doc], truth.get(doc, "")])


def _cmd_cluster(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus = _load_corpus(args)
    spec = _feature_spec(args)
    k = _resolve_k(args, corpus)
    result = run_pipeline(corpus, spec, args.select, args.distance, k, args.linkage)
    truth = corpus.alleged_authors()
    purity = cluster_purity(result.assignment, truth).purity

    write_matrix_csv(result.matrix, out / "matrix.csv")
    if result.selection_report is not None:
        write_selection_csv(result.selection_report, out / "selection.csv")
    write_distance_csv(result.distance, out / "distance.csv")
    write_text(to_newick(result.dendrogram), out / "dendrogram.newick")
    write_text(to_dot(result.dendrogram), out / "dendrogram.dot")
    caption = (
        f"features: {result.selected.n_features}  "
        f"AC: {result.dendrogram.ac:.3f}  purity: {purity:.3f}"
    )
    write_svg(dendrogram_svg(result.dendrogram, truth=truth, caption=caption),
              out / "dendrogram.svg")
    _write_assignment_csv(result.assignment, truth, out / "assignment.csv")
    summary = {
        "n_features": result.selected.n_features,
        "ac": result.dendrogram.ac,
        "purity": purity,
    }
    write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n", out / "summary.json")
    _write_run_record(args, out)
    print(
        f"{result.matrix.n_docs} docs, {result.selected.n_features} features, "
        f"k={k}, AC={result.dendrogram.ac:.3f}, purity={purity:.3f}"
    )
    return 0


def _cmd_eta(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus = _load_corpus(args)
    spec = _feature_spec(args)
    k = _resolve_k(args, corpus)
    result = run_pipeline(corpus, spec, args.select, args.distance, k, args.linkage)
    rows = eta_table(result.selected, result.assignment)
    write_eta_csv(rows, out / "eta.csv")
    _write_run_record(args, out)
    for row in rows[:10]:
        print(f"{row.feature}\t{row.eta_squared:.3f}\t{format_p_value(row.p_value)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus = _load_corpus(args)
    spec = _feature_spec(args)
    truth = corpus.alleged_authors()
    k = _resolve_k(args, corpus)
    cutoffs = [float(c) for c in args.cutoffs.split(",") if c.strip()]

    reference = run_pipeline(corpus, spec, RELIABLE, args.distance, k, args.linkage)
    reference_purity = cluster_purity(reference.assignment, truth).purity
    rows = robustness_sweep(
        corpus, spec, args.distance, truth, cutoffs, reference.assignment, args.linkage
    )
    reference_row = SweepRow(
        cutoff=float("nan"),
        n_features=reference.selected.n_features,
        purity_authors=reference_purity,
        purity_reference=None,
    )
    write_sweep_csv(rows, out / "sweep.csv", reference_row=reference_row)
    _write_run_record(args, out)
    for row in rows:
        pa = "-" if row.purity_authors is None else f"{row.purity_authors:.3f}"
        print(f"{row.cutoff:g}\t{row.n_features}\t{pa}\t{row.note}")
    print(f"RS\t{reference.selected.n_features}\t{reference_purity:.3f}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    config = SynthConfig(
        seed=args.seed,
        n_authors=args.authors,
        docs_per_author=args.docs_per_author,
        separation=args.separation,
    )
    manifest = generate_corpus(config, out)
    _write_run_record(args, out)
    print(f"wrote {manifest}")
    return 0


_COMMANDS = {
    "extract": _cmd_extract,
    "select": _cmd_select,
    "cluster": _cmd_cluster,
    "eta": _cmd_eta,
    "sweep": _cmd_sweep,
    "synth": _cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CorpusFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
