"""stylewarp command line: per-stage subcommands plus the full pipeline runner.

Exit codes: 0 success, 1 validation or parse failure, 2 runtime stage failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, anchors, corpus, dtw, embedding, pipeline, plots, signal
from .errors import ParseError, StageError, StylewarpError, ValidationError
from .manifest import validate_manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylewarp",
        description="Compare the flow of books as time series in word-embedding space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="ingest one book and report or dump its tokens")
    p.add_argument("--book", required=True, type=Path)
    p.add_argument("--dump", action="store_true", help="write one sentence per line")
    p.add_argument("--out", type=Path, help="dump target (default: stdout)")

    p = sub.add_parser("train", help="train a word-embedding model on a corpus directory")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--lr", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--subsample", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=["cbow", "skipgram"], default="cbow")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("anchors", help="k-means anchor points over the model vocabulary")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-n", type=int, default=0, help="cluster only the N most frequent tokens")
    p.add_argument("--spherical", action="store_true", help="normalize vectors before clustering")

    p = sub.add_parser("signal", help="anchor-similarity signal for one book")
    p.add_argument("--book", required=True, type=Path)
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--anchors", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--window", type=int, default=200)
    p.add_argument("--sigma", type=float, default=60.0)
    p.add_argument("--plot", type=Path, help="also write an SVG line chart")

    p = sub.add_parser("dtw", help="warp two signal files and print the cost")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--radius", type=int, default=1)
    p.add_argument("--normalize", choices=["path-length"], help="divide cost by path length")
    p.add_argument("--path", type=Path, help="write the warping path as CSV")
    p.add_argument("--plot", type=Path, help="write an SVG alignment chart")

    p = sub.add_parser("matrix", help="pairwise DTW distance matrix over a signal directory")
    p.add_argument("--signals", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--radius", type=int, default=1)
    p.add_argument("--normalize", choices=["path-length"])
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("mds", help="2-D layout from a distance matrix")
    p.add_argument("--matrix", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("plot", help="scatter SVG from a layout and a groups file")
    p.add_argument("--layout", required=True, type=Path)
    p.add_argument("--groups", type=Path)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("run", help="run the whole pipeline from a manifest")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--resume", action="store_true", help="skip stages whose outputs exist")
    p.add_argument("--workers", type=int, help="override the manifest worker count")

    return parser


def _cmd_tokenize(args) -> int:
    doc = corpus.load_document(args.book)
    if args.dump:
        lines = [" ".join(s) for s in doc.sentences]
        text = "\n".join(lines) + ("\n" if lines else "")
        if args.out:
            args.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        print(f"{doc.id}: {doc.word_count} words in {doc.sentence_count} sentences")
    return 0


def _cmd_train(args) -> int:
    docs = corpus.load_corpus_dir(args.corpus)
    vocab = corpus.build_vocab(docs, min_count=args.min_count)
    config = embedding.TrainingConfig(
        dim=args.dim,
        window=args.window,
        epochs=args.epochs,
        negative=args.negative,
        initial_lr=args.lr,
        seed=args.seed,
        mode=args.mode,
        subsample=args.subsample,
    )
    model = embedding.train(docs, vocab, config, workers=args.workers)
    embedding.save_model(model, args.out)
    print(f"trained {len(vocab)} x {args.dim} vectors -> {args.out}")
    return 0


def _cmd_anchors(args) -> int:
    model = embedding.load_model(args.model)
    points = anchors.select_anchor_inputs(model, args.top_n)
    if args.spherical:
        points = anchors.normalize_rows(points)
    result = anchors.kmeans(points, args.k, seed=args.seed)
    anchors.save_anchors(result, args.out)
    print(f"{args.k} anchors (inertia {result.inertia:.6g}) -> {args.out}")
    return 0


def _cmd_signal(args) -> int:
    model = embedding.load_model(args.model)
    anchor_set = anchors.load_anchors(args.anchors)
    doc = corpus.load_document(args.book)
    raw = signal.make_signal(doc, model, anchor_set)
    cfg = signal.SmoothingConfig(window=args.window, sigma=args.sigma)
    smoothed = signal.gaussian_smooth(raw, cfg)
    signal.save_signal(smoothed, args.out)
    if args.plot:
        plots.signal_svg(raw, smoothed, args.plot)
    print(f"{doc.id}: {smoothed.matrix.shape[0]} x {smoothed.matrix.shape[1]} -> {args.out}")
    return 0


def _cmd_dtw(args) -> int:
    a = signal.load_signal(args.a)
    b = signal.load_signal(args.b)
    if args.exact:
        result = dtw.dtw_exact(a.matrix, b.matrix)
    else:
        result = dtw.fastdtw(a.matrix, b.matrix, args.radius)
    cost = result.cost / len(result.path) if args.normalize else result.cost
    print(f"{cost!r}")
    if args.path:
        lines = ["i,j"] + [f"{i},{j}" for i, j in result.path]
        args.path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.plot:
        plots.alignment_svg(a.matrix, b.matrix, result, args.plot)
    return 0


def _cmd_matrix(args) -> int:
    directory = Path(args.signals)
    if not directory.is_dir():
        raise ValidationError(f"signal directory not found: {directory}")
    files = sorted(directory.glob("*.csv"))
    signals = [signal.load_signal(p) for p in files]
    matrix = analysis.distance_matrix(
        signals,
        method="exact" if args.exact else "fastdtw",
        radius=args.radius,
        workers=args.workers,
        normalize=args.normalize == "path-length",
    )
    analysis.save_distance_matrix(matrix, args.out)
    print(f"{len(signals)} x {len(signals)} distances -> {args.out}")
    return 0


def _cmd_mds(args) -> int:
    matrix = analysis.load_distance_matrix(args.matrix)
    layout = analysis.classical_mds(matrix, dim=2, seed=args.seed)
    analysis.save_layout(layout, args.out)
    print(f"layout for {len(layout.labels)} books -> {args.out}")
    return 0


def _cmd_plot(args) -> int:
    layout = analysis.load_layout(args.layout)
    groups = analysis.load_groups(args.groups) if args.groups else {}
    plots.scatter_svg(layout, groups, args.out)
    print(f"scatter -> {args.out}")
    return 0


def _cmd_run(args) -> int:
    manifest = validate_manifest(args.manifest)
    paths = pipeline.run_pipeline(manifest, resume=args.resume, workers=args.workers)
    print(f"pipeline complete; report at {paths['run']}")
    return 0


_COMMANDS = {
    "tokenize": _cmd_tokenize,
    "train": _cmd_train,
    "anchors": _cmd_anchors,
    "signal": _cmd_signal,
    "dtw": _cmd_dtw,
    "matrix": _cmd_matrix,
    "mds": _cmd_mds,
    "plot": _cmd_plot,
    "run": _cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StylewarpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
