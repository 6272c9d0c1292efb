"""End-to-end pipeline: train, pick anchors, build signals, compare, project, plot.

Stages run sequentially and talk to each other only through their output
files, so ``--resume`` can skip any stage whose outputs already exist. One
root seed fans out to per-stage seeds through a fixed hash, keeping stages
decorrelated while staying fully reproducible.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import analysis, anchors, corpus, embedding, plots, signal
from .errors import StageError
from .manifest import Manifest

STAGES = ("train", "anchors", "signals", "matrix", "mds", "plot")


def stage_seed(root_seed: int, stage: str) -> int:
    digest = hashlib.sha256(f"{root_seed}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1  # keep it a positive int64


def _artifacts(out: Path, manifest: Manifest) -> dict[str, object]:
    return {
        "model": out / "model.txt",
        "anchors": out / "anchors.csv",
        "signals": {b.id: out / "signals" / f"{b.id}.csv" for b in manifest.books},
        "matrix": out / "dist.csv",
        "layout": out / "layout.csv",
        "scatter": out / "scatter.svg",
        "run": out / "run.json",
    }


def run_pipeline(manifest: Manifest, resume: bool = False, workers: int | None = None):
    """Execute all stages; returns the artifact path map.

    Any stage failure is re-raised as StageError naming the stage; artifacts
    written before the failure are left in place.
    """
    out = manifest.output_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "signals").mkdir(exist_ok=True)
    paths = _artifacts(out, manifest)
    n_workers = workers if workers is not None else manifest.workers

    timings: list[dict[str, float | str]] = []
    book_stats: dict[str, dict[str, int]] = {}

    def run_stage(name: str, outputs: list[Path], fn) -> None:
        started = time.perf_counter()
        if resume and outputs and all(p.exists() for p in outputs):
            timings.append(
                {"stage": name, "seconds": max(time.perf_counter() - started, 1e-9),
                 "skipped": True}
            )
            return
        try:
            fn()
        except Exception as exc:
            raise StageError(name, exc) from exc
        timings.append(
            {"stage": name, "seconds": max(time.perf_counter() - started, 1e-9)}
        )

    def do_train() -> None:
        docs = corpus.load_corpus_dir(manifest.training_corpus)
        vocab = corpus.build_vocab(docs, min_count=manifest.min_count)
        config = embedding.TrainingConfig(
            dim=manifest.dim,
            window=manifest.window,
            epochs=manifest.epochs,
            negative=manifest.negative,
            initial_lr=manifest.learning_rate,
            seed=stage_seed(manifest.seed, "train"),
            mode=manifest.mode,
            subsample=manifest.subsample,
        )
        model = embedding.train(docs, vocab, config, workers=n_workers)
        embedding.save_model(model, paths["model"])

    def do_anchors() -> None:
        model = embedding.load_model(paths["model"])
        points = anchors.select_anchor_inputs(model, manifest.top_n)
        if manifest.spherical:
            points = anchors.normalize_rows(points)
        result = anchors.kmeans(points, manifest.k, seed=stage_seed(manifest.seed, "anchors"))
        anchors.save_anchors(result, paths["anchors"])

    def do_signals() -> None:
        model = embedding.load_model(paths["model"])
        anchor_set = anchors.load_anchors(paths["anchors"])
        cfg = signal.SmoothingConfig(window=manifest.smooth_window, sigma=manifest.sigma)
        for book in manifest.books:
            doc = corpus.load_document(book.path)
            doc = corpus.Document(id=book.id, sentences=doc.sentences)
            book_stats[book.id] = {"n_w": doc.word_count, "n_s": 0}
            raw = signal.make_signal(doc, model, anchor_set)
            smoothed = signal.gaussian_smooth(raw, cfg)
            book_stats[book.id]["n_s"] = smoothed.matrix.shape[0]
            signal.save_signal(smoothed, paths["signals"][book.id])

    def do_matrix() -> None:
        signals = [
            signal.load_signal(paths["signals"][b.id], book_id=b.id) for b in manifest.books
        ]
        matrix = analysis.distance_matrix(
            signals,
            method=manifest.method,
            radius=manifest.radius,
            workers=n_workers,
            normalize=manifest.normalize == "path-length",
        )
        analysis.save_distance_matrix(matrix, paths["matrix"])

    def do_mds() -> None:
        matrix = analysis.load_distance_matrix(paths["matrix"])
        layout = analysis.classical_mds(matrix, dim=2, seed=stage_seed(manifest.seed, "mds"))
        analysis.save_layout(layout, paths["layout"])

    def do_plot() -> None:
        layout = analysis.load_layout(paths["layout"])
        plots.scatter_svg(layout, manifest.authors(), paths["scatter"])

    wall_start = time.perf_counter()
    run_stage("train", [paths["model"]], do_train)
    run_stage("anchors", [paths["anchors"]], do_anchors)
    run_stage("signals", list(paths["signals"].values()), do_signals)
    run_stage("matrix", [paths["matrix"]], do_matrix)
    run_stage("mds", [paths["layout"]], do_mds)
    run_stage("plot", [paths["scatter"]], do_plot)

    matrix = analysis.load_distance_matrix(paths["matrix"])
    fraction, detail = analysis.nearest_neighbor_author_fraction(matrix, manifest.authors())

    if not book_stats:  # signals stage skipped on resume; recover counts from files
        for book in manifest.books:
            sig = signal.load_signal(paths["signals"][book.id], book_id=book.id)
            doc = corpus.load_document(book.path)
            book_stats[book.id] = {"n_w": doc.word_count, "n_s": sig.matrix.shape[0]}

    report = {
        "config": manifest.as_dict(),
        "stages": timings,
        "wall_seconds": time.perf_counter() - wall_start,
        "books": book_stats,
        "nearest_neighbor": {
            "fraction_same_author": fraction,
            "per_book": detail,
        },
    }
    paths["run"].write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return paths
