"""Pipeline manifest: a line-oriented key=value file with [section] headers.

Unknown sections or keys are hard errors, as are duplicates; every message
carries a line number. Omitted keys fall back to the pipeline defaults
(vector size 100, context window 10, 4 anchors, smoothing window 200 with
sigma 60, refinement radius 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

_SCHEMA: dict[str, dict[str, tuple[type, object]]] = {
    "run": {
        "training_corpus": (str, None),
        "output_dir": (str, None),
        "seed": (int, 1),
        "workers": (int, 1),
    },
    "training": {
        "dim": (int, 100),
        "window": (int, 10),
        "epochs": (int, 5),
        "negative": (int, 5),
        "learning_rate": (float, 0.025),
        "mode": (str, "cbow"),
        "min_count": (int, 5),
        "subsample": (float, 0.0),
    },
    "anchors": {
        "k": (int, 4),
        "top_n": (int, 0),
        "spherical": (bool, False),
    },
    "signal": {
        "smooth_window": (int, 200),
        "sigma": (float, 60.0),
    },
    "dtw": {
        "method": (str, "fastdtw"),
        "radius": (int, 1),
        "normalize": (str, "none"),
    },
}


@dataclass
class BookEntry:
    id: str
    path: Path
    author: str


@dataclass
class Manifest:
    training_corpus: Path
    output_dir: Path
    seed: int
    workers: int
    books: list[BookEntry]
    dim: int
    window: int
    epochs: int
    negative: int
    learning_rate: float
    mode: str
    min_count: int
    subsample: float
    k: int
    top_n: int
    spherical: bool
    smooth_window: int
    sigma: float
    method: str
    radius: int
    normalize: str
    source: Path | None = field(default=None)

    def authors(self) -> dict[str, str]:
        return {b.id: b.author for b in self.books}

    def as_dict(self) -> dict:
        d = {
            "training_corpus": str(self.training_corpus),
            "output_dir": str(self.output_dir),
            "seed": self.seed,
            "workers": self.workers,
            "books": [{"id": b.id, "path": str(b.path), "author": b.author} for b in self.books],
        }
        for section, keys in _SCHEMA.items():
            if section == "run":
                continue
            for key in keys:
                d[key] = getattr(self, key)
        return d


def _convert(path: Path, lineno: int, key: str, value: str, typ: type):
    try:
        if typ is bool:
            lowered = value.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(value)
        return typ(value)
    except ValueError:
        raise ParseError(
            path, lineno, f"key {key!r} expects a {typ.__name__} value, got {value!r}"
        ) from None


def parse_manifest(path: str | Path) -> Manifest:
    """Parse and range-check a manifest; referenced paths are not yet touched."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"manifest file not found: {path}")

    values: dict[str, object] = {}
    books: list[BookEntry] = []
    seen: dict[tuple[str, str], int] = {}
    section: str | None = None

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line.startswith(";"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip()
                if section != "books" and section not in _SCHEMA:
                    raise ParseError(path, lineno, f"unknown section [{section}]")
                continue
            if "=" not in line:
                raise ParseError(path, lineno, f"expected key = value, got {line!r}")
            if section is None:
                raise ParseError(path, lineno, "key outside any [section]")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if (section, key) in seen:
                raise ParseError(
                    path, lineno,
                    f"duplicate key {key!r} in [{section}] (first at line {seen[(section, key)]})",
                )
            seen[(section, key)] = lineno
            if section == "books":
                book_path, sep, author = value.rpartition(",")
                if not sep or not book_path.strip() or not author.strip():
                    raise ParseError(
                        path, lineno, f"book entry must be 'path, author', got {value!r}"
                    )
                books.append(BookEntry(id=key, path=Path(book_path.strip()), author=author.strip()))
                continue
            if key not in _SCHEMA[section]:
                raise ParseError(path, lineno, f"unknown key {key!r} in [{section}]")
            typ, _ = _SCHEMA[section][key]
            values[key] = _convert(path, lineno, key, value, typ)

    for section, keys in _SCHEMA.items():
        for key, (typ, default) in keys.items():
            if key not in values:
                if default is None:
                    raise ParseError(path, 1, f"missing required key {key!r} in [{section}]")
                values[key] = default

    manifest = Manifest(
        training_corpus=Path(str(values["training_corpus"])),
        output_dir=Path(str(values["output_dir"])),
        seed=int(values["seed"]),  # type: ignore[arg-type]
        workers=int(values["workers"]),  # type: ignore[arg-type]
        books=books,
        dim=values["dim"],  # type: ignore[arg-type]
        window=values["window"],  # type: ignore[arg-type]
        epochs=values["epochs"],  # type: ignore[arg-type]
        negative=values["negative"],  # type: ignore[arg-type]
        learning_rate=values["learning_rate"],  # type: ignore[arg-type]
        mode=values["mode"],  # type: ignore[arg-type]
        min_count=values["min_count"],  # type: ignore[arg-type]
        subsample=values["subsample"],  # type: ignore[arg-type]
        k=values["k"],  # type: ignore[arg-type]
        top_n=values["top_n"],  # type: ignore[arg-type]
        spherical=values["spherical"],  # type: ignore[arg-type]
        smooth_window=values["smooth_window"],  # type: ignore[arg-type]
        sigma=values["sigma"],  # type: ignore[arg-type]
        method=values["method"],  # type: ignore[arg-type]
        radius=values["radius"],  # type: ignore[arg-type]
        normalize=values["normalize"],  # type: ignore[arg-type]
        source=path,
    )
    _range_check(manifest, path)
    return manifest


def _range_check(m: Manifest, path: Path) -> None:
    checks = [
        (m.seed >= 0, "seed must be >= 0"),
        (m.workers >= 1, "workers must be >= 1"),
        (m.dim >= 1, "dim must be >= 1"),
        (m.window >= 1, "window must be >= 1"),
        (m.epochs >= 1, "epochs must be >= 1"),
        (m.negative >= 1, "negative must be >= 1"),
        (m.learning_rate > 0, "learning_rate must be > 0"),
        (m.mode in ("cbow", "skipgram"), "mode must be cbow or skipgram"),
        (m.min_count >= 1, "min_count must be >= 1"),
        (m.subsample >= 0, "subsample must be >= 0"),
        (m.k >= 1, "k must be >= 1"),
        (m.top_n >= 0, "top_n must be >= 0"),
        (m.smooth_window >= 1, "smooth_window must be >= 1"),
        (m.sigma > 0, "sigma must be > 0"),
        (m.method in ("exact", "fastdtw"), "method must be exact or fastdtw"),
        (m.radius >= 0, "radius must be >= 0"),
        (m.normalize in ("none", "path-length"), "normalize must be none or path-length"),
        (len(m.books) >= 2, "need at least 2 entries in [books]"),
    ]
    for ok, message in checks:
        if not ok:
            raise ParseError(path, 1, message)


def validate_manifest(path: str | Path) -> Manifest:
    """parse_manifest plus existence checks on every referenced input path."""
    manifest = parse_manifest(path)
    base = Path(path).parent
    corpus = manifest.training_corpus
    if not corpus.is_absolute():
        corpus = base / corpus
    if not corpus.is_dir():
        raise ValidationError(f"training corpus directory not found: {corpus}")
    manifest.training_corpus = corpus
    if not manifest.output_dir.is_absolute():
        manifest.output_dir = base / manifest.output_dir
    for book in manifest.books:
        resolved = book.path if book.path.is_absolute() else base / book.path
        if not resolved.is_file():
            raise ValidationError(f"book file not found: {resolved} (book {book.id!r})")
        book.path = resolved
    ids = [b.id for b in manifest.books]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate book ids in [books]")
    return manifest
