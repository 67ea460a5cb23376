"""Synthetic scenarios, projection features and CSV ingestion.

Random streams come from numpy's PCG64 seeded through ``SeedSequence`` with a
per-purpose spawn key, so point generation and CV shuffling never share a
stream and every experiment is reproducible from ``(spec, seed)``.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Dataset, InputError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

STREAM_POINTS = 0
STREAM_CV = 1

BAYES_DEFAULTS = {"mu_pos": [1.0, 0.0], "mu_neg": [-1.0, 0.0], "sigma": 1.0}
TWOCLOUDS_DEFAULTS = {
    "pos_center": [0.0, 0.0],
    "pos_radius": 1.0,
    "neg_center": [0.4, 0.0],
    "neg_radii": [0.8, 1.8],
}


def rng_for(seed: int, purpose: int) -> np.random.Generator:
    """PCG64 generator for one purpose-specific substream of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(purpose),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SynthSpec:
    kind: str = "bayes"
    n_pos: int = 500
    n_neg: int = 500
    seed: int = 0
    params: dict = field(default_factory=dict)
    n_angles: int = 16

    def __post_init__(self):
        if self.kind not in ("bayes", "twoclouds"):
            raise InputError(f"unknown synthetic kind {self.kind!r}")
        for name in ("n_pos", "n_neg", "n_angles"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InputError(f"{name} must be a positive integer, got {v!r}")
        if self.n_angles < 2:
            raise InputError("n_angles must be >= 2")
        defaults = BAYES_DEFAULTS if self.kind == "bayes" else TWOCLOUDS_DEFAULTS
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise InputError(f"unknown {self.kind} parameters: {sorted(unknown)}")
        merged = {**defaults, **self.params}
        if self.kind == "bayes":
            if not merged["sigma"] > 0:
                raise InputError("sigma must be positive")
        else:
            r0, r1 = merged["neg_radii"]
            if not merged["pos_radius"] > 0 or not (0 <= r0 < r1):
                raise InputError("radii must be positive with inner < outer")
        object.__setattr__(self, "params", merged)

    @classmethod
    def from_dict(cls, obj: dict) -> "SynthSpec":
        obj = dict(obj.get("synth", obj))
        try:
            return cls(**obj)
        except TypeError as exc:
            raise InputError(f"bad synthetic spec: {exc}") from exc


def load_spec(path) -> SynthSpec:
    """Read a SynthSpec from a ``.json`` or ``.toml`` file (optionally under ``[synth]``)."""
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read config {p}: {exc}") from exc
    try:
        obj = tomllib.loads(raw.decode()) if p.suffix == ".toml" else json.loads(raw)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise InputError(f"cannot parse config {p}: {exc}") from exc
    return SynthSpec.from_dict(obj)


def _disk(rng, n, center, r_in, r_out):
    # area-uniform radius on [r_in, r_out]
    u = rng.random(n)
    r = np.sqrt(r_in ** 2 + u * (r_out ** 2 - r_in ** 2))
    phi = rng.uniform(0.0, 2 * math.pi, n)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)]) + np.asarray(center, float)


def gen_points(spec: SynthSpec) -> tuple[np.ndarray, np.ndarray]:
    """Raw 2-D points and labels (positives first)."""
    rng = rng_for(spec.seed, STREAM_POINTS)
    p = spec.params
    if spec.kind == "bayes":
        pos = rng.normal(p["mu_pos"], p["sigma"], (spec.n_pos, 2))
        neg = rng.normal(p["mu_neg"], p["sigma"], (spec.n_neg, 2))
    else:
        pos = _disk(rng, spec.n_pos, p["pos_center"], 0.0, p["pos_radius"])
        neg = _disk(rng, spec.n_neg, p["neg_center"], *p["neg_radii"])
    y = np.r_[np.ones(spec.n_pos, np.int8), -np.ones(spec.n_neg, np.int8)]
    return np.vstack([pos, neg]), y


def project(points: np.ndarray, n_angles: int) -> np.ndarray:
    """Projections onto the directions k*pi/n_angles, k = 0..n_angles-1."""
    th = np.arange(n_angles) * math.pi / n_angles
    dirs = np.vstack([np.cos(th), np.sin(th)])
    # exact axes at 0 and pi/2 so n_angles=2 gives the raw coordinates
    dirs[np.abs(dirs) < 1e-15] = 0.0
    return np.asarray(points, float) @ dirs


def gen_synth(spec: SynthSpec) -> tuple[Dataset, np.ndarray]:
    pts, y = gen_points(spec)
    return Dataset.from_arrays(project(pts, spec.n_angles), y), pts


# -- CSV ------------------------------------------------------------------

def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def load_csv(path, label_column="last", positive_label="1") -> Dataset:
    """Read a comma-separated file; rows labelled ``positive_label`` become +1.

    A first row with any non-numeric feature cell is taken as a header. The
    returned dataset's ``order`` maps each position back to its data row.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: no data rows")
    width = len(rows[0])
    if width < 2:
        raise InputError(f"{path}: need at least one feature and a label column")
    if label_column == "last":
        lc = width - 1
    else:
        lc = int(label_column)
        if lc < 0:
            lc += width
        if not 0 <= lc < width:
            raise InputError(f"label column {label_column} out of range for {width} columns")
    feat_cols = [j for j in range(width) if j != lc]
    start = 0
    if not all(_is_float(rows[0][j].strip()) for j in feat_cols):
        start = 1
    X = np.empty((len(rows) - start, len(feat_cols)))
    labels = []
    for i, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise InputError(f"{path}: row {i} has {len(row)} columns, expected {width}")
        for k, j in enumerate(feat_cols):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise InputError(f"{path}: row {i}, column {j + 1}: cannot parse {cell!r}") from None
            if not math.isfinite(v):
                raise InputError(f"{path}: row {i}, column {j + 1}: non-finite value {cell!r}")
            X[i - start - 1, k] = v
        labels.append(row[lc].strip())
    if len(X) == 0:
        raise InputError(f"{path}: no data rows")
    distinct = set(labels)
    if len(distinct) != 2:
        raise InputError(f"{path}: label column must have exactly two values, found {sorted(distinct)}")
    pos = str(positive_label)
    if pos not in distinct:
        raise InputError(f"{path}: positive label {pos!r} not among {sorted(distinct)}")
    y = np.where(np.array(labels) == pos, 1, -1)
    return Dataset.from_arrays(X, y)


def save_csv(ds: Dataset, path, header: bool = True) -> None:
    """Write features followed by a +1/-1 label column (UTF-8, LF endings)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"f{j}" for j in range(ds.d)] + ["label"])
        for x, y in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in x] + [int(y)])
