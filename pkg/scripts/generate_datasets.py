#!/usr/bin/env python3
"""Generate the synthetic benchmark CSVs shipped under data/.

Each dataset is a deterministic Gaussian-mixture stand-in shaped after a
well-known tabular benchmark (row counts, class counts, feature count and
rough per-column scales), so the full pipeline can run offline.  Feature
columns are affine-rescaled to plausible ranges; the modelling pipeline
z-scores per column on the training split, so the rescaling is cosmetic.

Run from the repository root:  python3 scripts/generate_datasets.py
"""

import csv
import os

import numpy as np

OUT_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def _write(path, header, X, labels, fmt="%.6f"):
    order = np.random.default_rng(99).permutation(len(labels))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i in order:
            w.writerow([fmt % v for v in X[i]] + [labels[i]])
    print(f"wrote {path}: {len(labels)} rows")


def make_pima(seed=7, d=8):
    """Binary task, 768 rows, 500/268 split, 8 features.

    Majority: a broad central cloud plus a wider cloud over the contested
    region.  Minority: two well-separated modes plus a compact contested
    core sitting inside the wide majority cloud.  A handful of labels are
    flipped so each class carries a little annotation noise.
    """
    rng = np.random.default_rng(seed)
    e1 = np.zeros(d)
    e1[0] = 1.0
    e2 = np.zeros(d)
    e2[1] = 1.0
    ctr = 1.6 * e2
    X = np.vstack(
        [
            rng.standard_normal((350, d)) * 1.1,
            rng.standard_normal((150, d)) * 1.2 + ctr,
            rng.standard_normal((100, d)) + 2.4 * e1,
            rng.standard_normal((90, d)) - 2.4 * e1,
            rng.standard_normal((78, d)) * 0.4 + ctr,
        ]
    )
    y = np.array([0] * 500 + [1] * 268)
    flip_maj = rng.choice(350, size=10, replace=False)
    y[flip_maj] = 1
    flip_min = 500 + rng.choice(268, size=3, replace=False)
    y[flip_min] = 0

    # map standardized dims onto plausible clinical scales
    scales = {
        "Pregnancies": (3.8, 2.6, 2),
        "Glucose": (121.0, 24.0, 0),
        "BloodPressure": (69.0, 14.0, 3),
        "SkinThickness": (20.5, 11.0, 4),
        "Insulin": (80.0, 60.0, 5),
        "BMI": (32.0, 5.5, 1),
        "DiabetesPedigreeFunction": (0.47, 0.24, 6),
        "Age": (33.0, 9.0, 7),
    }
    cols = []
    for name, (mu, sigma, dim) in scales.items():
        cols.append(mu + sigma * X[:, dim])
    return list(scales), np.column_stack(cols), [str(v) for v in y]


def make_yeast(seed=11, d=8):
    """9-class task, 1479 rows, counts 463..20, 8 features.

    Class modes sit on fixed random directions; rarer classes get smaller
    radii so they crowd the centre and overlap the frequent classes.
    """
    counts = [463, 429, 244, 163, 51, 44, 35, 30, 20]
    names = ["CYT", "NUC", "MIT", "ME3", "ME2", "ME1", "EXC", "VAC", "POX"]
    radii = [2.2, 2.2, 2.0, 1.8, 1.4, 1.4, 1.3, 1.3, 1.2]
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((len(counts), d))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    X, y = [], []
    for i, n in enumerate(counts):
        X.append(rng.standard_normal((n, d)) + radii[i] * centers[i])
        y += [names[i]] * n
    X = 0.5 + 0.11 * np.vstack(X)
    header = ["mcg", "gvh", "alm", "mit", "erl", "pox", "vac", "nuc"]
    return header, X, y


def make_redwine(seed=13, d=11):
    """6-class ordinal task, 1599 rows, quality grades 3..8, 11 features.

    Grades advance along one latent axis with a quadratic drift on a
    second, so the extreme (rare) grades are offset rather than merely
    farther out.
    """
    counts = [10, 53, 681, 638, 199, 18]
    rng = np.random.default_rng(seed)
    axis = rng.standard_normal(d)
    axis /= np.linalg.norm(axis)
    side = rng.standard_normal(d)
    side -= (side @ axis) * axis
    side /= np.linalg.norm(side)
    X, y = [], []
    for i, n in enumerate(counts):
        t = (i - 2.5) * 1.1
        X.append(rng.standard_normal((n, d)) + t * axis + 0.3 * (t**2 - 2) * side)
        y += [str(i + 3)] * n
    X = np.vstack(X)
    scales = [
        ("fixed_acidity", 8.3, 1.7),
        ("volatile_acidity", 0.53, 0.18),
        ("citric_acid", 0.27, 0.19),
        ("residual_sugar", 2.5, 1.4),
        ("chlorides", 0.087, 0.047),
        ("free_sulfur_dioxide", 15.9, 10.0),
        ("total_sulfur_dioxide", 46.0, 33.0),
        ("density", 0.9967, 0.0019),
        ("pH", 3.31, 0.15),
        ("sulphates", 0.66, 0.17),
        ("alcohol", 10.4, 1.07),
    ]
    cols = [mu + sigma * X[:, j] for j, (_, mu, sigma) in enumerate(scales)]
    return [name for name, _, _ in scales], np.column_stack(cols), y


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    header, X, y = make_pima()
    _write(os.path.join(OUT_DIR, "pima_like.csv"), header + ["Outcome"], X, y)
    header, X, y = make_yeast()
    _write(os.path.join(OUT_DIR, "yeast_like.csv"), header + ["site"], X, y)
    header, X, y = make_redwine()
    _write(os.path.join(OUT_DIR, "redwine_like.csv"), header + ["quality"], X, y)


if __name__ == "__main__":
    main()
