"""Regenerates the synthetic empirical latency samples under data/samples/.

Only the maxima (and, for Kampala, the ~440 ms means) are taken from the
published city-pair observations; everything else is synthetic. The largest
sample of each file is pinned to the published maximum.

Run: python3 tools/make_fixtures.py
"""
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "samples"

# name: (mean ms, sd ms, published max ms, seed)
PATHS = {
    "kampala-nyc": (440.0, 60.0, 640.0, 11),
    "kampala-chi": (440.0, 65.0, 671.0, 12),
    "knoxville-nyc": (38.0, 9.0, 70.0, 21),
    "knoxville-chi": (32.0, 10.0, 80.0, 22),
    "london-nyc": (38.0, 8.0, 72.0, 31),
    "london-chi": (52.0, 9.0, 80.0, 32),
    "frankfurt-nyc": (47.0, 9.0, 86.0, 41),
    "frankfurt-chi": (61.0, 10.0, 95.0, 42),
}
N = 288  # one observation every five minutes for a day


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (mean, sd, peak, seed) in PATHS.items():
        rng = np.random.default_rng(seed)
        draws = rng.normal(mean, sd, N - 1)
        draws = np.clip(draws, 0.25 * mean, peak - 1.0)
        values = np.append(np.round(draws, 1), peak)
        with open(OUT / f"{name}.csv", "w") as fh:
            fh.write(f"# synthetic samples; maximum pinned to the observed {peak:g} ms\n")
            fh.write("latency_ms\n")
            for v in values:
                fh.write(f"{v:.1f}\n")


if __name__ == "__main__":
    main()
