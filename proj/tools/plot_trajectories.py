#!/usr/bin/env python3
# Copyright 2026 The TQS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plot observables and fidelity from the trajectory CSVs of one run directory."""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("run_dir", type=pathlib.Path)
    ap.add_argument("-o", "--output", type=pathlib.Path, default=None, help="image path (default run_dir/trajectories.png)")
    args = ap.parse_args()

    frames = {p.stem.removeprefix("trajectory_"): pd.read_csv(p) for p in sorted(args.run_dir.glob("trajectory_*.csv"))}
    if not frames:
        raise SystemExit(f"no trajectory_*.csv in {args.run_dir}")
    obs = sorted({c for df in frames.values() for c in df.columns if c.startswith("obs_")})
    has_fid = any("fidelity" in df.columns for df in frames.values())

    colors = {m: f"C{i}" for i, m in enumerate(frames)}
    n = len(obs) + has_fid
    fig, axes = plt.subplots(n, 1, figsize=(6, 2.6 * n), sharex=True, squeeze=False)
    for ax, col in zip(axes[:, 0], obs):
        for method, df in frames.items():
            if col in df.columns:
                ax.plot(df["t"], df[col], label=method, color=colors[method], linestyle="--" if method == "exact" else "-")
        ax.set_ylabel(f"<{col[4:].replace('_', ' ')}>")
        ax.legend()
    if has_fid:
        ax = axes[-1, 0]
        for method, df in frames.items():
            if "fidelity" in df.columns:
                ax.plot(df["t"], df["fidelity"], label=method, color=colors[method])
        ax.set_ylabel("fidelity")
        ax.legend()
    axes[-1, 0].set_xlabel("t")
    fig.tight_layout()
    out = args.output or args.run_dir / "trajectories.png"
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
