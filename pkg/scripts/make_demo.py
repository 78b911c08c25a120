#!/usr/bin/env python3
"""Generate the bundled synthetic demo dataset and run configurations.

The stream plants a different temporal signal for each task on its own
vertex group, so the best window size is task-dependent by construction:

* vertices 0-9: two rotating split-stars with period 3. Each period shows
  two half-stars and then closes the leaf clique, so link prediction only
  sees the whole pattern when windows cover a full period.
* vertices 10-21: two communities ("a" = 10-15, "b" = 16-21). The first
  third of each interval emits misleading cross-community pairs, the middle
  emits within-community pairs, and the tail is quiet, so mid-sized windows
  are the ones that capture clean community evidence.
* vertices 22-29: a dense 4-clique whose membership rotates every 4 steps,
  giving change-point ground truth at each rotation. Fine windows keep the
  rotation boundaries sharp.

Writes stream.csv, attributes.csv, changepoints.txt, and three evaluate
configs into the output directory. See docs/reproduction.md for the
commands that consume them.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

N = 30
STEPS = 36
INTERVAL = 12


def canonical(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def demo_edges(seed: int = 0) -> list[set[tuple[int, int]]]:
    """Edge set per step for the three-signal synthetic stream."""
    rng = np.random.default_rng(seed)
    steps = []
    for t in range(STEPS):
        es: set[tuple[int, int]] = set()
        period, phase = divmod(t, 3)
        for hub in ((2 * period) % 10, (2 * period + 5) % 10):
            leaves = [(hub + i) % 10 for i in (1, 2, 3, 4)]
            if phase == 0:
                es |= {canonical(hub, leaves[0]), canonical(hub, leaves[1])}
            elif phase == 1:
                es |= {canonical(hub, leaves[2]), canonical(hub, leaves[3])}
            else:
                es |= {
                    canonical(a, b)
                    for i, a in enumerate(leaves)
                    for b in leaves[i + 1 :]
                }
        local = t % INTERVAL
        if local < 4:
            for _ in range(2):
                u = int(rng.choice(range(10, 16)))
                v = int(rng.choice(range(16, 22)))
                es.add(canonical(u, v))
        elif local < 9:
            for pool in (list(range(10, 16)), list(range(16, 22))):
                u, v = rng.choice(pool, size=2, replace=False)
                es.add(canonical(int(u), int(v)))
            pool = list(range(10, 16)) if rng.integers(0, 2) == 0 else list(range(16, 22))
            u, v = rng.choice(pool, size=2, replace=False)
            es.add(canonical(int(u), int(v)))
        rotation = t // 4
        block = [22 + (2 * rotation + i) % 8 for i in range(4)]
        es |= {canonical(a, b) for i, a in enumerate(block) for b in block[i + 1 :]}
        steps.append(es)
    return steps


def write_demo(out_dir: Path, seed: int = 0) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for t, edges in enumerate(demo_edges(seed)):
        for u, v in sorted(edges):
            lines.append(f"v{u},v{v},{t}")
    (out_dir / "stream.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    attr_lines = ["vertex,community", "#types: categorical"]
    for v in range(10, 22):
        attr_lines.append(f"v{v},{'a' if v < 16 else 'b'}")
    (out_dir / "attributes.csv").write_text(
        "\n".join(attr_lines) + "\n", encoding="utf-8"
    )

    cps = "\n".join(str(t) for t in range(5, STEPS + 1, 4)) + "\n"
    (out_dir / "changepoints.txt").write_text(cps, encoding="utf-8")

    archive = str(out_dir / "archive")
    configs = {
        "config-linkpred.json": {
            "archive": archive,
            "mode": "online",
            "task": "linkpred",
            "selectors": ["online", "training-only", "random"],
            "intervals": 3,
            "seed": 3,
            "params": {"min_tests": 2, "top_count": 4, "alpha": 1.0},
            "output": str(out_dir / "report-linkpred.json"),
        },
        "config-attribute.json": {
            "archive": archive,
            "mode": "offline",
            "task": "attribute",
            "selectors": ["supervised", "random", "no-time"],
            "intervals": 3,
            "seed": 5,
            "attributes": str(out_dir / "attributes.csv"),
            "target": "community",
            "params": {"batch_size": 1},
            "output": str(out_dir / "report-attribute.json"),
        },
        "config-changepoint.json": {
            "archive": archive,
            "mode": "offline",
            "task": "changepoint",
            "selectors": ["supervised", "random"],
            "intervals": 3,
            "seed": 7,
            "changepoints": str(out_dir / "changepoints.txt"),
            "output": str(out_dir / "report-changepoint.json"),
        },
    }
    for name, config in configs.items():
        (out_dir / name).write_text(
            json.dumps(config, indent=2) + "\n", encoding="utf-8"
        )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", help="directory to write the demo files into")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    write_demo(Path(args.out_dir), args.seed)
    print(f"demo dataset and configs written to {args.out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
