"""Evaluation harness: interval plans, offline/online runs, and analyses.

A sequence is split into near-equal consecutive intervals; each adjacent
(train, test) pair forms one evaluation cell. Offline: a selector picks a
windowing of the test interval (supervised selectors see training data and
training ground truth only; unsupervised ones see test edges only, so test
ground truth is structurally out of reach), then the task runs on the
windowed test interval. Online: a selector warm-starts on the train interval
and its per-step predictions are scored across the test interval.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats as scipy_stats

from .attrpred import KernelParams, leave_out_scores, roc_auc
from .changepoint import cp_pr_auc, detect_change_points
from .linkpred import KatzParams, average_precision
from .selectors import (
    AdageOnlineSelector,
    FixedOnlineSelector,
    KatzTask,
    OnlineWindowSelector,
    RandomOnlineSelector,
    SelectorParams,
    adage_select,
    attr_split_window_quality,
    attr_window_quality,
    cp_window_quality,
    entropy_select,
    fixed_select,
    fourier_select,
    jaccard_select,
    linkpred_window_quality,
    random_windowing,
    supervised_offline_select,
)
from .temporal import ChangePointLabels, GraphSequence, VertexAttributes
from .windows import Windowing, apply_windowing, uniform_windowing, windowed_at

__all__ = [
    "IntervalPlan",
    "split_intervals",
    "OFFLINE_SELECTORS",
    "ONLINE_SELECTORS",
    "TASKS",
    "choose_test_windowing",
    "CellResult",
    "ExperimentReport",
    "run_offline",
    "run_online",
    "run_suite",
    "CurveSet",
    "score_curves",
    "cross_task_matrix",
    "spearman",
    "spearman_table",
    "stability_diff",
    "stability_curve",
    "hyperparam_sweep",
    "derive_seed",
]

log = logging.getLogger(__name__)

TASKS = ("linkpred", "attribute", "changepoint")

OFFLINE_SELECTORS = (
    "supervised",
    "hand-picked",
    "random",
    "no-time",
    "fourier",
    "jaccard",
    "entropy",
    "adage",
)

ONLINE_SELECTORS = (
    "online",
    "online-weighted",
    "training-only",
    "hand-picked",
    "random",
    "adage",
)


@dataclass(frozen=True)
class IntervalPlan:
    """Consecutive 1-based inclusive interval spans covering a sequence."""

    spans: tuple[tuple[int, int], ...]

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Indices of consecutive (train, test) interval pairs."""
        return tuple((i, i + 1) for i in range(len(self.spans) - 1))


def split_intervals(length: int, count: int = 6) -> IntervalPlan:
    """Split `length` steps into `count` consecutive near-equal intervals;
    the remainder goes to the earliest intervals, so longer ones come first."""
    if not 1 <= count <= length:
        raise ValueError(f"interval count {count} outside [1, {length}]")
    base, extra = divmod(length, count)
    spans = []
    start = 1
    for i in range(count):
        size = base + (1 if i < extra else 0)
        spans.append((start, start + size - 1))
        start += size
    return IntervalPlan(tuple(spans))


def derive_seed(master: int, *parts: object) -> int:
    """Stable per-cell seed from the master seed and cell coordinates."""
    text = ":".join([str(master), *[str(p) for p in parts]])
    return int(hashlib.sha256(text.encode()).hexdigest()[:16], 16)


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# Offline evaluation


def choose_test_windowing(
    selector: str,
    train: GraphSequence,
    test: GraphSequence,
    *,
    task: str | None = None,
    train_cp: ChangePointLabels | None = None,
    attrs: VertexAttributes | None = None,
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
    tau: float = 0.05,
    adage_tol: float = 0.01,
    adage_patience: int = 3,
    seed: int = 0,
) -> Windowing:
    """Pick a windowing of the test interval.

    Supervised selection sees the training interval and its ground truth;
    every other selector sees test edges only. Chosen uniform sizes are
    clamped to the test length.
    """
    if selector == "hand-picked":
        return uniform_windowing(test.length, 1)
    if selector == "no-time":
        return uniform_windowing(test.length, test.length)
    if selector == "random":
        return random_windowing(test.length, seed)
    if selector == "fourier":
        return uniform_windowing(test.length, min(fourier_select(test), test.length))
    if selector == "jaccard":
        return uniform_windowing(test.length, min(jaccard_select(test, tau), test.length))
    if selector == "entropy":
        return entropy_select(test)
    if selector == "adage":
        size = adage_select(test, adage_tol, adage_patience)
        return uniform_windowing(test.length, min(size, test.length))
    if selector == "supervised":
        if task == "changepoint":
            if train_cp is None:
                raise ValueError("supervised change-point selection needs training truth")
            if not train_cp.times:
                log.info("training interval has no change points; selection sees empty truth")
            selection = supervised_offline_select(
                train, lambda s, w: cp_window_quality(s, w, train_cp)
            )
        elif task == "attribute":
            if attrs is None:
                raise ValueError("supervised attribute selection needs attributes")
            selection = supervised_offline_select(
                train,
                lambda s, w: attr_split_window_quality(s, w, attrs, kernel, batch_size),
            )
        else:
            raise ValueError(f"no offline supervised selection for task {task!r}")
        return uniform_windowing(test.length, min(selection.chosen, test.length))
    raise ValueError(f"unknown offline selector {selector!r}")


@dataclass(frozen=True)
class CellResult:
    """One (selector, task, interval-pair) evaluation."""

    selector: str
    task: str
    pair_index: int
    train_span: tuple[int, int]
    test_span: tuple[int, int]
    score: float | None
    detail: Mapping[str, object] = field(default_factory=dict)


@dataclass
class ExperimentReport:
    """Cells plus per-selector/per-task aggregates, optional score curves,
    and run metadata; serializes deterministically."""

    metadata: dict
    cells: list[CellResult]
    aggregates: dict  # selector -> task -> {"score": ..., "method": ...}
    curves: "CurveSet | None" = None

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "cells": [
                {
                    "selector": c.selector,
                    "task": c.task,
                    "pair_index": c.pair_index,
                    "train_span": list(c.train_span),
                    "test_span": list(c.test_span),
                    "score": c.score,
                    "detail": _jsonable(c.detail),
                }
                for c in self.cells
            ],
            "aggregates": _jsonable(self.aggregates),
            "curves": self.curves.to_dict() if self.curves is not None else None,
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    def write_csv(self, path: str | Path) -> None:
        lines = ["selector,task,pair,train_start,train_end,test_start,test_end,score"]
        for c in self.cells:
            score = "" if c.score is None else repr(c.score)
            lines.append(
                f"{c.selector},{c.task},{c.pair_index},{c.train_span[0]},{c.train_span[1]},"
                f"{c.test_span[0]},{c.test_span[1]},{score}"
            )
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonable(value):
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        # keep the serialized report strict JSON
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    return value


def _offline_cell(args: tuple) -> tuple[int, float | None, dict]:
    (
        seq,
        selector,
        task,
        pair_index,
        train_span,
        test_span,
        attrs,
        cp_truth,
        kernel,
        batch_size,
        tau,
        adage_tol,
        adage_patience,
        seed,
    ) = args
    train = seq.slice_steps(*train_span)
    test = seq.slice_steps(*test_span)
    train_cp = cp_truth.restrict(*train_span) if cp_truth is not None else None
    test_cp = cp_truth.restrict(*test_span) if cp_truth is not None else None
    windowing = choose_test_windowing(
        selector,
        train,
        test,
        task=task,
        train_cp=train_cp,
        attrs=attrs,
        kernel=kernel,
        batch_size=batch_size,
        tau=tau,
        adage_tol=adage_tol,
        adage_patience=adage_patience,
        seed=seed,
    )
    ws = apply_windowing(test, windowing)
    detail: dict = {"windowing": list(windowing.cuts), "window_sizes": list(windowing.sizes())}
    if task == "changepoint":
        result = detect_change_points(ws)
        score = cp_pr_auc(result.times, test_cp.times, test.length)
        detail["detected"] = list(result.times)
        detail["truth"] = list(test_cp.times)
        return pair_index, score, detail
    # attribute task: per-pair AUC plus raw pairs for pooling
    pairs = leave_out_scores(ws, attrs, batch_size, kernel)
    _, positive = attrs.classes
    flags = [lab == positive for _, lab in pairs]
    score = roc_auc([s for s, _ in pairs], flags)
    detail["pairs"] = [[s, lab] for s, lab in pairs]
    return pair_index, score, detail


def run_offline(
    seq: GraphSequence,
    plan: IntervalPlan,
    selector: str,
    task: str,
    *,
    attrs: VertexAttributes | None = None,
    cp_truth: ChangePointLabels | None = None,
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
    tau: float = 0.05,
    adage_tol: float = 0.01,
    adage_patience: int = 3,
    seed: int = 0,
    jobs: int = 1,
) -> ExperimentReport:
    """Evaluate one offline selector on one task across all interval pairs.

    Change-point pair scores average into the aggregate; attribute pairs pool
    their (score, label) lists into a single AUC (the population repeats
    across test sets, so pooling is the meaningful combination).
    """
    if task not in ("attribute", "changepoint"):
        raise ValueError(f"offline evaluation covers attribute/changepoint, not {task!r}")
    if selector not in OFFLINE_SELECTORS:
        raise ValueError(f"unknown offline selector {selector!r}")
    if task == "attribute" and attrs is None:
        raise ValueError("attribute evaluation needs attributes")
    if task == "changepoint" and cp_truth is None:
        raise ValueError("change-point evaluation needs ground-truth labels")
    args = [
        (
            seq,
            selector,
            task,
            idx,
            plan.spans[a],
            plan.spans[b],
            attrs,
            cp_truth,
            kernel,
            batch_size,
            tau,
            adage_tol,
            adage_patience,
            derive_seed(seed, selector, task, idx),
        )
        for idx, (a, b) in enumerate(plan.pairs)
    ]
    results = _pmap(_offline_cell, args, jobs)
    cells = []
    for (pair_index, score, detail), (a, b) in zip(results, plan.pairs):
        cells.append(
            CellResult(selector, task, pair_index, plan.spans[a], plan.spans[b], score, detail)
        )
    if task == "changepoint":
        scores = [c.score for c in cells if c.score is not None]
        aggregate = math.fsum(scores) / len(scores) if scores else None
        entry = {"score": aggregate, "method": "mean"}
    else:
        pooled: list[tuple[float, bool]] = []
        _, positive = attrs.classes
        for c in cells:
            pooled.extend((s, lab == positive) for s, lab in c.detail["pairs"])
        aggregate = roc_auc([s for s, _ in pooled], [b for _, b in pooled])
        entry = {"score": aggregate, "method": "pooled"}
    metadata = {
        "mode": "offline",
        "selector": selector,
        "task": task,
        "seed": seed,
        "intervals": [list(s) for s in plan.spans],
    }
    return ExperimentReport(metadata, cells, {selector: {task: entry}})


# --------------------------------------------------------------------------
# Online evaluation


def _make_online_selector(
    name: str,
    n: int,
    katz: KatzParams,
    params: SelectorParams,
    train_length: int,
    seed: int,
    resolution: int,
):
    task = KatzTask(katz)
    if name == "online":
        flat = SelectorParams(params.min_tests, params.top_count, 1.0, params.seed)
        return OnlineWindowSelector(n, task, flat, resolution=resolution)
    if name == "online-weighted":
        return OnlineWindowSelector(n, task, params, resolution=resolution)
    if name == "training-only":
        flat = SelectorParams(params.min_tests, params.top_count, 1.0, params.seed)
        return OnlineWindowSelector(n, task, flat, freeze_after=train_length, resolution=resolution)
    if name == "hand-picked":
        return FixedOnlineSelector(n, task, size=1, resolution=resolution)
    if name == "random":
        return RandomOnlineSelector(n, task, seed=seed, resolution=resolution)
    if name == "adage":
        return AdageOnlineSelector(n, task, resolution=resolution)
    raise ValueError(f"unknown online selector {name!r}")


def _online_pair(
    seq: GraphSequence,
    selector: str,
    train_span: tuple[int, int],
    test_span: tuple[int, int],
    katz: KatzParams,
    params: SelectorParams,
    seed: int,
    shared_ledger=None,
) -> tuple[float | None, dict, object]:
    stream = seq.slice_steps(train_span[0], test_span[1])
    train_length = train_span[1] - train_span[0] + 1
    sel = _make_online_selector(
        selector, seq.n, katz, params, train_length, seed, seq.resolution
    )
    if shared_ledger is not None and hasattr(sel, "ledger"):
        sel.ledger = shared_ledger
    scores: list[float] = []
    scored: list[dict] = []
    run_log: list[dict] = []
    previous = None
    for local, g in enumerate(stream.graphs, start=1):
        if previous is not None and local > train_length:
            positives = g.edges - previous.last_graph.edges
            if positives:
                ap = average_precision(previous.prediction, positives)
                scores.append(ap)
                scored.append({"target_step": local, "chosen": previous.chosen, "score": ap})
            else:
                scored.append({"target_step": local, "chosen": previous.chosen, "score": None})
        previous = sel.process(g)
        run_log.append(
            {
                "step": local,
                "tested": [[w, s] for w, s in previous.tested],
                "chosen": previous.chosen,
            }
        )
    ledger = getattr(sel, "ledger", None)
    detail = {"scored": scored, "log": run_log}
    if not scores:
        log.info("pair %s->%s has no scoreable steps; skipped", train_span, test_span)
        return None, detail, ledger
    return math.fsum(scores) / len(scores), detail, ledger


def _online_pair_args(args: tuple) -> tuple[float | None, dict, object]:
    return _online_pair(*args)


def run_online(
    seq: GraphSequence,
    plan: IntervalPlan,
    selector: str,
    *,
    katz: KatzParams = KatzParams(),
    params: SelectorParams = SelectorParams(),
    seed: int = 0,
    carry_ledger: bool = False,
    jobs: int = 1,
) -> ExperimentReport:
    """One-step-ahead link prediction with per-step size selection.

    For each (train, test) pair the selector consumes the whole contiguous
    stream; predictions targeting test-interval steps are scored by average
    precision against that step's new links. The ledger resets per pair
    unless `carry_ledger` is set. Pairs without a single scoreable step are
    skipped; the aggregate is the mean of pair means.
    """
    if selector not in ONLINE_SELECTORS:
        raise ValueError(f"unknown online selector {selector!r}")
    cells: list[CellResult] = []
    if carry_ledger or jobs <= 1:
        shared_ledger = None
        for idx, (a, b) in enumerate(plan.pairs):
            pair_seed = derive_seed(seed, selector, "linkpred", idx)
            score, detail, ledger = _online_pair(
                seq,
                selector,
                plan.spans[a],
                plan.spans[b],
                katz,
                params,
                pair_seed,
                shared_ledger,
            )
            if carry_ledger:
                detail["carried_ledger"] = shared_ledger is not None
                shared_ledger = ledger
            cells.append(
                CellResult(selector, "linkpred", idx, plan.spans[a], plan.spans[b], score, detail)
            )
    else:
        args = [
            (
                seq,
                selector,
                plan.spans[a],
                plan.spans[b],
                katz,
                params,
                derive_seed(seed, selector, "linkpred", idx),
                None,
            )
            for idx, (a, b) in enumerate(plan.pairs)
        ]
        results = _pmap(_online_pair_args, args, jobs)
        for idx, ((a, b), (score, detail, _)) in enumerate(zip(plan.pairs, results)):
            cells.append(
                CellResult(selector, "linkpred", idx, plan.spans[a], plan.spans[b], score, detail)
            )
    scores = [c.score for c in cells if c.score is not None]
    aggregate = math.fsum(scores) / len(scores) if scores else None
    metadata = {
        "mode": "online",
        "selector": selector,
        "task": "linkpred",
        "seed": seed,
        "carry_ledger": carry_ledger,
        "params": {
            "min_tests": params.min_tests,
            "top_count": params.top_count,
            "alpha": params.alpha,
        },
        "intervals": [list(s) for s in plan.spans],
    }
    aggregates = {selector: {"linkpred": {"score": aggregate, "method": "mean"}}}
    return ExperimentReport(metadata, cells, aggregates)


def run_suite(
    seq: GraphSequence,
    plan: IntervalPlan,
    mode: str,
    selectors: Sequence[str],
    task: str,
    *,
    attrs: VertexAttributes | None = None,
    cp_truth: ChangePointLabels | None = None,
    katz: KatzParams = KatzParams(),
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
    tau: float = 0.05,
    adage_tol: float = 0.01,
    adage_patience: int = 3,
    params: SelectorParams = SelectorParams(),
    seed: int = 0,
    carry_ledger: bool = False,
    jobs: int = 1,
) -> ExperimentReport:
    """Run several selectors on one task and merge them into one report."""
    if mode not in ("offline", "online"):
        raise ValueError(f"mode must be 'offline' or 'online', not {mode!r}")
    if len(set(selectors)) != len(selectors):
        raise ValueError("duplicate selector names")
    cells: list[CellResult] = []
    aggregates: dict = {}
    for name in selectors:
        if mode == "offline":
            rep = run_offline(
                seq,
                plan,
                name,
                task,
                attrs=attrs,
                cp_truth=cp_truth,
                kernel=kernel,
                batch_size=batch_size,
                tau=tau,
                adage_tol=adage_tol,
                adage_patience=adage_patience,
                seed=seed,
                jobs=jobs,
            )
        else:
            rep = run_online(
                seq,
                plan,
                name,
                katz=katz,
                params=params,
                seed=seed,
                carry_ledger=carry_ledger,
                jobs=jobs,
            )
        cells.extend(rep.cells)
        aggregates[name] = rep.aggregates[name]
    metadata = {
        "mode": mode,
        "selectors": list(selectors),
        "task": task if mode == "offline" else "linkpred",
        "seed": seed,
        "intervals": [list(s) for s in plan.spans],
    }
    return ExperimentReport(metadata, cells, aggregates)


# --------------------------------------------------------------------------
# Curves and cross-task analyses


@dataclass(frozen=True)
class CurveSet:
    """Per-task, per-interval quality at every common uniform size."""

    tasks: tuple[str, ...]
    sizes: tuple[int, ...]
    intervals: tuple[tuple[int, int], ...]
    values: Mapping[str, tuple[tuple[float, ...], ...]]  # task -> interval -> size
    dataset_id: str = ""

    def curve(self, task: str, interval: int) -> tuple[float, ...]:
        return self.values[task][interval]

    def mean_curve(self, task: str) -> tuple[float, ...]:
        per_interval = self.values[task]
        return tuple(
            math.fsum(curve[j] for curve in per_interval) / len(per_interval)
            for j in range(len(self.sizes))
        )

    def to_dict(self) -> dict:
        return {
            "tasks": list(self.tasks),
            "sizes": list(self.sizes),
            "intervals": [list(s) for s in self.intervals],
            "values": {t: [list(c) for c in self.values[t]] for t in self.tasks},
            "dataset_id": self.dataset_id,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CurveSet":
        return cls(
            tasks=tuple(data["tasks"]),
            sizes=tuple(int(s) for s in data["sizes"]),
            intervals=tuple((int(a), int(b)) for a, b in data["intervals"]),
            values={
                t: tuple(tuple(float(x) for x in c) for c in data["values"][t])
                for t in data["tasks"]
            },
            dataset_id=str(data.get("dataset_id", "")),
        )


def _curve_cell(args: tuple) -> tuple[str, int, tuple[float, ...]]:
    seq, task, interval_idx, span, sizes, attrs, cp_truth, katz, kernel, batch_size = args
    segment = seq.slice_steps(*span)
    values: list[float] = []
    for w in sizes:
        if task == "linkpred":
            values.append(linkpred_window_quality(segment, w, katz))
        elif task == "attribute":
            values.append(attr_window_quality(segment, w, attrs, kernel, batch_size))
        else:
            local_truth = cp_truth.restrict(*span)
            values.append(cp_window_quality(segment, w, local_truth))
    return task, interval_idx, tuple(values)


def score_curves(
    seq: GraphSequence,
    plan: IntervalPlan,
    tasks: Sequence[str],
    *,
    attrs: VertexAttributes | None = None,
    cp_truth: ChangePointLabels | None = None,
    katz: KatzParams = KatzParams(),
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
    dataset_id: str = "",
    jobs: int = 1,
) -> CurveSet:
    """Quality of every uniform size, per task, per interval.

    Sizes run from 1 to the shortest interval length so curves align across
    intervals.
    """
    for task in tasks:
        if task not in TASKS:
            raise ValueError(f"unknown task {task!r}")
    if "attribute" in tasks and attrs is None:
        raise ValueError("attribute curves need attributes")
    if "changepoint" in tasks and cp_truth is None:
        raise ValueError("change-point curves need ground-truth labels")
    w_max = min(b - a + 1 for a, b in plan.spans)
    sizes = tuple(range(1, w_max + 1))
    args = [
        (seq, task, idx, span, sizes, attrs, cp_truth, katz, kernel, batch_size)
        for task in tasks
        for idx, span in enumerate(plan.spans)
    ]
    results = _pmap(_curve_cell, args, jobs)
    values: dict[str, dict[int, tuple[float, ...]]] = {t: {} for t in tasks}
    for task, idx, curve in results:
        values[task][idx] = curve
    packed = {
        t: tuple(values[t][i] for i in range(len(plan.spans))) for t in tasks
    }
    return CurveSet(tuple(tasks), sizes, plan.spans, packed, dataset_id)


def cross_task_matrix(curves: CurveSet) -> dict:
    """Each task's best size applied to every other task.

    Entry (chooser, scored) = mean over intervals of the scored task's value
    at the chooser task's per-interval argmax size (smallest on ties). A
    task's own entry averages per-interval maxima, so no other chooser can
    beat it on its task. Also reports each task's argmax of the interval-mean
    curve.
    """
    n_int = len(curves.intervals)
    argmax_per_interval: dict[str, list[int]] = {}
    for task in curves.tasks:
        per = []
        for i in range(n_int):
            curve = curves.curve(task, i)
            best = min(range(len(curve)), key=lambda j: (-curve[j], j))
            per.append(best)
        argmax_per_interval[task] = per
    entries: dict[str, dict[str, float]] = {}
    for chooser in curves.tasks:
        entries[chooser] = {}
        for scored in curves.tasks:
            total = 0.0
            for i in range(n_int):
                j = argmax_per_interval[chooser][i]
                total += curves.curve(scored, i)[j]
            entries[chooser][scored] = total / n_int
    overall_argmax = {}
    for task in curves.tasks:
        mean = curves.mean_curve(task)
        j = min(range(len(mean)), key=lambda i: (-mean[i], i))
        overall_argmax[task] = curves.sizes[j]
    return {"entries": entries, "argmax": overall_argmax}


def spearman(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Rank correlation (Pearson of midranks) with a two-sided t-test p-value.

    Zero rank variance makes the statistic undefined; (nan, nan) is returned
    and logged.
    """
    if len(xs) != len(ys):
        raise ValueError("paired samples must align")
    if len(xs) < 3:
        raise ValueError("rank correlation needs at least 3 pairs")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # constant input: we report nan ourselves
        rho, p = scipy_stats.spearmanr(xs, ys)
    if math.isnan(rho):
        log.warning("zero rank variance; rank correlation undefined")
        return (float("nan"), float("nan"))
    return float(rho), float(p)


def spearman_table(curves: CurveSet) -> dict:
    """Pairwise task rank correlations over pooled (interval, size) samples."""
    out: dict[str, dict[str, list[float]]] = {}
    n_int = len(curves.intervals)
    for i, ta in enumerate(curves.tasks):
        for tb in curves.tasks[i + 1 :]:
            xs = [curves.curve(ta, k)[j] for k in range(n_int) for j in range(len(curves.sizes))]
            ys = [curves.curve(tb, k)[j] for k in range(n_int) for j in range(len(curves.sizes))]
            rho, p = spearman(xs, ys)
            out.setdefault(ta, {})[tb] = [rho, p]
    return out


def stability_diff(curves: CurveSet) -> dict[str, float]:
    """Mean absolute score change between consecutive intervals, per task."""
    out = {}
    n_int = len(curves.intervals)
    if n_int < 2:
        raise ValueError("stability needs at least 2 intervals")
    for task in curves.tasks:
        diffs = [
            abs(curves.curve(task, i + 1)[j] - curves.curve(task, i)[j])
            for i in range(n_int - 1)
            for j in range(len(curves.sizes))
        ]
        out[task] = math.fsum(diffs) / len(diffs)
    return out


def stability_curve(curves: CurveSet) -> dict[str, tuple[float, ...]]:
    """Per size: mean absolute score change between consecutive intervals."""
    n_int = len(curves.intervals)
    if n_int < 2:
        raise ValueError("stability needs at least 2 intervals")
    out = {}
    for task in curves.tasks:
        per_size = []
        for j in range(len(curves.sizes)):
            diffs = [
                abs(curves.curve(task, i + 1)[j] - curves.curve(task, i)[j])
                for i in range(n_int - 1)
            ]
            per_size.append(math.fsum(diffs) / len(diffs))
        out[task] = tuple(per_size)
    return out


def hyperparam_sweep(
    seq: GraphSequence,
    plan: IntervalPlan,
    *,
    min_tests_values: Sequence[float] = (),
    top_count_values: Sequence[float] = (),
    fixed: float = 10.0,
    selector: str = "online",
    katz: KatzParams = KatzParams(),
    alpha: float = 0.5,
    seed: int = 0,
    jobs: int = 1,
) -> list[dict]:
    """Aggregate online score across a one-axis-at-a-time parameter grid."""
    records = []
    for value in min_tests_values:
        params = SelectorParams(min_tests=value, top_count=fixed, alpha=alpha, seed=seed)
        report = run_online(seq, plan, selector, params=params, katz=katz, seed=seed, jobs=jobs)
        score = report.aggregates[selector]["linkpred"]["score"]
        records.append({"axis": "min_tests", "value": value, "fixed": fixed, "score": score})
    for value in top_count_values:
        params = SelectorParams(min_tests=fixed, top_count=value, alpha=alpha, seed=seed)
        report = run_online(seq, plan, selector, params=params, katz=katz, seed=seed, jobs=jobs)
        score = report.aggregates[selector]["linkpred"]["score"]
        records.append({"axis": "top_count", "value": value, "fixed": fixed, "score": score})
    return records
