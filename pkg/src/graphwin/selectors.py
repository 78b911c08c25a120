"""Window-size selection: task-supervised (offline and online) and baselines.

The online selector keeps a ledger of one-step-ahead prediction scores per
candidate window size, retests sizes that are under-sampled or currently
top-ranked, and emits each step's prediction from the best size so far.
Offline selection scores every uniform size on training data with a
task-quality callable. Baselines pick sizes from structural signals alone:
edge-count periodicity, neighbourhood overlap saturation, spectral-entropy
redundancy, or degree-exponent convergence.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol, Sequence

import numpy as np
from scipy.optimize import bisect
from scipy.special import zeta

from .attrpred import KernelParams, leave_out_auc, leave_out_scores, roc_auc
from .changepoint import cp_pr_auc, detect_change_points
from .linkpred import KatzParams, katz_scores, online_step_score
from .temporal import ChangePointLabels, GraphSequence, StaticGraph, VertexAttributes, union_graphs
from .windows import Windowing, WindowedSequence, apply_windowing, uniform_windowing, windowed_at

__all__ = [
    "SelectorParams",
    "ScoreLedger",
    "StepRecord",
    "KatzTask",
    "OnlineWindowSelector",
    "FixedOnlineSelector",
    "RandomOnlineSelector",
    "AdageOnlineSelector",
    "OfflineSelection",
    "supervised_offline_select",
    "linkpred_window_quality",
    "attr_window_quality",
    "attr_split_window_quality",
    "cp_window_quality",
    "fourier_select",
    "jaccard_select",
    "entropy_select",
    "adage_select",
    "random_windowing",
    "fixed_select",
    "graph_entropy",
    "powerlaw_exponent",
]

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Online supervised selection


@dataclass(frozen=True)
class SelectorParams:
    """Online-selector knobs.

    min_tests: retest any size scored fewer than this many times (inf = always).
    top_count: how many of the best-scoring sizes to retest each step (inf = all).
    alpha: per-step decay of old scores in the ledger mean; 1 = plain mean.
    seed: randomness root for selectors that need one.
    """

    min_tests: float = 10.0
    top_count: float = 10.0
    alpha: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.min_tests >= 1):
            raise ValueError("min_tests must be >= 1")
        if not (self.top_count >= 1):
            raise ValueError("top_count must be >= 1")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")


class ScoreLedger:
    """Per-size lists of (step, score) pairs with decayed-mean ranking."""

    def __init__(self) -> None:
        self._entries: dict[int, list[tuple[int, float]]] = {}

    def append(self, size: int, step: int, score: float) -> None:
        self._entries.setdefault(size, []).append((step, score))

    def count(self, size: int) -> int:
        return len(self._entries.get(size, ()))

    def sizes(self) -> list[int]:
        return sorted(w for w, entries in self._entries.items() if entries)

    def mean(self, size: int, now: int, alpha: float) -> float:
        entries = self._entries[size]
        if alpha == 1.0:
            return math.fsum(s for _, s in entries) / len(entries)
        num = math.fsum(alpha ** (now - step) * s for step, s in entries)
        den = math.fsum(alpha ** (now - step) for step, _ in entries)
        return num / den

    def ranked(self, now: int, alpha: float) -> list[tuple[int, float]]:
        """(size, mean) best-first; ties prefer the smaller size."""
        rows = [(w, self.mean(w, now, alpha)) for w in self.sizes()]
        rows.sort(key=lambda r: (-r[1], r[0]))
        return rows

    def top_sizes(self, now: int, alpha: float, count: float) -> list[int]:
        rows = self.ranked(now, alpha)
        if math.isinf(count):
            return [w for w, _ in rows]
        return [w for w, _ in rows[: int(count)]]

    def argmax(self, now: int, alpha: float) -> int | None:
        rows = self.ranked(now, alpha)
        return rows[0][0] if rows else None

    def snapshot(self) -> dict[int, tuple[tuple[int, float], ...]]:
        return {w: tuple(entries) for w, entries in self._entries.items() if entries}


class OnlineTask(Protocol):
    """One-step-ahead prediction task plugged into online selectors."""

    def predict(self, ws: WindowedSequence) -> object: ...

    def step_score(self, ws: WindowedSequence, incoming: StaticGraph) -> float | None: ...


@dataclass(frozen=True)
class KatzTask:
    """Link prediction by damped path counts from the last windowed graph."""

    params: KatzParams = KatzParams()

    def predict(self, ws: WindowedSequence) -> object:
        return katz_scores(ws.last_graph(), self.params)

    def step_score(self, ws: WindowedSequence, incoming: StaticGraph) -> float | None:
        return online_step_score(ws, incoming, self.params)


@dataclass(frozen=True)
class StepRecord:
    """What an online selector did at one step.

    tested: (size, score-or-None) for each size tried against the incoming
        graph (None = no new links at that size, nothing appended).
    chosen: the uniform size behind `windowing`, or None when the windowing
        is not uniform (the random baseline).
    last_graph: final window of the emitted windowing; the next step's new
        links are measured against it.
    prediction: the task's output from the emitted windowing.
    """

    step: int
    tested: tuple[tuple[int, float | None], ...]
    chosen: int | None
    windowing: Windowing
    last_graph: StaticGraph
    prediction: object


class OnlineWindowSelector:
    """Ledger-driven online size selection.

    On each incoming graph: every size seen fewer than `min_tests` times and
    the current `top_count` best sizes are retested by predicting the incoming
    graph from the history windowed at that size; scores append to the ledger
    (steps without new links at a size append nothing). The emitted prediction
    uses the size with the best (decayed) ledger mean, smallest size on ties,
    size 1 before any score exists. `freeze_after=k` stops all testing after
    step k and pins the size chosen there (training-only selection).
    """

    def __init__(
        self,
        n: int,
        task: OnlineTask,
        params: SelectorParams = SelectorParams(),
        freeze_after: int | None = None,
        resolution: int = 1,
    ) -> None:
        self.n = n
        self.task = task
        self.params = params
        self.freeze_after = freeze_after
        self.resolution = resolution
        self.history: list[StaticGraph] = []
        self.ledger = ScoreLedger()
        self._frozen: int | None = 1 if freeze_after == 0 else None

    def process(self, incoming: StaticGraph) -> StepRecord:
        i = len(self.history) + 1
        alpha = self.params.alpha
        tested: list[tuple[int, float | None]] = []
        testing = self.freeze_after is None or i <= self.freeze_after
        if i >= 2 and testing:
            hist_seq = GraphSequence(self.n, tuple(self.history), self.resolution)
            fresh = {w for w in range(1, i) if self.ledger.count(w) < self.params.min_tests}
            best = set(self.ledger.top_sizes(now=i, alpha=alpha, count=self.params.top_count))
            # a carried-over ledger can rank sizes beyond this run's history
            for w in sorted(w for w in fresh | best if w < i):
                ws = windowed_at(hist_seq, w)
                score = self.task.step_score(ws, incoming)
                if score is not None:
                    self.ledger.append(w, i, score)
                tested.append((w, score))
        self.history.append(incoming)
        if self.freeze_after is not None and i > self.freeze_after:
            chosen = self._frozen if self._frozen is not None else 1
        else:
            chosen = self.ledger.argmax(now=i, alpha=alpha)
            if chosen is None:
                chosen = 1
            if self.freeze_after is not None and i == self.freeze_after:
                self._frozen = chosen
        # a carried-over ledger can rank sizes beyond this run's history
        chosen = min(chosen, i)
        full = GraphSequence(self.n, tuple(self.history), self.resolution)
        ws = windowed_at(full, chosen)
        prediction = self.task.predict(ws)
        return StepRecord(
            step=i,
            tested=tuple(tested),
            chosen=chosen,
            windowing=ws.windowing,
            last_graph=ws.last_graph(),
            prediction=prediction,
        )


class _SimpleOnlineSelector:
    """Online selectors that pick a windowing without any ledger."""

    def __init__(self, n: int, task: OnlineTask, resolution: int = 1) -> None:
        self.n = n
        self.task = task
        self.resolution = resolution
        self.history: list[StaticGraph] = []

    def _windowing(self, length: int) -> Windowing:  # pragma: no cover - abstract
        raise NotImplementedError

    def _chosen(self, windowing: Windowing) -> int | None:
        sizes = set(windowing.sizes()[:-1])
        return windowing.sizes()[0] if len(sizes) <= 1 else None

    def process(self, incoming: StaticGraph) -> StepRecord:
        self.history.append(incoming)
        i = len(self.history)
        win = self._windowing(i)
        full = GraphSequence(self.n, tuple(self.history), self.resolution)
        ws = apply_windowing(full, win)
        return StepRecord(
            step=i,
            tested=(),
            chosen=self._chosen(win),
            windowing=win,
            last_graph=ws.last_graph(),
            prediction=self.task.predict(ws),
        )


class FixedOnlineSelector(_SimpleOnlineSelector):
    """Always the same window size (the hand-picked baseline at size 1)."""

    def __init__(self, n: int, task: OnlineTask, size: int = 1, resolution: int = 1) -> None:
        super().__init__(n, task, resolution)
        self.size = size

    def _windowing(self, length: int) -> Windowing:
        return uniform_windowing(length, min(self.size, length))


class RandomOnlineSelector(_SimpleOnlineSelector):
    """A fresh random windowing of the history at every step."""

    def __init__(self, n: int, task: OnlineTask, seed: int = 0, resolution: int = 1) -> None:
        super().__init__(n, task, resolution)
        self._rng = np.random.default_rng(seed)

    def _windowing(self, length: int) -> Windowing:
        return random_windowing(length, self._rng)

    def _chosen(self, windowing: Windowing) -> int | None:
        return None


class AdageOnlineSelector(_SimpleOnlineSelector):
    """Degree-exponent-convergence size, recomputed on the growing history."""

    def __init__(
        self,
        n: int,
        task: OnlineTask,
        rel_tol: float = 0.01,
        patience: int = 3,
        resolution: int = 1,
    ) -> None:
        super().__init__(n, task, resolution)
        self.rel_tol = rel_tol
        self.patience = patience

    def _windowing(self, length: int) -> Windowing:
        if length < 2:
            return uniform_windowing(length, 1)
        seq = GraphSequence(self.n, tuple(self.history), self.resolution)
        return uniform_windowing(length, adage_select(seq, self.rel_tol, self.patience))


# --------------------------------------------------------------------------
# Offline supervised selection

QualityFn = Callable[[GraphSequence, int], float]


@dataclass(frozen=True)
class OfflineSelection:
    """Chosen size plus the full score table (and any skipped sizes)."""

    chosen: int
    scores: Mapping[int, float]
    failures: Mapping[int, str]


def supervised_offline_select(
    seq: GraphSequence,
    quality: QualityFn,
    size_limit: int | None = None,
) -> OfflineSelection:
    """Evaluate every uniform size on training data; best score wins, ties to
    the smallest size. Sizes whose quality call fails are skipped and logged."""
    limit = seq.length if size_limit is None else min(size_limit, seq.length)
    scores: dict[int, float] = {}
    failures: dict[int, str] = {}
    for w in range(1, limit + 1):
        try:
            scores[w] = quality(seq, w)
        except ValueError as exc:
            failures[w] = str(exc)
            log.info("size %d skipped: %s", w, exc)
    if not scores:
        raise ValueError("every candidate window size failed")
    chosen = min(scores, key=lambda w: (-scores[w], w))
    return OfflineSelection(chosen, scores, failures)


def linkpred_window_quality(
    seq: GraphSequence,
    size: int,
    params: KatzParams = KatzParams(),
) -> float:
    """Mean one-step-ahead AP inside `seq` with histories windowed at `size`.

    Histories shorter than `size` collapse to a single window. Steps with no
    new links are skipped; if no step is scoreable the quality is 0.
    """
    scores: list[float] = []
    for i in range(2, seq.length + 1):
        history = seq.slice_steps(1, i - 1)
        ws = windowed_at(history, min(size, history.length))
        s = online_step_score(ws, seq.step(i), params)
        if s is not None:
            scores.append(s)
    if not scores:
        log.info("no scoreable steps at size %d; quality 0", size)
        return 0.0
    return math.fsum(scores) / len(scores)


def cp_window_quality(
    seq: GraphSequence,
    size: int,
    truth: ChangePointLabels,
) -> float:
    """Detection quality (distance-curve PR-AUC) at one uniform size."""
    result = detect_change_points(windowed_at(seq, size))
    return cp_pr_auc(result.times, truth.times, seq.length)


def attr_window_quality(
    seq: GraphSequence,
    size: int,
    attrs: VertexAttributes,
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
) -> float:
    """Leave-out attribute AUC with the whole segment windowed at `size`."""
    return leave_out_auc(windowed_at(seq, size), attrs, batch_size, kernel)


def attr_split_window_quality(
    seq: GraphSequence,
    size: int,
    attrs: VertexAttributes,
    kernel: KernelParams = KernelParams(),
    batch_size: int | None = None,
) -> float:
    """Attribute quality with fitting and scoring evidence decoupled in time.

    The training span is halved; models fit on the first half windowed at
    `size` while predictions draw their graph evidence from the second half
    windowed at `size`. Sizes exceeding either half are rejected (the caller
    skips them).
    """
    if seq.length < 2:
        raise ValueError("attribute selection needs at least 2 training steps")
    half = math.ceil(seq.length / 2)
    first = seq.slice_steps(1, half)
    second = seq.slice_steps(half + 1, seq.length)
    if size > first.length or size > second.length:
        raise ValueError(f"size {size} exceeds a training half, cannot decouple")
    ws_fit = windowed_at(first, size)
    ws_eval = windowed_at(second, size)
    pairs = leave_out_scores(ws_fit, attrs, batch_size, kernel, eval_ws=ws_eval)
    _, positive = attrs.classes
    return roc_auc([s for s, _ in pairs], [lab == positive for _, lab in pairs])


# --------------------------------------------------------------------------
# Structural baselines


def fourier_select(seq: GraphSequence) -> int:
    """Dominant edge-count period via a Hann-tapered DFT.

    The per-step edge-count series is mean-centred (so the taper's DC lobe
    cannot masquerade as a period), tapered, and transformed; each DFT index
    k in [1, T/2] proposes the size round(T/k), scored by its amplitude. The
    best-scoring size wins (smallest on ties); an all-zero spectrum falls
    back to size 1.
    """
    if seq.length < 2:
        raise ValueError("period detection needs at least 2 steps")
    counts = np.array([g.edge_count for g in seq.graphs], dtype=float)
    centred = counts - counts.mean()
    tapered = centred * np.hanning(seq.length)
    amplitudes = np.abs(np.fft.rfft(tapered))
    tol = 1e-12 * max(1.0, float(np.abs(tapered).sum()))
    scores: dict[int, float] = {}
    for k in range(1, seq.length // 2 + 1):
        size = int(round(seq.length / k))
        if size < 2:
            continue
        amp = float(amplitudes[k])
        if amp > scores.get(size, 0.0):
            scores[size] = amp
    if not scores or max(scores.values()) <= tol:
        return 1
    return min(scores, key=lambda w: (-scores[w], w))


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def jaccard_select(seq: GraphSequence, tau: float = 0.05) -> int:
    """Smallest size where consecutive-window overlap stops rising.

    For each candidate size the mean Jaccard similarity of consecutive
    windowed graphs is computed; the first size whose forward increase falls
    to at most `tau` of the total rise is selected (the last candidate if
    none qualifies).
    """
    if seq.length < 2:
        raise ValueError("overlap scanning needs at least 2 steps")
    candidates = list(range(1, seq.length))  # >= 2 windows each
    means: list[float] = []
    for w in candidates:
        ws = windowed_at(seq, w)
        sims = [
            _jaccard(ws.graphs[i].edges, ws.graphs[i + 1].edges)
            for i in range(ws.window_count - 1)
        ]
        means.append(math.fsum(sims) / len(sims))
    rise = max(means) - means[0]
    threshold = tau * rise
    for idx in range(len(candidates) - 1):
        if means[idx + 1] - means[idx] <= threshold:
            return candidates[idx]
    return candidates[-1]


def graph_entropy(g: StaticGraph) -> float:
    """Von Neumann entropy of the trace-rescaled Laplacian; eigenvalues below
    1e-12 contribute zero, and an empty graph has entropy 0."""
    if g.edge_count == 0:
        return 0.0
    a = g.adjacency()
    lap = np.diag(a.sum(axis=1)) - a
    lap = lap / np.trace(lap)
    eigs = np.linalg.eigvalsh(lap)
    return float(-sum(lam * math.log(lam) for lam in eigs if lam > 1e-12))


def entropy_select(seq: GraphSequence) -> Windowing:
    """Merge adjacent windows while spectral redundancy allows.

    Quality = mean per-window entropy minus the whole-union entropy. The
    adjacent merge that lowers quality most is applied repeatedly; merges
    that leave it unchanged (fully redundant neighbours, e.g. duplicates)
    are also taken, and the search stops when every merge would raise it.
    Returns a (generally non-uniform) windowing.
    """
    edge_sets: list[frozenset] = [g.edges for g in seq.graphs]
    entropies: list[float] = [graph_entropy(g) for g in seq.graphs]
    bounds: list[int] = list(range(1, seq.length + 1))  # segment end indices
    n = seq.n

    def merged_entropy(i: int) -> float:
        return graph_entropy(StaticGraph(n, edge_sets[i] | edge_sets[i + 1]))

    candidate: list[float] = [merged_entropy(i) for i in range(len(edge_sets) - 1)]
    while len(edge_sets) > 1:
        m = len(edge_sets)
        mean_now = math.fsum(entropies) / m
        deltas = [
            (math.fsum(entropies) - entropies[i] - entropies[i + 1] + candidate[i]) / (m - 1)
            - mean_now
            for i in range(m - 1)
        ]
        best = min(range(m - 1), key=lambda i: (deltas[i], i))
        if deltas[best] > 1e-12:
            break
        edge_sets[best] = edge_sets[best] | edge_sets[best + 1]
        entropies[best] = candidate[best]
        del edge_sets[best + 1], entropies[best + 1], bounds[best]
        del candidate[best]
        if best < len(candidate):
            candidate[best] = merged_entropy(best)
        if best > 0:
            candidate[best - 1] = merged_entropy(best - 1)
    return Windowing(seq.length, tuple(bounds[:-1]))


def powerlaw_exponent(degrees: Sequence[int], lo: float = 1.01, hi: float = 20.0) -> float:
    """Discrete power-law MLE exponent with minimum value 1.

    Solves zeta'(g)/zeta(g) = -mean(log x) by bisection. A degenerate sample
    (all values 1) pushes the likelihood maximum to infinity; the exponent is
    clamped at `hi`.
    """
    xs = np.asarray([d for d in degrees if d >= 1], dtype=float)
    if xs.size == 0:
        raise ValueError("no positive degrees to fit")
    mean_log = float(np.mean(np.log(xs)))
    if mean_log == 0.0:
        return hi

    def dlog_zeta(s: float, h: float = 1e-5) -> float:
        return (math.log(zeta(s + h)) - math.log(zeta(s - h))) / (2 * h)

    def objective(s: float) -> float:
        return dlog_zeta(s) + mean_log

    if objective(lo) >= 0.0:
        return lo
    if objective(hi) <= 0.0:
        return hi
    return float(bisect(objective, lo, hi, xtol=1e-10))


def adage_select(seq: GraphSequence, rel_tol: float = 0.01, patience: int = 3) -> int:
    """Smallest size where the opening window's degree exponent has converged.

    The first window's union graph grows with the candidate size; once the
    fitted power-law exponent moves by less than `rel_tol` (relatively) for
    `patience` consecutive increments, that size is returned. Sizes whose
    degree sequence is all zero are skipped and break the run. Returns the
    full length if convergence never happens.
    """
    previous: float | None = None
    run = 0
    for w in range(1, seq.length + 1):
        u = union_graphs(seq.graphs[:w])
        degs = [d for d in u.degrees() if d >= 1]
        if not degs:
            previous = None
            run = 0
            log.info("size %d skipped: degree sequence all zero", w)
            continue
        gamma = powerlaw_exponent(degs)
        if previous is not None:
            if abs(gamma - previous) / previous < rel_tol:
                run += 1
            else:
                run = 0
            if run >= patience:
                return w
        previous = gamma
    return seq.length


def random_windowing(length: int, rng: int | np.random.Generator) -> Windowing:
    """Random segmentation: segment lengths drawn left to right, each uniform
    on [1, steps remaining]. Deterministic for a given seed."""
    if length < 1:
        raise ValueError("length must be >= 1")
    gen = np.random.default_rng(rng) if isinstance(rng, int) else rng
    cuts: list[int] = []
    pos = 0
    while pos < length:
        pos += int(gen.integers(1, length - pos, endpoint=True))
        if pos < length:
            cuts.append(pos)
    return Windowing(length, tuple(cuts))


def fixed_select(mode: str, length: int) -> int:
    """The two trivial baselines: size 1 ("hand-picked") or the whole stream
    as one window ("no-time")."""
    if mode == "hand-picked":
        return 1
    if mode == "no-time":
        return length
    raise ValueError(f"unknown fixed mode {mode!r}")
