"""Token-IOU span similarity and deterministic maximum bipartite matching.

Predicted and reference argument spans are matched by drawing an edge for
every pair whose token intersection-over-union reaches the threshold and
taking a maximum-cardinality matching over that graph.  Among maximum
matchings the one with the largest total IOU is chosen, with remaining ties
broken by lexicographic (predicted index, reference index) order, so the
result is a pure function of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .data import Span

__all__ = ["DEFAULT_IOU_THRESHOLD", "IouThreshold", "MatchResult", "iou", "align"]

DEFAULT_IOU_THRESHOLD = 0.5

# Spans per verb are tiny in practice; the exact matcher enumerates subsets
# of one side of each connected component and refuses absurd instances
# rather than silently degrading.
_MAX_COMPONENT_SIDE = 16


@dataclass(frozen=True)
class IouThreshold:
    """Matching threshold, a ratio in (0, 1]; fixed per evaluation run."""

    value: float = DEFAULT_IOU_THRESHOLD

    def __post_init__(self) -> None:
        if not 0.0 < self.value <= 1.0:
            raise ValueError(f"IOU threshold must be in (0, 1], got {self.value}")


@dataclass(frozen=True)
class MatchResult:
    """Pairs are (predicted index, reference index, iou), each index used at
    most once; the pair set has maximum cardinality over all matchings."""

    pairs: tuple[tuple[int, int, float], ...]
    unmatched_pred: tuple[int, ...]
    unmatched_gold: tuple[int, ...]


def iou(a: Span, b: Span) -> float:
    """Token-set intersection over union of two spans of one sentence."""
    return float(_iou_fraction(a, b))


def _iou_fraction(a: Span, b: Span) -> Fraction:
    intersection = max(0, min(a.end, b.end) - max(a.start, b.start))
    if intersection == 0:
        return Fraction(0)
    union = len(a) + len(b) - intersection
    return Fraction(intersection, union)


def align(
    pred: list[Span] | tuple[Span, ...],
    gold: list[Span] | tuple[Span, ...],
    threshold: float | IouThreshold = DEFAULT_IOU_THRESHOLD,
) -> MatchResult:
    """Deterministic maximum bipartite matching between two span lists.

    Duplicate identical spans are distinct vertices, preserving multiset
    semantics when one span answers several questions.
    """
    limit = threshold if isinstance(threshold, IouThreshold) else IouThreshold(float(threshold))
    cutoff = Fraction(limit.value)

    edges: dict[tuple[int, int], Fraction] = {}
    for i, p in enumerate(pred):
        for j, g in enumerate(gold):
            value = _iou_fraction(p, g)
            if value >= cutoff:
                edges[(i, j)] = value

    pairs: list[tuple[int, int, float]] = []
    for component_preds, component_golds in _components(edges, len(pred), len(gold)):
        pairs.extend(_match_component(component_preds, component_golds, edges))
    pairs.sort()

    matched_pred = {i for i, _, _ in pairs}
    matched_gold = {j for _, j, _ in pairs}
    return MatchResult(
        pairs=tuple(pairs),
        unmatched_pred=tuple(i for i in range(len(pred)) if i not in matched_pred),
        unmatched_gold=tuple(j for j in range(len(gold)) if j not in matched_gold),
    )


def _components(
    edges: dict[tuple[int, int], Fraction], n_pred: int, n_gold: int
) -> list[tuple[list[int], list[int]]]:
    """Connected components of the edge graph, as (pred indices, gold indices).

    Vertices without edges form no component: they can never be matched.
    """
    pred_adj: dict[int, list[int]] = {}
    gold_adj: dict[int, list[int]] = {}
    for i, j in edges:
        pred_adj.setdefault(i, []).append(j)
        gold_adj.setdefault(j, []).append(i)

    seen_pred: set[int] = set()
    components: list[tuple[list[int], list[int]]] = []
    for start in sorted(pred_adj):
        if start in seen_pred:
            continue
        preds, golds = [start], []
        seen_pred.add(start)
        seen_gold_local: set[int] = set()
        frontier = [("p", start)]
        while frontier:
            side, vertex = frontier.pop()
            if side == "p":
                for j in pred_adj[vertex]:
                    if j not in seen_gold_local:
                        seen_gold_local.add(j)
                        golds.append(j)
                        frontier.append(("g", j))
            else:
                for i in gold_adj[vertex]:
                    if i not in seen_pred:
                        seen_pred.add(i)
                        preds.append(i)
                        frontier.append(("p", i))
        components.append((sorted(preds), sorted(golds)))
    return components


def _match_component(
    preds: list[int], golds: list[int], edges: dict[tuple[int, int], Fraction]
) -> list[tuple[int, int, float]]:
    """Exact optimum for one component via memoized subset search.

    The state is (position in the pred list, bitmask of free golds); the
    value maximizes (pair count, total IOU) lexicographically.  The pair set
    is then reconstructed greedily in (pred, gold) index order, which yields
    the lexicographically smallest optimal matching.
    """
    if len(golds) > _MAX_COMPONENT_SIDE:
        raise ValueError(
            f"span matching instance too large ({len(golds)} connected reference spans)"
        )
    gold_position = {j: bit for bit, j in enumerate(golds)}
    adjacency: list[list[tuple[int, int, Fraction]]] = []
    for i in preds:
        row = [(gold_position[j], j, edges[(i, j)]) for j in golds if (i, j) in edges]
        adjacency.append(row)

    memo: dict[tuple[int, int], tuple[int, Fraction]] = {}

    def best(k: int, mask: int) -> tuple[int, Fraction]:
        if k == len(preds):
            return (0, Fraction(0))
        state = (k, mask)
        if state in memo:
            return memo[state]
        count, total = best(k + 1, mask)
        for bit, _, value in adjacency[k]:
            if mask & (1 << bit):
                sub_count, sub_total = best(k + 1, mask & ~(1 << bit))
                candidate = (sub_count + 1, sub_total + value)
                if candidate > (count, total):
                    count, total = candidate
        memo[state] = (count, total)
        return (count, total)

    pairs: list[tuple[int, int, float]] = []
    mask = (1 << len(golds)) - 1
    target = best(0, mask)
    for k, i in enumerate(preds):
        matched = False
        for bit, j, value in adjacency[k]:  # gold index ascending
            if not mask & (1 << bit):
                continue
            sub_count, sub_total = best(k + 1, mask & ~(1 << bit))
            if (sub_count + 1, sub_total + value) == target:
                pairs.append((i, j, float(value)))
                mask &= ~(1 << bit)
                target = (sub_count, sub_total)
                matched = True
                break
        if not matched and best(k + 1, mask) != target:
            raise AssertionError("matching reconstruction diverged")
    return pairs
