"""Agglomerative clustering with Ward's criterion on a dissimilarity matrix.

Two variants ship. The default ("ward2") applies the Lance-Williams
update with Ward coefficients to squared input dissimilarities, seeded
at d^2/2 so the tracked value of a candidate merge is exactly
(n1*n2/(n1+n2)) * d^2(G1, G2) -- the within-cluster variance increase
when the input is Euclidean -- and reports square roots as heights. The
compatibility variant ("ward1") runs the same update on the raw
dissimilarities and reports them unchanged.

Ties on the minimum are broken deterministically: among candidate pairs,
the one whose combined membership has the lexicographically smallest
(min doc id, max doc id) wins, with the full sorted membership as a
final fallback. This makes dendrograms invariant under input row order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import AnalysisError
from .metrics import DistanceMatrix

WARD_SQUARED = "ward2"
WARD_RAW = "ward1"

ClusterAssignment = dict[str, int]


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree over documents: leaves 0..n-1, merge t creates node n+t."""

    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]
    ac: float

    def __post_init__(self) -> None:
        if len(self.merges) != len(self.leaves) - 1:
            raise ValueError("a dendrogram over n leaves has exactly n-1 merges")

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def members(self, node: int) -> tuple[int, ...]:
        """Leaf indices under a node, in increasing order."""
        if node < self.n_leaves:
            return (node,)
        merge = self.merges[node - self.n_leaves]
        return tuple(sorted(self.members(merge.left) + self.members(merge.right)))


def _lance_williams(ni: int, nj: int, nk: int, wik: float, wjk: float, wij: float) -> float:
    return ((ni + nk) * wik + (nj + nk) * wjk - nk * wij) / (ni + nj + nk)


def ward_cluster(dist: DistanceMatrix, variant: str = WARD_SQUARED) -> Dendrogram:
    """Greedy minimum-variance merging via the Lance-Williams recurrence.

    Raises on non-square, non-symmetric or non-finite input. Heights are
    guaranteed non-decreasing (asserted) because the Ward coefficients
    satisfy the monotonicity condition.
    """
    if variant not in (WARD_SQUARED, WARD_RAW):
        raise ValueError(f"unknown linkage variant: {variant!r}")
    ids = dist.doc_ids
    n = len(ids)
    if n < 2:
        raise AnalysisError("clustering needs at least 2 documents")
    values = np.asarray(dist.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise AnalysisError("dissimilarity matrix has non-finite entries")
    if not np.array_equal(values, values.T):
        raise AnalysisError("dissimilarity matrix is not symmetric")
    if np.any(np.diag(values) != 0.0):
        raise AnalysisError("dissimilarity matrix has a non-zero diagonal")

    if variant == WARD_SQUARED:
        state = values * values / 2.0
    else:
        state = values.copy()

    # Node bookkeeping: grow the state matrix to hold merged nodes.
    total = 2 * n - 1
    big = np.full((total, total), np.inf)
    big[:n, :n] = state
    size = [1] * n
    min_doc = list(ids)
    max_doc = list(ids)
    member_key: list[tuple[str, ...]] = [(doc,) for doc in ids]
    active: list[int] = list(range(n))
    merges: list[Merge] = []
    last_height = -math.inf

    def tie_key(pair: tuple[int, int]) -> tuple:
        a, b = pair
        return (
            min(min_doc[a], min_doc[b]),
            max(max_doc[a], max_doc[b]),
            tuple(sorted(member_key[a] + member_key[b])),
        )

    for step in range(n - 1):
        best_value = math.inf
        tied: list[tuple[int, int]] = []
        for ai in range(len(active)):
            a = active[ai]
            for bi in range(ai + 1, len(active)):
                b = active[bi]
                v = big[a, b]
                if v < best_value:
                    best_value = v
                    tied = [(a, b)]
                elif v == best_value:
                    tied.append((a, b))
        a, b = min(tied, key=tie_key) if len(tied) > 1 else tied[0]
        if best_value < -1e-12:
            raise AnalysisError("Ward linkage produced a negative merge value")
        best_value = max(best_value, 0.0)
        height = math.sqrt(best_value) if variant == WARD_SQUARED else best_value
        assert height >= last_height - 1e-12, "Ward heights must be non-decreasing"
        last_height = max(last_height, height)

        new = n + step
        for k in active:
            if k in (a, b):
                continue
            big[new, k] = big[k, new] = _lance_williams(
                size[a], size[b], size[k], big[a, k], big[b, k], big[a, b]
            )
        left, right = (a, b) if min_doc[a] <= min_doc[b] else (b, a)
        merges.append(Merge(left=left, right=right, height=height, size=size[a] + size[b]))
        size.append(size[a] + size[b])
        min_doc.append(min(min_doc[a], min_doc[b]))
        max_doc.append(max(max_doc[a], max_doc[b]))
        member_key.append(tuple(sorted(member_key[a] + member_key[b])))
        active = [x for x in active if x not in (a, b)] + [new]

    dend = Dendrogram(leaves=ids, merges=tuple(merges), ac=0.0)
    return replace(dend, ac=agglomerative_coefficient(dend))


def agglomerative_coefficient(dend: Dendrogram, normalized: bool = True) -> float:
    """Mean over leaves of 1 - (height of the leaf's first merge).

    In the default normalized mode each first-merge height is divided by
    the final merge height, which keeps the coefficient in [0, 1] and
    makes it invariant under uniform scaling of the input dissimilarities.
    The literal mode skips that division.
    """
    n = dend.n_leaves
    final_height = dend.merges[-1].height
    first: dict[int, float] = {}
    for merge in dend.merges:
        for child in (merge.left, merge.right):
            if child < n:
                first[child] = merge.height
    if normalized:
        if final_height == 0.0:
            warnings.warn("all merge heights are zero; agglomerative coefficient set to 0")
            return 0.0
        return float(np.mean([1.0 - first[i] / final_height for i in range(n)]))
    return float(np.mean([1.0 - first[i] for i in range(n)]))


def cut(dend: Dendrogram, k: int) -> ClusterAssignment:
    """Flat clustering from the dendrogram by removing the k-1 last merges.

    Heights are non-decreasing, so the last merges are the highest, with
    height ties resolved by merge order. Clusters are labeled 1..k in
    order of their smallest member doc id.
    """
    n = dend.n_leaves
    if not 1 <= k <= n:
        raise AnalysisError(f"cut size must lie in [1, {n}], got {k}")
    kept = dend.merges[: n - k]
    members: list[list[int]] = [[i] for i in range(n)]
    consumed = [False] * (n + len(kept))
    for merge in kept:
        members.append(sorted(members[merge.left] + members[merge.right]))
        consumed[merge.left] = True
        consumed[merge.right] = True
    roots = [node for node in range(n + len(kept)) if not consumed[node]]
    clusters = sorted(
        (sorted(dend.leaves[i] for i in members[node]) for node in roots),
        key=lambda docs: docs[0],
    )
    assignment: ClusterAssignment = {}
    for label, docs in enumerate(clusters, start=1):
        for doc in docs:
            assignment[doc] = label
    return assignment


def _newick_label(name: str) -> str:
    if any(c in name for c in " \t(),:;'[]"):
        return "'" + name.replace("'", "''") + "'"
    return name


def to_newick(dend: Dendrogram, digits: int = 12) -> str:
    """Newick string with branch lengths equal to height differences."""
    n = dend.n_leaves

    def height_of(node: int) -> float:
        return 0.0 if node < n else dend.merges[node - n].height

    def render(node: int, parent_height: float) -> str:
        branch = format(parent_height - height_of(node), f".{digits}g")
        if node < n:
            return f"{_newick_label(dend.leaves[node])}:{branch}"
        merge = dend.merges[node - n]
        inner = f"({render(merge.left, merge.height)},{render(merge.right, merge.height)})"
        return f"{inner}:{branch}"

    merge = dend.merges[-1]
    left = render(merge.left, merge.height)
    right = render(merge.right, merge.height)
    return f"({left},{right});\n"


def to_dot(dend: Dendrogram, digits: int = 6) -> str:
    """Graphviz rendering of the merge tree, top node last."""
    n = dend.n_leaves
    lines = ["graph dendrogram {", "  node [shape=box, fontsize=10];"]
    for i, doc in enumerate(dend.leaves):
        lines.append(f'  n{i} [label="{doc}"];')
    for t, merge in enumerate(dend.merges):
        node = n + t
        height = format(merge.height, f".{digits}g")
        lines.append(f'  n{node} [label="h={height}", shape=ellipse];')
    for t, merge in enumerate(dend.merges):
        node = n + t
        lines.append(f"  n{node} -- n{merge.left};")
        lines.append(f"  n{node} -- n{merge.right};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def leaf_order(dend: Dendrogram) -> list[int]:
    """Display order of leaves: depth-first, left child before right."""
    order: list[int] = []

    def walk(node: int) -> None:
        if node < dend.n_leaves:
            order.append(node)
            return
        merge = dend.merges[node - dend.n_leaves]
        walk(merge.left)
        walk(merge.right)

    walk(dend.n_leaves + len(dend.merges) - 1)
    return order


def write_text(content: str, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)
