"""Grid-search calibration of the five distance weights.

Every lattice point of the weight simplex is scored by the AUC of the
negated research distance as a predictor of a set of labelled pairs
(typically observed collaborations). The best point wins; ties go to the
lexicographically smallest vector so results are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.stats import rankdata

from .agents import AgentSet
from .errors import AgentIOError, EmptyAgentSet, ParseError
from .metric import N_COMPONENTS, Weights, component_tensor

COLLABORATION = 3  # index of the past-collaboration component
LABEL_SOURCES = ("held_out_pairs", "d4_labels")


@dataclass(frozen=True)
class CalibrationConfig:
    grid_step: float = 0.05
    label_source: str = "held_out_pairs"
    scoring: str = "auc"

    def __post_init__(self):
        if not 0 < self.grid_step <= 1:
            raise ValueError(f"grid_step must lie in (0, 1], got {self.grid_step}")
        steps = 1 / self.grid_step
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError(f"grid_step {self.grid_step} does not divide 1")
        if self.label_source not in LABEL_SOURCES:
            raise ValueError(f"label_source must be one of {LABEL_SOURCES}")
        if self.scoring != "auc":
            raise ValueError("only 'auc' scoring is supported")

    @property
    def n_steps(self) -> int:
        return int(round(1 / self.grid_step))


def _compositions(total: int, parts: int):
    """Nonnegative integer tuples of length ``parts`` summing to ``total``, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _grid(n_steps: int, fixed_zero: tuple[int, ...] = ()) -> np.ndarray:
    """Integer lattice points (in units of the grid step), lexicographic order."""
    free = N_COMPONENTS - len(fixed_zero)
    comps = np.array(list(_compositions(n_steps, free)), dtype=np.int64).reshape(-1, free)
    grid = np.zeros((comps.shape[0], N_COMPONENTS), dtype=np.int64)
    keep = [i for i in range(N_COMPONENTS) if i not in fixed_zero]
    grid[:, keep] = comps
    return grid


def _to_weights(row: np.ndarray, n_steps: int) -> Weights:
    return Weights(tuple(int(x) / n_steps for x in row))


def enumerate_simplex(grid_step: float) -> list[Weights]:
    """All weight vectors on the ``grid_step`` lattice of the simplex, in lexicographic order."""
    cfg = CalibrationConfig(grid_step=grid_step)
    return [_to_weights(row, cfg.n_steps) for row in _grid(cfg.n_steps)]


def _pair_index(agents: AgentSet):
    n = len(agents)
    return np.triu_indices(n, 1)


def _label_mask(agents: AgentSet, labels: Iterable[tuple[str, str]]) -> np.ndarray:
    iu, ju = _pair_index(agents)
    n = len(agents)
    index = agents.index
    marked = np.zeros((n, n), dtype=bool)
    for a, b in labels:
        try:
            i, j = index[a], index[b]
        except KeyError as exc:
            raise ParseError(f"label pair references unknown id {exc.args[0]!r}") from None
        if i == j:
            raise ParseError(f"label pair ({a!r}, {b!r}) is not a pair of distinct agents")
        marked[i, j] = marked[j, i] = True
    return marked[iu, ju]


def _auc(scores: np.ndarray, positive: np.ndarray) -> np.ndarray:
    """Column-wise ROC AUC with ties counted as one half.

    ``scores`` is ``(n_pairs, n_candidates)``; returns ``(n_candidates,)``.
    """
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return np.full(scores.shape[1], 0.5)
    ranks = rankdata(scores, axis=0)
    u = ranks[positive].sum(axis=0) - n_pos * (n_pos + 1) / 2
    return u / (n_pos * n_neg)


def _pair_components(agents: AgentSet) -> np.ndarray:
    iu, ju = _pair_index(agents)
    return component_tensor(agents)[:, iu, ju].T.astype(np.int64)  # (n_pairs, 5)


def score_weights(agents: AgentSet, w: Weights, labels) -> float:
    """AUC of ``-distance`` as a predictor of membership in ``labels``."""
    if len(agents) < 2:
        return 0.5
    positive = _label_mask(agents, labels)
    comps = _pair_components(agents)
    dist = np.zeros(comps.shape[0])
    for c, k in zip(comps.T, w.k):
        dist = dist + c * k
    return float(_auc(-dist[:, None], positive)[0])


def collaboration_labels(agents: AgentSet) -> set[tuple[str, str]]:
    """Unordered collaborator pairs inside the set, as sorted id tuples."""
    pairs = set()
    for rec in agents:
        for other in rec.collaborators:
            if other in agents and other != rec.id:
                pairs.add(tuple(sorted((rec.id, other))))
    return pairs


def score_grid(agents: AgentSet, grid: np.ndarray, labels) -> np.ndarray:
    """AUC for every row of an integer weight ``grid``; exact, so ties are real ties."""
    positive = _label_mask(agents, labels)
    comps = _pair_components(agents)
    chunk = max(1, 2_000_000 // max(1, comps.shape[0]))
    out = np.empty(grid.shape[0])
    for start in range(0, grid.shape[0], chunk):
        block = grid[start:start + chunk]
        out[start:start + len(block)] = _auc(-(comps @ block.T), positive)
    return out


def fit_weights(agents: AgentSet, config: CalibrationConfig = CalibrationConfig(), labels=None) -> Weights:
    """Exhaustive grid search for the AUC-maximizing weights.

    With ``label_source="d4_labels"`` the labels are the recorded
    collaborations and the collaboration weight is pinned to zero, since the
    feature and the target would otherwise coincide.
    """
    if len(agents) < 2:
        raise EmptyAgentSet("need at least two agents to calibrate weights (no pairs)")
    if config.label_source == "d4_labels":
        labels = collaboration_labels(agents)
        grid = _grid(config.n_steps, fixed_zero=(COLLABORATION,))
    else:
        labels = set() if labels is None else labels
        grid = _grid(config.n_steps)
    scores = score_grid(agents, grid, labels)
    # grid rows are lexicographically sorted, so argmax picks the smallest among ties
    best = int(np.argmax(scores))
    return _to_weights(grid[best], config.n_steps)


def load_label_pairs(path) -> list[tuple[str, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise AgentIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ParseError("expected 'idA,idB'", line=lineno)
        pairs.append((parts[0], parts[1]))
    return pairs
