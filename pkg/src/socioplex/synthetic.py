"""Random agent populations for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .agents import AgentRecord, AgentSet
from .metric import Weights

MSC_TOP = ("03", "05", "11", "14", "20", "26", "35", "49", "53", "55", "60", "62", "65", "68", "90")


def random_agents(n: int, rng=None, n_institutions: int = 4, n_schools: int = 6,
                  n_fields: int = 8, link_prob: float = 0.1) -> AgentSet:
    rng = np.random.default_rng(rng)
    ids = [f"a{i}" for i in range(n)]
    records = []
    for i in range(n):
        k = int(rng.integers(1, 4))
        fields = rng.choice(MSC_TOP[: max(n_fields, 3)], size=k, replace=False)
        others = [j for j in range(n) if j != i]
        collab = [ids[j] for j in others if rng.random() < link_prob]
        cites = [ids[j] for j in others if rng.random() < link_prob]
        records.append(AgentRecord(
            id=ids[i],
            name=f"Agent {i}",
            institution=f"U{int(rng.integers(n_institutions))}",
            phd_institution=f"S{int(rng.integers(n_schools))}",
            fields=[str(x) for x in fields],
            collaborators=collab,
            citations=cites,
        ))
    return AgentSet(records)


def random_weights(rng=None) -> Weights:
    rng = np.random.default_rng(rng)
    k = rng.dirichlet(np.ones(5))
    k = k / k.sum()
    # absorb rounding so the simplex check at 1e-12 holds
    k[-1] = max(0.0, 1.0 - k[:-1].sum())
    return Weights(tuple(k))
