"""Search for tree embeddings into the distance graph of an atomic measure.

Two points are adjacent at scale (t, eps) when their distance lies in the
closed interval [t - eps, t + eps]. Feasibility tables (a bottom-up DP
rooted at vertex 0) certify per vertex which atoms can host it in SOME
homomorphism; a witness is then extracted top-down by backtracking over
the tables, enforcing injectivity when asked. Returned witnesses are
always re-verified by direct distance recomputation, independent of the
spatial index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, ValidationError
from .kernels import KernelParams, annulus_sums
from .measures import AtomicMeasure
from .spatial import UniformGrid
from .trees import TreeGraph

DEFAULT_NODE_BUDGET = 10**7


@dataclass
class FeasibilityTables:
    """Per-vertex boolean atom tables from the bottom-up sweep.

    order is a BFS preorder from root 0 (parents precede children),
    children lists ascending.
    """

    tree: TreeGraph
    params: KernelParams
    order: list[int]
    parent: dict[int, int | None]
    children: dict[int, list[int]]
    feasible: dict[int, np.ndarray]

    def root_feasible(self) -> bool:
        """True iff a (not necessarily injective) homomorphism exists."""
        return bool(self.feasible[0].any())


@dataclass
class EmbeddingWitness:
    assignment: dict[int, int]  # tree vertex -> atom index
    gaps: dict[tuple[int, int], float]  # tree edge -> realized distance
    distinct: bool
    params: KernelParams

    def to_record(self) -> dict:
        return {
            "assignment": {str(v): int(a) for v, a in self.assignment.items()},
            "gaps": {f"{i}-{j}": g for (i, j), g in self.gaps.items()},
            "distinct": self.distinct,
            "t": self.params.t,
            "eps": self.params.eps,
        }


@dataclass
class SearchResult:
    witness: EmbeddingWitness | None
    exhausted: bool  # full search space covered (meaningful when not found)
    nodes_visited: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def feasibility_dp(
    mu: AtomicMeasure, tree: TreeGraph, params: KernelParams
) -> FeasibilityTables:
    """Bottom-up atom feasibility per vertex, rooted at vertex 0.

    Atom p is feasible for v iff every child u has a feasible atom within
    the annulus of p. The root table is non-empty iff the tree maps
    homomorphically into the distance graph.
    """
    adj = tree.adjacency()
    order = [0]
    parent: dict[int, int | None] = {0: None}
    children: dict[int, list[int]] = {v: [] for v in range(tree.n_vertices)}
    seen = {0}
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for u in sorted(adj[v]):
            if u not in seen:
                seen.add(u)
                parent[u] = v
                children[v].append(u)
                order.append(u)

    grid = UniformGrid(mu.atoms, params.outer)
    feasible = {v: np.ones(len(mu), dtype=bool) for v in range(tree.n_vertices)}
    for v in reversed(order):
        for u in children[v]:
            reach = annulus_sums(
                mu.atoms, feasible[u].astype(float), mu.atoms, params, grid
            )
            feasible[v] &= reach > 0.0
    return FeasibilityTables(
        tree=tree,
        params=params,
        order=order,
        parent=parent,
        children=children,
        feasible=feasible,
    )


def verify_witness(
    witness: EmbeddingWitness,
    mu: AtomicMeasure,
    tree: TreeGraph,
    require_distinct: bool,
) -> None:
    """Recheck all edge gaps by direct distance computation; raise on failure."""
    for i, j in tree.edges:
        gap = float(
            np.linalg.norm(mu.atoms[witness.assignment[i]] - mu.atoms[witness.assignment[j]])
        )
        if not (witness.params.inner <= gap <= witness.params.outer):
            raise InternalConsistencyError(
                f"edge ({i},{j}) realized gap {gap} outside the annulus"
            )
    if require_distinct:
        atoms_used = list(witness.assignment.values())
        if len(set(atoms_used)) != len(atoms_used):
            raise InternalConsistencyError("witness is not injective")


def extract_embedding(
    tables: FeasibilityTables,
    mu: AtomicMeasure,
    tree: TreeGraph,
    params: KernelParams,
    require_distinct: bool = True,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SearchResult:
    """Top-down backtracking over the feasibility tables.

    Atoms are tried in ascending index order; with require_distinct a
    used-set rules out repeats. Returns the first witness, or a not-found
    result whose `exhausted` flag tells proven absence apart from a spent
    node budget.
    """
    if tables.tree != tree or tables.params != params:
        raise ValidationError("tables were built for a different instance")
    n = len(mu)
    order = tables.order
    lo2, hi2 = params.inner**2, params.outer**2
    grid = UniformGrid(mu.atoms, params.outer)

    def annulus_neighbors(atom: int) -> np.ndarray:
        cand = grid.candidates_for_cell(grid.cell_of(mu.atoms[atom]))
        diff = mu.atoms[cand] - mu.atoms[atom]
        sq = np.einsum("ij,ij->i", diff, diff)
        return cand[(sq >= lo2) & (sq <= hi2)]

    assignment: dict[int, int] = {}
    used = np.zeros(n, dtype=bool)
    nodes = 0
    budget_hit = False

    def candidates(pos: int) -> np.ndarray:
        v = order[pos]
        p = tables.parent[v]
        if p is None:
            cand = np.flatnonzero(tables.feasible[v])
        else:
            nb = annulus_neighbors(assignment[p])
            cand = nb[tables.feasible[v][nb]]
        if require_distinct and cand.size:
            cand = cand[~used[cand]]
        return cand

    def search(pos: int) -> EmbeddingWitness | None:
        nonlocal nodes, budget_hit
        if pos == len(order):
            gaps = {
                (i, j): float(np.linalg.norm(mu.atoms[assignment[i]] - mu.atoms[assignment[j]]))
                for i, j in tree.edges
            }
            atoms_used = list(assignment.values())
            return EmbeddingWitness(
                assignment=dict(assignment),
                gaps=gaps,
                distinct=len(set(atoms_used)) == len(atoms_used),
                params=params,
            )
        v = order[pos]
        for atom in candidates(pos):
            nodes += 1
            if nodes > node_budget:
                budget_hit = True
                return None
            assignment[v] = int(atom)
            used[atom] = True
            found = search(pos + 1)
            if found is not None:
                return found
            used[atom] = False
            del assignment[v]
            if budget_hit:
                return None
        return None

    witness = search(0)
    if witness is not None:
        verify_witness(witness, mu, tree, require_distinct)
    return SearchResult(
        witness=witness, exhausted=not budget_hit and witness is None, nodes_visited=nodes
    )
