"""Pigeonhole selection of field level sets with certified mass bounds.

Given a nonnegative field f sampled on the atoms of a measure mu with
total mass M, a lower bound c on the integral of f, and C = integral of
f^2, the "good set" keeps the atoms where f is pinched between a low
cutoff and a dyadic ceiling:

    c' = c / (4M),  m = ceil(log2(16 C / c)),  G = { c' < f < 2^m }.

Splitting the integral of f into the parts below c', on G, and over the
dyadic tail l >= m, the low part is at most c'M = c/4 and the tail is at
most sum_l 2^(l+1) * C * 2^(-2l) <= 4C * 2^(-m) <= c/4 (the level masses
obey the Chebyshev bound mass <= C * 2^(-2l)). Hence the integral over G
is at least c/2, and since f < 2^m there, mu(G) >= c / 2^(m+1) = delta.
These are finite-sum theorems, so the code asserts them outright on every
call: a failure is a bug, never a tolerance issue.

Iterating the construction on the restricted measure (weights unchanged)
yields a nested chain of stages, each with its own certified delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InternalConsistencyError, StageFailureError, ValidationError
from .kernels import FieldValues, KernelParams, convolve_field, field_norms
from .measures import AtomicMeasure, restrict_measure


def _dyadic_level(values: np.ndarray) -> np.ndarray:
    """floor(log2 v) per positive value, exact via frexp (v = m * 2^e, m in [1/2, 1))."""
    _, exp = np.frexp(values)
    return exp.astype(np.int64) - 1


@dataclass
class LevelProfile:
    """Mass split of a field into {f <= c'} plus dyadic levels {2^l <= f < 2^(l+1)}.

    The level at the cutoff boundary is clipped to f > c', so the parts
    partition the total mass exactly. Every level mass satisfies
    mass <= C_bound * 2^(-2l).
    """

    levels: list[tuple[int, float]]
    below_mass: float
    C_bound: float
    c_prime: float
    m_low: int
    total_mass: float


def chebyshev_profile(
    f: FieldValues, mu_weights, c_prime: float, m_low: int
) -> LevelProfile:
    w = np.asarray(mu_weights, dtype=float)
    if w.shape != f.values.shape:
        raise ValidationError("weights and field lengths differ")
    if not (c_prime > 0):
        raise ValidationError("c_prime must be positive")
    v = f.values
    c_bound = math.fsum(w * v * v)
    below = v <= c_prime
    below_mass = math.fsum(w[below])
    total = math.fsum(w)

    levels: list[tuple[int, float]] = []
    above = ~below
    if np.any(above):
        lev = _dyadic_level(v[above])
        lo = min(int(m_low), int(lev.min()))
        hi = int(lev.max())
        w_above = w[above]
        for l in range(lo, hi + 1):
            mass = math.fsum(w_above[lev == l])
            bound = c_bound * 2.0 ** (-2 * l)
            if mass > bound:
                raise InternalConsistencyError(
                    f"level {l} mass {mass} exceeds Chebyshev bound {bound}"
                )
            levels.append((l, mass))

    parts = below_mass + math.fsum(m for _, m in levels)
    if abs(parts - total) > 1e-12 * max(total, 1.0):
        raise InternalConsistencyError(
            f"level masses sum to {parts}, total mass is {total}"
        )
    return LevelProfile(
        levels=levels,
        below_mass=below_mass,
        C_bound=c_bound,
        c_prime=c_prime,
        m_low=int(m_low),
        total_mass=total,
    )


@dataclass
class GoodSet:
    """Atoms where the field is pinched in (c_low, 2^m), with certified mass.

    indices are positions within the measure the field was sampled on;
    nested chains remap them to the original measure's atom ids.
    """

    stage: int
    indices: np.ndarray
    c_low: float
    m: int
    delta: float
    achieved_mass: float
    l1_lower: float  # the certified lower bound c on the integral of f

    def __post_init__(self):
        if not (self.achieved_mass >= self.delta > 0):
            raise InternalConsistencyError(
                f"good set mass {self.achieved_mass} below certificate {self.delta}"
            )

    def to_record(self) -> dict:
        return {
            "stage": self.stage,
            "kept": int(len(self.indices)),
            "c_low": self.c_low,
            "m": self.m,
            "delta": self.delta,
            "achieved_mass": self.achieved_mass,
        }


def good_set(f: FieldValues, mu: AtomicMeasure, c: float, stage: int = 1) -> GoodSet:
    """Pinched level set with the certified bounds asserted.

    Requires 0 < c <= integral of f d(mu); the usual call passes half the
    measured integral. Guarantees (and checks) that the integral of f over
    the kept set is >= c/2 and the kept mass is >= c / 2^(m+1).
    """
    w = mu.weights
    if w.shape != f.values.shape:
        raise ValidationError("field was not sampled on this measure's atoms")
    products = w * f.values
    l1 = math.fsum(products)
    if not (0 < c <= l1):
        raise ValidationError(f"need 0 < c <= integral(f dmu) = {l1}, got c = {c}")
    total = mu.total_mass
    c_sq = math.fsum(products * f.values)
    c_prime = c / (4.0 * total)
    m = math.ceil(math.log2(16.0 * c_sq / c))
    ceiling = 2.0**m
    kept = (f.values > c_prime) & (f.values < ceiling)

    good_l1 = math.fsum(products[kept])
    achieved = math.fsum(w[kept])
    delta = c * 2.0 ** (-(m + 1))
    if good_l1 < c / 2.0:
        raise InternalConsistencyError(
            f"integral over good set {good_l1} < c/2 = {c / 2.0}"
        )
    if achieved < delta:
        raise InternalConsistencyError(
            f"good set mass {achieved} < certified delta {delta}"
        )
    return GoodSet(
        stage=stage,
        indices=np.flatnonzero(kept).astype(np.int64),
        c_low=c_prime,
        m=m,
        delta=delta,
        achieved_mass=achieved,
        l1_lower=c,
    )


@dataclass
class GoodSetChain:
    """Nested stages G(1) ⊇ G(2) ⊇ ... with the restricted measures per stage.

    stages[j-1].indices are atom ids of the source measure; measures[j-1]
    is the source restricted to them (weights unchanged).
    """

    stages: list[GoodSet]
    measures: list[AtomicMeasure]
    params: KernelParams
    n_atoms: int
    source_label: str = ""

    @property
    def depth(self) -> int:
        return len(self.stages)

    def stage_indices(self, s: int) -> np.ndarray:
        """Atom ids allowed at stage s; stage 0 is the full measure."""
        if s == 0:
            return np.arange(self.n_atoms, dtype=np.int64)
        return self.stages[s - 1].indices

    def to_records(self) -> list[dict]:
        return [gs.to_record() for gs in self.stages]


def nested_good_sets(
    mu: AtomicMeasure, params: KernelParams, depth: int
) -> GoodSetChain:
    """Iterate good-set selection against the self-convolved field.

    Stage 1 uses f = kernel * mu on the full measure with c = half the
    measured integral; stage j+1 convolves the stage-j restriction and
    selects inside it. Raises StageFailureError naming the stage when a
    restricted field has zero integral (t outside the viable range).
    """
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    stages: list[GoodSet] = []
    measures: list[AtomicMeasure] = []
    current = mu
    current_ids = np.arange(len(mu), dtype=np.int64)
    for j in range(1, depth + 1):
        f = convolve_field(current, current.atoms, params, query_label=f"stage{j}")
        l1, _ = field_norms(f, current.weights)
        if l1 <= 0.0:
            raise StageFailureError(stage=j, t=params.t, eps=params.eps)
        gs = good_set(f, current, l1 / 2.0, stage=j)
        original_ids = current_ids[gs.indices]
        stages.append(replace(gs, indices=original_ids))
        current = restrict_measure(mu, original_ids)
        measures.append(current)
        current_ids = original_ids
    return GoodSetChain(
        stages=stages,
        measures=measures,
        params=params,
        n_atoms=len(mu),
        source_label=mu.label,
    )
