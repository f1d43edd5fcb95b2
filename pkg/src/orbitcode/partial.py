"""Partial monomial codes: digit-restricted subsets of a full orbit code.

A full monomial code spends its minimum distance on the first coordinate of
the initial vector, where one phase step moves the vector least.  Thinning
the phase digits evens this out: fix divisors

    1 = m_n | m_{n-1} | ... | m_2 | m_1 | r

and keep only messages whose canonical exponent digits satisfy m_j | k_j.
The kept set W is not a subgroup, but the staged decoder still works after
restricting each phase stage's leader list to the allowed powers; the
permutation stages are untouched.  Slot j then pays a phase step of
|xi^{m_j} - 1| times its amplitude, so slots with small amplitudes can be
given coarser phases and the per-generator move distances pushed toward
uniformity while the codebook shrinks by the factor prod(m_j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import TOL, as_vector, unit
from .monomial import MonomialElement, MonomialGroup, Stage


@dataclass(frozen=True)
class PartialCodeSpec:
    """Divisor tuple (m_1, ..., m_n) for a monomial group G(r, 1, n)."""

    r: int
    n: int
    ms: tuple[int, ...]

    def __post_init__(self):
        if len(self.ms) != self.n:
            raise ValueError("need one divisor per slot")
        if self.ms[-1] != 1:
            raise ValueError("the last divisor must be 1")
        if self.r % self.ms[0]:
            raise ValueError("the first divisor must divide r")
        for j in range(self.n - 1):
            if self.ms[j] % self.ms[j + 1]:
                raise ValueError(
                    "each divisor must be a multiple of the next one")

    @property
    def size(self) -> int:
        return math.factorial(self.n) * self.r**self.n // math.prod(self.ms)

    def contains(self, group: MonomialGroup, g: MonomialElement) -> bool:
        exponents, _ = group.element_to_digits(g)
        return all(k % m == 0 for k, m in zip(exponents, self.ms))

    def elements(self, group: MonomialGroup):
        """All kept messages, by restricted canonical digits."""
        exponent_choices = [range(0, self.r, m) for m in self.ms]
        insertion_choices = [range(1, j + 1) for j in range(2, self.n + 1)]
        for ks in itertools.product(*exponent_choices):
            for ls in itertools.product(*insertion_choices):
                yield group.digits_to_element(list(ks), list(ls))

    def restricted_stages(self, group: MonomialGroup) -> list[Stage]:
        """The standard tower with phase stages thinned to allowed powers."""
        stages = []
        for stage in group.standard_chain().stages:
            if stage.level % 2 == 1 and stage.level > 1:
                stages.append(stage)
                continue
            slot = 1 if stage.level == 1 else stage.level // 2 + 1
            m = self.ms[slot - 1]
            leaders = [group.a(slot, k) for k in range(0, self.r, m)]
            stages.append(Stage(name=stage.name, level=stage.level,
                                leaders=leaders, generators=stage.generators))
        return stages


def weighted_initial_vector(r: int, n: int, beta_over_alpha: float) -> np.ndarray:
    """Unit vector (1, 1 + q, ..., 1 + (n-1) q) for q = beta/alpha."""
    if beta_over_alpha <= 0:
        raise ValueError("the spacing ratio must be positive")
    pre = np.array([1.0 + i * beta_over_alpha for i in range(n)],
                   dtype=np.complex128)
    return unit(pre)


def codeword_matrix(group: MonomialGroup, spec: PartialCodeSpec,
                    x0: np.ndarray, limit: int = 20000) -> np.ndarray:
    """Stack of codewords g^{-1} x0 over the kept messages."""
    if spec.size > limit:
        raise ValueError(f"partial code too large to enumerate ({spec.size})")
    x0 = as_vector(x0)
    rows = [group.apply(group.inv(g), x0) for g in spec.elements(group)]
    return np.stack(rows)


def partial_min_distance(group: MonomialGroup, spec: PartialCodeSpec,
                         x0: np.ndarray, limit: int = 20000,
                         tau: float = TOL) -> float:
    """Exhaustive pairwise minimum distance of the kept codeword set.

    The kept set is not a group, so distances are not move norms of single
    elements; nothing short of all pairs is safe.  Guarded by ``limit``.
    """
    words = codeword_matrix(group, spec, x0, limit)
    count = words.shape[0]
    best = math.inf
    # unit codewords: ||u - v||^2 = 2 - 2 Re<u, v>, so blocks of the Gram
    # matrix suffice and no pairwise difference tensor is materialized
    conj = words.conj()
    chunk = max(1, 4_000_000 // max(count, 1))
    for start in range(0, count, chunk):
        block = words[start:start + chunk]
        d2 = 2.0 - 2.0 * (block @ conj.T).real
        for i in range(block.shape[0]):
            d2[i, start + i] = math.inf
        best = min(best, float(d2.min()))
    return math.sqrt(max(best, 0.0))


@dataclass
class DistanceTable:
    """Move distances of the effective generators of a partial code.

    entries maps a label (one per phase generator at its allowed power, one
    per adjacent swap) to ||g x0 - x0||.
    """

    entries: dict[str, float]

    @property
    def ratio(self) -> float:
        values = list(self.entries.values())
        return max(values) / min(values)

    @property
    def min_move(self) -> float:
        return min(self.entries.values())

    def to_json(self) -> dict:
        return {"entries": self.entries, "ratio": self.ratio,
                "min_move": self.min_move}


def generator_distance_table(group: MonomialGroup, spec: PartialCodeSpec,
                             x0: np.ndarray) -> DistanceTable:
    """Distances ||a_j^{m_j} x0 - x0|| and ||b_j x0 - x0||.

    The design goal of the divisor tuple is to flatten these values; the
    table's max/min ratio is the figure of merit.
    """
    x0 = as_vector(x0)
    entries = {}
    for j in range(1, group.n + 1):
        g = group.a(j, spec.ms[j - 1])
        label = f"a{j}^{spec.ms[j - 1]}" if spec.ms[j - 1] > 1 else f"a{j}"
        entries[label] = float(np.linalg.norm(g.apply(x0) - x0))
    for j in range(1, group.n):
        g = group.b(j)
        entries[f"b{j}"] = float(np.linalg.norm(g.apply(x0) - x0))
    return DistanceTable(entries=entries)
