"""Wreath products H wr Sym_n acting block-wise on C^{m*n}.

An element is a pair (sigma, blocks): ``sigma`` is the slot-source map and
``blocks[j]`` the id (into the base :class:`~orbitcode.groups.MatrixGroup` H)
of the matrix applied to the content of source slot j, with action

    (g x)[i] = H[blocks[sigma[i]]] @ x[sigma[i]]        (x split into n blocks).

Block ids keep wreath arithmetic exact: composing two elements only composes
permutations and multiplies base-group ids through H's cached tables.

The standard tower mirrors the monomial one, with the cyclic exponent stages
replaced by full copies of H: stage 1 inserts H in slot 1, stage 2*l inserts H
in slot l+1, and stage 2*l+1 carries the ascending insertion cycles.  The
stage generating sets put X_H (and the adjacent transpositions) at odd stages
and every nonidentity element of H, in slot l+1, at even stages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import MatrixGroup
from .linalg import TOL, as_vector, unit
from .monomial import Stage


@dataclass(frozen=True)
class WreathElement:
    """One wreath-product element: a permutation plus base-group ids."""

    sigma: tuple[int, ...]
    blocks: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(n)):
            raise ValueError(f"sigma is not a permutation of 0..{n - 1}")
        if len(self.blocks) != n:
            raise ValueError("blocks length must match sigma")

    @property
    def n(self) -> int:
        return len(self.sigma)


def _cycle_sigma(n: int, j: int, top: int) -> tuple[int, ...]:
    """Slot-source map of the cycle placing slot ``top`` at position ``j``
    (1-indexed, j <= top) and shifting j..top-1 up by one."""
    sigma = list(range(n))
    sigma[j - 1] = top - 1
    for i in range(j, top):
        sigma[i] = i - 1
    return tuple(sigma)


@dataclass
class SuitabilityReport:
    """How a candidate base vector behaves under the base group.

    ``suitable`` requires a trivial stabilizer and a unique nontrivial
    minimizer of ||h v0 - v0||; construction functions never enforce it,
    they leave the choice of v0 to the caller.
    """

    trivial_stabilizer: bool
    min_move: float
    minimizers: list[int]

    @property
    def unique(self) -> bool:
        return len(self.minimizers) == 1

    @property
    def suitable(self) -> bool:
        return self.trivial_stabilizer and self.unique


def suitability_report(H: MatrixGroup, v0: np.ndarray,
                       tau: float = TOL) -> SuitabilityReport:
    v0 = as_vector(v0)
    moves = np.linalg.norm(H.apply_all(v0) - v0, axis=1)
    nontrivial = [(float(moves[i]), i) for i in range(1, H.order)]
    min_move = min(m for m, _ in nontrivial)
    minimizers = [i for m, i in nontrivial if m <= min_move + tau]
    trivial = min_move > tau and float(moves[0]) <= tau
    return SuitabilityReport(trivial_stabilizer=trivial, min_move=min_move,
                             minimizers=minimizers)


def extend_initial_vector(v0: np.ndarray, weights) -> np.ndarray:
    """Build the stacked initial vector (u_1 v0, ..., u_n v0), unit norm.

    Weights must be strictly increasing and positive; the result is
    normalized so callers may pass any positive scale.
    """
    v0 = as_vector(v0)
    u = np.asarray(weights, dtype=np.float64)
    if u.ndim != 1 or len(u) < 1:
        raise ValueError("weights must be a 1-d sequence")
    if not np.all(u > 0) or not np.all(np.diff(u) > 0):
        raise ValueError("weights must be positive and strictly increasing")
    return unit(np.concatenate([ui * v0 for ui in u]))


class WreathGroup:
    """H wr Sym_n with exact element arithmetic through H's id tables."""

    def __init__(self, H: MatrixGroup, n: int):
        if n < 1:
            raise ValueError("need n >= 1")
        self.H = H
        self.n = n
        self.order = math.factorial(n) * H.order**n
        self.dim = H.dim * n
        self.identity = WreathElement(tuple(range(n)), (0,) * n)
        self._radices = [H.order] * n + list(range(2, n + 1))

    # -- element algebra -------------------------------------------------------

    def mul(self, a: WreathElement, b: WreathElement) -> WreathElement:
        s1, s2 = a.sigma, b.sigma
        sigma = tuple(s2[s1[i]] for i in range(self.n))
        s2_inv = [0] * self.n
        for i, j in enumerate(s2):
            s2_inv[j] = i
        blocks = tuple(
            self.H.mul(a.blocks[s2_inv[j]], b.blocks[j]) for j in range(self.n)
        )
        return WreathElement(sigma, blocks)

    def inv(self, a: WreathElement) -> WreathElement:
        sigma_inv = [0] * self.n
        for i, j in enumerate(a.sigma):
            sigma_inv[j] = i
        blocks = tuple(self.H.inv(a.blocks[a.sigma[i]]) for i in range(self.n))
        return WreathElement(tuple(sigma_inv), blocks)

    def apply(self, a: WreathElement, x: np.ndarray) -> np.ndarray:
        x = as_vector(x)
        m = self.H.dim
        if x.shape[0] != self.dim:
            raise ValueError("vector dimension mismatch")
        out = np.empty_like(x)
        for i in range(self.n):
            src = a.sigma[i]
            out[i * m:(i + 1) * m] = (
                self.H.mats[a.blocks[src]] @ x[src * m:(src + 1) * m]
            )
        return out

    def to_matrix(self, a: WreathElement) -> np.ndarray:
        m = self.H.dim
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i in range(self.n):
            src = a.sigma[i]
            out[i * m:(i + 1) * m, src * m:(src + 1) * m] = self.H.mats[a.blocks[src]]
        return out

    def slot_insert(self, slot: int, h_id: int) -> WreathElement:
        """The element acting as h in slot ``slot`` (1-indexed), identity
        elsewhere."""
        if not 1 <= slot <= self.n:
            raise ValueError("slot out of range")
        blocks = [0] * self.n
        blocks[slot - 1] = h_id
        return WreathElement(tuple(range(self.n)), tuple(blocks))

    def transposition(self, j: int) -> WreathElement:
        if not 1 <= j <= self.n - 1:
            raise ValueError("swap index out of range")
        sigma = list(range(self.n))
        sigma[j - 1], sigma[j] = sigma[j], sigma[j - 1]
        return WreathElement(tuple(sigma), (0,) * self.n)

    def cycle(self, j: int, top: int) -> WreathElement:
        return WreathElement(_cycle_sigma(self.n, j, top), (0,) * self.n)

    # -- canonical indexing -----------------------------------------------------

    def digits_to_element(self, block_ids, insertions) -> WreathElement:
        g = self.slot_insert(1, block_ids[0])
        for j in range(2, self.n + 1):
            g = self.mul(self.slot_insert(j, block_ids[j - 1]), g)
            g = self.mul(self.cycle(insertions[j - 2], j), g)
        return g

    def element_to_digits(self, g: WreathElement) -> tuple[list[int], list[int]]:
        block_ids = [0] * self.n
        insertions = [0] * (self.n - 1)
        rest = g
        for j in range(self.n, 1, -1):
            for l in range(1, j + 1):
                candidate = self.mul(self.inv(self.cycle(l, j)), rest)
                if self.member_level(candidate, 2 * j - 2):
                    insertions[j - 2] = l
                    rest = candidate
                    break
            else:  # pragma: no cover
                raise ValueError("element failed cycle-stage factorization")
            block_ids[j - 1] = rest.blocks[j - 1]
            rest = self.mul(self.slot_insert(j, self.H.inv(rest.blocks[j - 1])), rest)
        block_ids[0] = rest.blocks[0]
        return block_ids, insertions

    def element_to_index(self, g: WreathElement) -> int:
        block_ids, insertions = self.element_to_digits(g)
        digits = block_ids + [l - 1 for l in insertions]
        index = 0
        scale = 1
        for d, base in zip(digits, self._radices):
            index += d * scale
            scale *= base
        return index

    def index_to_element(self, index: int) -> WreathElement:
        if not 0 <= index < self.order:
            raise IndexError("element index out of range")
        digits = []
        for base in self._radices:
            digits.append(index % base)
            index //= base
        block_ids = digits[: self.n]
        insertions = [d + 1 for d in digits[self.n:]]
        return self.digits_to_element(block_ids, insertions)

    def elements(self):
        for i in range(self.order):
            yield self.index_to_element(i)

    def random_element(self, rng: np.random.Generator) -> WreathElement:
        digits = [int(rng.integers(base)) for base in self._radices]
        block_ids = digits[: self.n]
        insertions = [d + 1 for d in digits[self.n:]]
        return self.digits_to_element(block_ids, insertions)

    # -- subgroup tower -----------------------------------------------------------

    def member_level(self, g: WreathElement, level: int) -> bool:
        if level <= 0:
            return g == self.identity
        if level >= 2 * self.n - 1:
            return True
        if level % 2:
            l = (level + 1) // 2
            free_blocks = l
        else:
            l = level // 2
            free_blocks = l + 1
        if any(g.sigma[i] != i for i in range(l, self.n)):
            return False
        return not any(g.blocks[i] for i in range(free_blocks, self.n))

    def stage_leaders(self, stage: int) -> list[WreathElement]:
        if stage % 2 or stage == 1:
            if stage == 1:
                return [self.slot_insert(1, h) for h in range(self.H.order)]
            top = (stage + 1) // 2
            return [self.cycle(j, top) for j in range(top, 0, -1)]
        slot = stage // 2 + 1
        return [self.slot_insert(slot, h) for h in range(self.H.order)]

    def stage_generators(self, stage: int, base_generators=None) -> list[WreathElement]:
        """Generating set of the stage-th subgroup.

        Odd stages carry slot-1 copies of the base generators plus adjacent
        transpositions; even stages add every nonidentity element of H in
        slot l+1 (the full copy, not just generators).
        """
        base = self.H.generator_ids if base_generators is None else list(base_generators)
        gens = [self.slot_insert(1, h) for h in base]
        if stage == 1:
            return gens
        if stage % 2 == 0:
            l = stage // 2
            gens += [self.transposition(j) for j in range(1, l)]
            gens += [self.slot_insert(l + 1, h) for h in range(1, self.H.order)]
        else:
            l = (stage + 1) // 2
            gens += [self.transposition(j) for j in range(1, l)]
        return gens

    def standard_chain(self) -> "WreathChain":
        stages = []
        for s in range(1, 2 * self.n):
            if s == 1:
                name = "base[1]"
            elif s % 2 == 0:
                name = f"base[{s // 2 + 1}]"
            else:
                name = f"insert[{(s + 1) // 2}]"
            stages.append(Stage(name=name, level=s,
                                leaders=self.stage_leaders(s),
                                generators=self.stage_generators(s)))
        return WreathChain(self, stages)

    # -- batch application ---------------------------------------------------------

    @cached_property
    def _matrix_stack(self) -> np.ndarray:
        if self.order * self.dim * self.dim > 40_000_000:
            raise MemoryError("group too large for a dense matrix stack")
        return np.stack([self.to_matrix(g) for g in self.elements()])

    def apply_all(self, x: np.ndarray) -> np.ndarray:
        return self._matrix_stack @ as_vector(x)

    def __repr__(self) -> str:
        return (f"<WreathGroup base order {self.H.order}, n={self.n}: "
                f"order {self.order}>")


class WreathChain:
    """Standard tower of a WreathGroup; same decoding API as MonomialChain."""

    def __init__(self, group: WreathGroup, stages: list[Stage]):
        self.group = group
        self.stages = stages

    def member(self, level: int, g: WreathElement) -> bool:
        return self.group.member_level(g, level)

    def factorize(self, g: WreathElement) -> list[WreathElement]:
        leaders: list[WreathElement] = []
        rest = g
        for stage in reversed(self.stages):
            for c in stage.leaders:
                candidate = self.group.mul(self.group.inv(c), rest)
                if self.member(stage.level - 1, candidate):
                    leaders.append(c)
                    rest = candidate
                    break
            else:  # pragma: no cover
                raise ValueError(f"no leader matched at stage {stage.name}")
        leaders.reverse()
        return leaders

    def compose(self, leaders) -> WreathElement:
        g = self.group.identity
        for c in leaders:
            g = self.group.mul(c, g)
        return g

    def subgroup_elements(self, level: int):
        if level <= 0:
            yield self.group.identity
            return
        level = min(level, len(self.stages))
        stage_leaders = [s.leaders for s in self.stages[:level]]

        def rec(i: int, acc: WreathElement):
            if i == len(stage_leaders):
                yield acc
                return
            for c in stage_leaders[i]:
                yield from rec(i + 1, self.group.mul(c, acc))

        yield from rec(0, self.group.identity)
