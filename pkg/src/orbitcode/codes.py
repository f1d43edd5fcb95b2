"""Orbit codes: a finite isometry group acting on a unit initial vector.

The codebook is the orbit {g^{-1} x0}, one codeword per message g (messages
that differ by a stabilizer element share a codeword, so a well-formed code
wants a trivial stabilizer).  Everything here works through a small group
protocol (order, dim, identity, mul, inv, apply, apply_all, elements) so the
same code object wraps enumerated matrix groups, monomial groups, and wreath
products.

Key identity used throughout: for an isometry g, ||g^{-1} x0 - x0|| equals
||g x0 - x0||, so move norms can be batched with apply_all regardless of
which side the inverse sits on.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .linalg import TOL, as_vector, dist, unit


def standard_initial_vector(r: int, n: int) -> np.ndarray:
    """Unit vector (1, 1+beta, ..., 1+(n-1)beta)/norm with
    beta = sqrt(1 - cos(2 pi / r)).

    The spacing makes every phase step on one coordinate and every adjacent
    swap move the vector by the same amount, which balances the nearest
    neighbors of the orbit code under the full monomial group.
    """
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    beta = math.sqrt(1.0 - math.cos(2.0 * math.pi / r))
    pre = np.array([1.0 + i * beta for i in range(n)], dtype=np.complex128)
    return unit(pre)


class GroupCode:
    """A group together with a unit initial vector.

    Batch quantities (orbit matrix, move norms) are cached; they require the
    group to support apply_all over its element enumeration order.
    """

    def __init__(self, group, x0: np.ndarray, tau: float = TOL):
        self.group = group
        self.x0 = unit(as_vector(x0))
        if self.x0.shape[0] != group.dim:
            raise ValueError("initial vector dimension does not match group")
        self.tau = tau

    # -- orbit geometry --------------------------------------------------------

    @cached_property
    def orbit_matrix(self) -> np.ndarray:
        """Row i is (element i) applied to x0, in enumeration order."""
        return self.group.apply_all(self.x0)

    @cached_property
    def moves(self) -> np.ndarray:
        """moves[i] = ||g_i x0 - x0||, in enumeration order."""
        return np.linalg.norm(self.orbit_matrix - self.x0, axis=1)

    @cached_property
    def stabilizer_size(self) -> int:
        return int(np.count_nonzero(self.moves <= self.tau))

    @property
    def stabilizer_trivial(self) -> bool:
        return self.stabilizer_size == 1

    @property
    def codeword_count(self) -> int:
        return self.group.order // self.stabilizer_size

    @cached_property
    def min_distance(self) -> float:
        """Smallest distance between distinct codewords.

        Orbit distances are translation invariant, so this is the smallest
        nonzero move norm.
        """
        outside = self.moves[self.moves > self.tau]
        if len(outside) == 0:
            raise ValueError("orbit is a single point; no distance defined")
        return float(outside.min())

    @cached_property
    def nearest_neighbor_indices(self) -> list[int]:
        """Enumeration indices of elements moving x0 by the minimum amount."""
        d = self.min_distance
        hits = np.nonzero(np.abs(self.moves - d) <= self.tau)[0]
        return [int(i) for i in hits]

    def nearest_neighbors(self) -> list:
        """The elements g != e with ||g x0 - x0|| minimal."""
        by_index = getattr(self.group, "index_to_element", None)
        if by_index is not None:
            return [by_index(i) for i in self.nearest_neighbor_indices]
        return list(self.nearest_neighbor_indices)

    def move(self, g) -> float:
        return dist(self.group.apply(g, self.x0), self.x0)

    # -- encoding ---------------------------------------------------------------

    def encode(self, g) -> np.ndarray:
        """Codeword for message g: g^{-1} x0."""
        return self.group.apply(self.group.inv(g), self.x0)

    # -- fundamental regions -----------------------------------------------------

    def region_margin(self, x: np.ndarray, elements) -> float:
        """min over given h (excluding stabilizing ones) of
        ||h x - x0|| - ||x - x0||.

        Nonnegative means x lies in the fundamental region cut out by those
        elements; strictly positive means the interior.
        """
        x = as_vector(x)
        base = dist(x, self.x0)
        margin = math.inf
        for h in elements:
            if self.move(h) <= self.tau:
                continue
            margin = min(margin, dist(self.group.apply(h, x), self.x0) - base)
        return margin

    def in_region(self, x: np.ndarray, elements) -> bool:
        return self.region_margin(x, elements) >= -self.tau

    def fold_into_region(self, x: np.ndarray, elements):
        """Return (h, h x) with h among ``elements`` minimizing ||h x - x0||.

        Ties within tau pick the earliest element in iteration order, so
        folding is deterministic; callers that need interior points should
        test region_margin afterwards and discard near-boundary hits.
        """
        x = as_vector(x)
        best = None
        best_d = math.inf
        for h in elements:
            d = dist(self.group.apply(h, x), self.x0)
            if d < best_d - self.tau:
                best, best_d = h, d
        return best, self.group.apply(best, x)

    def sample_region_point(self, elements, rng: np.random.Generator,
                            radius: float = 1.0, margin: float = 0.0,
                            max_tries: int = 200) -> np.ndarray:
        """Draw a point of the fundamental region of ``elements`` with
        region_margin > ``margin``.

        Points come from folding x0 + (complex gaussian ball of the given
        radius) into the region, rejecting near-boundary results.
        """
        elements = list(elements)
        for _ in range(max_tries):
            noise = rng.normal(size=self.x0.shape[0] * 2).view(np.complex128)
            x = self.x0 + radius * noise / max(np.linalg.norm(noise), 1e-12)
            scale = rng.uniform() ** (1.0 / (2 * self.x0.shape[0]))
            x = self.x0 + (x - self.x0) * scale
            _, folded = self.fold_into_region(x, elements)
            if self.region_margin(folded, elements) > margin + self.tau:
                return folded
        raise RuntimeError("could not sample an interior region point")

    def __repr__(self) -> str:
        return f"<GroupCode over {self.group!r}, dim {self.group.dim}>"


class RegionProbe:
    """Stacked-matrix view of an element list for fast region tests.

    Precomputing one (count, dim, dim) array turns region membership for a
    point into a single matmul over the whole list.  Sampled checks over a
    wreath product of order ~10^3 with 10^4 samples are only practical this
    way; the per-element methods on GroupCode stay around for small groups
    and for callers that need lazy evaluation.
    """

    def __init__(self, code: GroupCode, elements):
        self.code = code
        self.elements = list(elements)
        if not self.elements:
            raise ValueError("empty element list")
        group = code.group
        self.stack = np.stack([group.to_matrix(g) for g in self.elements])
        self._index = {g: i for i, g in enumerate(self.elements)}
        moves = np.linalg.norm(self.stack @ code.x0 - code.x0, axis=1)
        self.nonstab = moves > code.tau

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        return self._index[g]

    def distances(self, x: np.ndarray) -> np.ndarray:
        """distances[i] = ||g_i x - x0|| for the stored element order."""
        return np.linalg.norm(self.stack @ as_vector(x) - self.code.x0, axis=1)

    def margin(self, x: np.ndarray) -> float:
        """Fundamental-region margin of x for the stored elements.

        Infinite when no stored element moves x0 (the trivial group cuts out
        the whole space).
        """
        if not self.nonstab.any():
            return math.inf
        ds = self.distances(x)
        return float(ds[self.nonstab].min() - dist(x, self.code.x0))

    def fold(self, x: np.ndarray):
        """Return (element, element applied to x, all distances); the element
        is the first minimizer of ||g x - x0|| in stored order."""
        x = as_vector(x)
        ds = self.distances(x)
        i = int(np.argmin(ds))
        return self.elements[i], self.stack[i] @ x, ds

    def sample_interior(self, rng: np.random.Generator, radius: float = 1.0,
                        min_margin: float = 0.0, max_tries: int = 200) -> np.ndarray:
        """Point of the region with margin above ``min_margin``: fold a draw
        from a complex ball around x0, reject near-boundary results."""
        x0 = self.code.x0
        dim = x0.shape[0]
        tau = self.code.tau
        for _ in range(max_tries):
            noise = rng.normal(size=dim * 2).view(np.complex128)
            direction = noise / max(np.linalg.norm(noise), 1e-12)
            scale = rng.uniform() ** (1.0 / (2 * dim))
            _, folded, _ = self.fold(x0 + radius * scale * direction)
            if self.margin(folded) > min_margin + tau:
                return folded
        raise RuntimeError("could not sample an interior region point")
