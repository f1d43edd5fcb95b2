"""Finite groups of complex isometries, enumerated from generator matrices.

A :class:`MatrixGroup` is built by breadth-first closure of a generating set of
unitary matrices.  Elements are identified by their index into the enumerated
element table; matrix products are mapped back to indices by nearest-neighbor
matching against that table (never by grid rounding, which would split a pair
of nearly-equal entries across rounding cells).  Enumeration order is a
deterministic function of the generator list, so element ids are stable across
runs.

The module also carries the coset machinery shared by the decoders and the
checkers: left cosets, stabilizers, orbits, and the selection of per-coset
leaders that minimize the move ||c^{-1} x0 - x0||, reporting ties instead of
resolving them silently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    TOL,
    as_matrix,
    as_vector,
    dist,
    is_isometry,
    mat_eq,
    matrix_from_json,
    matrix_to_json,
)

#: Default cap on closure size; generating sets that exceed it raise.
MAX_ORDER = 10_000

# Bucket granularity for the closure lookup table.  Buckets only accelerate
# the search; identity is always confirmed by a tolerance comparison, and a
# bucket miss falls back to a linear scan so boundary effects cannot
# misidentify an element.
_KEY_DECIMALS = 6


def _bucket_key(m: np.ndarray) -> tuple:
    flat = np.round(m.ravel().view(np.float64), _KEY_DECIMALS)
    # avoid distinct -0.0/0.0 keys
    flat = flat + 0.0
    return tuple(flat.tolist())


class ClosureOverflowError(RuntimeError):
    """Raised when the closure exceeds the allowed maximum order."""


@dataclass
class TieReport:
    """A coset whose minimum move is attained by inequivalent elements.

    Elements that differ by a right factor stabilizing x0 always tie and are
    not reported; a TieReport means the tie is essential for this x0.
    """

    coset: list[int]
    tied: list[int]
    distance: float

    def to_json(self) -> dict:
        return {
            "coset": list(self.coset),
            "tied": list(self.tied),
            "distance": self.distance,
        }


@dataclass
class LeaderSelection:
    """Result of per-coset leader minimization over G/H."""

    leaders: list[int]
    ties: list[TieReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.ties


class MatrixGroup:
    """A finite group of unitary matrices, closed and indexed.

    Element ids are 0..order-1 with id 0 = identity.  ``mats[i]`` is the
    matrix of element i; products and inverses are resolved back to ids.
    """

    def __init__(self, generators, name: str = "", max_order: int = MAX_ORDER,
                 tau: float = TOL):
        gens = [as_matrix(g) for g in generators]
        if not gens:
            raise ValueError("need at least one generator")
        self.dim = gens[0].shape[0]
        self.name = name
        self.tau = tau
        for g in gens:
            if g.shape != (self.dim, self.dim):
                raise ValueError("generators must share one dimension")
            if not is_isometry(g, tau):
                raise ValueError("generator is not an isometry to tolerance")

        self.mats: list[np.ndarray] = []
        self._buckets: dict[tuple, list[int]] = {}
        self._append(np.eye(self.dim, dtype=np.complex128))
        self.generator_ids: list[int] = []

        queue = deque()
        for g in gens:
            gid = self._lookup(g)
            if gid is None:
                gid = self._append(g)
                queue.append(gid)
            self.generator_ids.append(gid)
        while queue:
            cur = queue.popleft()
            for gid in self.generator_ids:
                prod = self.mats[cur] @ self.mats[gid]
                if self._lookup(prod) is None:
                    new_id = self._append(prod)
                    queue.append(new_id)
                    if len(self.mats) > max_order:
                        raise ClosureOverflowError(
                            f"closure exceeded max_order={max_order}"
                        )

        self.order = len(self.mats)
        self._inv: list[int | None] = [None] * self.order
        self._mul_cache: dict[tuple[int, int], int] = {}

    # -- element table ------------------------------------------------------

    def _append(self, m: np.ndarray) -> int:
        idx = len(self.mats)
        self.mats.append(m)
        self._buckets.setdefault(_bucket_key(m), []).append(idx)
        return idx

    def _lookup(self, m: np.ndarray) -> int | None:
        for idx in self._buckets.get(_bucket_key(m), ()):  # fast path
            if mat_eq(self.mats[idx], m, self.tau):
                return idx
        # Bucket keys can disagree for equal-to-tolerance matrices that round
        # across a grid boundary; confirm by scanning before declaring new.
        for idx, known in enumerate(self.mats):
            if mat_eq(known, m, self.tau):
                return idx
        return None

    def id_of(self, m: np.ndarray) -> int:
        """Resolve a matrix to its element id; KeyError when not in G."""
        found = self._lookup(as_matrix(m))
        if found is None:
            raise KeyError("matrix is not an element of this group")
        return found

    # -- group operations ----------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def random_element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.order))

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        got = self._mul_cache.get(key)
        if got is None:
            got = self.id_of(self.mats[a] @ self.mats[b])
            self._mul_cache[key] = got
        return got

    def inv(self, a: int) -> int:
        got = self._inv[a]
        if got is None:
            got = self.id_of(self.mats[a].conj().T)
            self._inv[a] = got
        return got

    def power(self, a: int, k: int) -> int:
        result = 0
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def apply(self, a: int, x: np.ndarray) -> np.ndarray:
        return self.mats[a] @ as_vector(x)

    def to_matrix(self, a: int) -> np.ndarray:
        return self.mats[a]

    def apply_all(self, x: np.ndarray) -> np.ndarray:
        """Stack of a·x for every element a, shape (order, dim)."""
        stack = np.stack(self.mats)  # (order, dim, dim)
        return stack @ as_vector(x)

    def conjugate(self, a: int, by: int) -> int:
        """by^{-1} · a · by."""
        return self.mul(self.mul(self.inv(by), a), by)

    # -- subgroups, cosets, orbits -------------------------------------------

    def subgroup(self, gen_ids) -> list[int]:
        """Sorted element ids of the subgroup generated by gen_ids."""
        members = {0}
        frontier = deque([0])
        gen_ids = list(gen_ids)
        while frontier:
            cur = frontier.popleft()
            for g in gen_ids:
                nxt = self.mul(cur, g)
                if nxt not in members:
                    members.add(nxt)
                    frontier.append(nxt)
        return sorted(members)

    def left_cosets(self, sub_ids) -> list[list[int]]:
        """Partition of G into left cosets aH, each sorted, in order of the
        smallest id not yet covered (deterministic)."""
        sub = list(sub_ids)
        seen: set[int] = set()
        cosets = []
        for a in range(self.order):
            if a in seen:
                continue
            coset = sorted(self.mul(a, h) for h in sub)
            seen.update(coset)
            cosets.append(coset)
        return cosets

    def stabilizer(self, x0: np.ndarray, tau: float | None = None) -> list[int]:
        tau = self.tau if tau is None else tau
        x0 = as_vector(x0)
        moves = np.linalg.norm(self.apply_all(x0) - x0, axis=1)
        return [int(i) for i in np.nonzero(moves <= tau)[0]]

    def orbit(self, x0: np.ndarray, tau: float | None = None) -> np.ndarray:
        """Distinct orbit points a·x0 (deduplicated to tolerance)."""
        tau = self.tau if tau is None else tau
        points = self.apply_all(x0)
        kept: list[np.ndarray] = []
        for p in points:
            if not any(np.linalg.norm(p - q) <= tau for q in kept):
                kept.append(p)
        return np.stack(kept)

    def has_full_orbit(self, x0: np.ndarray, tau: float | None = None) -> bool:
        return len(self.stabilizer(x0, tau)) == 1

    # -- leader selection ------------------------------------------------------

    def minimal_coset_leaders(self, sub_ids, x0: np.ndarray,
                              tau: float | None = None) -> LeaderSelection:
        """Pick, per left coset of the subgroup, the element minimizing
        ||c^{-1} x0 - x0||.

        Ties between elements that differ by a right factor in Stab(x0) are
        harmless (same message) and resolved to the smallest id; any other tie
        is reported.  The identity's coset always yields the identity.
        """
        tau = self.tau if tau is None else tau
        x0 = as_vector(x0)
        stab = set(self.stabilizer(x0, tau))
        selection = LeaderSelection(leaders=[])
        for coset in self.left_cosets(sub_ids):
            moves = [(dist(self.apply(self.inv(c), x0), x0), c) for c in coset]
            best = min(m for m, _ in moves)
            tied = [c for m, c in moves if m <= best + tau]
            essential = [
                (a, b)
                for i, a in enumerate(tied)
                for b in tied[i + 1:]
                if self.mul(self.inv(a), b) not in stab
            ]
            if essential:
                flat = sorted({e for pair in essential for e in pair})
                selection.ties.append(TieReport(coset=coset, tied=flat,
                                                distance=best))
            leader = 0 if 0 in tied else min(tied)
            selection.leaders.append(leader)
        # identity's coset first, rest by leader id: a stable, readable order
        selection.leaders.sort(key=lambda c: (c != 0, c))
        return selection

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "generators": [matrix_to_json(self.mats[g]) for g in self.generator_ids],
        }

    @classmethod
    def from_json(cls, data: dict, max_order: int = MAX_ORDER) -> "MatrixGroup":
        gens = [matrix_from_json(g) for g in data["generators"]]
        return cls(gens, name=data.get("name", ""), max_order=max_order)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or "MatrixGroup"
        return f"<{label}: order {self.order}, dim {self.dim}>"
