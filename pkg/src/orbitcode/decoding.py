"""Decoders for orbit codes.

Three decoders, trading generality against speed:

* ml_decode: exact nearest-codeword search over the whole group (the
  benchmark the others are measured against).
* subgroup_decode: the staged greedy decoder.  Given a tower
  {I} = G_0 < ... < G_m = G with left-coset leaders per stage, it picks at
  stage k the leader c_k minimizing ||c_k y - x0|| and feeds c_k y to the
  next stage.  The output c_m ... c_1 is the message estimate in canonical
  form.  Ties inside the tolerance window go to the first leader in stored
  order, which favors the identity for leader lists that start with it.
* fast_monomial_decode: the same greedy specialized to the standard tower of
  a full monomial group, where stage minimization collapses to one phase
  rounding per coordinate and one insertion-sort pass, with an explicit
  comparison count.

Also here: the noise threshold attached to a tower (decode is exact once the
noise norm stays under half the threshold) and a primitive decoder that walks
toward x0 by single generator steps, together with its own threshold.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .linalg import TOL, as_vector, dist
from .monomial import MonomialGroup, Stage

TWO_PI = 2.0 * math.pi


@dataclass
class DecodeResult:
    """Outcome of a staged greedy decode.

    ``leaders`` is bottom-first: element = leaders[-1] ... leaders[0].
    ``stage_ties[k]`` counts the alternatives within tolerance of the stage-k
    winner (0 means the choice was unique).
    """

    element: object
    leaders: list = field(default_factory=list)
    final_distance: float = 0.0
    stage_ties: list = field(default_factory=list)

    @property
    def tied(self) -> bool:
        return any(t > 0 for t in self.stage_ties)


def subgroup_decode(group, stages, x0: np.ndarray, y: np.ndarray,
                    tau: float = TOL) -> DecodeResult:
    """Greedy staged decode of y against the tower described by ``stages``.

    ``stages`` is an iterable of objects with a ``leaders`` list, ordered
    bottom stage first.
    """
    x0 = as_vector(x0)
    cur = as_vector(y)
    chosen = []
    ties = []
    g = None
    for stage in stages:
        ds = [dist(group.apply(c, cur), x0) for c in stage.leaders]
        best = min(ds)
        pick = next(i for i, d in enumerate(ds) if d <= best + tau)
        ties.append(sum(1 for d in ds if d <= best + tau) - 1)
        c = stage.leaders[pick]
        chosen.append(c)
        cur = group.apply(c, cur)
        g = c if g is None else group.mul(c, g)
    return DecodeResult(element=g, leaders=chosen,
                        final_distance=dist(cur, x0), stage_ties=ties)


@dataclass
class MLResult:
    element: object
    index: int
    distance: float
    tied_indices: list[int]

    @property
    def tied(self) -> bool:
        return len(self.tied_indices) > 1


def ml_decode(group, x0: np.ndarray, y: np.ndarray, tau: float = TOL) -> MLResult:
    """Nearest-codeword decode: argmin over all g of ||g y - x0||.

    Equivalent to finding the codeword g^{-1} x0 closest to y.  The winner is
    the smallest enumeration index among those within tau of the minimum.
    """
    ds = np.linalg.norm(group.apply_all(as_vector(y)) - as_vector(x0), axis=1)
    tied = np.nonzero(ds <= ds.min() + tau)[0]
    index = int(tied[0])
    by_index = getattr(group, "index_to_element", None)
    element = by_index(index) if by_index is not None else index
    return MLResult(element=element, index=index, distance=float(ds[index]),
                    tied_indices=[int(i) for i in tied])


# -- fast decoder for the standard monomial tower -------------------------------


@dataclass
class FastDecodeResult:
    element: object
    comparisons: int
    exponents: list[int]
    insertions: list[int]


def _round_phase(z: complex, r: int) -> int:
    """Exponent k in 0..r-1 minimizing the distance of xi^k z to the positive
    real axis; exact half-way ties take the smaller exponent (mod r)."""
    theta = math.atan2(z.imag, z.real) % TWO_PI
    t = r - r * theta / TWO_PI
    base = math.floor(t)
    frac = t - base
    if abs(frac - 0.5) <= 1e-12:
        return min(int(base) % r, (int(base) + 1) % r)
    return int(math.floor(t + 0.5)) % r


def fast_monomial_decode(group: MonomialGroup, y: np.ndarray) -> FastDecodeResult:
    """Greedy decode against the standard tower of a full monomial group.

    Phase stages round each coordinate's argument to the nearest r-th root
    (one comparison each); permutation stages insert the aligned real part
    into a sorted list, scanning from the right (one comparison per ordering
    test, ties keep the newcomer rightmost).  Matches subgroup_decode on the
    standard tower, including tie behavior.
    """
    r, n = group.r, group.n
    y = as_vector(y)
    if y.shape[0] != n:
        raise ValueError("vector length does not match the group")
    comparisons = 0
    exponents = []
    insertions = []
    aligned: list[float] = []
    for i in range(n):
        z = complex(y[i])
        k = _round_phase(z, r)
        comparisons += 1
        exponents.append(k)
        v = (z * complex(math.cos(TWO_PI * k / r), math.sin(TWO_PI * k / r))).real
        if i == 0:
            aligned.append(v)
            continue
        pos = 1
        for j in range(i - 1, -1, -1):
            comparisons += 1
            if v >= aligned[j]:
                pos = j + 2
                break
        aligned.insert(pos - 1, v)
        insertions.append(pos)
    element = group.digits_to_element(exponents, insertions)
    return FastDecodeResult(element=element, comparisons=comparisons,
                            exponents=exponents, insertions=insertions)


# -- towers given by explicit leader lists ---------------------------------------


class ExplicitChain:
    """A subgroup tower built from explicit per-stage leader lists.

    Works for any group protocol with hashable elements; subgroup membership
    is realized by materializing each level's element set (products of all
    leader choices up to that level), so this fits small and moderate groups.
    """

    def __init__(self, group, leader_lists, names=None):
        self.group = group
        self.stages = []
        for i, leaders in enumerate(leader_lists):
            name = names[i] if names is not None else f"stage{i + 1}"
            self.stages.append(Stage(name=name, level=i + 1,
                                     leaders=list(leaders), generators=[]))
        self._levels = [{group.identity}]
        for stage in self.stages:
            prev = self._levels[-1]
            self._levels.append({group.mul(c, g)
                                 for c in stage.leaders for g in prev})

    def member(self, level: int, g) -> bool:
        level = max(0, min(level, len(self.stages)))
        return g in self._levels[level]

    def subgroup_elements(self, level: int):
        level = max(0, min(level, len(self.stages)))
        return iter(self._levels[level])

    def factorize(self, g) -> list:
        leaders = []
        rest = g
        for stage in reversed(self.stages):
            for c in stage.leaders:
                candidate = self.group.mul(self.group.inv(c), rest)
                if self.member(stage.level - 1, candidate):
                    leaders.append(c)
                    rest = candidate
                    break
            else:
                raise ValueError(f"no leader matched at {stage.name}")
        leaders.reverse()
        return leaders

    def compose(self, leaders):
        g = self.group.identity
        for c in leaders:
            g = self.group.mul(c, g)
        return g


def induced_leaders(chain, k: int):
    """Products c_m ... c_{k+1} over all stage leader choices above level k:
    a transversal of G over G_k.  Yields the identity when k = m."""
    upper = [s.leaders for s in chain.stages[k:]]
    mul = chain.group.mul
    if not upper:
        yield chain.group.identity
        return
    for combo in itertools.product(*upper):
        yield reduce(lambda acc, c: mul(c, acc), combo, chain.group.identity)


@dataclass
class DeltaReport:
    """Noise threshold of a tower: decode is exact for noise < delta/2.

    per_stage[k] is the stage-k margin; the top stage's entry is the code's
    minimum distance.  All margins positive means the tower decodes correctly
    (the converse failure pinpoints the offending stage).
    """

    delta: float
    per_stage: dict[int, float]

    @property
    def ok(self) -> bool:
        return self.delta > 0


def compute_delta(chain, x0: np.ndarray, min_distance: float,
                  tau: float = TOL) -> DeltaReport:
    """Stage margins: for k < m,

        delta_k = min ||P h x0 - x0|| - ||P x0 - x0||

    over induced leaders P = c_m ... c_{k+1} and h in G_k - G_{k-1}; the top
    margin is the minimum distance itself.
    """
    group = chain.group
    x0 = as_vector(x0)
    m = len(chain.stages)
    per_stage = {m: float(min_distance)}
    for k in range(1, m):
        hs = [h for h in chain.subgroup_elements(k)
              if not chain.member(k - 1, h)]
        worst = math.inf
        for P in induced_leaders(chain, k):
            Px = group.apply(P, x0)
            base = dist(Px, x0)
            for h in hs:
                moved = group.apply(P, group.apply(h, x0))
                worst = min(worst, dist(moved, x0) - base)
        per_stage[k] = worst
    return DeltaReport(delta=min(per_stage.values()), per_stage=per_stage)


# -- primitive decoding by generator steps ---------------------------------------


def close_under_inverses(group, steps) -> list:
    """The step list extended with missing inverses, original order first."""
    out = list(steps)
    for s in steps:
        s_inv = group.inv(s)
        if s_inv not in out:
            out.append(s_inv)
    return out


@dataclass
class PrimitiveResult:
    element: object
    steps_taken: int
    converged: bool
    final_distance: float


def primitive_decode(group, x0: np.ndarray, steps, y: np.ndarray,
                     variant: str = "best", epsilon: float = 0.0,
                     max_steps: int = 1000, tau: float = TOL) -> PrimitiveResult:
    """Walk y toward x0 by repeatedly applying one step from ``steps``.

    Both variants stop once no step improves the distance to x0 by more than
    ``epsilon``; while some does, variant "best" applies a step of maximum
    improvement and variant "first" the first sufficiently improving one.
    The accumulated product of applied steps is the message estimate.  With
    epsilon set to a third of the step-set threshold, noise below that same
    third is corrected within floor(6 / threshold) steps.
    """
    if variant not in ("best", "first"):
        raise ValueError("variant must be 'best' or 'first'")
    x0 = as_vector(x0)
    cur = as_vector(y)
    g = group.identity
    taken = 0
    while taken < max_steps:
        base = dist(cur, x0)
        ds = [dist(group.apply(s, cur), x0) for s in steps]
        if variant == "best":
            best = min(ds)
            if base - best <= epsilon + tau:
                return PrimitiveResult(g, taken, True, base)
            pick = next(i for i, d in enumerate(ds) if d <= best + tau)
        else:
            pick = next((i for i, d in enumerate(ds) if base - d > epsilon + tau),
                        None)
            if pick is None:
                return PrimitiveResult(g, taken, True, base)
        s = steps[pick]
        cur = group.apply(s, cur)
        g = group.mul(s, g)
        taken += 1
    return PrimitiveResult(g, taken, False, dist(cur, x0))


@dataclass
class PrimitiveDeltaReport:
    """Worst-case improvement of the best step over the orbit.

    The decoder above is exact (up to the stabilizer) on noise below
    delta / 3, stopping within floor(6 / delta) steps, provided delta is
    positive; delta <= 0 means some non-initial codeword admits no improving
    step and ``witness_index`` names one such orbit point.
    """

    delta: float
    witness_index: int | None

    @property
    def ok(self) -> bool:
        return self.delta > 0


def compute_primitive_delta(code, steps, tau: float = TOL) -> PrimitiveDeltaReport:
    """delta = min over codewords w != x0 of
    ||w - x0|| - min_c ||c w - x0|| over the step set."""
    group = code.group
    x0 = code.x0
    delta = math.inf
    witness = None
    for idx in np.nonzero(code.moves > tau)[0]:
        w = code.orbit_matrix[int(idx)]
        base = dist(w, x0)
        best = min(dist(group.apply(s, w), x0) for s in steps)
        improvement = base - best
        if improvement < delta:
            delta = improvement
            witness = int(idx)
    return PrimitiveDeltaReport(delta=float(delta),
                                witness_index=witness if delta <= tau else None)
