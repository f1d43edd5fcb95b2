"""Monomial isometry groups: permutations with r-th-root-of-unity entries.

An element is stored exactly, as an integer pair (sigma, k): ``sigma`` is the
slot-source map and ``k`` the exponent vector, both 0-indexed, with action

    (g x)[i] = xi^{k[sigma[i]]} * x[sigma[i]],      xi = exp(2*pi*i/r),

so exponents ride with their source slot.  Products, inverses and the
canonical factorization are integer computations (exponents reduced mod r
eagerly); floating point enters only when an element is applied to a vector.

The standard subgroup tower interleaves one exponent stage per slot with one
insertion stage per slot: stage 1 carries the powers of a1, stage 2*l the
powers of aـ{l+1}, and stage 2*l+1 the ascending cycles that insert slot l+1
among the first l.  ``MonomialGroup.standard_chain()`` builds it together with
the per-stage generating sets.

Textual element format (used in CLI output and check witnesses):
``perm=[images];k=[exponents];r=<r>`` with 1-indexed images of sigma and
exponents listed by source slot.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import as_vector


@dataclass(frozen=True)
class MonomialElement:
    """One monomial isometry; immutable and hashable, arithmetic is exact."""

    r: int
    sigma: tuple[int, ...]
    k: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(n)):
            raise ValueError(f"sigma is not a permutation of 0..{n - 1}")
        if len(self.k) != n:
            raise ValueError("exponent vector length must match sigma")
        if any(not (0 <= e < self.r) for e in self.k):
            raise ValueError("exponents must be reduced mod r")

    @property
    def n(self) -> int:
        return len(self.sigma)

    def mul(self, other: "MonomialElement") -> "MonomialElement":
        """self * other, acting as x -> self(other(x))."""
        if self.r != other.r or self.n != other.n:
            raise ValueError("elements live in different groups")
        s1, s2 = self.sigma, other.sigma
        sigma = tuple(s2[s1[i]] for i in range(self.n))
        s2_inv = [0] * self.n
        for i, j in enumerate(s2):
            s2_inv[j] = i
        k = tuple((self.k[s2_inv[j]] + other.k[j]) % self.r for j in range(self.n))
        return MonomialElement(self.r, sigma, k)

    def inv(self) -> "MonomialElement":
        sigma_inv = [0] * self.n
        for i, j in enumerate(self.sigma):
            sigma_inv[j] = i
        k = tuple((-self.k[self.sigma[i]]) % self.r for i in range(self.n))
        return MonomialElement(self.r, tuple(sigma_inv), k)

    def pow(self, m: int) -> "MonomialElement":
        result = identity(self.r, self.n)
        base = self if m >= 0 else self.inv()
        for _ in range(abs(m)):
            result = result.mul(base)
        return result

    def is_identity(self) -> bool:
        return all(s == i for i, s in enumerate(self.sigma)) and not any(self.k)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = as_vector(x)
        if x.shape[0] != self.n:
            raise ValueError("vector dimension mismatch")
        phases = np.exp(2j * np.pi * np.asarray(self.k) / self.r)
        src = np.asarray(self.sigma)
        return phases[src] * x[src]

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.complex128)
        for i, j in enumerate(self.sigma):
            m[i, j] = np.exp(2j * np.pi * self.k[j] / self.r)
        return m

    def format(self) -> str:
        images = ",".join(str(s + 1) for s in self.sigma)
        exps = ",".join(str(e) for e in self.k)
        return f"perm=[{images}];k=[{exps}];r={self.r}"

    def __repr__(self) -> str:
        return f"MonomialElement({self.format()})"


_FORMAT_RE = _re.compile(r"^perm=\[([0-9,]*)\];k=\[([0-9,]*)\];r=(\d+)$")


def parse_element(text: str) -> MonomialElement:
    """Inverse of :meth:`MonomialElement.format`."""
    m = _FORMAT_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a monomial element literal: {text!r}")
    images = tuple(int(t) - 1 for t in m.group(1).split(",") if t)
    exps = tuple(int(t) for t in m.group(2).split(",") if t)
    return MonomialElement(int(m.group(3)), images, exps)


def identity(r: int, n: int) -> MonomialElement:
    return MonomialElement(r, tuple(range(n)), (0,) * n)


def gen_a(r: int, n: int, slot: int, power: int = 1) -> MonomialElement:
    """Multiply slot ``slot`` (1-indexed) by xi^power."""
    if not 1 <= slot <= n:
        raise ValueError("slot out of range")
    k = [0] * n
    k[slot - 1] = power % r
    return MonomialElement(r, tuple(range(n)), tuple(k))


def gen_b(r: int, n: int, j: int) -> MonomialElement:
    """Swap slots j and j+1 (1-indexed)."""
    if not 1 <= j <= n - 1:
        raise ValueError("swap index out of range")
    sigma = list(range(n))
    sigma[j - 1], sigma[j] = sigma[j], sigma[j - 1]
    return MonomialElement(r, tuple(sigma), (0,) * n)


def ascending_cycle(r: int, n: int, j: int, top: int) -> MonomialElement:
    """The insertion cycle placing slot ``top`` at position ``j`` (1-indexed,
    j <= top), shifting slots j..top-1 up by one; j == top gives identity.

    Equals the product b_j b_{j+1} ... b_{top-1}.
    """
    if not 1 <= j <= top <= n:
        raise ValueError("cycle indices out of range")
    sigma = list(range(n))
    sigma[j - 1] = top - 1
    for i in range(j, top):
        sigma[i] = i - 1
    return MonomialElement(r, tuple(sigma), (0,) * n)


@dataclass
class Stage:
    """One rung of a subgroup tower: the pair (level-1 subgroup < level
    subgroup), its transversal and the level subgroup's generating set."""

    name: str
    level: int
    leaders: list
    generators: list


class MonomialGroup:
    """The full monomial group for a given (r, n), with exact enumeration.

    Elements are indexed 0..order-1 through the canonical-form digits
    (one exponent digit per slot, one insertion digit per slot beyond the
    first), so uniform sampling and exhaustive sweeps need no element table.
    """

    def __init__(self, r: int, n: int):
        if r < 1 or n < 1:
            raise ValueError("need r >= 1 and n >= 1")
        self.r = r
        self.n = n
        self.order = math.factorial(n) * r**n
        self.dim = n
        self.identity = identity(r, n)
        # mixed-radix digit bases: k_1..k_n then l_2..l_n
        self._radices = [r] * n + list(range(2, n + 1))

    # -- element algebra (delegated; kept here for API parity with the other
    #    group kinds) --------------------------------------------------------

    def mul(self, a: MonomialElement, b: MonomialElement) -> MonomialElement:
        return a.mul(b)

    def inv(self, a: MonomialElement) -> MonomialElement:
        return a.inv()

    def apply(self, a: MonomialElement, x: np.ndarray) -> np.ndarray:
        return a.apply(x)

    def to_matrix(self, a: MonomialElement) -> np.ndarray:
        return a.to_matrix()

    def a(self, slot: int, power: int = 1) -> MonomialElement:
        return gen_a(self.r, self.n, slot, power)

    def b(self, j: int) -> MonomialElement:
        return gen_b(self.r, self.n, j)

    # -- canonical form and indexing ----------------------------------------

    def digits_to_element(self, exponents, insertions) -> MonomialElement:
        """Compose the canonical product from its digits.

        ``exponents`` is (k_1..k_n); ``insertions`` is (l_2..l_n) with
        1 <= l_j <= j selecting the cycle that drops slot j to position l_j.
        """
        g = gen_a(self.r, self.n, 1, exponents[0])
        for j in range(2, self.n + 1):
            g = gen_a(self.r, self.n, j, exponents[j - 1]).mul(g)
            g = ascending_cycle(self.r, self.n, insertions[j - 2], j).mul(g)
        return g

    def element_to_digits(self, g: MonomialElement) -> tuple[list[int], list[int]]:
        """Peel the canonical factors off g, top stage first."""
        exponents = [0] * self.n
        insertions = [0] * (self.n - 1)
        rest = g
        for j in range(self.n, 1, -1):
            found = None
            for l in range(1, j + 1):
                c = ascending_cycle(self.r, self.n, l, j)
                candidate = c.inv().mul(rest)
                if self.member_level(candidate, 2 * j - 2):
                    found = l
                    rest = candidate
                    break
            if found is None:  # unreachable for well-formed input
                raise ValueError("element failed cycle-stage factorization")
            insertions[j - 2] = found
            exponents[j - 1] = rest.k[j - 1]
            rest = gen_a(self.r, self.n, j, -rest.k[j - 1]).mul(rest)
        exponents[0] = rest.k[0]
        return exponents, insertions

    def element_to_index(self, g: MonomialElement) -> int:
        exponents, insertions = self.element_to_digits(g)
        digits = exponents + [l - 1 for l in insertions]
        index = 0
        scale = 1
        for d, base in zip(digits, self._radices):
            index += d * scale
            scale *= base
        return index

    def index_to_element(self, index: int) -> MonomialElement:
        if not 0 <= index < self.order:
            raise IndexError("element index out of range")
        digits = []
        for base in self._radices:
            digits.append(index % base)
            index //= base
        exponents = digits[: self.n]
        insertions = [d + 1 for d in digits[self.n:]]
        return self.digits_to_element(exponents, insertions)

    def elements(self):
        """Iterate the whole group in index order (use with care: r^n n!)."""
        for i in range(self.order):
            yield self.index_to_element(i)

    def random_element(self, rng: np.random.Generator) -> MonomialElement:
        # draw canonical digits directly: uniform over the group even when
        # the order does not fit a 64-bit integer
        digits = [int(rng.integers(base)) for base in self._radices]
        exponents = digits[: self.n]
        insertions = [d + 1 for d in digits[self.n:]]
        return self.digits_to_element(exponents, insertions)

    # -- subgroup tower -------------------------------------------------------

    def member_level(self, g: MonomialElement, level: int) -> bool:
        """Membership in the level-th subgroup of the standard tower.

        Level 0 is trivial; level 2l-1 allows arbitrary action on the first l
        slots only; level 2l additionally allows an exponent on slot l+1;
        level 2n-1 is the whole group.
        """
        if level <= 0:
            return g.is_identity()
        if level >= 2 * self.n - 1:
            return True
        if level % 2:  # 2l-1
            l = (level + 1) // 2
            free_exponents = l
        else:  # 2l
            l = level // 2
            free_exponents = l + 1
        if any(g.sigma[i] != i for i in range(l, self.n)):
            return False
        return not any(g.k[i] for i in range(free_exponents, self.n))

    def stage_leaders(self, stage: int) -> list[MonomialElement]:
        """Transversal for (stage-1 < stage), identity first; exponent stages
        list ascending powers, insertion stages list cycles shortest first."""
        if stage == 1:
            return [gen_a(self.r, self.n, 1, t) for t in range(self.r)]
        if stage % 2 == 0:
            slot = stage // 2 + 1
            return [gen_a(self.r, self.n, slot, t) for t in range(self.r)]
        top = (stage + 1) // 2
        return [ascending_cycle(self.r, self.n, j, top)
                for j in range(top, 0, -1)]

    def stage_generators(self, stage: int) -> list[MonomialElement]:
        """Generating set of the stage-th subgroup (the table's X column)."""
        gens = [gen_a(self.r, self.n, 1)]
        if stage % 2 == 0:
            l = stage // 2
            gens += [gen_b(self.r, self.n, j) for j in range(1, l)]
            gens.append(gen_a(self.r, self.n, l + 1))
        else:
            l = (stage + 1) // 2
            gens += [gen_b(self.r, self.n, j) for j in range(1, l)]
        return gens

    def standard_chain(self) -> "MonomialChain":
        stages = []
        for s in range(1, 2 * self.n):
            if s == 1:
                name = "exp[1]"
            elif s % 2 == 0:
                name = f"exp[{s // 2 + 1}]"
            else:
                name = f"insert[{(s + 1) // 2}]"
            stages.append(Stage(name=name, level=s,
                                leaders=self.stage_leaders(s),
                                generators=self.stage_generators(s)))
        return MonomialChain(self, stages)

    # -- batch application -----------------------------------------------------

    @cached_property
    def _batch_tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self.order * self.n > 4_000_000:
            raise MemoryError("group too large for dense batch tables")
        idx = np.empty((self.order, self.n), dtype=np.int64)
        ph = np.empty((self.order, self.n), dtype=np.complex128)
        xi = np.exp(2j * np.pi / self.r)
        for i, g in enumerate(self.elements()):
            src = np.asarray(g.sigma)
            idx[i] = src
            ph[i] = xi ** np.asarray(g.k)[src]
        return idx, ph

    def apply_all(self, x: np.ndarray) -> np.ndarray:
        """Stack of g·x over the whole group in index order, shape (order, n)."""
        x = as_vector(x)
        idx, ph = self._batch_tables
        return ph * x[idx]

    def __repr__(self) -> str:
        return f"<MonomialGroup r={self.r} n={self.n}: order {self.order}>"


class MonomialChain:
    """The standard tower of a MonomialGroup, ready for subgroup decoding."""

    def __init__(self, group: MonomialGroup, stages: list[Stage]):
        self.group = group
        self.stages = stages

    def member(self, level: int, g: MonomialElement) -> bool:
        return self.group.member_level(g, level)

    def factorize(self, g: MonomialElement) -> list[MonomialElement]:
        """Unique leaders (c_1, ..., c_m) with g = c_m ... c_1."""
        leaders: list[MonomialElement] = []
        rest = g
        for stage in reversed(self.stages):
            for c in stage.leaders:
                candidate = self.group.inv(c).mul(rest)
                if self.member(stage.level - 1, candidate):
                    leaders.append(c)
                    rest = candidate
                    break
            else:  # pragma: no cover - the transversal covers every coset
                raise ValueError(f"no leader matched at stage {stage.name}")
        leaders.reverse()
        return leaders

    def compose(self, leaders) -> MonomialElement:
        g = self.group.identity
        for c in leaders:
            g = c.mul(g)
        return g

    def subgroup_elements(self, level: int):
        """Iterate the level-th subgroup (exhaustive; sizes grow fast)."""
        if level <= 0:
            yield self.group.identity
            return
        level = min(level, 2 * self.group.n - 1)
        prefix: list[list[MonomialElement]] = []
        for stage in self.stages[:level]:
            prefix.append(stage.leaders)

        def rec(i: int, acc: MonomialElement):
            if i == len(prefix):
                yield acc
                return
            for c in prefix[i]:
                yield from rec(i + 1, c.mul(acc))

        yield from rec(0, self.group.identity)
