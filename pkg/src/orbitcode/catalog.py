"""Built-in two-dimensional isometry groups with interesting decoding
behavior.

Each entry ships as a JSON file under ``orbitcode/data``: generator matrices
to full float precision, pinned initial vectors, named element words, and
(where useful) an explicit subgroup chain.  Loading re-derives everything
else by closure and arithmetic: the group order is recomputed and checked
against the stored value, words are multiplied out, and the interesting
phenomena (distance ties, good chains) are left to the checking machinery
rather than being trusted from the file.

The three entries form a family: A = diag(1, zeta_k) and a unitary
reflection B fixing the hyperplane orthogonal to a pinned vector, with the
braid relation ABA = BAB.  k = 3, 4, 5 close to groups of order 24, 96,
and 600.

* ``g4``  (k = 3): the order-24 group.  With the pinned vector ``x0`` the
  elements named C = BA^2B and D = CA move x0 by exactly the same amount,
  so any leader choice between them ties; the alternative vector ``y0``
  admits the chain {I} < <C> < G with strict minimality at every stage.
* ``g8``  (k = 4): order 96, with a balanced vector equalizing the moves
  of the generator orbit.
* ``g16`` (k = 5): order 600.  The words B^3 A^4 B^3 (a scalar matrix) and
  B^3 A^4 B^3 A^4 move every unit vector by the same amount, a tie no
  choice of initial vector can break.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decoding import ExplicitChain
from .groups import MatrixGroup
from .linalg import matrix_from_json, matrix_to_json, vector_from_json, vector_to_json

DATA_DIR = Path(__file__).parent / "data"


def braid_generators(k: int) -> tuple[np.ndarray, np.ndarray]:
    """A = diag(1, zeta_k) and the reflection B = I + (zeta_k - 1) v v^T
    with v = (sqrt(p), -sqrt(1-p)), p = (1 - 2 cos(2 pi / k)) / (2 - 2 cos(2 pi / k)).

    Both have order k; they satisfy the braid relation ABA = BAB.  Real v
    makes B symmetric, so v v^T needs no conjugation.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    zeta = cmath.exp(2j * math.pi / k)
    c = math.cos(2 * math.pi / k)
    p = (1 - 2 * c) / (2 - 2 * c)
    if not 0 <= p <= 1:
        raise ValueError(f"no real reflection vector for k={k}")
    v = np.array([math.sqrt(p), -math.sqrt(1 - p)], dtype=np.complex128)
    a = np.diag([1.0, zeta]).astype(np.complex128)
    b = np.eye(2, dtype=np.complex128) + (zeta - 1) * np.outer(v, v)
    return a, b


def _builtin_specs() -> dict[str, dict]:
    specs = {}

    a3, b3 = braid_generators(3)
    t8 = math.atan(2.0) / 2.0
    specs["g4"] = {
        "name": "g4",
        "description": "order-24 complex reflection group (k=3 braid pair)",
        "dim": 2,
        "generators": {"A": matrix_to_json(a3), "B": matrix_to_json(b3)},
        "expected_order": 24,
        "vectors": {
            "x0": vector_to_json(np.array([0.8881, 0.4597], dtype=np.complex128)),
            "y0": vector_to_json(np.array([1 / math.sqrt(2) + 0.5j, 0.5],
                                          dtype=np.complex128)),
        },
        "words": {"C": "BAAB", "D": "BAABA"},
        "ties": [{"vector": "x0", "words": ["BAAB", "BAABA"]}],
        "chains": {
            "good": {
                "names": ["cyclic", "cosets"],
                "stages": [
                    ["I", "C", "CC", "CCC", "CCCC", "CCCCC"],
                    ["I", "B", "BB", "AABB"],
                ],
            }
        },
        "notes": "With x0, C and D tie at the top stage of {I} < <A> < G; "
                 "with y0 the chain {I} < <C> < G is strictly minimal.",
    }

    a4, b4 = braid_generators(4)
    x8 = np.array([math.cos(t8), math.sin(t8) * cmath.exp(1j * math.pi / 3)],
                  dtype=np.complex128)
    specs["g8"] = {
        "name": "g8",
        "description": "order-96 complex reflection group (k=4 braid pair)",
        "dim": 2,
        "generators": {"A": matrix_to_json(a4), "B": matrix_to_json(b4)},
        "expected_order": 96,
        "vectors": {"x0": vector_to_json(x8)},
        "words": {},
        "ties": [],
        "chains": {},
        "notes": "x0 = (cos t, sin t e^{i pi/3}) with t = atan(2)/2 balances "
                 "the moves of the generators.",
    }

    a5, b5 = braid_generators(5)
    t16 = 0.55
    x16 = np.array([math.cos(t16), math.sin(t16) * cmath.exp(0.30j)],
                   dtype=np.complex128)
    specs["g16"] = {
        "name": "g16",
        "description": "order-600 complex reflection group (k=5 braid pair)",
        "dim": 2,
        "generators": {"A": matrix_to_json(a5), "B": matrix_to_json(b5)},
        "expected_order": 600,
        "vectors": {"x0": vector_to_json(x16)},
        "words": {"S": "BBBAAAABBB", "T": "BBBAAAABBBAAAA"},
        "ties": [{"vector": None, "words": ["BBBAAAABBB", "BBBAAAABBBAAAA"]}],
        "chains": {},
        "notes": "S is the scalar matrix e^{i pi/5} I and T = S A^4 is "
                 "diag(e^{i pi/5}, e^{-i pi/5}); they move every unit vector "
                 "equally, so the tie is independent of the initial vector.",
    }
    return specs


def write_data_dir(path: Path | str = DATA_DIR) -> list[Path]:
    """Regenerate the JSON entries from the closed-form constructors."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    written = []
    for name, spec in sorted(_builtin_specs().items()):
        target = path / f"{name}.json"
        target.write_text(json.dumps(spec, indent=2) + "\n")
        written.append(target)
    return written


def available(path: Path | str = DATA_DIR) -> list[str]:
    path = Path(path)
    if not path.is_dir():
        return []
    return sorted(p.stem for p in path.glob("*.json"))


@dataclass
class CatalogEntry:
    name: str
    description: str
    group: MatrixGroup
    letters: dict[str, int]
    vectors: dict[str, np.ndarray]
    words: dict[str, int]
    chains: dict[str, ExplicitChain] = field(default_factory=dict)
    ties: list[dict] = field(default_factory=list)
    notes: str = ""

    def element(self, word: str) -> int:
        """Resolve a word over the generator letters (or a named word) to an
        element id.  "I" is the identity; products read left to right."""
        return _evaluate_word(self.group, self.letters, self.words, word)

    def vector(self, name: str) -> np.ndarray:
        return self.vectors[name]


def _evaluate_word(group: MatrixGroup, letters: dict[str, int],
                   named: dict[str, int], word: str) -> int:
    if word in named:
        return named[word]
    if word == "I" or word == "":
        return 0
    g = 0
    for ch in word:
        if ch == "I":
            continue
        if ch not in letters:
            raise KeyError(f"unknown letter {ch!r} in word {word!r}")
        g = group.mul(g, letters[ch])
    return g


def load(name: str, path: Path | str = DATA_DIR) -> CatalogEntry:
    """Load a catalog entry and rebuild the group by closure.

    The stored order is treated as an integrity check on the closure, not
    as an answer; a mismatch raises.
    """
    target = Path(path) / f"{name}.json"
    if not target.is_file():
        raise KeyError(f"no catalog entry named {name!r}; "
                       f"available: {', '.join(available(path)) or 'none'}")
    spec = json.loads(target.read_text())
    gen_names = sorted(spec["generators"])
    mats = [matrix_from_json(spec["generators"][g]) for g in gen_names]
    group = MatrixGroup(mats, name=spec["name"])
    if group.order != spec["expected_order"]:
        raise ValueError(
            f"catalog entry {name!r}: closure has order {group.order}, "
            f"file says {spec['expected_order']}")
    letters = {g: group.id_of(m) for g, m in zip(gen_names, mats)}
    words = {}
    for label, word in spec.get("words", {}).items():
        words[label] = _evaluate_word(group, letters, {}, word)
    vectors = {k: vector_from_json(v) for k, v in spec.get("vectors", {}).items()}
    chains = {}
    for label, chain_spec in spec.get("chains", {}).items():
        leader_lists = [
            [_evaluate_word(group, letters, words, w) for w in stage]
            for stage in chain_spec["stages"]
        ]
        chains[label] = ExplicitChain(group, leader_lists,
                                      names=chain_spec.get("names"))
    return CatalogEntry(
        name=spec["name"],
        description=spec.get("description", ""),
        group=group,
        letters=letters,
        vectors=vectors,
        words=words,
        chains=chains,
        ties=spec.get("ties", []),
        notes=spec.get("notes", ""),
    )
