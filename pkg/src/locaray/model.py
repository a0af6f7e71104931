"""Core domain types: SUT models, interactions, test arrays, and coverage.

A system under test is described by the number of values each of its k
factors can take.  A test is a row assigning one value to every factor; an
interaction is a partial assignment touching t distinct factors.  The
central relation is which rows of an array cover which interactions.

Conventions: factors and values are 0-based everywhere in code; row indices
are 1-based in every human-facing or on-disk representation (``rho``,
reports, the array file format).
"""

import bisect
import itertools
import re
from dataclasses import dataclass
from random import Random


class ModelParseError(ValueError):
    """Raised for malformed model specifications."""


@dataclass(frozen=True)
class SutModel:
    """Per-factor domain sizes (v_1, ..., v_k) of the system under test."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 1:
            raise ValueError("a model needs at least one factor")
        for j, v in enumerate(self.values):
            if v < 2:
                raise ValueError(f"factor {j + 1} has {v} values; every factor needs at least 2")

    @property
    def k(self) -> int:
        return len(self.values)

    def spec_text(self) -> str:
        """Canonical textual form, run-length encoded: (2,2,2,3) -> '2^3 3'."""
        parts = []
        for v, run in itertools.groupby(self.values):
            n = len(list(run))
            parts.append(f"{v}^{n}" if n > 1 else f"{v}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.spec_text()


_TOKEN_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_model(spec: str) -> SutModel:
    """Parse a model specification such as ``"2^13 4^5"`` or ``"2,2,2,3"``.

    Tokens are separated by whitespace or commas.  Each token is either
    ``base^exp`` (exp factors with base values each) or a bare integer,
    shorthand for an exponent of 1.  Bases must be >= 2 and exponents >= 1.
    """
    tokens = spec.replace(",", " ").split()
    if not tokens:
        raise ModelParseError("empty model specification")
    values: list[int] = []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise ModelParseError(f"malformed token {tok!r}")
        base = int(m.group(1))
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if base < 2:
            raise ModelParseError(f"token {tok!r}: factors need at least 2 values")
        if exp < 1:
            raise ModelParseError(f"token {tok!r}: exponent must be at least 1")
        values.extend([base] * exp)
    return SutModel(tuple(values))


@dataclass(frozen=True)
class Interaction:
    """A set of (factor, value) pairs with pairwise-distinct factors.

    ``pairs`` is kept sorted by factor, which makes the representation
    canonical: two interactions are equal iff they assign the same values
    to the same factors.  The strength is the number of pairs.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(p) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        factors = [j for j, _ in pairs]
        if len(set(factors)) != len(factors):
            raise ValueError(f"duplicate factor in interaction {pairs}")

    @property
    def strength(self) -> int:
        return len(self.pairs)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.pairs)

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Canonical ordering key: factor tuple first, then value tuple."""
        return (self.factors, tuple(v for _, v in self.pairs))

    def validate_for(self, model: SutModel) -> None:
        for j, v in self.pairs:
            if not 0 <= j < model.k:
                raise ValueError(f"factor {j} out of range for a {model.k}-factor model")
            if not 0 <= v < model.values[j]:
                raise ValueError(f"value {v} out of range for factor {j}")

    def __lt__(self, other: "Interaction") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        # human-facing: 1-based factors
        return "(" + ", ".join(f"{j + 1}={v}" for j, v in self.pairs) + ")"


@dataclass
class TestArray:
    """An m x k matrix of factor values; each row is one test."""

    __test__ = False  # not a pytest class, despite the name

    model: SutModel
    rows: list[list[int]]

    def __post_init__(self):
        self.rows = [list(row) for row in self.rows]
        k = self.model.k
        for i, row in enumerate(self.rows):
            if len(row) != k:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {k}")
            for j, a in enumerate(row):
                if not 0 <= a < self.model.values[j]:
                    raise ValueError(f"entry ({i + 1},{j + 1}) = {a} out of range")

    @property
    def m(self) -> int:
        return len(self.rows)

    def copy(self) -> "TestArray":
        return TestArray(self.model, [row[:] for row in self.rows])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TestArray)
            and self.model == other.model
            and self.rows == other.rows
        )


def covers(row, interaction: Interaction) -> bool:
    """True iff the row agrees with every (factor, value) pair of the interaction."""
    return all(row[j] == v for j, v in interaction.pairs)


def rho(array: TestArray, interaction: Interaction) -> frozenset[int]:
    """The set of rows of the array covering the interaction (1-based indices)."""
    interaction.validate_for(array.model)
    return frozenset(
        i for i, row in enumerate(array.rows, start=1) if covers(row, interaction)
    )


def random_array(model: SutModel, m: int, rng: Random) -> TestArray:
    """An m x k array with every entry drawn uniformly from its factor's domain."""
    if m < 0:
        raise ValueError("row count must be non-negative")
    return TestArray(model, [[rng.randrange(v) for v in model.values] for _ in range(m)])


def interaction_count(model: SutModel, t: int) -> int:
    """|I_t|: number of strength-t interactions, via the closed form
    sum over t-subsets S of factors of prod_{j in S} v_j (computed as the
    x^t coefficient of prod_j (1 + v_j x))."""
    if t < 0 or t > model.k:
        raise ValueError(f"strength {t} out of range for a {model.k}-factor model")
    coeffs = [1] + [0] * t
    for v in model.values:
        for d in range(t, 0, -1):
            coeffs[d] += coeffs[d - 1] * v
    return coeffs[t]


class InteractionCatalog:
    """Dense, canonically ordered index of all strength-t interactions.

    The canonical order is lexicographic on the sorted factor tuple, then on
    the value tuple.  Indexing is arithmetic: each factor combination gets a
    contiguous block, with values ranked in mixed radix.
    """

    def __init__(self, model: SutModel, t: int):
        if t < 0 or t > model.k:
            raise ValueError(f"strength {t} out of range for a {model.k}-factor model")
        self.model = model
        self.strength = t
        self.combos: list[tuple[int, ...]] = list(itertools.combinations(range(model.k), t))
        self.offsets: list[int] = []
        self.strides: list[tuple[int, ...]] = []
        self._combo_pos: dict[tuple[int, ...], int] = {}
        off = 0
        vals = model.values
        for pos, combo in enumerate(self.combos):
            self.offsets.append(off)
            stride = [1] * t
            for d in range(t - 2, -1, -1):
                stride[d] = stride[d + 1] * vals[combo[d + 1]]
            self.strides.append(tuple(stride))
            self._combo_pos[combo] = pos
            block = 1
            for j in combo:
                block *= vals[j]
            off += block
        self.size = off

    def __len__(self) -> int:
        return self.size

    def index_of(self, interaction: Interaction) -> int:
        """Dense index of an interaction (inverse of interaction_at)."""
        combo = interaction.factors
        pos = self._combo_pos.get(combo)
        if pos is None:
            raise KeyError(f"interaction {interaction} is not strength {self.strength} / in range")
        stride = self.strides[pos]
        idx = self.offsets[pos]
        for d, (_, v) in enumerate(interaction.pairs):
            idx += v * stride[d]
        return idx

    def interaction_at(self, idx: int) -> Interaction:
        """Interaction at a dense index (inverse of index_of)."""
        if not 0 <= idx < self.size:
            raise IndexError(idx)
        pos = bisect.bisect_right(self.offsets, idx) - 1
        combo = self.combos[pos]
        stride = self.strides[pos]
        rem = idx - self.offsets[pos]
        pairs = []
        for d, j in enumerate(combo):
            v, rem = divmod(rem, stride[d])
            pairs.append((j, v))
        return Interaction(tuple(pairs))

    def __iter__(self):
        for combo in self.combos:
            for values in itertools.product(*(range(self.model.values[j]) for j in combo)):
                yield Interaction(tuple(zip(combo, values)))


def enumerate_interactions(model: SutModel, t: int) -> InteractionCatalog:
    """Catalog of every strength-t interaction of the model, canonically ordered."""
    return InteractionCatalog(model, t)


# --- array file format ------------------------------------------------------
#
# line 1: model spec text          e.g.  2^3 3
# line 2: two integers  m t
# lines 3..m+2: k space-separated entries per row
# lines starting with '#' are comments and are ignored; LF endings.


def format_array(array: TestArray, strength: int) -> str:
    lines = [array.model.spec_text(), f"{array.m} {strength}"]
    lines.extend(" ".join(str(a) for a in row) for row in array.rows)
    return "\n".join(lines) + "\n"


def parse_array(text: str) -> tuple[TestArray, int]:
    """Parse the array file format; returns (array, strength)."""
    lines = [ln.strip() for ln in text.split("\n")]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ValueError("array file needs a model line and an 'm t' line")
    model = parse_model(lines[0])
    head = lines[1].split()
    if len(head) != 2:
        raise ValueError(f"expected 'm t' on the second line, got {lines[1]!r}")
    m, t = int(head[0]), int(head[1])
    if m < 0 or t < 0:
        raise ValueError("m and t must be non-negative")
    row_lines = lines[2:]
    if len(row_lines) != m:
        raise ValueError(f"expected {m} row lines, found {len(row_lines)}")
    rows = []
    for ln in row_lines:
        rows.append([int(x) for x in ln.split()])
    return TestArray(model, rows), t


def save_array(array: TestArray, strength: int, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_array(array, strength))


def load_array(path) -> tuple[TestArray, int]:
    with open(path) as fh:
        return parse_array(fh.read())
