"""Truncated polynomials over machine-word moduli, CRT reconstruction and the
series file format.

The transfer matrix works with generating functions truncated at a maximal
degree, with every coefficient stored as a residue vector modulo a set of
pairwise coprime moduli.  Exact integers only appear after reconstruction via
the Chinese remainder theorem.  The default modulus pair for walk counts is
``2**62`` and ``2**62 - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_MODULI = (2**62, 2**62 - 1)

#: Metric-series arithmetic multiplies coefficients, so its moduli must keep
#: products inside a signed 64-bit word.
METRIC_MODULUS_LIMIT = 2**30


class SeriesFormatError(ValueError):
    """Malformed series file."""


def check_coprime(moduli: list[int] | tuple[int, ...]) -> None:
    for m in moduli:
        if m < 2:
            raise ValueError(f"modulus {m} must be >= 2")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if math.gcd(moduli[i], moduli[j]) != 1:
                raise ValueError(
                    f"moduli {moduli[i]} and {moduli[j]} are not coprime"
                )


def crt_reconstruct(residues, moduli) -> int:
    """Unique representative in [0, prod(moduli)) matching all residues."""
    if len(residues) != len(moduli):
        raise ValueError("residue/modulus length mismatch")
    check_coprime(moduli)
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        # lift x (mod m) to x' (mod m*mi) with x' ≡ r (mod mi)
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x


class TruncatedPolynomial:
    """Coefficients c_0..c_n_max as residue vectors, with degree-range cache.

    ``coeffs[i][d]`` is coefficient of x^d modulo ``moduli[i]``.  ``min_degree``
    is the lowest nonzero degree (n_max + 1 for the zero polynomial); it is the
    n_cur of the pruning test.
    """

    __slots__ = ("moduli", "n_max", "coeffs", "min_degree", "max_degree")

    def __init__(self, moduli, n_max: int):
        self.moduli = moduli
        self.n_max = n_max
        self.coeffs = [[0] * (n_max + 1) for _ in moduli]
        self.min_degree = n_max + 1
        self.max_degree = -1

    @classmethod
    def from_integers(cls, moduli, n_max: int, values) -> "TruncatedPolynomial":
        """Polynomial with exact integer coefficients c_0, c_1, ... reduced
        modulo each modulus (``values`` may be shorter than n_max + 1)."""
        p = cls(moduli, n_max)
        for d, v in enumerate(values[: n_max + 1]):
            if v:
                for row, m in zip(p.coeffs, moduli):
                    row[d] = v % m
                if d < p.min_degree:
                    p.min_degree = d
                if d > p.max_degree:
                    p.max_degree = d
        return p

    @classmethod
    def one(cls, moduli, n_max: int) -> "TruncatedPolynomial":
        p = cls(moduli, n_max)
        for row in p.coeffs:
            row[0] = 1
        p.min_degree = 0
        p.max_degree = 0
        return p

    def is_zero(self) -> bool:
        return self.min_degree > self.n_max

    def add_shifted(self, source: "TruncatedPolynomial", k: int) -> None:
        """self += x**k * source, truncating degrees above n_max."""
        lo = source.min_degree
        hi = min(source.max_degree, self.n_max - k)
        if lo > hi:
            return  # everything shifted past the truncation order
        for mine, theirs, m in zip(self.coeffs, source.coeffs, self.moduli):
            for d in range(lo, hi + 1):
                c = theirs[d]
                if c:
                    mine[d + k] = (mine[d + k] + c) % m
        if lo + k < self.min_degree:
            self.min_degree = lo + k
        if hi + k > self.max_degree:
            self.max_degree = hi + k

    def residues(self, degree: int) -> tuple[int, ...]:
        return tuple(row[degree] for row in self.coeffs)

    def copy(self) -> "TruncatedPolynomial":
        p = TruncatedPolynomial.__new__(TruncatedPolynomial)
        p.moduli = self.moduli
        p.n_max = self.n_max
        p.coeffs = [row[:] for row in self.coeffs]
        p.min_degree = self.min_degree
        p.max_degree = self.max_degree
        return p


@dataclass
class SeriesTable:
    """Coefficients c_0..c_N, exact or as residue vectors, plus metadata.

    ``moduli`` is None for exact integer values; otherwise ``values[n]`` is a
    tuple of residues in the order of ``moduli``.
    """

    values: list
    moduli: tuple[int, ...] | None = None
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        return self.values[n]

    @property
    def is_exact(self) -> bool:
        return self.moduli is None

    def to_exact(self) -> "SeriesTable":
        if self.is_exact:
            return self
        vals = [crt_reconstruct(v, self.moduli) for v in self.values]
        meta = dict(self.metadata)
        return SeriesTable(vals, None, meta)


def write_series(table: SeriesTable, path) -> None:
    """Write the text series format: '#'-prefixed key/value headers, then
    tab-separated ``n\\tvalue`` lines (residue vectors comma-separated)."""
    meta = dict(table.metadata)
    meta["moduli"] = (
        "exact" if table.is_exact else ",".join(str(m) for m in table.moduli)
    )
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    for n, v in enumerate(table.values):
        s = str(v) if table.is_exact else ",".join(str(r) for r in v)
        lines.append(f"{n}\t{s}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_series(path) -> SeriesTable:
    """Parse a series file; loses nothing a write/read round trip needs."""
    meta: dict = {}
    values = []
    expected_n = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" in body:
                    k, v = body.split(":", 1)
                    meta[k.strip()] = v.strip()
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise SeriesFormatError(f"{path}:{lineno}: expected 'n<TAB>value'")
            try:
                n = int(parts[0])
                vals = tuple(int(x) for x in parts[1].split(","))
            except ValueError as exc:
                raise SeriesFormatError(f"{path}:{lineno}: {exc}") from exc
            if n != expected_n:
                raise SeriesFormatError(
                    f"{path}:{lineno}: coefficient index {n} out of order "
                    f"(expected {expected_n})"
                )
            expected_n += 1
            values.append(vals)
    moduli_str = meta.pop("moduli", "exact")
    if moduli_str == "exact":
        moduli = None
        out = [v[0] for v in values]
        if any(len(v) != 1 for v in values):
            raise SeriesFormatError(f"{path}: exact series with residue vectors")
    else:
        moduli = tuple(int(m) for m in moduli_str.split(","))
        check_coprime(moduli)
        out = values
        for lineno_guess, v in enumerate(values):
            if len(v) != len(moduli):
                raise SeriesFormatError(
                    f"{path}: residue vector length mismatch at n={lineno_guess}"
                )
    return SeriesTable(out, moduli, meta)
