"""Multiset factorial designs: level alphabets, run multiplicities, margins.

Designs are immutable after construction.  Runs are stored sparsely as a map
from level-index tuples to multiplicities; the full-factorial cell count s may
be astronomically larger than the number of distinct runs, so nothing here
densifies unless explicitly asked to (and even then only below a cap).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DesignParseError, ResourceLimitError

#: Largest full-factorial size for which the count vector may be densified.
DENSIFY_CAP = 2**20

Run = tuple[int, ...]

_HEADER_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*:\s*(.*)$")
_MULTIPLIER_RE = re.compile(r"^x(\d+)$")


@dataclass(frozen=True)
class Design:
    """A multiset of runs over per-factor level alphabets.

    ``levels[i]`` lists factor i's symbols in order; position 0 is the
    reference level (the group identity once a structure is assigned).
    ``counts`` maps runs, as tuples of level indices, to multiplicities >= 1.
    """

    levels: tuple[tuple[str, ...], ...]
    counts: Mapping[Run, int] = field(repr=False)

    def __post_init__(self):
        levels = tuple(tuple(alphabet) for alphabet in self.levels)
        if not levels:
            raise ValueError("a design needs at least one factor")
        for i, alphabet in enumerate(levels):
            if not alphabet:
                raise ValueError(f"factor {i} has an empty level alphabet")
            if len(set(alphabet)) != len(alphabet):
                raise ValueError(f"factor {i} has duplicate level symbols")
        counts = dict(self.counts)
        if not counts:
            raise ValueError("a design needs at least one run")
        for run, mult in counts.items():
            if len(run) != len(levels):
                raise ValueError(f"run {run} does not have {len(levels)} coordinates")
            if any(not 0 <= r < len(levels[i]) for i, r in enumerate(run)):
                raise ValueError(f"run {run} has a level index out of range")
            if mult < 1:
                raise ValueError(f"run {run} has multiplicity {mult} < 1")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "counts", MappingProxyType(counts))

    @property
    def k(self) -> int:
        """Number of factors."""
        return len(self.levels)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Per-factor level counts s_i."""
        return tuple(len(alphabet) for alphabet in self.levels)

    @property
    def n_runs(self) -> int:
        """Total number of runs N, counting multiplicities."""
        return sum(self.counts.values())

    @property
    def space_size(self) -> int:
        """Full-factorial cell count s = prod(s_i)."""
        return math.prod(self.sizes)

    def runs(self) -> Iterator[tuple[Run, int]]:
        """(run, multiplicity) pairs in Yates order of the run tuples."""
        for run in sorted(self.counts):
            yield run, self.counts[run]

    def run_index(self, run: Run) -> int:
        """Yates (mixed-radix) index of a run, first factor most significant."""
        index = 0
        for r, size in zip(run, self.sizes):
            index = index * size + r
        return index

    def dense_counts(self, *, max_size: int = DENSIFY_CAP) -> np.ndarray:
        """Count vector O over all s cells in Yates order (refused above the cap)."""
        s = self.space_size
        if s > max_size:
            raise ResourceLimitError(
                f"dense count vector of length {s} exceeds the cap {max_size}"
            )
        dense = np.zeros(s, dtype=np.float64)
        for run, mult in self.counts.items():
            dense[self.run_index(run)] = mult
        return dense

    def serialize(self) -> str:
        """Canonical design-file text; parse(serialize(d)) reproduces d."""
        lines = ["symbols: " + " | ".join(" ".join(a) for a in self.levels)]
        for run, mult in self.runs():
            tokens = [self.levels[i][r] for i, r in enumerate(run)]
            if mult > 1:
                tokens.append(f"x{mult}")
            lines.append(" ".join(tokens))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MarginTable:
    """Run counts marginalized to a subset of factor positions (0-based).

    Only nonzero cells are stored; each cell is a tuple of level indices for
    the factors in ``subset`` (ascending).  The empty subset yields the single
    cell ``()`` holding N.
    """

    subset: tuple[int, ...]
    sizes: tuple[int, ...]
    counts: Mapping[tuple[int, ...], int] = field(repr=False)
    n_runs: int

    def __getitem__(self, cell: Sequence[int]) -> int:
        return self.counts.get(tuple(cell), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def cells(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Nonzero (cell, count) pairs in Yates order."""
        for cell in sorted(self.counts):
            yield cell, self.counts[cell]

    def dense(self, *, max_size: int = DENSIFY_CAP) -> np.ndarray:
        size = math.prod(self.sizes)
        if size > max_size:
            raise ResourceLimitError(
                f"dense margin table of size {size} exceeds the cap {max_size}"
            )
        dense = np.zeros(size, dtype=np.float64)
        for cell, count in self.counts.items():
            index = 0
            for r, s in zip(cell, self.sizes):
                index = index * s + r
            dense[index] = count
        return dense


def margins(design: Design, subset: Iterable[int]) -> MarginTable:
    """Total multiplicity of runs agreeing with each level combination on ``subset``.

    ``subset`` holds 0-based factor positions; the empty subset gives the
    scalar N and the full set reproduces the counting function itself.
    """
    positions = tuple(sorted(set(int(i) for i in subset)))
    if positions and not (0 <= positions[0] and positions[-1] < design.k):
        raise ValueError(f"subset {positions} out of range for {design.k} factors")
    table: dict[tuple[int, ...], int] = {}
    for run, mult in design.counts.items():
        cell = tuple(run[i] for i in positions)
        table[cell] = table.get(cell, 0) + mult
    sizes = tuple(design.sizes[i] for i in positions)
    return MarginTable(positions, sizes, table, design.n_runs)


def relabel_levels(design: Design, perms: Sequence[Sequence[int] | None]) -> Design:
    """Permute each factor's levels; ``perms[i][old] = new`` (None = identity).

    The multiset of multiplicities and N are preserved; symbols stay attached
    to their positions, runs are re-indexed.
    """
    if len(perms) != design.k:
        raise ValueError(f"need {design.k} permutations, got {len(perms)}")
    mappings: list[Sequence[int]] = []
    for i, perm in enumerate(perms):
        size = design.sizes[i]
        if perm is None:
            mappings.append(range(size))
            continue
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(size)):
            raise ValueError(f"perms[{i}] is not a bijection on {size} levels")
        mappings.append(perm)
    counts: dict[Run, int] = {}
    for run, mult in design.counts.items():
        new_run = tuple(mappings[i][r] for i, r in enumerate(run))
        counts[new_run] = counts.get(new_run, 0) + mult
    return Design(design.levels, counts)


def parse_design(text: str) -> Design:
    """Parse the design file format.

    Format: ``#`` comments; optional headers ``levels: s1 ... sk``,
    ``symbols: a0 a1 ... | b0 b1 ... | ...`` (first symbol per factor is the
    reference level) and ``layout: columns`` (runs are file columns, one line
    per factor); then one run per line, whitespace-separated symbols with an
    optional trailing ``x<m>`` multiplier.  Without a ``symbols`` header the
    alphabets are the sorted distinct symbols per factor.
    """
    declared_sizes: list[int] | None = None
    declared_symbols: list[list[str]] | None = None
    columns = False
    data: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER_RE.match(line) if not data else None
        if header:
            name, rest = header.group(1), header.group(2).strip()
            if name == "levels":
                try:
                    declared_sizes = [int(tok) for tok in rest.split()]
                except ValueError:
                    raise DesignParseError("levels header must list integers", lineno)
                if not declared_sizes or any(s < 1 for s in declared_sizes):
                    raise DesignParseError("levels header must list positive sizes", lineno)
            elif name == "symbols":
                declared_symbols = [chunk.split() for chunk in rest.split("|")]
                for i, alphabet in enumerate(declared_symbols):
                    if not alphabet:
                        raise DesignParseError(f"factor {i + 1} has no symbols", lineno)
                    if len(set(alphabet)) != len(alphabet):
                        raise DesignParseError(
                            f"factor {i + 1} has duplicate symbols", lineno
                        )
            elif name == "layout":
                if rest not in ("rows", "columns"):
                    raise DesignParseError(f"unknown layout {rest!r}", lineno)
                columns = rest == "columns"
            else:
                raise DesignParseError(f"unknown header {name!r}", lineno)
            continue
        data.append((lineno, line.split()))

    if declared_symbols is not None and declared_sizes is not None:
        if [len(a) for a in declared_symbols] != declared_sizes:
            raise DesignParseError("symbols header disagrees with levels header")

    if columns:
        runs = _runs_from_columns(data, declared_sizes, declared_symbols)
    else:
        runs = _runs_from_rows(data, declared_sizes, declared_symbols)
    if not runs:
        raise DesignParseError("no runs found")

    k = len(runs[0][1])
    alphabets = _resolve_alphabets(runs, k, declared_sizes, declared_symbols)

    counts: dict[Run, int] = {}
    for lineno, symbols, mult in runs:
        run = []
        for i, symbol in enumerate(symbols):
            try:
                run.append(alphabets[i].index(symbol))
            except ValueError:
                raise DesignParseError(
                    f"symbol {symbol!r} not in factor {i + 1}'s alphabet", lineno
                ) from None
        run = tuple(run)
        counts[run] = counts.get(run, 0) + mult
    return Design(tuple(tuple(a) for a in alphabets), counts)


def _known_k(sizes: list[int] | None, symbols: list[list[str]] | None) -> int | None:
    if symbols is not None:
        return len(symbols)
    if sizes is not None:
        return len(sizes)
    return None


def _runs_from_rows(data, sizes, symbols) -> list[tuple[int, list[str], int]]:
    """Row layout: each data line is one run, optionally ending in x<mult>."""
    k = _known_k(sizes, symbols)
    runs = []
    for lineno, tokens in data:
        mult = 1
        m = _MULTIPLIER_RE.match(tokens[-1]) if len(tokens) > 1 else None
        if m and (k is None or len(tokens) == k + 1):
            mult = int(m.group(1))
            if mult < 1:
                raise DesignParseError("multiplier must be at least 1", lineno)
            tokens = tokens[:-1]
        if k is None:
            k = len(tokens)
        if len(tokens) != k:
            raise DesignParseError(
                f"expected {k} symbols, got {len(tokens)}", lineno
            )
        runs.append((lineno, tokens, mult))
    return runs


def _runs_from_columns(data, sizes, symbols) -> list[tuple[int, list[str], int]]:
    """Column layout: one line per factor, runs are the columns."""
    k = _known_k(sizes, symbols)
    if k is not None and data and len(data) != k:
        raise DesignParseError(
            f"expected {k} factor lines, got {len(data)}", data[-1][0]
        )
    width = None
    for lineno, tokens in data:
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise DesignParseError(
                f"expected {width} columns, got {len(tokens)}", lineno
            )
    if not data:
        return []
    first_line = data[0][0]
    return [
        (first_line, [tokens[j] for _, tokens in data], 1) for j in range(width)
    ]


def _resolve_alphabets(runs, k, sizes, symbols) -> list[list[str]]:
    if symbols is not None:
        if len(symbols) != k:
            raise DesignParseError(
                f"symbols header declares {len(symbols)} factors, runs have {k}"
            )
        return symbols
    seen: list[set[str]] = [set() for _ in range(k)]
    for _, tokens, _ in runs:
        for i, symbol in enumerate(tokens):
            seen[i].add(symbol)
    if sizes is None:
        return [sorted(s) for s in seen]
    # A levels header without symbols: factors use the numeric alphabet 0..s-1.
    if len(sizes) != k:
        raise DesignParseError(f"levels header declares {len(sizes)} factors, runs have {k}")
    alphabets = []
    for i, size in enumerate(sizes):
        if not all(tok.isdigit() and int(tok) < size for tok in seen[i]):
            raise DesignParseError(
                f"factor {i + 1} uses non-numeric symbols; add a symbols header"
            )
        alphabets.append([str(j) for j in range(size)])
    return alphabets
