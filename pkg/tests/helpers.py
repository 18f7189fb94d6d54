"""Shared test utilities: independent oracles and a random-design generator.

The oracles recompute quantities from their defining formulas with plain
Python loops and cmath, touching none of the package's transform, table or
margin code, so route-vs-oracle agreement is meaningful.
"""

from __future__ import annotations

import cmath
import itertools
import math
from pathlib import Path

import numpy as np

from wordlength import Design, enumerate_structures

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def oracle_character(structure_orders, g, h) -> complex:
    """exp(2*pi*i * sum g_p h_p / d_p) over the cyclic parts of one factor."""
    phase = sum((gp * hp) / d for gp, hp, d in zip(g, h, structure_orders))
    return cmath.exp(2j * math.pi * phase)


def oracle_jchar(design: Design, structures) -> np.ndarray:
    """Direct-summation spectrum: chi[g] = sum_h O(h) * prod_i chi_{g_i}(h_i)."""
    factor_elements = [
        list(itertools.product(*(range(d) for d in st.cyclic_orders)))
        for st in structures
    ]
    values = []
    for g in itertools.product(*factor_elements):
        total = 0j
        for run, mult in design.counts.items():
            term = complex(mult)
            for i, st in enumerate(structures):
                h = factor_elements[i][run[i]]
                term *= oracle_character(st.cyclic_orders, g[i], h)
            total += term
        values.append(total)
    return np.array(values, dtype=np.complex128)


def oracle_gwlp(design: Design, structures) -> list[float]:
    """Weight-class sums of |chi|^2 over the direct-summation spectrum."""
    chi = oracle_jchar(design, structures)
    orders = [st.order for st in structures]
    k = len(orders)
    sums = [0.0] * (k + 1)
    for index, value in enumerate(chi):
        digits, rem = [], index
        for order in reversed(orders):
            rem, r = divmod(rem, order)
            digits.append(r)
        wt = sum(1 for d in digits if d != 0)
        sums[wt] += abs(value) ** 2
    n = design.n_runs
    return [x / n**2 for x in sums]


def oracle_margin_counts(design: Design, subset) -> dict[tuple[int, ...], int]:
    """Margins recomputed from the fully expanded run list."""
    expanded = []
    for run, mult in design.counts.items():
        expanded.extend([run] * mult)
    table: dict[tuple[int, ...], int] = {}
    for run in expanded:
        cell = tuple(run[i] for i in sorted(subset))
        table[cell] = table.get(cell, 0) + 1
    return table


def random_design(
    rng: np.random.Generator,
    *,
    max_k: int = 4,
    sizes_pool=(2, 3, 4, 6, 8, 9, 12),
    max_distinct: int = 20,
    max_mult: int = 3,
) -> Design:
    """A random multiset design; N <= max_distinct * max_mult."""
    k = int(rng.integers(1, max_k + 1))
    sizes = [int(rng.choice(sizes_pool)) for _ in range(k)]
    levels = tuple(tuple(str(j) for j in range(s)) for s in sizes)
    n_distinct = int(rng.integers(1, max_distinct + 1))
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(n_distinct):
        run = tuple(int(rng.integers(0, s)) for s in sizes)
        counts[run] = int(rng.integers(1, max_mult + 1))
    return Design(levels, counts)


def all_assignments(design: Design):
    """Every per-factor abelian structure choice for a design."""
    per_factor = [enumerate_structures(s) for s in design.sizes]
    return [tuple(combo) for combo in itertools.product(*per_factor)]
