import math
import os
import sys
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.cobordism import BoundaryInvariantTable, CellTable, TwoCell  # noqa: E402
from models.table import AlgebraElement, CompositionTable, LabelInfo  # noqa: E402
from services.composition_service import UNKNOT  # noqa: E402
from services.wirtinger import parse_pd, wirtinger  # noqa: E402

TREFOIL_PD = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]"
FIGURE_EIGHT_PD = "X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]"
HOPF_PD = "X[1,3,2,4], X[3,1,4,2]"

TRANSPOSE = '∨'
DAGGER = '†'


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def trefoil():
    return wirtinger(parse_pd(TREFOIL_PD), label='trefoil')


@pytest.fixture
def unknot():
    return UNKNOT


def _toggle(letter: str, mark: str) -> str:
    return letter[:-len(mark)] if letter.endswith(mark) else f"{letter}{mark}"


def _words(letters: Dict[str, Tuple[str, str]], max_length: int) -> List[Tuple[str, ...]]:
    """Composable words over letters (name -> (source, target)), shortest first."""
    words = [(name,) for name in sorted(letters)]
    frontier = list(words)
    for _ in range(max_length - 1):
        frontier = [w + (name,) for w in frontier for name in sorted(letters)
                    if letters[w[-1]][1] == letters[name][0]]
        words.extend(frontier)
    return words


def free_table(generators: Dict[str, Tuple[str, str, int, int]], max_length: int) -> CompositionTable:
    """Free semigroupoid on generators (and their transposes), truncated at max_length letters.

    Composition is concatenation, so every entry has one component and the
    right factor is always unique.
    """
    letters = {}
    for name, (source, target, n, m) in generators.items():
        letters[name] = (source, target, n, m)
        letters[f"{name}{TRANSPOSE}"] = (target, source, m, n)
    ends = {name: (v[0], v[1]) for name, v in letters.items()}
    words = _words(ends, max_length)

    labels = {}
    for w in words:
        labels['.'.join(w)] = LabelInfo(
            n=math.prod(letters[x][2] for x in w),
            m=math.prod(letters[x][3] for x in w),
            source=letters[w[0]][0],
            target=letters[w[-1]][1],
            transpose='.'.join(_toggle(x, TRANSPOSE) for x in reversed(w)),
        )
    entries = {}
    for u, v in product(words, words):
        if len(u) + len(v) <= max_length and ends[u[-1]][1] == ends[v[0]][0]:
            entries[CompositionTable.key('.'.join(u), '.'.join(v))] = ['.'.join(u + v)]
    return CompositionTable(labels=labels, entries=entries)


def cyclic_table(n_max: int) -> CompositionTable:
    """Classes M(1)..M(n_max) over the unknot with M(a)∘M(b) = M(ab) while ab <= n_max."""
    labels = {f"M({k})": LabelInfo(n=k, m=k, source='O', target='O', transpose=f"M({k})")
              for k in range(1, n_max + 1)}
    entries = {
        CompositionTable.key(f"M({a})", f"M({b})"): [f"M({a * b})"]
        for a in range(1, n_max + 1) for b in range(1, n_max + 1) if a * b <= n_max
    }
    return CompositionTable(labels=labels, entries=entries)


def random_element(rng, labels: Sequence[str], size: int = 3) -> AlgebraElement:
    chosen = rng.choice(sorted(labels), size=min(size, len(labels)), replace=False)
    return AlgebraElement(coefficients={
        str(label): complex(rng.normal(), rng.normal()) for label in chosen
    })


def short_labels(table: CompositionTable, max_letters: int) -> List[str]:
    return sorted(label for label in table.labels if label.count('.') < max_letters)


def vertical_cells(rng, boundaries: int = 4, copies: int = 2, max_length: int = 4,
                   degree: int = 1) -> Tuple[CellTable, BoundaryInvariantTable]:
    """Cells glued along boundaries B0..Bk, closed under gluing up to max_length.

    Elementary cells run B_l -> B_l+1 and their daggers back; chi and delta
    are additive up to the glued boundary values.
    """
    names = [f"B{l}" for l in range(boundaries)]
    chi_boundary = {b: float(rng.integers(-3, 4)) for b in names}
    delta_boundary = {b: float(rng.integers(0, 3)) for b in names}
    letters, chi, delta = {}, {}, {}
    for l in range(boundaries - 1):
        for r in range(copies):
            name = f"e{l}{r}"
            chi[name] = chi[f"{name}{DAGGER}"] = float(rng.integers(-5, 6))
            delta[name] = delta[f"{name}{DAGGER}"] = float(rng.integers(-2, 3))
            letters[name] = (names[l], names[l + 1])
            letters[f"{name}{DAGGER}"] = (names[l + 1], names[l])
    words = _words(letters, max_length)

    def additive(w, values, boundary):
        return sum(values[x] for x in w) - sum(boundary[letters[x][1]] for x in w[:-1])

    cells = {}
    for w in words:
        cells['.'.join(w)] = TwoCell(
            label='.'.join(w),
            source=letters[w[0]][0],
            target=letters[w[-1]][1],
            degree=degree,
            invariants={'chi': additive(w, chi, chi_boundary), 'delta': additive(w, delta, delta_boundary)},
        )
    vertical = {
        f"{'.'.join(u)}|{'.'.join(v)}": '.'.join(u + v)
        for u, v in product(words, words)
        if len(u) + len(v) <= max_length and letters[u[-1]][1] == letters[v[0]][0]
    }
    daggers = {'.'.join(w): '.'.join(_toggle(x, DAGGER) for x in reversed(w)) for w in words}
    table = CellTable(cells=cells, vertical=vertical, daggers=daggers)
    boundary = BoundaryInvariantTable(values={'chi': chi_boundary, 'delta': delta_boundary})
    return table, boundary


def horizontal_cells(rng, graphs: int = 3, copies: int = 2, max_length: int = 4) -> CellTable:
    """Cells between graphs G0..Gk, closed under fibered products up to max_length."""
    names = [f"G{l}" for l in range(graphs)]
    letters, degree = {}, {}
    for l in range(graphs - 1):
        for r in range(copies):
            name = f"h{l}{r}"
            degree[name] = degree[f"{name}{DAGGER}"] = int(rng.integers(1, 4))
            letters[name] = (names[l], names[l + 1])
            letters[f"{name}{DAGGER}"] = (names[l + 1], names[l])
    words = _words(letters, max_length)
    cells = {}
    for w in words:
        label = '.'.join(w)
        cells[label] = TwoCell(
            label=label,
            source=f"S[{label}]",
            target=f"T[{label}]",
            degree=math.prod(degree[x] for x in w),
            source_graph=letters[w[0]][0],
            target_graph=letters[w[-1]][1],
        )
    horizontal = {
        f"{'.'.join(u)}|{'.'.join(v)}": '.'.join(u + v)
        for u, v in product(words, words)
        if len(u) + len(v) <= max_length and letters[u[-1]][1] == letters[v[0]][0]
    }
    daggers = {'.'.join(w): '.'.join(_toggle(x, DAGGER) for x in reversed(w)) for w in words}
    return CellTable(cells=cells, horizontal=horizontal, daggers=daggers)


@pytest.fixture
def two_graph_table():
    """a: O -> P of degrees (2, 3), b: P -> P of degrees (5, 1), c: O -> O symmetric-degree."""
    return free_table({'a': ('O', 'P', 2, 3), 'b': ('P', 'P', 5, 1), 'c': ('O', 'O', 2, 2)}, max_length=4)
