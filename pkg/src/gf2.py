"""Small GF(2) linear algebra helpers on int bitsets (bit j = column j)."""

from typing import List, Optional, Sequence, Tuple


def row_reduce(rows: Sequence[int]) -> Tuple[List[int], List[int], List[int]]:
    """
    Gaussian elimination over GF(2).

    Returns (reduced rows, pivot bits, combination masks). ``combos[r]`` has
    bit i set when input row i contributes to reduced row r, so the solver can
    report which generators a vector is made of.
    """
    work = list(rows)
    combos = [1 << i for i in range(len(work))]
    pivots: List[int] = []
    reduced: List[int] = []
    used: List[int] = []
    while work:
        row = work.pop(0)
        combo = combos.pop(0)
        for r, pivot in enumerate(pivots):
            if (row >> pivot) & 1:
                row ^= reduced[r]
                combo ^= used[r]
        if row == 0:
            continue
        pivot = (row & -row).bit_length() - 1
        for r in range(len(reduced)):
            if (reduced[r] >> pivot) & 1:
                reduced[r] ^= row
                used[r] ^= combo
        reduced.append(row)
        pivots.append(pivot)
        used.append(combo)
    return reduced, pivots, used


def rank(rows: Sequence[int]) -> int:
    """Rank over GF(2)."""
    return len(row_reduce(rows)[0])


def solve(rows: Sequence[int], vec: int) -> Optional[int]:
    """
    Express ``vec`` as a sum of ``rows``.

    Returns a mask with bit i set for every row i used, or None when ``vec``
    is outside the row space.
    """
    reduced, pivots, used = row_reduce(rows)
    combo = 0
    for r, pivot in enumerate(pivots):
        if (vec >> pivot) & 1:
            vec ^= reduced[r]
            combo ^= used[r]
    if vec:
        return None
    return combo


def in_rowspan(vec: int, rows: Sequence[int]) -> bool:
    """Check whether vec is in the row space of rows."""
    return solve(rows, vec) is not None


__all__ = ["row_reduce", "rank", "solve", "in_rowspan"]
