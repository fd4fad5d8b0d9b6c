"""
Sparse Exact Linear Algebra Agent
Row echelon forms over Q or the exact field with sparse dictionary rows,
modular rank prediction and small fraction-free ranks over any exact field
"""

import logging
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

DEFAULT_PRIME = 2147483629

SparseRow = Dict[Hashable, Fraction]


def _coerce(value):
    return Fraction(value) if isinstance(value, int) else value


def _axpy(target: Dict, factor, source: Dict) -> None:
    """target -= factor * source, dropping zeros"""
    for key, value in source.items():
        new = target.get(key, 0) - factor * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)


class IncrementalEchelon:
    """
    Reduced row echelon form built one vector at a time

    Each accepted vector is tagged; combinations are tracked so that a
    dependent vector comes back as an explicit relation among tags.
    Pivot columns are chosen with the fewest occurrences among stored rows
    (ties broken by the column key).
    """

    def __init__(self):
        self.rows: Dict[Hashable, SparseRow] = {}
        self.combos: Dict[Hashable, Dict[Hashable, Fraction]] = {}
        self.col_rows: Dict[Hashable, Set[Hashable]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _index(self, pivot: Hashable, row: SparseRow) -> None:
        for col in row:
            self.col_rows.setdefault(col, set()).add(pivot)

    def _unindex(self, pivot: Hashable, row: SparseRow) -> None:
        for col in row:
            bucket = self.col_rows.get(col)
            if bucket is not None:
                bucket.discard(pivot)
                if not bucket:
                    del self.col_rows[col]

    def reduce(self, vector: Dict) -> Tuple[SparseRow, Dict[Hashable, Fraction]]:
        """Reduce a vector against the stored rows; returns (remainder, combination)"""
        v = {k: _coerce(a) for k, a in vector.items() if a}
        combo: Dict[Hashable, Fraction] = {}
        for col in [c for c in v if c in self.rows]:
            f = v.get(col)
            if not f:
                continue
            _axpy(v, f, self.rows[col])
            _axpy(combo, f, self.combos[col])
        return v, combo

    def add(self, vector: Dict, tag: Hashable) -> Optional[Dict[Hashable, Fraction]]:
        """
        Insert a vector

        Args:
            vector: Sparse vector column -> number
            tag: Name of the vector

        Returns:
            None if the vector was independent, otherwise the relation
            {tag: 1, other_tag: coeff, ...} whose combination vanishes
        """
        v, combo = self.reduce(vector)
        combo[tag] = combo.get(tag, 0) + 1

        if not v:
            return combo

        pivot = min(v, key=lambda c: (len(self.col_rows.get(c, ())), c))
        scale = v[pivot]
        v = {k: a / scale for k, a in v.items()}
        combo = {k: a / scale for k, a in combo.items()}

        for other in list(self.col_rows.get(pivot, ())):
            row = self.rows[other]
            f = row[pivot]
            self._unindex(other, row)
            _axpy(row, f, v)
            self._index(other, row)
            _axpy(self.combos[other], f, combo)

        self.rows[pivot] = v
        self.combos[pivot] = combo
        self._index(pivot, v)
        return None


class RelationQuotient:
    """
    Quotient of the span of numbered candidates by relation vectors

    Relations are kept in reduced echelon form with the largest candidate
    index of each relation as its pivot. Non-pivot candidates form the
    basis of the quotient; a pivot candidate reduces to a combination of
    smaller basis candidates.
    """

    def __init__(self, num_candidates: int):
        self.num_candidates = num_candidates
        self.rows: Dict[int, Dict[int, Fraction]] = {}
        self.col_rows: Dict[int, Set[int]] = {}

    def add(self, relation: Dict[int, object]) -> bool:
        """Insert a relation; returns True if it enlarged the relation space"""
        v = {k: _coerce(a) for k, a in relation.items() if a}
        for col in [c for c in v if c in self.rows]:
            f = v.get(col)
            if f:
                _axpy(v, f, self.rows[col])
        if not v:
            return False

        pivot = max(v)
        scale = v[pivot]
        v = {k: a / scale for k, a in v.items()}

        for other in list(self.col_rows.get(pivot, ())):
            row = self.rows[other]
            f = row[pivot]
            for col in row:
                self.col_rows[col].discard(other)
            _axpy(row, f, v)
            for col in row:
                self.col_rows.setdefault(col, set()).add(other)

        self.rows[pivot] = v
        for col in v:
            self.col_rows.setdefault(col, set()).add(pivot)
        return True

    def basis(self) -> List[int]:
        return [c for c in range(self.num_candidates) if c not in self.rows]

    def reductions(self) -> Dict[int, Dict[int, Fraction]]:
        """pivot candidate -> its expression in basis candidates"""
        return {
            p: {c: -a for c, a in row.items() if c != p}
            for p, row in self.rows.items()
        }


def modular_rank(vectors: Iterable[Dict[Hashable, int]], p: int = DEFAULT_PRIME) -> int:
    """
    Rank over F_p of integer sparse vectors

    Used as a fast prediction; the exact rank over Q is at least this value.
    """
    rows: Dict[Hashable, Dict[Hashable, int]] = {}
    for vector in vectors:
        v = {k: a % p for k, a in vector.items() if a % p}
        for col in [c for c in v if c in rows]:
            f = v.get(col)
            if not f:
                continue
            for k, a in rows[col].items():
                new = (v.get(k, 0) - f * a) % p
                if new:
                    v[k] = new
                else:
                    v.pop(k, None)
        if not v:
            continue
        pivot = min(v, key=repr)
        inv = pow(v[pivot], -1, p)
        v = {k: (a * inv) % p for k, a in v.items()}
        for other, row in rows.items():
            f = row.get(pivot)
            if f:
                for k, a in v.items():
                    new = (row.get(k, 0) - f * a) % p
                    if new:
                        row[k] = new
                    else:
                        row.pop(k, None)
        rows[pivot] = v
    return len(rows)


def exact_rank(rows: Sequence[Sequence]) -> int:
    """
    Rank of a small dense matrix by fraction-free elimination

    Entries may be int, Fraction or FieldElement; only +, -, * and the
    zero test are used.
    """
    matrix = [list(r) for r in rows]
    if not matrix:
        return 0
    ncols = len(matrix[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(matrix)) if matrix[i][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        p = matrix[rank][col]
        for i in range(rank + 1, len(matrix)):
            q = matrix[i][col]
            if q != 0:
                matrix[i] = [p * a - q * b for a, b in zip(matrix[i], matrix[rank])]
        rank += 1
        if rank == len(matrix):
            break
    return rank
