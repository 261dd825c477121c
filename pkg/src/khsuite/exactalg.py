"""Exact sparse linear algebra over Z, Q and prime fields.

Everything here is exact: integers are Python ints (arbitrary precision),
rationals are fractions.Fraction, and F_p elements are ints reduced mod p.
The module provides the three operations the homology machinery needs:

* Smith normal form over Z (invariant factors, divisibility chain),
* exact rank over any supported domain,
* homology of a two-step complex ``ker(d_out) / im(d_in)``.

Matrices are sparse (dict-of-rows) since cube-of-resolutions differentials
are overwhelmingly zero.  Pivoting prefers unit entries and low Markowitz
fill; the rare residual without unit pivots falls back to a dense
gcd-reduction Smith normal form on whatever small block remains.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "SparseExactMatrix",
    "GroupSummand",
    "smith_normal_form",
    "rank",
    "homology_at",
]


def _char(domain: str) -> int:
    """Characteristic of the domain: 0 for Z and Q, p for F_p."""
    if domain in ("Z", "Q"):
        return 0
    if domain.startswith("F"):
        try:
            p = int(domain[1:])
        except ValueError:
            raise ValueError(f"unknown domain {domain!r}") from None
        if p < 2 or any(p % d == 0 for d in range(2, min(p, 200)) if d * d <= p):
            raise ValueError(f"domain {domain!r} is not a prime field")
        return p
    raise ValueError(f"unknown domain {domain!r}")


class SparseExactMatrix:
    """An immutable exact sparse matrix over Z, Q or F_p.

    Entries are stored row-major as ``{row: {col: value}}`` with no explicit
    zeros; construction normalizes values into the domain (ints for Z,
    Fraction for Q, canonical residues for F_p) and drops anything that
    normalizes to zero.
    """

    __slots__ = ("rows", "cols", "domain", "_rows")

    def __init__(self, rows, cols, entries=None, domain="Z"):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        p = _char(domain)
        self.rows = rows
        self.cols = cols
        self.domain = domain
        data: dict[int, dict[int, object]] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for key, value in items:
                r, c = key
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ValueError(f"entry ({r},{c}) outside {rows}x{cols} matrix")
                if domain == "Q":
                    value = Fraction(value)
                elif p:
                    value = int(value) % p
                else:
                    value = int(value)
                if value:
                    data.setdefault(r, {})[c] = value
                elif r in data:
                    data[r].pop(c, None)
        self._rows = {r: row for r, row in data.items() if row}

    @classmethod
    def zero(cls, rows: int, cols: int, domain: str = "Z") -> "SparseExactMatrix":
        return cls(rows, cols, None, domain)

    @classmethod
    def from_dense(cls, dense, domain: str = "Z") -> "SparseExactMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for i, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(rows, cols, entries, domain)

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def entry(self, r: int, c: int):
        zero = Fraction(0) if self.domain == "Q" else 0
        return self._rows.get(r, {}).get(c, zero)

    def items(self):
        for r, row in self._rows.items():
            for c, v in row.items():
                yield r, c, v

    def to_dense(self):
        zero = Fraction(0) if self.domain == "Q" else 0
        out = [[zero] * self.cols for _ in range(self.rows)]
        for r, c, v in self.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseExactMatrix":
        return SparseExactMatrix(
            self.cols, self.rows, {(c, r): v for r, c, v in self.items()}, self.domain
        )

    def compose(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        """Matrix product self @ other (apply ``other`` first)."""
        if self.domain != other.domain:
            raise ValueError("domain mismatch in composition")
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: ({self.rows}x{self.cols}) @ ({other.rows}x{other.cols})"
            )
        by_col_left: dict[int, list[tuple[int, object]]] = {}
        for r, c, v in self.items():
            by_col_left.setdefault(c, []).append((r, v))
        acc: dict[tuple[int, int], object] = {}
        for k, c, v in other.items():
            for r, w in by_col_left.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, 0) + w * v
        return SparseExactMatrix(self.rows, other.cols, acc, self.domain)

    def is_zero(self) -> bool:
        return not self._rows

    def __eq__(self, other):
        if not isinstance(other, SparseExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.domain == other.domain
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.domain, self.nnz))

    def __repr__(self):
        return f"SparseExactMatrix({self.rows}x{self.cols}, {self.domain}, nnz={self.nnz})"


@dataclass(frozen=True)
class GroupSummand:
    """A finitely generated abelian group Z^free + sum of Z/t cyclic pieces.

    ``torsion`` is a divisibility chain (each entry divides the next) with
    every entry > 1.  Over a field ``torsion`` is always empty and
    ``free_rank`` is the dimension.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def _dense_snf_invariants(dense: list[list[int]]) -> list[int]:
    """Textbook Smith normal form of a small dense integer matrix.

    Destructive on ``dense``.  Returns the positive diagonal values after
    full diagonalization; divisibility is NOT yet enforced (see caller).
    """
    a = dense
    nr = len(a)
    nc = len(a[0]) if nr else 0
    invs: list[int] = []
    top = 0
    while top < nr and top < nc:
        piv = None
        best = None
        for i in range(top, nr):
            row = a[i]
            for j in range(top, nc):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != top:
            a[top], a[i0] = a[i0], a[top]
        if j0 != top:
            for row in a:
                row[top], row[j0] = row[j0], row[top]
        while True:
            p = a[top][top]
            redo = False
            for i in range(top + 1, nr):
                v = a[i][top]
                if v:
                    q = v // p
                    if q:
                        arow, prow = a[i], a[top]
                        for j in range(top, nc):
                            arow[j] -= q * prow[j]
                    if a[i][top]:
                        # remainder is smaller than |p|: promote it to pivot
                        a[top], a[i] = a[i], a[top]
                        redo = True
                        break
            if redo:
                continue
            for j in range(top + 1, nc):
                v = a[top][j]
                if v:
                    q = v // p
                    if q:
                        for i in range(top, nr):
                            a[i][j] -= q * a[i][top]
                    if a[top][j]:
                        for i in range(top, nr):
                            a[i][top], a[i][j] = a[i][j], a[i][top]
                        redo = True
                        break
            if not redo:
                break
        invs.append(abs(a[top][top]))
        top += 1
    return invs


def _divisibility_fix(invs: list[int]) -> tuple[int, ...]:
    """Turn a multiset of nonzero diagonal values into a divisibility chain.

    diag(x, y) is unimodularly equivalent to diag(gcd(x,y), lcm(x,y)); bubble
    until stable.
    """
    vals = sorted(invs)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals) - 1):
            x, y = vals[i], vals[i + 1]
            if y % x:
                g = gcd(x, y)
                vals[i], vals[i + 1] = g, x * y // g
                changed = True
        if changed:
            vals.sort()
    return tuple(vals)


def _unit_elimination(rows: dict[int, dict[int, int]]) -> int:
    """Eliminate +-1 pivots in place; returns the number eliminated.

    Pivots are chosen among unit entries with lazily tracked Markowitz-style
    fill scores.  After return, ``rows`` holds the residual submatrix with no
    unit entries.
    """
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    heap: list[tuple[int, int, int]] = []
    for r, row in rows.items():
        for c, v in row.items():
            if v == 1 or v == -1:
                score = (len(row) - 1) * (len(cols[c]) - 1)
                heap.append((score, r, c))
    heapq.heapify(heap)
    units = 0
    while heap:
        _, r0, c0 = heapq.heappop(heap)
        row0 = rows.get(r0)
        if row0 is None:
            continue
        v0 = row0.get(c0)
        if v0 is None or v0 not in (1, -1):
            continue
        units += 1
        del rows[r0]
        for c in row0:
            cols[c].discard(r0)
        for r in list(cols.get(c0, ())):
            row = rows[r]
            factor = row[c0] * v0  # a / (+-1) == a * (+-1)
            for c, pv in row0.items():
                new = row.get(c, 0) - factor * pv
                if new:
                    row[c] = new
                    cols.setdefault(c, set()).add(r)
                    if new in (1, -1):
                        score = (len(row) - 1) * (len(cols[c]) - 1)
                        heapq.heappush(heap, (score, r, c))
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            if not row:
                del rows[r]
        # the pivot row's remaining entries are cleared by column operations
        # that touch no other row, so they simply vanish with the row.
    return units


def smith_normal_form(m: SparseExactMatrix) -> tuple[int, ...]:
    """Invariant factors of an integer matrix as a divisibility chain.

    The returned tuple has length rank(m); entries are positive and each
    divides the next.  Only the "Z" domain is accepted.

    >>> smith_normal_form(SparseExactMatrix.from_dense([[2, 0], [0, 3]]))
    (1, 6)
    """
    if m.domain != "Z":
        raise ValueError(f"Smith normal form requires integer entries, got domain {m.domain!r}")
    work = {r: dict(row) for r, row in m._rows.items()}
    units = _unit_elimination(work)
    invs = [1] * units
    if work:
        row_ids = sorted(work)
        col_ids = sorted({c for row in work.values() for c in row})
        col_pos = {c: j for j, c in enumerate(col_ids)}
        dense = [[0] * len(col_ids) for _ in row_ids]
        for i, r in enumerate(row_ids):
            for c, v in work[r].items():
                dense[i][col_pos[c]] = v
        invs.extend(_dense_snf_invariants(dense))
    return _divisibility_fix(invs)


def _rank_f2(m: SparseExactMatrix) -> int:
    rows = [set(row) for row in m._rows.values()]
    rows.sort(key=len)
    pivots: dict[int, set[int]] = {}
    rk = 0
    for row in rows:
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = row
                rk += 1
                break
            row ^= piv
    return rk


def _rank_mod_p(m: SparseExactMatrix, p: int) -> int:
    rows = [dict(row) for row in m._rows.values()]
    rows.sort(key=len)
    pivots: dict[int, dict[int, int]] = {}
    rk = 0
    for row in rows:
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], p - 2, p)
                row = {cc: (vv * inv) % p for cc, vv in row.items() if (vv * inv) % p}
                row[c] = 1
                pivots[c] = row
                rk += 1
                break
            factor = row[c]
            new = {}
            for cc, vv in row.items():
                w = (vv - factor * piv.get(cc, 0)) % p
                if w:
                    new[cc] = w
            for cc, vv in piv.items():
                if cc not in row:
                    w = (-factor * vv) % p
                    if w:
                        new[cc] = w
            row = new
    return rk


def rank(m: SparseExactMatrix) -> int:
    """Exact rank over the matrix's own domain (for Z: rank over Q)."""
    if m.is_zero():
        return 0
    if m.domain == "F2":
        return _rank_f2(m)
    p = _char(m.domain)
    if p:
        return _rank_mod_p(m, p)
    if m.domain == "Q":
        # clearing denominators row by row leaves the rank unchanged
        entries = {}
        for r, row in m._rows.items():
            lcm = 1
            for v in row.values():
                d = v.denominator
                lcm = lcm // gcd(lcm, d) * d
            for c, v in row.items():
                entries[(r, c)] = int(v * lcm)
        m = SparseExactMatrix(m.rows, m.cols, entries, "Z")
    work = {r: dict(row) for r, row in m._rows.items()}
    units = _unit_elimination(work)
    if not work:
        return units
    row_ids = sorted(work)
    col_ids = sorted({c for row in work.values() for c in row})
    col_pos = {c: j for j, c in enumerate(col_ids)}
    dense = [[0] * len(col_ids) for _ in row_ids]
    for i, r in enumerate(row_ids):
        for c, v in work[r].items():
            dense[i][col_pos[c]] = v
    return units + len(_dense_snf_invariants(dense))


def homology_at(d_in: SparseExactMatrix, d_out: SparseExactMatrix) -> GroupSummand:
    """Homology ker(d_out)/im(d_in) at the middle of C_in -> C_mid -> C_out.

    ``d_in`` maps C_in into C_mid (shape dim(C_mid) x dim(C_in)) and
    ``d_out`` maps C_mid into C_out.  Requires d_out @ d_in == 0.  Over Z the
    torsion of the quotient equals the torsion of Z^mid / im(d_in) because
    every torsion class of that cokernel already lies in ker(d_out).
    """
    if d_in.domain != d_out.domain:
        raise ValueError("domain mismatch between differentials")
    if d_out.cols != d_in.rows:
        raise ValueError(
            f"boundary shapes incompatible: d_in lands in dim {d_in.rows}, "
            f"d_out leaves from dim {d_out.cols}"
        )
    if not d_out.compose(d_in).is_zero():
        raise ValueError("d_out @ d_in != 0: not a chain complex")
    middle = d_in.rows
    if d_in.domain == "Z":
        chain = smith_normal_form(d_in)
        torsion = tuple(t for t in chain if t > 1)
        free = middle - len(chain) - rank(d_out)
        return GroupSummand(free, torsion)
    free = middle - rank(d_in) - rank(d_out)
    return GroupSummand(free)
