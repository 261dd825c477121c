"""Cube-of-resolutions chain complexes and their homology.

Gradings: a state over a diagram with n crossings and resolution weight r
(number of 1-smoothings) sits in homological degree i = r - n_minus and
quantum degree j = i + n_plus - n_minus + (#circles labeled 1 - #labeled x).
The differential raises i by one and preserves j, so homology is computed
independently per (i, j) block.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from khsuite.exactalg import GroupSummand, SparseExactMatrix, rank, smith_normal_form
from khsuite.linkdiag import LinkDiagram

CROSSING_LIMIT = 20


class ResourceGuardError(Exception):
    """The diagram exceeds the crossing budget for cube construction."""


class LaurentPoly:
    """Integer Laurent polynomial in one variable q."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def q_power(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    def items(self) -> list[tuple[int, int]]:
        return sorted(self._coeffs.items())

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not defined here")
        result = LaurentPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly({e: c * v for e, v in self._coeffs.items()})

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.items()}

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in self.items():
            if e == 0:
                body = str(abs(c))
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if abs(c) == 1 else f"{abs(c)}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({self._coeffs!r})"


@dataclass(frozen=True)
class Resolution:
    """One vertex of the cube: a smoothing choice per crossing and its circles.

    Circles are tuples of the arcs they traverse, sorted and deduplicated;
    crossingless free circles appear as trailing empty tuples.
    """

    choices: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]

    @property
    def weight(self) -> int:
        return sum(self.choices)


@dataclass(frozen=True)
class EnhancedState:
    resolution: Resolution
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.resolution.circles):
            raise ValueError("one label per circle required")
        if any(label not in ("1", "x") for label in self.labels):
            raise ValueError("labels must be '1' or 'x'")


class BigradedGroup:
    """Finitely supported map (i, j) -> GroupSummand with zero summands dropped."""

    def __init__(self, cells: Mapping[tuple[int, int], GroupSummand] | None = None):
        self._cells = {
            key: g for key, g in (cells or {}).items() if not g.is_zero()
        }

    def cells(self) -> list[tuple[tuple[int, int], GroupSummand]]:
        return sorted(self._cells.items())

    def support(self) -> list[tuple[int, int]]:
        return sorted(self._cells)

    def __getitem__(self, key: tuple[int, int]) -> GroupSummand:
        return self._cells.get(key, GroupSummand(0))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BigradedGroup) and self._cells == other._cells

    def __hash__(self) -> int:
        return hash(frozenset(self._cells.items()))

    def __bool__(self) -> bool:
        return bool(self._cells)

    def total_free_rank(self) -> int:
        return sum(g.free_rank for g in self._cells.values())

    def to_json(self, ring: str) -> dict:
        return {
            "ring": ring,
            "groups": [
                {"i": i, "j": j, "free": g.free_rank, "torsion": list(g.torsion)}
                for (i, j), g in self.cells()
            ],
        }

    def __repr__(self) -> str:
        body = ", ".join(f"({i},{j}): {g}" for (i, j), g in self.cells())
        return f"BigradedGroup({{{body}}})"


class GradedRanks:
    """Finitely supported map from a single integer grading to a rank."""

    def __init__(self, ranks: Mapping[int, int] | None = None):
        bad = {k: v for k, v in (ranks or {}).items() if v < 0}
        if bad:
            raise ValueError(f"negative ranks: {bad}")
        self._ranks = {k: v for k, v in (ranks or {}).items() if v}

    def items(self) -> list[tuple[int, int]]:
        return sorted(self._ranks.items())

    def support(self) -> list[int]:
        return sorted(self._ranks)

    def __getitem__(self, key: int) -> int:
        return self._ranks.get(key, 0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GradedRanks) and self._ranks == other._ranks

    def __hash__(self) -> int:
        return hash(frozenset(self._ranks.items()))

    def total(self) -> int:
        return sum(self._ranks.values())

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.items()}

    def __repr__(self) -> str:
        return f"GradedRanks({self._ranks!r})"


def _resolution(d: LinkDiagram, choices: tuple[int, ...]) -> Resolution:
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        root = a
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for choice, crossing in zip(choices, d.crossings):
        a, b, c, dd = crossing.arcs
        pairs = ((a, b), (c, dd)) if choice == 0 else ((a, dd), (b, c))
        for x, y in pairs:
            parent[find(x)] = find(y)

    classes: dict[int, list[int]] = {}
    for arc in parent:
        classes.setdefault(find(arc), []).append(arc)
    circles = sorted(tuple(sorted(members)) for members in classes.values())
    circles.extend(() for _ in range(d.free_circles))
    return Resolution(choices, tuple(circles))


@dataclass(frozen=True)
class _Edge:
    """Cube edge: flip crossing `crossing` of the source mask from 0 to 1."""

    crossing: int
    sign: int
    kind: str  # "merge" or "split"
    sources: tuple[int, ...]  # changed circle indices in the source resolution
    targets: tuple[int, ...]  # changed circle indices in the target resolution
    carry: tuple[tuple[int, int], ...]  # (target index, source index) unchanged pairs


def _edges_from(d: LinkDiagram, resolutions: Sequence[Resolution]) -> dict[int, list[tuple[int, _Edge]]]:
    """For each source mask, the list of (target mask, edge description)."""
    n = len(d.crossings)
    index_of = [
        {circle: k for k, circle in enumerate(res.circles) if circle}
        for res in resolutions
    ]
    free_positions = [
        [k for k, circle in enumerate(res.circles) if not circle]
        for res in resolutions
    ]
    out: dict[int, list[tuple[int, _Edge]]] = {m: [] for m in range(2**n)}
    for mask in range(2**n):
        for ci in range(n):
            if mask >> ci & 1:
                continue
            target = mask | 1 << ci
            sign = -1 if bin(mask & (1 << ci) - 1).count("1") % 2 else 1
            src_res, tgt_res = resolutions[mask], resolutions[target]
            src_idx, tgt_idx = index_of[mask], index_of[target]
            sources = tuple(
                k for circle, k in src_idx.items() if circle not in tgt_idx
            )
            targets = tuple(
                k for circle, k in tgt_idx.items() if circle not in src_idx
            )
            carry = [
                (tgt_idx[circle], k)
                for circle, k in src_idx.items()
                if circle in tgt_idx
            ]
            carry.extend(zip(free_positions[target], free_positions[mask]))
            if (len(sources), len(targets)) == (2, 1):
                kind = "merge"
            elif (len(sources), len(targets)) == (1, 2):
                kind = "split"
            else:
                raise ValueError(
                    "resolution change is neither a merge nor a split; "
                    "the PD code is not planar"
                )
            out[mask].append(
                (target, _Edge(ci, sign, kind, sources, targets, tuple(sorted(carry))))
            )
    return out


def _apply_edge(
    edge: _Edge,
    labels: tuple[str, ...],
    target_size: int,
    lee: bool,
) -> list[tuple[tuple[str, ...], int]]:
    """Images of a labeled state under one cobordism, as (labels, coefficient)."""
    base = [""] * target_size
    for tgt, src in edge.carry:
        base[tgt] = labels[src]
    results = []
    if edge.kind == "merge":
        l1, l2 = labels[edge.sources[0]], labels[edge.sources[1]]
        tgt = edge.targets[0]
        xs = (l1 == "x") + (l2 == "x")
        if xs == 0:
            merged = ["1"]
        elif xs == 1:
            merged = ["x"]
        else:
            merged = ["1"] if lee else []
        for label in merged:
            image = list(base)
            image[tgt] = label
            results.append((tuple(image), edge.sign))
    else:
        src_label = labels[edge.sources[0]]
        t1, t2 = edge.targets
        if src_label == "1":
            pieces = [("1", "x"), ("x", "1")]
        else:
            pieces = [("x", "x")] + ([("1", "1")] if lee else [])
        for p1, p2 in pieces:
            image = list(base)
            image[t1], image[t2] = p1, p2
            results.append((tuple(image), edge.sign))
    return results


class KhovanovComplex:
    """Enhanced-state cochain complex of a diagram, graded by (i, j).

    states[i] lists the basis of degree i in a fixed canonical order,
    differentials[i] is the matrix of d: C^i -> C^{i+1} in those bases.
    """

    def __init__(self, d: LinkDiagram, domain: str = "Z", lee: bool = False):
        n = len(d.crossings)
        if n > CROSSING_LIMIT:
            raise ResourceGuardError(
                f"{n} crossings exceeds the {CROSSING_LIMIT}-crossing budget"
            )
        self.diagram = d
        self.domain = domain
        self.lee = lee

        resolutions = [
            _resolution(d, tuple(mask >> c & 1 for c in range(n)))
            for mask in range(2**n)
        ]
        edges = _edges_from(d, resolutions)

        shift = d.n_plus - 2 * d.n_minus
        states: dict[int, list[tuple[int, tuple[str, ...]]]] = {}
        j_of: dict[int, list[int]] = {}
        for mask in range(2**n):
            res = resolutions[mask]
            i = res.weight - d.n_minus
            for labels in itertools.product("1x", repeat=len(res.circles)):
                states.setdefault(i, []).append((mask, labels))
                balance = sum(1 if l == "1" else -1 for l in labels)
                j_of.setdefault(i, []).append(res.weight + shift + balance)

        self.states = {
            i: tuple(EnhancedState(resolutions[m], ls) for m, ls in pairs)
            for i, pairs in states.items()
        }
        self.j_values = {i: tuple(js) for i, js in j_of.items()}
        index = {
            i: {key: pos for pos, key in enumerate(pairs)}
            for i, pairs in states.items()
        }

        self.differentials: dict[int, SparseExactMatrix] = {}
        for i in sorted(states):
            if i + 1 not in states:
                continue
            entries: dict[tuple[int, int], object] = {}
            target_index = index[i + 1]
            for col, (mask, labels) in enumerate(states[i]):
                for target_mask, edge in edges[mask]:
                    size = len(resolutions[target_mask].circles)
                    for image, coeff in _apply_edge(edge, labels, size, lee):
                        row = target_index[(target_mask, image)]
                        key = (row, col)
                        entries[key] = entries.get(key, 0) + coeff
            self.differentials[i] = SparseExactMatrix(
                len(states[i + 1]), len(states[i]), entries, domain
            )

        for i, mat in self.differentials.items():
            nxt = self.differentials.get(i + 1)
            if nxt is not None and not nxt.compose(mat).is_zero():
                raise AssertionError(f"d@d != 0 between degrees {i} and {i + 2}")

    def degrees(self) -> list[int]:
        return sorted(self.states)

    def dimension(self, i: int) -> int:
        return len(self.states.get(i, ()))

    def total_dimension(self) -> int:
        return sum(len(v) for v in self.states.values())

    def block(self, i: int, j: int) -> SparseExactMatrix:
        """The j-graded block of d: C^{i,j} -> C^{i+1,j}."""
        if self.lee:
            raise ValueError("the deformed differential does not preserve j")
        cols = [p for p, jj in enumerate(self.j_values.get(i, ())) if jj == j]
        rows = [p for p, jj in enumerate(self.j_values.get(i + 1, ())) if jj == j]
        mat = self.differentials.get(i)
        if mat is None:
            return SparseExactMatrix.zero(len(rows), len(cols), self.domain)
        row_pos = {r: k for k, r in enumerate(rows)}
        col_pos = {c: k for k, c in enumerate(cols)}
        entries = {
            (row_pos[r], col_pos[c]): v
            for r, c, v in mat.items()
            if r in row_pos and c in col_pos
        }
        return SparseExactMatrix(len(rows), len(cols), entries, self.domain)

    def cell_dimensions(self) -> dict[tuple[int, int], int]:
        dims: dict[tuple[int, int], int] = {}
        for i, js in self.j_values.items():
            for j in js:
                dims[(i, j)] = dims.get((i, j), 0) + 1
        return dims

    def nonzero_blocks(self) -> dict[tuple[int, int], SparseExactMatrix]:
        """All j-graded differential blocks with entries, one pass per degree."""
        if self.lee:
            raise ValueError("the deformed differential does not preserve j")
        blocks: dict[tuple[int, int], SparseExactMatrix] = {}
        for i, mat in self.differentials.items():
            js_lo, js_hi = self.j_values[i], self.j_values[i + 1]
            col_pos: list[int] = []
            row_pos: list[int] = []
            col_count: dict[int, int] = {}
            row_count: dict[int, int] = {}
            for j in js_lo:
                col_pos.append(col_count.get(j, 0))
                col_count[j] = col_pos[-1] + 1
            for j in js_hi:
                row_pos.append(row_count.get(j, 0))
                row_count[j] = row_pos[-1] + 1
            per_j: dict[int, dict[tuple[int, int], object]] = {}
            for r, c, v in mat.items():
                per_j.setdefault(js_lo[c], {})[(row_pos[r], col_pos[c])] = v
            for j, entries in per_j.items():
                blocks[(i, j)] = SparseExactMatrix(
                    row_count.get(j, 0), col_count[j], entries, self.domain
                )
        return blocks


def build_complex(d: LinkDiagram, domain: str = "Z") -> KhovanovComplex:
    """The undeformed complex; d^2 = 0 is asserted during construction."""
    return KhovanovComplex(d, domain)


def _snf_task(item: tuple[tuple[int, int], SparseExactMatrix]):
    key, mat = item
    return key, smith_normal_form(mat)


def _rank_task(item: tuple[tuple[int, int], SparseExactMatrix]):
    key, mat = item
    return key, rank(mat)


def _assemble_homology(
    dims: Mapping[tuple[int, int], int],
    blocks: Mapping[tuple[int, int], SparseExactMatrix],
    domain: str,
    workers: int,
) -> BigradedGroup:
    """Homology per cell from the per-cell outgoing differential blocks.

    blocks[(i, j)] maps the (i, j) cell into (i+1, j); its Smith form (over
    the integers) or rank (over a field) is computed once and consumed by
    both neighbouring cells.
    """
    tasks = sorted(blocks.items(), key=lambda kv: -kv[1].nnz)
    worker: Callable = _snf_task if domain == "Z" else _rank_task
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(worker, tasks))
    else:
        results = dict(map(worker, tasks))

    cells: dict[tuple[int, int], GroupSummand] = {}
    for (i, j), dim in dims.items():
        incoming = results.get((i - 1, j))
        outgoing = results.get((i, j))
        if domain == "Z":
            rank_in = len(incoming) if incoming else 0
            rank_out = len(outgoing) if outgoing else 0
            torsion = tuple(v for v in (incoming or ()) if v > 1)
        else:
            rank_in = incoming or 0
            rank_out = outgoing or 0
            torsion = ()
        cells[(i, j)] = GroupSummand(dim - rank_in - rank_out, torsion)
    return BigradedGroup(cells)


def khovanov_homology(d: LinkDiagram, domain: str = "Z", workers: int = 1) -> BigradedGroup:
    """Bigraded homology of the cube complex over Z, Q, or a prime field."""
    complex_ = build_complex(d, domain)
    return _assemble_homology(
        complex_.cell_dimensions(), complex_.nonzero_blocks(), domain, workers
    )


def _basepoint_circle(res: Resolution, arc: int | None) -> int:
    if arc is None:
        for k, circle in enumerate(res.circles):
            if not circle:
                return k
        raise ValueError("invalid arc: diagram has no circles at all")
    for k, circle in enumerate(res.circles):
        if arc in circle:
            return k
    raise ValueError(f"invalid arc {arc}")


def reduced_khovanov(
    d: LinkDiagram,
    basepoint: int | None = None,
    domain: str = "Z",
    variant: str = "quotient",
    workers: int = 1,
) -> BigradedGroup:
    """Homology of the basepoint-reduced complex.

    The basepoint action relabels the marked circle 1 -> x, x -> 0; its
    image is spanned by the states marking the basepoint circle x.  The
    canonical variant is the quotient by that image (basis: basepoint
    circle labeled 1, differential followed by projection); "kernel"
    computes the subcomplex itself instead.
    """
    if variant not in ("quotient", "kernel"):
        raise ValueError(f"unknown variant {variant!r}")
    if basepoint is None:
        arcs = sorted(d.component_of)
        if arcs:
            basepoint = arcs[0]
        elif not d.free_circles:
            raise ValueError("invalid arc: the empty diagram has no basepoint")
    elif basepoint not in d.component_of:
        raise ValueError(f"invalid arc {basepoint}")

    keep_label = "1" if variant == "quotient" else "x"
    complex_ = build_complex(d, domain)

    kept: dict[int, list[int]] = {}
    dims: dict[tuple[int, int], int] = {}
    for i, states in complex_.states.items():
        positions = []
        for pos, state in enumerate(states):
            circle = _basepoint_circle(state.resolution, basepoint)
            if state.labels[circle] == keep_label:
                positions.append(pos)
                j = complex_.j_values[i][pos]
                dims[(i, j)] = dims.get((i, j), 0) + 1
        kept[i] = positions

    blocks: dict[tuple[int, int], SparseExactMatrix] = {}
    for i, mat in complex_.differentials.items():
        keep_cols = {c: complex_.j_values[i][c] for c in kept[i]}
        keep_rows = {r: complex_.j_values[i + 1][r] for r in kept.get(i + 1, ())}
        per_j: dict[int, dict[tuple[int, int], object]] = {}
        col_pos: dict[int, int] = {}
        row_pos: dict[int, int] = {}
        counters: dict[tuple[int, str], int] = {}
        for c, j in sorted(keep_cols.items()):
            col_pos[c] = counters[(j, "c")] = counters.get((j, "c"), -1) + 1
        for r, j in sorted(keep_rows.items()):
            row_pos[r] = counters[(j, "r")] = counters.get((j, "r"), -1) + 1
        for r, c, v in mat.items():
            if r in row_pos and c in col_pos:
                j = keep_cols[c]
                per_j.setdefault(j, {})[(row_pos[r], col_pos[c])] = v
        for j, entries in per_j.items():
            n_rows = sum(1 for jj in keep_rows.values() if jj == j)
            n_cols = sum(1 for jj in keep_cols.values() if jj == j)
            block = SparseExactMatrix(n_rows, n_cols, entries, domain)
            if block.nnz:
                blocks[(i, j)] = block
    return _assemble_homology(dims, blocks, domain, workers)


def lee_homology(d: LinkDiagram) -> GradedRanks:
    """Rational homology ranks of the deformed complex, by homological degree."""
    complex_ = KhovanovComplex(d, "Q", lee=True)
    ranks = {i: rank(mat) for i, mat in complex_.differentials.items()}
    out = {}
    for i in complex_.degrees():
        free = complex_.dimension(i) - ranks.get(i, 0) - ranks.get(i - 1, 0)
        out[i] = free
    return GradedRanks(out)


def graded_projection(
    g: BigradedGroup, mode: str, rank_rule: str = "free"
) -> GradedRanks:
    """Collapse a bigraded group to a single grading: i-j, j-2i, or i.

    rank_rule "free" counts free ranks; "mod2" counts dimensions after
    tensoring an integrally computed group with the field of two elements
    (free rank plus even torsion here and in the next homological degree).
    """
    if mode not in ("i-j", "j-2i", "i"):
        raise ValueError(f"unknown grading mode {mode!r}")
    if rank_rule not in ("free", "mod2"):
        raise ValueError(f"unknown rank rule {rank_rule!r}")

    def keyed(i: int, j: int) -> int:
        if mode == "i-j":
            return i - j
        if mode == "j-2i":
            return j - 2 * i
        return i

    out: dict[int, int] = {}

    def bump(i: int, j: int, amount: int) -> None:
        if amount:
            key = keyed(i, j)
            out[key] = out.get(key, 0) + amount

    for (i, j), summand in g.cells():
        bump(i, j, summand.free_rank)
        if rank_rule == "mod2":
            even = sum(1 for t in summand.torsion if t % 2 == 0)
            bump(i, j, even)
            bump(i - 1, j, even)
    return GradedRanks(out)


def kauffman_jones(d: LinkDiagram) -> LaurentPoly:
    """Graded Euler characteristic by direct state sum, no homology involved.

    Sum over smoothings v of (-q)^{weight} (q + 1/q)^{circles}, times the
    overall (-1)^{n_minus} q^{n_plus - 2 n_minus} normalization.
    """
    n = len(d.crossings)
    if n > CROSSING_LIMIT:
        raise ResourceGuardError(
            f"{n} crossings exceeds the {CROSSING_LIMIT}-crossing budget"
        )
    loop = LaurentPoly({1: 1, -1: 1})
    total = LaurentPoly.zero()
    for mask in range(2**n):
        parent: dict[int, int] = {}

        def find(a: int) -> int:
            root = a
            while parent.setdefault(root, root) != root:
                root = parent[root]
            while parent[a] != root:
                parent[a], a = root, parent[a]
            return root

        weight = 0
        for ci, crossing in enumerate(d.crossings):
            a, b, c, dd = crossing.arcs
            if mask >> ci & 1:
                weight += 1
                pairs = ((a, dd), (b, c))
            else:
                pairs = ((a, b), (c, dd))
            for x, y in pairs:
                parent[find(x)] = find(y)
        circles = len({find(a) for a in parent}) + d.free_circles
        total = total + loop**circles * LaurentPoly.q_power(weight, (-1) ** weight)
    sign = (-1) ** d.n_minus
    return total.scale(sign) * LaurentPoly.q_power(d.n_plus - 2 * d.n_minus)
