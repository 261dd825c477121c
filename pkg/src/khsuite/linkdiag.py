"""Link diagrams as PD codes: parsing, orientation, signs, components.

A diagram is a list of crossings, each a 4-tuple of arc labels read
counterclockwise from the incoming under-strand, plus a count of
crossingless free circles (PD cannot express those).  Orientations are
not part of the input; they are recovered by constraint propagation and
the crossing signs are derived from them.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence


class DiagramError(Exception):
    """Base class for diagram construction and validation failures."""


class PDSyntaxError(DiagramError):
    """The PD text is not a JSON list of 4-tuples of positive integers."""


class ArcMultiplicityError(DiagramError):
    """Some arc label does not appear exactly twice across the diagram."""


class OrientationError(DiagramError):
    """No consistent strand orientation exists for the given PD code."""


@dataclass(frozen=True)
class Crossing:
    """One crossing: arcs counterclockwise from the incoming under-strand.

    arcs[0] is the incoming under-arc and arcs[2] the outgoing one; the
    over-strand occupies arcs[1] and arcs[3].  sign is +1 exactly when
    the over-strand flows from arcs[3] to arcs[1].
    """

    arcs: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError(f"crossing sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True, eq=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    free_circles: int
    component_of: Mapping[int, int] = field(compare=True)
    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.n_plus + self.n_minus != len(self.crossings):
            raise ValueError("sign counts disagree with the crossing list")
        if self.free_circles < 0:
            raise ValueError("free_circles must be non-negative")

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    def arc_labels(self) -> tuple[int, ...]:
        return tuple(sorted(self.component_of))


@dataclass(frozen=True)
class BraidWord:
    """A braid word on `strand_count` strands; letter ±k means sigma_k^{±1}."""

    strand_count: int
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.strand_count < 1:
            raise ValueError("strand_count must be positive")
        for k in self.letters:
            if not isinstance(k, int) or k == 0 or abs(k) >= self.strand_count:
                raise ValueError(
                    f"braid letter {k!r} out of range for {self.strand_count} strands"
                )


_IN, _OUT = True, False


def _solve_orientation(tuples: Sequence[tuple[int, int, int, int]]) -> dict[tuple[int, int], bool]:
    """Assign an in/out role to every (crossing, position) arc occurrence.

    Under-strand slots are fixed (position 0 in, position 2 out).  The two
    occurrences of one arc take opposite roles, and the two over-strand
    slots of one crossing take opposite roles.  Cycles made only of
    over-strand slots are seeded at the smallest arc label, which leaves
    its first-listed crossing.
    """
    occurrences: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for ci, arcs in enumerate(tuples):
        for pos, a in enumerate(arcs):
            occurrences[a].append((ci, pos))
    bad = sorted(a for a, occ in occurrences.items() if len(occ) != 2)
    if bad:
        raise ArcMultiplicityError(
            f"arc multiplicity violated: labels {bad} do not appear exactly twice"
        )

    role: dict[tuple[int, int], bool] = {}
    queue: list[tuple[int, int]] = []

    def assign(occ: tuple[int, int], value: bool) -> None:
        prior = role.get(occ)
        if prior is None:
            role[occ] = value
            queue.append(occ)
        elif prior != value:
            ci, pos = occ
            raise OrientationError(
                f"inconsistent orientation at crossing {ci}, position {pos}"
            )

    for ci, arcs in enumerate(tuples):
        assign((ci, 0), _IN)
        assign((ci, 2), _OUT)

    def propagate() -> None:
        while queue:
            ci, pos = queue.pop()
            value = role[(ci, pos)]
            arc = tuples[ci][pos]
            for other in occurrences[arc]:
                if other != (ci, pos):
                    assign(other, not value)
            if pos in (1, 3):
                assign((ci, 4 - pos), not value)

    propagate()
    unresolved = sorted(
        a for a, occ in occurrences.items() if any(o not in role for o in occ)
    )
    while unresolved:
        seed = unresolved[0]
        assign(min(occurrences[seed]), _OUT)
        propagate()
        unresolved = [
            a for a in unresolved if any(o not in role for o in occurrences[a])
        ]
    return role


def _assemble(tuples: Sequence[tuple[int, int, int, int]], free_circles: int) -> LinkDiagram:
    role = _solve_orientation(tuples)
    crossings = []
    for ci, arcs in enumerate(tuples):
        sign = 1 if role[(ci, 3)] == _IN else -1
        crossings.append(Crossing(tuple(arcs), sign))

    parent: dict[int, int] = {}

    def find(a: int) -> int:
        root = a
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for arcs in tuples:
        for x, y in ((arcs[0], arcs[2]), (arcs[1], arcs[3])):
            parent[find(x)] = find(y)

    reps = sorted({find(a) for a in parent})
    index_of_rep = {rep: i for i, rep in enumerate(sorted(reps, key=lambda r: min(
        a for a in parent if find(a) == r)))}
    component_of = {a: index_of_rep[find(a)] for a in parent}

    n_plus = sum(1 for c in crossings if c.sign == 1)
    return LinkDiagram(
        crossings=tuple(crossings),
        free_circles=free_circles,
        component_of=component_of,
        n_plus=n_plus,
        n_minus=len(crossings) - n_plus,
    )


def parse_pd(text: str, free_circles: int | None = None) -> LinkDiagram:
    """Parse PD text: a JSON array of 4-tuples, or {"pd": [...], "free_circles": k}.

    An explicit `free_circles` argument overrides the wrapper field.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PDSyntaxError(f"PD text is not valid JSON: {exc}") from exc

    wrapper_circles = 0
    if isinstance(data, dict):
        extra = set(data) - {"pd", "free_circles"}
        if extra or "pd" not in data:
            raise PDSyntaxError(f"unexpected PD wrapper keys: {sorted(data)}")
        wrapper_circles = data.get("free_circles", 0)
        data = data["pd"]
    if not isinstance(data, list):
        raise PDSyntaxError("PD text must be a JSON array of crossings")
    if not isinstance(wrapper_circles, int) or wrapper_circles < 0:
        raise PDSyntaxError("free_circles must be a non-negative integer")

    tuples = []
    for entry in data:
        if (
            not isinstance(entry, list)
            or len(entry) != 4
            or not all(isinstance(a, int) and a > 0 for a in entry)
        ):
            raise PDSyntaxError(f"crossing {entry!r} is not a 4-tuple of positive integers")
        tuples.append(tuple(entry))

    circles = wrapper_circles if free_circles is None else free_circles
    if circles < 0:
        raise PDSyntaxError("free_circles must be a non-negative integer")
    return _assemble(tuples, circles)


def serialize(d: LinkDiagram) -> str:
    """Inverse of parse_pd up to diagram isomorphism."""
    pd = [list(c.arcs) for c in d.crossings]
    if d.free_circles:
        return json.dumps({"pd": pd, "free_circles": d.free_circles})
    return json.dumps(pd)


def from_braid_closure(word: BraidWord, include_axis: bool = False) -> LinkDiagram:
    """Diagram of the closure of `word`; optionally add an encircling axis.

    The axis is an unknotted circle crossing every strand twice, once
    under and once over, with all 2n axis crossings positive, so its
    linking number with the whole closure is strand_count.
    """
    n = word.strand_count
    counter = n
    cur = list(range(1, n + 1))
    bottom = list(cur)

    def fresh() -> int:
        nonlocal counter
        counter += 1
        return counter

    tuples: list[tuple[int, int, int, int]] = []
    for k in word.letters:
        i = abs(k) - 1
        in_l, in_r = cur[i], cur[i + 1]
        out_l, out_r = fresh(), fresh()
        if k > 0:
            tuples.append((in_l, out_l, out_r, in_r))
        else:
            tuples.append((in_r, in_l, out_l, out_r))
        cur[i], cur[i + 1] = out_l, out_r

    identify: list[tuple[int, int]] = []
    if include_axis:
        axis = [fresh()]
        for p in range(n):
            t_p, u_p = fresh(), fresh()
            tuples.append((axis[-1], t_p, u_p, cur[p]))
            axis.append(u_p)
            cur[p] = t_p
        back = axis[-1]
        for p in reversed(range(n)):
            v_p, w_p = fresh(), fresh()
            tuples.append((cur[p], v_p, w_p, back))
            back = v_p
            cur[p] = w_p
        identify.append((back, axis[0]))
    identify.extend((cur[p], bottom[p]) for p in range(n))

    parent: dict[int, int] = {}

    def find(a: int) -> int:
        root = a
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for x, y in identify:
        parent[find(x)] = find(y)

    used = {find(a) for arcs in tuples for a in arcs}
    compact = {rep: i + 1 for i, rep in enumerate(sorted(used))}
    renamed = [tuple(compact[find(a)] for a in arcs) for arcs in tuples]
    free = sum(1 for p in range(n) if find(bottom[p]) not in used)
    return _assemble(renamed, free)


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Flip every crossing (over-strand becomes under-strand)."""
    flipped = []
    for c in d.crossings:
        a, b, cc, dd = c.arcs
        flipped.append((dd, a, b, cc) if c.sign == 1 else (b, cc, dd, a))
    return _assemble(flipped, d.free_circles)


def component_count(d: LinkDiagram) -> int:
    """Number of link components, free circles included."""
    arc_components = len(set(d.component_of.values()))
    return arc_components + d.free_circles


def linking_number(d: LinkDiagram, c1: int, c2: int) -> int:
    """Half the signed count of crossings between components c1 and c2."""
    total = component_count(d)
    for c in (c1, c2):
        if not 0 <= c < total:
            raise ValueError(f"component index {c} out of range 0..{total - 1}")
    if c1 == c2:
        raise ValueError("linking number requires two distinct components")
    want = {c1, c2}
    signed = 0
    for crossing in d.crossings:
        under = d.component_of[crossing.arcs[0]]
        over = d.component_of[crossing.arcs[1]]
        if {under, over} == want:
            signed += crossing.sign
    if signed % 2:
        raise DiagramError("odd inter-component crossing sum; PD is not realizable")
    return signed // 2
