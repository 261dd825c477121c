"""Exhaustive case analysis for delta-thin bigraded rank functions.

The object of study is a finitely supported rank function on tri-gradings
(M, a1, a2) subject to four constraints: support on a single
delta = a1 + a2 - M - 1/2 level, total rank at most 12, even rank in every
a1 column and every a2 column, and symmetry under
(M, a1, a2) -> (M - 2*a1 - 2*a2, -a1, -a2).  Alexander gradings a1, a2 are
half-integers; everything is stored doubled so all arithmetic is integer
exact (M2 = 2M, a1_2 = 2*a1, ...).

A parameter x (the top a2 grading paired with the top a1 seed) splits the
search into seven cases: five half-integer values and two open regions
handled by sampled representatives.  For each admissible candidate (one
that supports a cancellation certificate in both Alexander directions) the
braidedness criterion is asserted: exactly two generators in the top a1 or
top a2 grading.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

TOTAL_RANK_CAP = 12


class CaseAnalysisError(Exception):
    """An admissible configuration failed the braidedness conclusion."""


@dataclass(frozen=True, order=True)
class TriGrading:
    """Doubled (M, a1, a2) grading; a1_2 and a2_2 are odd integers."""

    M2: int
    a1_2: int
    a2_2: int

    def __post_init__(self):
        if self.a1_2 % 2 == 0 or self.a2_2 % 2 == 0:
            raise ValueError("Alexander gradings must be half-integers (doubled odd)")

    @property
    def delta2(self) -> int:
        return self.a1_2 + self.a2_2 - self.M2 - 1

    def symmetric(self) -> "TriGrading":
        return TriGrading(
            self.M2 - 2 * (self.a1_2 + self.a2_2), -self.a1_2, -self.a2_2
        )

    def axis_value(self, axis: int) -> int:
        return self.a1_2 if axis == 1 else self.a2_2

    def off_axis_value(self, axis: int) -> int:
        return self.a2_2 if axis == 1 else self.a1_2

    def as_halves(self) -> list:
        return [self.M2 / 2, self.a1_2 / 2, self.a2_2 / 2]


def _grading_from_alexander(a1_2: int, a2_2: int, delta2: int) -> TriGrading:
    # M is never free: it is pinned by the delta level.
    return TriGrading(a1_2 + a2_2 - delta2 - 1, a1_2, a2_2)


class RankFunction:
    """Finitely supported map TriGrading -> positive multiplicity."""

    def __init__(self, multiplicities: Mapping[TriGrading, int]):
        cleaned = {}
        for g, m in multiplicities.items():
            if not isinstance(g, TriGrading):
                raise TypeError("keys must be TriGrading values")
            if m <= 0:
                raise ValueError("multiplicities must be positive")
            cleaned[g] = m
        self._mult = cleaned

    def items(self) -> list[tuple[TriGrading, int]]:
        return sorted(self._mult.items())

    def support(self) -> list[TriGrading]:
        return sorted(self._mult)

    def multiplicity(self, g: TriGrading) -> int:
        return self._mult.get(g, 0)

    def total(self) -> int:
        return sum(self._mult.values())

    def delta2(self) -> int:
        levels = {g.delta2 for g in self._mult}
        if len(levels) != 1:
            raise ValueError("support is not on a single delta level")
        return levels.pop()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RankFunction) and self._mult == other._mult

    def __hash__(self) -> int:
        return hash(frozenset(self._mult.items()))

    def __repr__(self) -> str:
        cells = ", ".join(f"{g.as_halves()}x{m}" for g, m in self.items())
        return f"RankFunction({cells})"

    def with_additions(self, additions: Mapping[TriGrading, int]) -> "RankFunction":
        merged = Counter(self._mult)
        merged.update(additions)
        return RankFunction(merged)

    def apply_symmetry(self) -> "RankFunction":
        return RankFunction({g.symmetric(): m for g, m in self._mult.items()})

    def column_totals(self, axis: int) -> dict[int, int]:
        totals: dict[int, int] = {}
        for g, m in self._mult.items():
            key = g.axis_value(axis)
            totals[key] = totals.get(key, 0) + m
        return totals

    def validate(self) -> None:
        """Re-check all four structural constraints; raises on violation."""
        if not self._mult:
            raise ValueError("empty rank function")
        self.delta2()
        if self.total() > TOTAL_RANK_CAP:
            raise ValueError(f"total rank {self.total()} exceeds {TOTAL_RANK_CAP}")
        for axis in (1, 2):
            for value, total in self.column_totals(axis).items():
                if total % 2:
                    raise ValueError(
                        f"odd total {total} in a{axis} column {value / 2}"
                    )
        if self.apply_symmetry() != self:
            raise ValueError("not symmetric under the grading involution")

    def to_json(self) -> list:
        return [g.as_halves() + [m] for g, m in self.items()]


@dataclass(frozen=True)
class MatchingCertificate:
    """A perfect cancellation matching for one Alexander direction."""

    axis: int
    pairs: tuple[tuple[TriGrading, TriGrading], ...]
    survivors: tuple[TriGrading, ...]

    def to_json(self) -> dict:
        return {
            "axis": self.axis,
            "pairs": [[g.as_halves(), h.as_halves()] for g, h in self.pairs],
            "survivors": [g.as_halves() for g in self.survivors],
        }


@dataclass(frozen=True)
class CaseSpec:
    """One branch of the analysis: a pinned x value or a sampled open region."""

    name: str
    x2_values: tuple[int, ...]  # one entry for pinned cases, samples for open
    window2: int | None  # max |a_i| (doubled) for additions; None -> seed max
    open_region: bool = False

    def window_for(self, x2: int) -> int:
        if self.window2 is not None:
            return self.window2
        return max(3, abs(x2), abs(x2 - 2))


CASES: dict[str, CaseSpec] = {
    "x>5/2": CaseSpec("x>5/2", (7, 9), None, open_region=True),
    "5/2": CaseSpec("5/2", (5,), 5),
    "3/2": CaseSpec("3/2", (3,), 3),
    "1/2": CaseSpec("1/2", (1,), 3),
    "-1/2": CaseSpec("-1/2", (-1,), 3),
    "-3/2": CaseSpec("-3/2", (-3,), 5),
    "x<-3/2": CaseSpec("x<-3/2", (-5, -7), None, open_region=True),
}


def seed_generators(case: CaseSpec, x2: int | None = None) -> RankFunction:
    """The forced generators for the case: both top-grading corners of each
    component and their symmetric images, with coincidences merged."""
    if x2 is None:
        x2 = case.x2_values[0]
    elif x2 not in case.x2_values and not case.open_region:
        raise ValueError(f"x2={x2} is not part of case {case.name}")
    base = [
        TriGrading(0, 3, x2),
        TriGrading(-2, 3, x2 - 2),
        TriGrading(0, x2, 3),
        TriGrading(-2, x2 - 2, 3),
    ]
    cells = set(base) | {g.symmetric() for g in base}
    return RankFunction({g: 1 for g in cells})


def _candidate_orbits(delta2: int, window2: int) -> list[tuple[TriGrading, ...]]:
    orbits = set()
    for a1_2 in range(-window2, window2 + 1, 2):
        for a2_2 in range(-window2, window2 + 1, 2):
            if a1_2 % 2 == 0 or a2_2 % 2 == 0:
                continue
            g = _grading_from_alexander(a1_2, a2_2, delta2)
            pair = tuple(sorted((g, g.symmetric())))
            orbits.add(pair)
    return sorted(orbits)


def enumerate_completions(
    case: CaseSpec, x2: int | None = None, window2: int | None = None
) -> list[RankFunction]:
    """All symmetric, parity-even, rank-capped supersets of the seed.

    Additions are drawn from the delta-compatible half-integer lattice with
    |a_i| bounded by the case window (overridable for degenerate tests);
    generators beyond the window would themselves become a top grading and
    are covered by the automatic two-generator closure argument instead.
    """
    if x2 is None:
        x2 = case.x2_values[0]
    if window2 is None:
        window2 = case.window_for(x2)
    seed = seed_generators(case, x2)
    delta2 = seed.delta2()
    budget = (TOTAL_RANK_CAP - seed.total()) // 2
    orbits = _candidate_orbits(delta2, window2)

    found: list[RankFunction] = []
    seen: set[RankFunction] = set()
    for count in range(budget + 1):
        for combo in itertools.combinations_with_replacement(orbits, count):
            additions: Counter = Counter()
            for pair in combo:
                additions.update(pair)
            candidate = seed.with_additions(additions)
            try:
                candidate.validate()
            except ValueError:
                continue
            if candidate not in seen:
                seen.add(candidate)
                found.append(candidate)
    found.sort(key=lambda rf: (rf.total(), rf.items()))
    return found


def _axis_targets(delta2: int, axis: int) -> tuple[TriGrading, TriGrading]:
    """Survivor cells for the axis-k spectral sequence.

    Collapsing along axis k leaves classes pinned at (M, off-axis) =
    (0, 3/2) and (-1, 3/2); the collapsed coordinate is then forced by the
    delta level.  For axis 2 that means the survivors are (0, 3/2, x) and
    (-1, 3/2, x-1)."""
    x2 = delta2 - 2
    if axis == 1:
        return (TriGrading(0, x2, 3), TriGrading(-2, x2 - 2, 3))
    return (TriGrading(0, 3, x2), TriGrading(-2, 3, x2 - 2))


def check_spectral_sequence(
    rf: RankFunction, axis: int, contract: str = "strict"
) -> MatchingCertificate | None:
    """Search for a perfect cancellation matching leaving only the axis target.

    A cancelled pair (g, h) drops M by one; under the strict contract the
    off-axis Alexander grading is preserved, which on a single delta level
    forces the axis grading to drop by exactly one.  The lax contract lets
    the off-axis grading drop instead (axis grading then stays), modeling
    filtered differentials that are merely non-increasing off-axis.  Only
    delta-thinness is required of the input; the full four-invariant check
    belongs to enumeration.
    """
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    if contract not in ("strict", "lax"):
        raise ValueError(f"unknown contract {contract!r}")
    remaining = Counter(dict(rf.items()))
    delta2 = rf.delta2()

    survivors = _axis_targets(delta2, axis)
    for cell in survivors:
        if remaining[cell] < 1:
            return None
        remaining[cell] -= 1
    remaining = +remaining

    if contract == "strict":
        pairs = _strict_matching(remaining, axis)
    else:
        pairs = _lax_matching(remaining, axis)
    if pairs is None:
        return None
    return MatchingCertificate(axis, tuple(pairs), survivors)


def _strict_matching(
    remaining: Counter, axis: int
) -> list[tuple[TriGrading, TriGrading]] | None:
    """Per off-axis line, adjacency matching with forced counts.

    Within one line the cells are ordered by descending axis grading; every
    unmatched generator at a level must pair with one exactly one step
    below, so the leftover counts are forced and the matching exists iff
    they never go negative and end at zero.
    """
    lines: dict[int, list[TriGrading]] = {}
    for g in remaining:
        lines.setdefault(g.off_axis_value(axis), []).append(g)
    pairs: list[tuple[TriGrading, TriGrading]] = []
    for _, cells in sorted(lines.items()):
        cells.sort(key=lambda g: -g.axis_value(axis))
        carry = 0
        previous: TriGrading | None = None
        for cell in cells:
            if carry and previous is not None:
                if previous.axis_value(axis) - cell.axis_value(axis) != 2:
                    return None
                pairs.extend([(previous, cell)] * carry)
            carry = remaining[cell] - carry
            if carry < 0:
                return None
            previous = cell
        if carry:
            return None
    return pairs


def _lax_matching(
    remaining: Counter, axis: int
) -> list[tuple[TriGrading, TriGrading]] | None:
    """Backtracking perfect matching under the relaxed pair contract."""
    nodes: list[TriGrading] = []
    for g in sorted(remaining):
        nodes.extend([g] * remaining[g])
    if len(nodes) % 2:
        return None

    def allowed(g: TriGrading, h: TriGrading) -> bool:
        return (
            g.M2 - h.M2 == 2
            and h.off_axis_value(axis) <= g.off_axis_value(axis)
            and h.axis_value(axis) <= g.axis_value(axis)
        )

    pairs: list[tuple[TriGrading, TriGrading]] = []

    def solve(pool: list[TriGrading]) -> bool:
        if not pool:
            return True
        first = pool[0]
        rest = pool[1:]
        tried = set()
        for k, other in enumerate(rest):
            if other in tried:
                continue
            tried.add(other)
            if allowed(first, other) or allowed(other, first):
                ordered = (first, other) if allowed(first, other) else (other, first)
                pairs.append(ordered)
                if solve(rest[:k] + rest[k + 1 :]):
                    return True
                pairs.pop()
        return False

    return pairs if solve(nodes) else None


def braided_conclusion(rf: RankFunction) -> bool:
    """True when some component is forced to be a braid around the other:
    exactly two generators in the top a1 grading, or in the top a2 grading."""
    if not rf.support():
        raise ValueError("empty rank function")
    for axis in (1, 2):
        totals = rf.column_totals(axis)
        if totals[max(totals)] == 2:
            return True
    return False


@dataclass(frozen=True)
class CaseReport:
    case: str
    enumerated: int
    admissible: int
    braided: int
    witnesses: tuple = field(default=())
    counterexamples: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "enumerated": self.enumerated,
            "admissible": self.admissible,
            "braided": self.braided,
            "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses],
            "counterexamples": list(self.counterexamples),
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _case_report_at(
    case: CaseSpec, x2: int, window2: int, contract: str
) -> CaseReport:
    completions = enumerate_completions(case, x2=x2, window2=window2)
    admissible = [
        rf
        for rf in completions
        if check_spectral_sequence(rf, 1, contract) is not None
        and check_spectral_sequence(rf, 2, contract) is not None
    ]
    bad = [rf for rf in admissible if not braided_conclusion(rf)]
    if bad:
        raise CaseAnalysisError(
            f"case {case.name} (x2={x2}): admissible but non-braided "
            f"configurations found: {json.dumps([rf.to_json() for rf in bad])}"
        )
    witnesses = tuple(json.dumps(rf.to_json()) for rf in admissible)
    return CaseReport(
        case=case.name,
        enumerated=len(completions),
        admissible=len(admissible),
        braided=len(admissible),
        witnesses=witnesses,
    )


def run_case(
    case: CaseSpec | str,
    contract: str = "strict",
    samples2: Sequence[int] | None = None,
) -> CaseReport:
    """Run one case end to end; open regions are sampled and must stabilize.

    Every admissible configuration is asserted braided; a violation raises
    CaseAnalysisError with the counterexample serialized.  For open regions
    the per-sample reports must agree cell-for-cell (after the x-dependent
    witnesses are abstracted away by emptiness); a disagreement raises too.
    """
    if isinstance(case, str):
        try:
            case = CASES[case]
        except KeyError:
            raise ValueError(f"unknown case {case!r}") from None
    x2_values = tuple(samples2) if samples2 is not None else case.x2_values
    if not case.open_region and samples2 is not None:
        raise ValueError("samples apply only to open-region cases")
    reports = [
        _case_report_at(case, x2, case.window_for(x2), contract) for x2 in x2_values
    ]
    first = reports[0]
    for other in reports[1:]:
        if other != first:
            raise CaseAnalysisError(
                f"open-region case {case.name} did not stabilize across samples: "
                f"{first.serialize()} vs {other.serialize()}"
            )
    return first


def run_all(contract: str = "strict") -> list[CaseReport]:
    """All seven cases in registry order."""
    return [run_case(name, contract) for name in CASES]
