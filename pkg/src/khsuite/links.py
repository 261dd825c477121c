"""Reference diagrams used by the tests, the census tool, and the service.

Everything is produced through braid closures so the whole corpus exercises
one construction path; names follow the common link-table names.
"""

from __future__ import annotations

from khsuite.linkdiag import BraidWord, LinkDiagram, from_braid_closure


def unknot() -> LinkDiagram:
    return from_braid_closure(BraidWord(1, ()))


def unlink(k: int) -> LinkDiagram:
    """Split union of k crossingless circles."""
    if k < 1:
        raise ValueError("an unlink needs at least one component")
    return from_braid_closure(BraidWord(k, ()))


def unlink2_twisted() -> LinkDiagram:
    """Two-component unlink drawn with one positive and one negative crossing."""
    return from_braid_closure(BraidWord(2, (1, -1)))


def hopf(sign: int = 1) -> LinkDiagram:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return torus2(2 * sign)


def trefoil_right() -> LinkDiagram:
    return torus2(3)


def trefoil_left() -> LinkDiagram:
    return torus2(-3)


def figure_eight() -> LinkDiagram:
    return from_braid_closure(BraidWord(3, (1, -2, 1, -2)))


def torus2(n: int) -> LinkDiagram:
    """Closure of the 2-strand braid word sigma_1^n (negative n mirrors)."""
    letter = 1 if n >= 0 else -1
    return from_braid_closure(BraidWord(2, (letter,) * abs(n)))


def t26() -> LinkDiagram:
    return torus2(6)


def t26_braid_axis() -> LinkDiagram:
    """T(2,6) presented as an unknotted 3-braid closure plus its axis."""
    return from_braid_closure(BraidWord(3, (1, 2)), include_axis=True)


def axis_closure_negative() -> LinkDiagram:
    """The sigma_1^-1 sigma_2^-1 unknot closure plus a positively linked axis.

    Same unknot-closure shape as the reference presentations but a different
    oriented link; kept as a negative control for the detection pipeline.
    """
    return from_braid_closure(BraidWord(3, (-1, -2)), include_axis=True)


def l6a2() -> LinkDiagram:
    return from_braid_closure(BraidWord(3, (1, -2)), include_axis=True)


def whitehead() -> LinkDiagram:
    return from_braid_closure(BraidWord(3, (1, -2, 1, -2, 1)))


def borromean() -> LinkDiagram:
    return from_braid_closure(BraidWord(3, (1, -2, 1, -2, 1, -2)))


def torus_3_4() -> LinkDiagram:
    return from_braid_closure(BraidWord(3, (1, 2) * 4))
