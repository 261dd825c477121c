"""Khovanov homology toolkit: exact chain-level computation, link invariants,
a T(2,6) detection pipeline, and a bigraded rank-function case search."""

from khsuite.detection import (
    DetectionReport,
    detect_t26,
    first_distinguishing_cell,
    run_census,
)
from khsuite.exactalg import (
    GroupSummand,
    SparseExactMatrix,
    homology_at,
    rank,
    smith_normal_form,
)
from khsuite.hflsearch import (
    CaseAnalysisError,
    CaseReport,
    RankFunction,
    TriGrading,
    enumerate_completions,
    run_all,
    run_case,
)
from khsuite.khcomplex import (
    CROSSING_LIMIT,
    BigradedGroup,
    KhovanovComplex,
    ResourceGuardError,
    build_complex,
    kauffman_jones,
    khovanov_homology,
    lee_homology,
    reduced_khovanov,
)
from khsuite.linkdiag import (
    BraidWord,
    DiagramError,
    LinkDiagram,
    from_braid_closure,
    parse_pd,
)

__all__ = [
    "BigradedGroup",
    "BraidWord",
    "CROSSING_LIMIT",
    "CaseAnalysisError",
    "CaseReport",
    "DetectionReport",
    "DiagramError",
    "GroupSummand",
    "KhovanovComplex",
    "LinkDiagram",
    "RankFunction",
    "ResourceGuardError",
    "SparseExactMatrix",
    "TriGrading",
    "build_complex",
    "detect_t26",
    "enumerate_completions",
    "first_distinguishing_cell",
    "from_braid_closure",
    "homology_at",
    "kauffman_jones",
    "khovanov_homology",
    "lee_homology",
    "parse_pd",
    "rank",
    "reduced_khovanov",
    "run_all",
    "run_case",
    "run_census",
    "smith_normal_form",
]

__version__ = "0.1.0"
