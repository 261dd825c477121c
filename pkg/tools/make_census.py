"""Regenerate the bundled link census CSV from the fixture diagrams.

Run from the repository root:

    python3 tools/make_census.py

Writes src/khsuite/data/census_links_upto7.csv deterministically; the file
is committed so the package has no build-time generation step.
"""

import csv
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from khsuite import links  # noqa: E402
from khsuite.linkdiag import LinkDiagram  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "src/khsuite/data/census_links_upto7.csv"

ROWS = [
    ("unknot", links.unknot()),
    ("unlink2", links.unlink(2)),
    ("unlink2_twisted", links.unlink2_twisted()),
    ("hopf_pos", links.hopf(+1)),
    ("hopf_neg", links.hopf(-1)),
    ("trefoil_right", links.trefoil_right()),
    ("trefoil_left", links.trefoil_left()),
    ("figure8", links.figure_eight()),
    ("t2_4", links.torus2(4)),
    ("t2_5", links.torus2(5)),
    ("whitehead", links.whitehead()),
    ("t2_6", links.t26()),
    ("l6a2", links.l6a2()),
    ("borromean", links.borromean()),
    ("t2_7", links.torus2(7)),
]


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["name", "pd", "free_circles"])
        for name, diagram in ROWS:
            assert isinstance(diagram, LinkDiagram)
            pd = json.dumps([list(c.arcs) for c in diagram.crossings])
            writer.writerow([name, pd, diagram.free_circles])
    print(f"wrote {OUT} ({len(ROWS)} rows)")


if __name__ == "__main__":
    main()
