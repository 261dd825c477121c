"""Command-line client for the homology service.

Every subcommand talks HTTP to the FastAPI app: against a remote server
when --server is given, otherwise against an in-process instance (no
socket).  Exit codes: 0 computed, 2 detection verdict was fail, 1 error.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import click
import httpx

from .exactalg import GroupSummand


class ServiceClient:
    """HTTP veneer: remote when a server URL is given, in-process otherwise."""

    def __init__(self, server: str | None, out: str):
        self.out = out
        if server:
            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def call(self, method: str, path: str, **kwargs) -> dict:
        try:
            response = self._client.request(method, path, **kwargs)
        except httpx.HTTPError as err:
            raise click.ClickException(f"request failed: {err}") from err
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise click.ClickException(f"{response.status_code}: {detail}")
        return response.json()

    def emit(self, payload: dict, render) -> None:
        if self.out == "json":
            click.echo(json.dumps(payload, indent=2, sort_keys=True))
        else:
            render(payload)


def _load_diagram_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        raise click.ClickException(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise click.ClickException(f"{path} is not valid JSON: {err}") from err


def _group_text(cell: dict, ring: str) -> str:
    if ring == "Z":
        return str(GroupSummand(cell["free"], tuple(cell["torsion"])))
    rank = cell["free"]
    return ring if rank == 1 else f"{ring}^{rank}"


@click.group()
@click.option("--server", default=None, envvar="KHSUITE_SERVER",
              help="Base URL of a running service; default is in-process.")
@click.option("--out", type=click.Choice(["json", "text"]), default="text",
              help="Output format.")
@click.pass_context
def main(ctx: click.Context, server: str | None, out: str) -> None:
    """Khovanov homology toolkit."""
    ctx.obj = ServiceClient(server, out)


@main.command()
@click.argument("diagram_file", type=click.Path())
@click.option("--ring", type=click.Choice(["Z", "Q", "F2"]), default="Z")
@click.option("--reduced", is_flag=True, help="Reduced homology at a basepoint.")
@click.option("--basepoint", type=int, default=None,
              help="Arc label carrying the basepoint (reduced only).")
@click.option("--variant", type=click.Choice(["quotient", "kernel"]),
              default="quotient", help="Reduced flavor.")
@click.option("--workers", type=int, default=1, help="Parallel block workers.")
@click.pass_obj
def compute(client: ServiceClient, diagram_file: str, ring: str, reduced: bool,
            basepoint: int | None, variant: str, workers: int) -> None:
    """Bigraded homology of the diagram in DIAGRAM_FILE."""
    payload = {
        "diagram": _load_diagram_file(diagram_file),
        "ring": ring,
        "reduced": reduced,
        "basepoint": basepoint,
        "variant": variant,
        "workers": workers,
    }
    body = client.call("POST", "/compute", json=payload)

    def render(data: dict) -> None:
        tag = f"ring: {data['ring']}"
        if data["reduced"]:
            tag += "  (reduced)"
        click.echo(tag)
        for cell in data["groups"]:
            click.echo(f"  ({cell['i']:>3}, {cell['j']:>3})  "
                       f"{_group_text(cell, data['ring'])}")
        click.echo(f"total free rank: {data['total_free_rank']}")

    client.emit(body, render)


@main.command()
@click.argument("diagram_file", type=click.Path())
@click.pass_obj
def lee(client: ServiceClient, diagram_file: str) -> None:
    """Collapsed (Lee-type) homology ranks by homological degree."""
    body = client.call(
        "POST", "/lee", json={"diagram": _load_diagram_file(diagram_file)}
    )

    def render(data: dict) -> None:
        for entry in data["ranks"]:
            click.echo(f"  i={entry['i']:>3}  rank {entry['rank']}")
        click.echo(f"total rank: {data['total']}")

    client.emit(body, render)


@main.command()
@click.argument("diagram_file", type=click.Path())
@click.pass_obj
def jones(client: ServiceClient, diagram_file: str) -> None:
    """Graded Euler characteristic (unnormalized Jones polynomial)."""
    body = client.call(
        "POST", "/jones", json={"diagram": _load_diagram_file(diagram_file)}
    )
    client.emit(body, lambda data: click.echo(data["text"]))


@main.command()
@click.argument("diagram_file", type=click.Path())
@click.pass_context
def detect(ctx: click.Context, diagram_file: str) -> None:
    """Template detection with audit rules; exits 2 on a mismatch."""
    client: ServiceClient = ctx.obj
    body = client.call(
        "POST", "/detect", json={"diagram": _load_diagram_file(diagram_file)}
    )

    def render(data: dict) -> None:
        click.echo(f"verdict: {data['overall']}")
        for rule in data["rules"]:
            click.echo(f"  [{rule['verdict']:^14}] {rule['rule']}"
                       f"  ({rule['citation']})")
        summary = data["summary"]
        cell = summary.get("first_distinguishing_cell")
        if cell is not None:
            click.echo(f"first distinguishing cell: ({cell[0]}, {cell[1]})")
        click.echo(summary["conclusion"])

    client.emit(body, render)
    if body["overall"] != "pass":
        ctx.exit(2)


@main.command()
@click.argument("census_file", type=click.Path(), required=False)
@click.option("--workers", type=int, default=4, help="Concurrent census rows.")
@click.pass_obj
def census(client: ServiceClient, census_file: str | None, workers: int) -> None:
    """Detection verdicts for a census CSV (bundled census if omitted)."""
    payload: dict = {"max_workers": workers}
    if census_file is not None:
        try:
            with open(census_file, encoding="utf-8") as handle:
                payload["csv_text"] = handle.read()
        except OSError as err:
            raise click.ClickException(f"cannot read {census_file}: {err}") from err
    body = client.call("POST", "/census", json=payload)

    def render(data: dict) -> None:
        for row in data["rows"]:
            free = "-" if row["total_free_rank"] is None else row["total_free_rank"]
            mod2 = "-" if row["total_rank_mod2"] is None else row["total_rank_mod2"]
            line = (f"  {row['name']:<18} {row['verdict']:<6} "
                    f"free={free:<4} mod2={mod2:<4}")
            if row["note"]:
                line += f"  {row['note']}"
            click.echo(line)
        passes = [r["name"] for r in data["rows"] if r["verdict"] == "pass"]
        click.echo(f"passes: {', '.join(passes) if passes else 'none'}")

    client.emit(body, render)


@main.command(name="hfl-cases")
@click.option("--case", "case_name", default=None,
              help="One case (e.g. 3/2, x>5/2); all seven when omitted.")
@click.option("--all", "run_everything", is_flag=True,
              help="Run every case (the default when --case is absent).")
@click.option("--samples", type=int, default=None,
              help="Sample count for open-region cases.")
@click.option("--contract", type=click.Choice(["strict", "lax"]),
              default="strict", help="Cancellation move contract.")
@click.pass_obj
def hfl_cases(client: ServiceClient, case_name: str | None,
              run_everything: bool, samples: int | None, contract: str) -> None:
    """Rank-function case analysis reports."""
    if case_name is not None and run_everything:
        raise click.ClickException("--case and --all are mutually exclusive")
    params: dict = {"contract": contract}
    if case_name is not None:
        params["case"] = case_name
    if samples is not None:
        params["samples"] = samples
    body = client.call("GET", "/hfl/cases", params=params)

    def render(data: dict) -> None:
        for report in data["reports"]:
            click.echo(f"  case {report['case']:<7} enumerated={report['enumerated']:<5}"
                       f" admissible={report['admissible']:<3}"
                       f" braided={report['braided']}")
        click.echo(f"contract: {data['contract']}")

    client.emit(body, render)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
