import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple, TypedDict

import click
from click import Context, Parameter

from ..errors import ProximalVortexError
from ..verifiers.workspace_verifier import (
    CONJUGACY_MODES,
    CONTINUITY_MODES,
    SUBCOMMANDS,
    WorkspaceVerifier,
)


# ──────────────────────────────────────────────────────────────────────────────
# TypedDict for verifier init kwargs
# ──────────────────────────────────────────────────────────────────────────────
class VerifierInitOptions(TypedDict, total=False):
    space: str
    map_name: str
    map2: str
    conjugator: str
    complex_name: str
    group: str
    mode: str
    subset: List[int]
    iterations: int
    n_max: int
    seed: int
    out: str
    partitions: int
    auto_dask_cluster: bool
    workers: int


class UsageFailure(click.ClickException):
    """Usage and parse errors; exit status 2."""

    exit_code = 2


class InternalFailure(click.ClickException):
    """Unexpected errors inside a verification; exit status 3."""

    exit_code = 3


# ──────────────────────────────────────────────────────────────────────────────
# ParamTypes
# ──────────────────────────────────────────────────────────────────────────────


class IntListType(click.ParamType):
    name = "int_list"

    def convert(self, value: Any, param: Parameter, ctx: Context) -> Tuple[int, ...]:
        text = str(value)
        try:
            ints: Tuple[int, ...]
            if text.strip() == "":
                ints = tuple()
            else:
                ints = tuple(int(x) for x in text.split(","))
        except Exception:
            self.fail(f"{value!r} is not a comma-separated list of point ids", param, ctx)
        return ints


def configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# ──────────────────────────────────────────────────────────────────────────────
# CLI definition
# ──────────────────────────────────────────────────────────────────────────────
@click.command()
@click.argument("subcommand", type=click.Choice(SUBCOMMANDS))
@click.option(
    "--input",
    "-i",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Workspace JSON file",
)
@click.option("--space", default=None, help="Space or complex name (axioms)")
@click.option("--map", "map_name", default=None, help="Map f (continuity, fixed, conjugacy)")
@click.option("--map2", default=None, help="Map g (conjugacy)")
@click.option(
    "--conjugator",
    default=None,
    help="Declared map h to verify as a conjugacy; omit to search all bijections",
)
@click.option("--complex", "complex_name", default=None, help="Complex name")
@click.option("--group", default=None, help="Group basis name (amenable)")
@click.option(
    "--mode",
    type=click.Choice(sorted(set(CONTINUITY_MODES + CONJUGACY_MODES)), case_sensitive=False),
    default=None,
    help="proximal/descriptive for continuity; exact/descriptive/weak/weak-descriptive "
    "for conjugacy",
)
@click.option(
    "--subset",
    type=IntListType(),
    default=None,
    help="Invariant convex vertex subset for fixed on a holed vortex, e.g. '0,2,5'",
)
@click.option(
    "--iterations",
    type=int,
    default=6,
    show_default=True,
    help="Iterate depth N of the conjugacy transfer check",
)
@click.option("--n-max", type=int, default=None, help="Lower the exhaustive enumeration cap")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"], case_sensitive=False),
    default="text",
    show_default=True,
)
@click.option(
    "--out",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="SVG file (render) or report file (other subcommands)",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--workers",
    type=int,
    default=1,
    show_default=True,
    help="Partitions of exhaustive scans",
)
@click.option(
    "--cluster",
    is_flag=True,
    default=False,
    help="Run partitioned scans on a local Dask cluster of --workers processes",
)
@click.option("--verbose", "-v", count=True, help="INFO logging; twice for DEBUG")
def main(
    subcommand: str,
    input_path: str,
    space: Optional[str],
    map_name: Optional[str],
    map2: Optional[str],
    conjugator: Optional[str],
    complex_name: Optional[str],
    group: Optional[str],
    mode: Optional[str],
    subset: Optional[Tuple[int, ...]],
    iterations: int,
    n_max: Optional[int],
    fmt: str,
    out: Optional[str],
    seed: int,
    workers: int,
    cluster: bool,
    verbose: int,
) -> None:
    """
    Run SUBCOMMAND against a workspace file.

    Exit status 0 when every check passes, 1 when a check fails and 2 for
    usage or parse errors.
    """
    configure_logging(verbose)
    init_opts: VerifierInitOptions = {"seed": seed, "iterations": iterations}

    if space is not None:
        init_opts["space"] = space
    if map_name is not None:
        init_opts["map_name"] = map_name
    if map2 is not None:
        init_opts["map2"] = map2
    if conjugator is not None:
        init_opts["conjugator"] = conjugator
    if complex_name is not None:
        init_opts["complex_name"] = complex_name
    if group is not None:
        init_opts["group"] = group
    if mode is not None:
        init_opts["mode"] = mode.lower()
    if subset is not None:
        init_opts["subset"] = list(subset)
    if n_max is not None:
        init_opts["n_max"] = n_max
    if subcommand == "render" and out is not None:
        init_opts["out"] = out
    if workers > 1:
        init_opts["partitions"] = workers
    if cluster:
        init_opts["auto_dask_cluster"] = True
        init_opts["workers"] = workers

    try:
        verifier = WorkspaceVerifier(source=input_path, subcommand=subcommand, **init_opts)
        status, report = verifier.run()
    except (ProximalVortexError, ValueError, KeyError) as e:
        raise UsageFailure(str(e))
    except KeyboardInterrupt:
        raise click.Abort()
    except Exception as e:
        raise InternalFailure(f"Verification failed: {e}")

    text = report.to_json() if fmt.lower() == "json" else report.to_text()
    if out is not None and subcommand != "render":
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)
    click.get_current_context().exit(status)


if __name__ == "__main__":
    main()
