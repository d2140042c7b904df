"""`emuc` command line: parse, check, simulate, gen, lint, difftest, serve.

Exit codes: 0 success, 1 error diagnostics or trace divergence, 2 usage error.
Human-oriented messages go to stderr; trace/report output goes to stdout.
"""

from __future__ import annotations

import json
import sys

import click

from . import analyzer, codegen, diffharness, interpreter, lint
from .model import Diagram
from .parser import ParseDiagnostic, ParseFailure, format_diagram, parse_diagram


def _print_diags(diags: list[ParseDiagnostic], filename: str) -> bool:
    """Render diagnostics to stderr; returns True if any is an error."""
    has_error = False
    for d in diags:
        click.echo(d.render(filename), err=True)
        has_error = has_error or d.severity == "error"
    return has_error


def _load(path: str, resolve: bool = True) -> Diagram:
    """Parse and (optionally) type-resolve a model file; exits 1 on errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = parse_diagram(fh.read())
    except OSError as exc:
        click.echo(f"emuc: {exc}", err=True)
        sys.exit(1)
    except ParseFailure as exc:
        _print_diags(exc.diagnostics, path)
        sys.exit(1)
    if not resolve:
        return d
    try:
        return analyzer.resolve(d)
    except analyzer.AnalysisError as exc:
        _print_diags(exc.diagnostics, path)
        sys.exit(1)


class _Group(click.Group):
    def parse_args(self, ctx, args):
        if not args:
            click.echo(self.get_help(ctx), err=True)
            ctx.exit(2)
        return super().parse_args(ctx, args)


@click.group(cls=_Group)
@click.version_option(package_name="emuc", prog_name="emuc")
def main():
    """Emucharts toolchain: validate, simulate, generate MISRA-style C, and
    differentially test state-machine models."""


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
def parse(model):
    """Parse MODEL and echo it back in normalized form."""
    d = _load(model, resolve=False)
    click.echo(format_diagram(d), nl=False)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", default=16, show_default=True,
              help="Random samples per variable for guard-overlap search.")
@click.option("--seed", default=0, show_default=True)
def check(model, samples, seed):
    """Run all static analyses on MODEL."""
    d = _load(model, resolve=False)
    diags = analyzer.check(d, samples_per_var=samples, seed=seed)
    if _print_diags(diags, model):
        sys.exit(1)
    click.echo(f"{model}: ok ({len(diags)} warning(s))", err=True)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--events", default="-",
              help="File with one trigger name per line, or '-' for stdin.")
def simulate(model, events):
    """Interpret MODEL over an event sequence; print the trace to stdout."""
    d = _load(model)
    if events == "-":
        text = sys.stdin.read()
    else:
        with open(events, encoding="utf-8") as fh:
            text = fh.read()
    names = [line.strip() for line in text.splitlines() if line.strip()]
    try:
        states = interpreter.run(d, names)
    except ValueError as exc:
        click.echo(f"emuc: {exc}", err=True)
        sys.exit(1)
    except interpreter.EvalError as exc:
        click.echo(f"emuc: evaluation trap: {exc}", err=True)
        sys.exit(1)
    click.echo(interpreter.format_trace(d, states), nl=False)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "outdir", required=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.option("--base-name", default=None, help="Base file name (default: diagram name).")
@click.option("--no-asserts", is_flag=True, help="Omit assert statements.")
def gen(model, outdir, base_name, no_asserts):
    """Generate the C bundle (header, impl, makefile, driver, docs) from MODEL."""
    d = _load(model)
    diags = analyzer.check_structure(d)
    if _print_diags([x for x in diags if x.severity == "error"], model):
        sys.exit(1)
    cfg = codegen.CodegenConfig(base_name=base_name or d.name,
                                emit_asserts=not no_asserts)
    bundle = codegen.generate_bundle(d, cfg)
    for path in bundle.write_to(outdir):
        click.echo(path, err=True)


@main.command("lint")
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def lint_cmd(files):
    """Check C FILES against the header grammar (.h) and MISRA-subset rules."""
    failed = False
    for path in files:
        with open(path, encoding="utf-8", errors="replace") as fh:
            text = fh.read()
        diags = list(lint.check_rules(text))
        if path.endswith(".h"):
            diags = lint.check_header_grammar(text) + diags
        failed = _print_diags(diags, path) or failed
    sys.exit(1 if failed else 0)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", default=1000, show_default=True, help="Number of sequences.")
@click.option("--len", "length", default=200, show_default=True,
              help="Events per sequence.")
@click.option("--seed", default=42, show_default=True)
@click.option("--cc", default=None, help="C compiler command (or $EMUC_CC).")
@click.option("--report", default=None, type=click.Path(dir_okay=False),
              help="Write a JSON report here.")
def difftest(model, n, length, seed, cc, report):
    """Build the generated code and compare its traces with the interpreter."""
    d = _load(model)
    bundle = codegen.generate_bundle(d)
    try:
        sequences = diffharness.gen_sequences(d, n, length, seed)
        result = diffharness.difftest(d, bundle, sequences, cc=cc)
    except (diffharness.BuildError, ValueError) as exc:
        click.echo(f"emuc: {exc}", err=True)
        if getattr(exc, "log", ""):
            click.echo(exc.log, err=True)
        sys.exit(1)
    if report:
        with open(report, "w", encoding="utf-8") as fh:
            json.dump(result.to_dict(), fh, indent=2)
    click.echo(f"{model}: {result.sequences_run} sequence(s), "
               f"{len(result.divergences)} divergence(s), "
               f"cases {result.case_counts}", err=True)
    for v in result.divergences[:10]:
        click.echo(f"  seq {v.sequence} step {v.step}: "
                   f"interpreter {v.interpreter_line!r} != driver {v.driver_line!r}",
                   err=True)
    sys.exit(0 if result.equivalent else 1)


@main.command()
@click.argument("model", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(model, port, host):
    """Serve the interactive simulator (JSON API + browser UI)."""
    import uvicorn

    from .server import create_app

    default_source = None
    default_name = None
    if model:
        _load(model)  # fail fast on an invalid model
        with open(model, encoding="utf-8") as fh:
            default_source = fh.read()
        default_name = model
    app = create_app(default_model_source=default_source,
                     default_model_name=default_name)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
