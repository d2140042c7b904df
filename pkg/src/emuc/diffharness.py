"""Differential testing of generated C code against the reference interpreter.

The generated bundle is compiled with a strict warnings-as-errors profile and
driven over seeded random event sequences; the driver's stdout trace is
compared byte-exactly with the interpreter's.  Byte-exactness is achievable
because both sides perform the same binary64 operations in the same order and
print reals with the same shortest round-trip rule.

The default build defines NDEBUG: the generated asserts encode the model
author's idealized-arithmetic expectations (e.g. that a 0.1-stepped display
hits 10 exactly) and are robustness redundancy, not part of the transition
semantics under test.
"""

from __future__ import annotations

import os
import random
import shutil
import subprocess
from dataclasses import dataclass, field

from . import interpreter
from .codegen import GeneratedBundle
from .model import Diagram, trigger_set

DEFAULT_CFLAGS = ["-std=c99", "-pedantic", "-Wall", "-Wextra", "-Werror",
                  "-O2", "-DNDEBUG"]


class BuildError(Exception):
    def __init__(self, message: str, log: str = ""):
        super().__init__(message)
        self.log = log


@dataclass(frozen=True)
class Divergence:
    sequence: int  # index into the sequence list
    step: int  # trace line index (0 = initial state)
    interpreter_line: str
    driver_line: str


@dataclass
class DiffReport:
    sequences_run: int = 0
    divergences: list[Divergence] = field(default_factory=list)
    compiler_log: str = ""
    case_counts: dict[str, int] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return not self.divergences

    def to_dict(self) -> dict:
        return {
            "sequences_run": self.sequences_run,
            "equivalent": self.equivalent,
            "case_counts": self.case_counts,
            "divergences": [
                {"sequence": v.sequence, "step": v.step,
                 "interpreter": v.interpreter_line, "driver": v.driver_line}
                for v in self.divergences
            ],
        }


def resolve_compiler(cc: str | None = None) -> str:
    """Compiler command: explicit arg, then $EMUC_CC, then cc/gcc on PATH."""
    cand = cc or os.environ.get("EMUC_CC")
    if cand:
        return cand
    for name in ("cc", "gcc", "clang"):
        if shutil.which(name):
            return name
    raise BuildError("no C compiler found: set EMUC_CC or install cc/gcc")


def build(bundle: GeneratedBundle, workdir, cc: str | None = None,
          cflags: list[str] | None = None) -> str:
    """Compile the bundle in `workdir`; returns the driver executable path."""
    compiler = resolve_compiler(cc)
    if shutil.which(compiler) is None:
        raise BuildError(f"C compiler {compiler!r} not found")
    bundle.write_to(workdir)
    b = bundle.base_name
    driver = os.path.join(str(workdir), f"{b}_driver")
    cmd = ([compiler] + (cflags if cflags is not None else DEFAULT_CFLAGS)
           + ["-o", driver, f"{b}.c", f"{b}_driver.c", "-lm"])
    proc = subprocess.run(cmd, cwd=str(workdir), capture_output=True, text=True)
    log = proc.stdout + proc.stderr
    if proc.returncode != 0:
        raise BuildError(f"compilation failed (exit {proc.returncode})", log)
    return driver


def gen_sequences(d: Diagram, n: int, length: int, seed: int) -> list[list[str]]:
    """n seeded-uniform trigger sequences of the given length.

    Uniform choice deliberately includes non-permitted triggers and
    permitted-but-unguarded steps, so all three step outcomes get exercised.
    """
    triggers = trigger_set(d)
    if not triggers:
        raise ValueError("diagram has no triggers")
    rng = random.Random(seed)
    return [[triggers[rng.randrange(len(triggers))] for _ in range(length)]
            for _ in range(n)]


def run_driver(driver: str, events: list[str], timeout: float = 60.0
               ) -> tuple[list[str], int]:
    """Feed trigger names to the driver; returns (stdout lines, exit code)."""
    stdin = "".join(t + "\n" for t in events)
    proc = subprocess.run([driver], input=stdin, capture_output=True,
                          text=True, timeout=timeout)
    lines = proc.stdout.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines, proc.returncode


def difftest(d: Diagram, bundle: GeneratedBundle, sequences: list[list[str]],
             workdir=None, cc: str | None = None,
             driver: str | None = None) -> DiffReport:
    """Compare interpreter and compiled-driver traces over the sequences."""
    import tempfile

    report = DiffReport()
    tmp = None
    if driver is None:
        if workdir is None:
            tmp = tempfile.TemporaryDirectory(prefix="emuc-difftest-")
            workdir = tmp.name
        try:
            driver = build(bundle, workdir, cc=cc)
        except BuildError as exc:
            report.compiler_log = exc.log
            raise
    stats = interpreter.StepStats()
    try:
        for idx, events in enumerate(sequences):
            expected = [interpreter.format_state(d, s)
                        for s in interpreter.run(d, events, stats)]
            actual, code = run_driver(driver, events)
            for step in range(max(len(expected), len(actual))):
                e = expected[step] if step < len(expected) else "<missing>"
                a = actual[step] if step < len(actual) else f"<exit {code}>"
                if e != a:
                    report.divergences.append(Divergence(idx, step, e, a))
                    break
            else:
                if code != 0:
                    report.divergences.append(Divergence(
                        idx, len(expected), "<exit 0>", f"<exit {code}>"))
            report.sequences_run += 1
    finally:
        if tmp is not None:
            tmp.cleanup()
    report.case_counts = {o.value: c for o, c in stats.counts.items()}
    return report
