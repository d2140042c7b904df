"""Static validation of parsed diagrams.

Three analyses:

* ``type_check`` / ``resolve`` -- assigns concrete types to integral literals
  from context and reports every type-rule violation.
* ``check_structure`` -- reachability, duplicate arcs, name collisions.
* ``check_guard_exclusivity`` -- a sampling-based falsifier for the assumption
  that guards on a shared (node, trigger) pair are mutually exclusive.  It can
  find overlaps, not prove their absence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import replace

from .interpreter import EvalError, eval_expr
from .model import (
    Action,
    Arc,
    Assignment,
    Binary,
    BinaryOp,
    COMPARISONS,
    ARITHMETIC,
    Diagram,
    Expr,
    INT32_MAX,
    INT32_MIN,
    Lit,
    NumericType,
    UINT32_MAX,
    Unary,
    UnaryOp,
    Value,
    Var,
)
from .parser import ParseDiagnostic, format_expr, format_value

_NUM = NumericType
_BOOL = NumericType.BOOL8


class AnalysisError(Exception):
    """Raised by `resolve` when the diagram has error-severity diagnostics."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


class _Typer:
    def __init__(self, env: dict[str, NumericType]):
        self.env = env
        self.diags: list[ParseDiagnostic] = []

    def err(self, msg: str, line: int) -> None:
        self.diags.append(ParseDiagnostic("error", msg, line, 1))

    def peek(self, e: Expr) -> NumericType | None:
        """Best-effort type without context; None for unresolved int literals."""
        if isinstance(e, Lit):
            return e.type
        if isinstance(e, Var):
            return self.env.get(e.name)
        if isinstance(e, Unary):
            if e.op is UnaryOp.NOT:
                return _BOOL
            if e.op is UnaryOp.FLOOR:
                return _NUM.REAL64
            return self.peek(e.operand)
        if e.op in ARITHMETIC:
            return self.peek(e.left) or self.peek(e.right)
        return _BOOL

    def resolve(self, e: Expr, expected: NumericType | None, line: int) -> Expr:
        """Return a copy of `e` with literal types resolved; records errors."""
        if isinstance(e, Lit):
            return self._resolve_lit(e, expected, line)
        if isinstance(e, Var):
            t = self.env.get(e.name)
            if t is None:
                self.err(f"undeclared variable {e.name!r}", line)
            elif expected is not None and t is not expected:
                self.err(f"variable {e.name!r} has type {t.value}, "
                         f"expected {expected.value}", line)
            return e
        if isinstance(e, Unary):
            return self._resolve_unary(e, expected, line)
        return self._resolve_binary(e, expected, line)

    def _resolve_lit(self, e: Lit, expected: NumericType | None, line: int) -> Lit:
        if e.type is _BOOL:
            if expected is not None and expected is not _BOOL:
                self.err(f"boolean literal where {expected.value} expected", line)
            return e
        if e.type is _NUM.REAL64:
            if expected is not None and expected is not _NUM.REAL64:
                self.err(f"real literal {e.lexeme or e.payload} where "
                         f"{expected.value} expected", line)
            return e
        # integral lexeme: adopt the contextual type
        target = expected if expected is not None else _NUM.INT32
        if target is _BOOL:
            self.err(f"numeric literal {e.lexeme or e.payload} where bool8 expected", line)
            return e
        payload: int | float = e.payload
        if target is _NUM.REAL64:
            payload = float(payload)
        else:
            lo, hi = ((INT32_MIN, INT32_MAX) if target is _NUM.INT32
                      else (0, UINT32_MAX))
            if not lo <= int(payload) <= hi:
                self.err(f"literal {e.payload} is out of range for {target.value}", line)
                return e
        return Lit(payload, target, e.lexeme)

    def _resolve_unary(self, e: Unary, expected: NumericType | None, line: int) -> Expr:
        if e.op is UnaryOp.NOT:
            if expected is not None and expected is not _BOOL:
                self.err(f"'not' yields bool8, expected {expected.value}", line)
            return Unary(e.op, self.resolve(e.operand, _BOOL, line))
        if e.op is UnaryOp.FLOOR:
            if expected is not None and expected is not _NUM.REAL64:
                self.err(f"'floor' yields real64, expected {expected.value}", line)
            return Unary(e.op, self.resolve(e.operand, _NUM.REAL64, line))
        # negation
        t = expected if expected is not None else self.peek(e.operand) or _NUM.INT32
        if t is _BOOL:
            self.err("cannot negate a boolean", line)
            t = _NUM.INT32
        if t is _NUM.UINT32:
            self.err("cannot negate a uint32 expression", line)
        return Unary(e.op, self.resolve(e.operand, t, line))

    def _resolve_binary(self, e: Binary, expected: NumericType | None, line: int) -> Expr:
        if e.op in (BinaryOp.AND, BinaryOp.OR):
            if expected is not None and expected is not _BOOL:
                self.err(f"'{e.op.value}' yields bool8, expected {expected.value}", line)
            return Binary(e.op, self.resolve(e.left, _BOOL, line),
                          self.resolve(e.right, _BOOL, line))
        if e.op in COMPARISONS:
            if expected is not None and expected is not _BOOL:
                self.err(f"comparison yields bool8, expected {expected.value}", line)
            t = self.peek(e.left) or self.peek(e.right) or _NUM.INT32
            if t is _BOOL:
                self.err("comparisons take numeric operands", line)
                t = _NUM.INT32
            return Binary(e.op, self.resolve(e.left, t, line),
                          self.resolve(e.right, t, line))
        # arithmetic
        if expected is _BOOL:
            self.err(f"numeric expression where bool8 expected", line)
            expected = None
        t = expected or self.peek(e.left) or self.peek(e.right) or _NUM.INT32
        return Binary(e.op, self.resolve(e.left, t, line),
                      self.resolve(e.right, t, line))


def _type_env(d: Diagram) -> dict[str, NumericType]:
    return {v.name: v.type for v in d.variables}


def resolve_with_diagnostics(d: Diagram) -> tuple[Diagram, list[ParseDiagnostic]]:
    """Type-check and return a diagram whose literals all carry concrete types."""
    typer = _Typer(_type_env(d))
    arcs: list[Arc] = []
    for arc in d.arcs:
        guard = typer.resolve(arc.guard, _BOOL, arc.line)
        seen: set[str] = set()
        assignments: list[Assignment] = []
        for a in arc.action.assignments:
            if a.target in seen:
                typer.err(f"variable {a.target!r} assigned twice in one action", arc.line)
            seen.add(a.target)
            var = d.variable(a.target)
            if var is None:
                typer.err(f"assignment to undeclared variable {a.target!r}", arc.line)
                assignments.append(a)
                continue
            assignments.append(Assignment(a.target, typer.resolve(a.rhs, var.type, arc.line)))
        arcs.append(replace(arc, guard=guard, action=Action(tuple(assignments))))
    return replace(d, arcs=tuple(arcs)), typer.diags


def type_check(d: Diagram) -> list[ParseDiagnostic]:
    """Diagnostics only; empty iff the diagram is well-typed."""
    return resolve_with_diagnostics(d)[1]


def resolve(d: Diagram) -> Diagram:
    """Typed copy of `d`; raises AnalysisError if it is not well-typed."""
    typed, diags = resolve_with_diagnostics(d)
    errors = [x for x in diags if x.severity == "error"]
    if errors:
        raise AnalysisError(errors)
    return typed


# --- Structural checks -------------------------------------------------------


def check_structure(d: Diagram) -> list[ParseDiagnostic]:
    diags: list[ParseDiagnostic] = []

    # cross-namespace collisions would collide in the generated C module
    names: dict[str, str] = {n: "node" for n in d.nodes}
    for v in d.variables:
        if v.name in names:
            diags.append(ParseDiagnostic(
                "error", f"variable {v.name!r} collides with a {names[v.name]}", 1, 1))
        names[v.name] = "variable"
    for a in d.arcs:
        kind = names.get(a.trigger)
        if kind is not None and kind != "trigger":
            diags.append(ParseDiagnostic(
                "error", f"trigger {a.trigger!r} collides with a {kind}", a.line, 1))
        names[a.trigger] = "trigger"

    # reachability from the initial node, ignoring guards
    reachable = {d.initial}
    frontier = [d.initial]
    out: dict[str, list[str]] = {}
    for a in d.arcs:
        out.setdefault(a.source, []).append(a.target)
    while frontier:
        n = frontier.pop()
        for m in out.get(n, ()):
            if m not in reachable:
                reachable.add(m)
                frontier.append(m)
    for n in d.nodes:
        if n not in reachable:
            diags.append(ParseDiagnostic("error", f"unreachable node {n!r}", 1, 1))

    # duplicate (source, trigger, identical guard) arcs
    seen_arcs: dict[tuple, int] = {}
    for a in d.arcs:
        key = (a.source, a.trigger, a.guard)
        if key in seen_arcs:
            diags.append(ParseDiagnostic(
                "error",
                f"duplicate arc from {a.source!r} on {a.trigger!r} with identical "
                f"guard (first at line {seen_arcs[key]})", a.line, 1))
        else:
            seen_arcs[key] = a.line

    # informational: triggers with no arcs from some reachable node
    from .model import trigger_set
    for t in trigger_set(d):
        sources = {a.source for a in d.arcs if a.trigger == t}
        missing = [n for n in d.nodes if n in reachable and n not in sources]
        if missing:
            diags.append(ParseDiagnostic(
                "warning",
                f"trigger {t!r} has no arcs from reachable node(s) "
                f"{', '.join(missing)} (idle there)", 1, 1))
    return diags


# --- Guard exclusivity (sampling-based falsifier) ----------------------------


def _guard_literals(e: Expr, acc: list[float | int]) -> None:
    if isinstance(e, Lit) and not isinstance(e.payload, bool):
        acc.append(e.payload)
    elif isinstance(e, Unary):
        _guard_literals(e.operand, acc)
    elif isinstance(e, Binary):
        _guard_literals(e.left, acc)
        _guard_literals(e.right, acc)


def _candidates(var, literals: list[float | int], samples_per_var: int,
                rng: random.Random) -> list[Value]:
    import math
    t = var.type
    if t is _BOOL:
        return [var.initial, Value(_BOOL, True), Value(_BOOL, False)]
    values: list = [var.initial.payload]
    if t is _NUM.REAL64:
        for lit in literals:
            x = float(lit)
            values.extend([x, math.nextafter(x, math.inf), math.nextafter(x, -math.inf),
                           x + 1.0, x - 1.0])
        lo = min([float(x) for x in literals], default=0.0) - 10.0
        hi = max([float(x) for x in literals], default=0.0) + 10.0
        values.extend(rng.uniform(lo, hi) for _ in range(samples_per_var))
        out, seen = [], set()
        for x in values:
            if x not in seen:
                seen.add(x)
                out.append(Value(t, float(x)))
        return out
    lo_t, hi_t = ((INT32_MIN, INT32_MAX) if t is _NUM.INT32 else (0, UINT32_MAX))
    for lit in literals:
        n = int(lit)
        values.extend([n, n + 1, n - 1])
    span_lo = min([int(x) for x in literals], default=0) - 10
    span_hi = max([int(x) for x in literals], default=0) + 10
    values.extend(rng.randint(max(lo_t, span_lo), min(hi_t, max(span_hi, span_lo)))
                  for _ in range(samples_per_var))
    out, seen = [], set()
    for n in values:
        n = int(n)
        if lo_t <= n <= hi_t and n not in seen:
            seen.add(n)
            out.append(Value(t, n))
    return out


_MAX_JOINT = 20000


def check_guard_exclusivity(d: Diagram, samples_per_var: int = 16,
                            seed: int = 0) -> list[ParseDiagnostic]:
    """Search for valuations satisfying two guards of one (node, trigger) pair.

    Best-effort: absence of warnings is not a proof of exclusivity.
    Deterministic for fixed (d, samples_per_var, seed).
    """
    typed = resolve(d)
    rng = random.Random(seed)
    diags: list[ParseDiagnostic] = []

    groups: dict[tuple[str, str], list[Arc]] = {}
    for a in typed.arcs:
        groups.setdefault((a.source, a.trigger), []).append(a)

    for (node, trig), arcs in groups.items():
        if len(arcs) < 2:
            continue
        literals: list[float | int] = []
        for a in arcs:
            _guard_literals(a.guard, literals)
        per_var = [
            _candidates(v, literals, samples_per_var, rng) for v in typed.variables
        ]
        total = 1
        for c in per_var:
            total *= len(c)
        if total <= _MAX_JOINT:
            joint = itertools.product(*per_var)
        else:
            joint = ([rng.choice(c) for c in per_var] for _ in range(_MAX_JOINT))

        names = [v.name for v in typed.variables]
        reported: set[tuple[int, int]] = set()
        for combo in joint:
            valuation = dict(zip(names, combo))
            sat = []
            for i, a in enumerate(arcs):
                try:
                    if eval_expr(a.guard, valuation).payload:
                        sat.append(i)
                except EvalError:
                    continue
            for i, j in itertools.combinations(sat, 2):
                if (i, j) in reported:
                    continue
                reported.add((i, j))
                witness = ", ".join(
                    f"{n} = {format_value(valuation[n])}" for n in names) or "(empty)"
                diags.append(ParseDiagnostic(
                    "warning",
                    f"guards of arcs at lines {arcs[i].line} and {arcs[j].line} "
                    f"(node {node!r}, trigger {trig!r}) overlap: both hold at "
                    f"{witness}; declaration order decides which fires",
                    arcs[j].line, 1))
            if len(reported) == len(arcs) * (len(arcs) - 1) // 2:
                break
    return diags


def check(d: Diagram, samples_per_var: int = 16, seed: int = 0
          ) -> list[ParseDiagnostic]:
    """Full analysis: types, structure, and guard exclusivity."""
    diags = type_check(d)
    diags.extend(check_structure(d))
    if not any(x.severity == "error" for x in diags):
        diags.extend(check_guard_exclusivity(d, samples_per_var, seed))
    return diags


def accepted(diags: list[ParseDiagnostic]) -> bool:
    return not any(x.severity == "error" for x in diags)
