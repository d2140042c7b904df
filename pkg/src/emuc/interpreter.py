"""Reference executor of the diagram transition system.

Stepping is a pure function of (diagram, state, trigger).  Real arithmetic is
IEEE-754 binary64 with round-to-nearest-even, i.e. exactly what C `double`
does on the same platform; that is what makes bit-exact differential testing
against compiled code meaningful.  Integer arithmetic traps on overflow and
on division by zero instead of wrapping.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .model import (
    Arc,
    Binary,
    BinaryOp,
    Diagram,
    Expr,
    INT32_MAX,
    INT32_MIN,
    Lit,
    MachineState,
    NumericType,
    UINT32_MAX,
    Unary,
    UnaryOp,
    Value,
    Var,
    arcs_for,
    trigger_set,
)
from .parser import format_value


class EvalError(Exception):
    """Trap: the expression has no defined result (overflow, division by zero)."""

    def __init__(self, message: str, expr: Expr | None = None, arc: Arc | None = None):
        super().__init__(message)
        self.expr = expr
        self.arc = arc


def _int_check(result: int, ntype: NumericType, expr: Expr) -> Value:
    lo, hi = (INT32_MIN, INT32_MAX) if ntype is NumericType.INT32 else (0, UINT32_MAX)
    if not lo <= result <= hi:
        raise EvalError(f"integer overflow: {result} does not fit {ntype.value}", expr)
    return Value(ntype, result)


def _ieee_div(a: float, b: float) -> float:
    if b != 0.0:
        return a / b
    if math.isnan(a) or a == 0.0:
        return math.nan
    sign = math.copysign(1.0, a) * math.copysign(1.0, b)
    return math.copysign(math.inf, sign)


def eval_expr(e: Expr, valuation: dict[str, Value]) -> Value:
    """Evaluate a type-resolved expression under a valuation."""
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        try:
            return valuation[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}", e) from None
    if isinstance(e, Unary):
        if e.op is UnaryOp.NOT:
            v = eval_expr(e.operand, valuation)
            return Value(NumericType.BOOL8, not v.payload)
        if e.op is UnaryOp.FLOOR:
            v = eval_expr(e.operand, valuation)
            x = float(v.payload)
            return Value(NumericType.REAL64, x if not math.isfinite(x) else float(math.floor(x)))
        v = eval_expr(e.operand, valuation)
        if v.type is NumericType.REAL64:
            return Value(NumericType.REAL64, -float(v.payload))
        return _int_check(-int(v.payload), v.type, e)

    assert isinstance(e, Binary)
    op = e.op
    if op is BinaryOp.AND:  # short-circuit, mirroring C &&
        lv = eval_expr(e.left, valuation)
        if not lv.payload:
            return Value(NumericType.BOOL8, False)
        return Value(NumericType.BOOL8, bool(eval_expr(e.right, valuation).payload))
    if op is BinaryOp.OR:
        lv = eval_expr(e.left, valuation)
        if lv.payload:
            return Value(NumericType.BOOL8, True)
        return Value(NumericType.BOOL8, bool(eval_expr(e.right, valuation).payload))

    lv = eval_expr(e.left, valuation)
    rv = eval_expr(e.right, valuation)
    a, b = lv.payload, rv.payload
    if op is BinaryOp.LT:
        return Value(NumericType.BOOL8, a < b)
    if op is BinaryOp.LE:
        return Value(NumericType.BOOL8, a <= b)
    if op is BinaryOp.GT:
        return Value(NumericType.BOOL8, a > b)
    if op is BinaryOp.GE:
        return Value(NumericType.BOOL8, a >= b)
    if op is BinaryOp.EQ:
        return Value(NumericType.BOOL8, a == b)
    if op is BinaryOp.NE:
        return Value(NumericType.BOOL8, a != b)

    ntype = lv.type
    if ntype is NumericType.REAL64:
        a, b = float(a), float(b)
        if op is BinaryOp.ADD:
            return Value(ntype, a + b)
        if op is BinaryOp.SUB:
            return Value(ntype, a - b)
        if op is BinaryOp.MUL:
            return Value(ntype, a * b)
        return Value(ntype, _ieee_div(a, b))
    a, b = int(a), int(b)
    if op is BinaryOp.ADD:
        return _int_check(a + b, ntype, e)
    if op is BinaryOp.SUB:
        return _int_check(a - b, ntype, e)
    if op is BinaryOp.MUL:
        return _int_check(a * b, ntype, e)
    if b == 0:
        raise EvalError("integer division by zero", e)
    q = abs(a) // abs(b)  # C99 division truncates toward zero
    if (a < 0) != (b < 0):
        q = -q
    return _int_check(q, ntype, e)


# --- Transition system ------------------------------------------------------


class StepOutcome(enum.Enum):
    NOT_PERMITTED = "not_permitted"
    GUARD_UNSATISFIED = "guard_unsatisfied"
    FIRED = "fired"


@dataclass
class StepStats:
    """Instrumentation counters over the three step outcomes."""

    counts: dict[StepOutcome, int] = field(
        default_factory=lambda: {o: 0 for o in StepOutcome})
    fired_arcs: dict[int, int] = field(default_factory=dict)  # arc index -> count

    def record(self, d: Diagram, outcome: StepOutcome, arc: Arc | None) -> None:
        self.counts[outcome] += 1
        if arc is not None:
            idx = d.arcs.index(arc)
            self.fired_arcs[idx] = self.fired_arcs.get(idx, 0) + 1


def init(d: Diagram) -> MachineState:
    """Initial state: initial node (as both curr and prev) and declared values."""
    return MachineState(d.initial, d.initial, {v.name: v.initial for v in d.variables})


def permitted(d: Diagram, s: MachineState, t: str) -> bool:
    """True iff the current node has any arc on `t`; guards are not consulted."""
    if t not in trigger_set(d):
        raise ValueError(f"unknown trigger {t!r}")
    return bool(arcs_for(d, s.curr, t))


def step_outcome(d: Diagram, s: MachineState, t: str
                 ) -> tuple[MachineState, StepOutcome, Arc | None]:
    """One small step, also reporting which rule applied."""
    if t not in trigger_set(d):
        raise ValueError(f"unknown trigger {t!r}")
    arcs = arcs_for(d, s.curr, t)
    if not arcs:
        return s, StepOutcome.NOT_PERMITTED, None
    for arc in arcs:  # first guard match in declaration order wins
        try:
            if not eval_expr(arc.guard, s.valuation).payload:
                continue
            # every right-hand side reads the pre-state valuation
            updates = [(a.target, eval_expr(a.rhs, s.valuation))
                       for a in arc.action.assignments]
        except EvalError as exc:
            exc.arc = arc
            raise
        valuation = dict(s.valuation)
        valuation.update(updates)
        return MachineState(arc.target, s.curr, valuation), StepOutcome.FIRED, arc
    return s, StepOutcome.GUARD_UNSATISFIED, None


def step(d: Diagram, s: MachineState, t: str) -> MachineState:
    return step_outcome(d, s, t)[0]


def run(d: Diagram, events: list[str], stats: StepStats | None = None
        ) -> list[MachineState]:
    """Fold `step` over an event sequence; returns [q0, q1, ..., qk]."""
    states = [init(d)]
    for t in events:
        s, outcome, arc = step_outcome(d, states[-1], t)
        if stats is not None:
            stats.record(d, outcome, arc)
        states.append(s)
    return states


# --- Trace format (shared with the generated test driver) -------------------


def format_state(d: Diagram, s: MachineState) -> str:
    """One trace line: `curr;prev;var1=value1;...`, byte-exact with the driver."""
    parts = [s.curr, s.prev]
    parts.extend(f"{v.name}={format_value(s.valuation[v.name])}" for v in d.variables)
    return ";".join(parts)


def format_trace(d: Diagram, states: list[MachineState]) -> str:
    return "\n".join(format_state(d, s) for s in states) + "\n"
