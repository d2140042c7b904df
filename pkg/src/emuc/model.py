"""Core domain types for Emucharts diagrams, expressions, and machine states.

Everything here is an immutable value type with no I/O.  Diagrams are flat
extended state machines: named nodes, typed context variables with initial
values, and arcs labelled ``trigger [guard] {action}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class NumericType(enum.Enum):
    """Machine-level value types, with explicit width and signedness."""

    REAL64 = "real64"
    INT32 = "int32"
    UINT32 = "uint32"
    BOOL8 = "bool8"

    @property
    def is_numeric(self) -> bool:
        return self is not NumericType.BOOL8

    @property
    def is_integer(self) -> bool:
        return self in (NumericType.INT32, NumericType.UINT32)

    @property
    def bits(self) -> int:
        return 64 if self is NumericType.REAL64 else (8 if self is NumericType.BOOL8 else 32)

    @property
    def signed(self) -> bool:
        return self in (NumericType.REAL64, NumericType.INT32)


INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1
UINT32_MAX = 2**32 - 1


def representable(ntype: NumericType, payload) -> bool:
    """True iff ``payload`` is a legal inhabitant of ``ntype``."""
    if ntype is NumericType.BOOL8:
        return isinstance(payload, bool)
    if isinstance(payload, bool):
        return False
    if ntype is NumericType.REAL64:
        return isinstance(payload, (int, float))
    if not isinstance(payload, int):
        return False
    if ntype is NumericType.INT32:
        return INT32_MIN <= payload <= INT32_MAX
    return 0 <= payload <= UINT32_MAX


@dataclass(frozen=True)
class Value:
    """A typed runtime value.  The payload is always representable in `type`."""

    type: NumericType
    payload: float | int | bool

    def __post_init__(self):
        if self.type is NumericType.REAL64 and isinstance(self.payload, int):
            object.__setattr__(self, "payload", float(self.payload))
        if not representable(self.type, self.payload):
            raise ValueError(f"{self.payload!r} is not representable as {self.type.value}")


# --- Expression AST ------------------------------------------------------
#
# Literals parsed from source keep their lexeme so that printers can
# reproduce the author's spelling (``10`` vs ``10.0``).  A literal's type may
# be None right after parsing when the lexeme is integral; the analyzer
# resolves it from context.


@dataclass(frozen=True)
class Lit:
    payload: float | int | bool
    type: NumericType | None
    lexeme: str | None = None

    @property
    def value(self) -> Value:
        if self.type is None:
            raise TypeError(f"literal {self.lexeme or self.payload!r} has unresolved type")
        return Value(self.type, self.payload)


@dataclass(frozen=True)
class Var:
    name: str


class UnaryOp(enum.Enum):
    NEG = "-"
    NOT = "not"
    FLOOR = "floor"


class BinaryOp(enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="
    AND = "and"
    OR = "or"


COMPARISONS = {BinaryOp.LT, BinaryOp.LE, BinaryOp.GT, BinaryOp.GE, BinaryOp.EQ, BinaryOp.NE}
ARITHMETIC = {BinaryOp.ADD, BinaryOp.SUB, BinaryOp.MUL, BinaryOp.DIV}
LOGICAL = {BinaryOp.AND, BinaryOp.OR}


@dataclass(frozen=True)
class Unary:
    op: UnaryOp
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    left: "Expr"
    right: "Expr"


Expr = Lit | Var | Unary | Binary

TRUE = Lit(True, NumericType.BOOL8, "true")
FALSE = Lit(False, NumericType.BOOL8, "false")


def is_literal_true(e: Expr) -> bool:
    return isinstance(e, Lit) and e.payload is True


@dataclass(frozen=True)
class Assignment:
    target: str
    rhs: Expr


@dataclass(frozen=True)
class Action:
    """Ordered assignments; all right-hand sides read the pre-transition state."""

    assignments: tuple[Assignment, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.assignments)


@dataclass(frozen=True)
class ContextVariable:
    name: str
    type: NumericType
    initial: Value

    def __post_init__(self):
        if self.initial.type is not self.type:
            raise ValueError(f"initial value of {self.name} has type "
                             f"{self.initial.type.value}, expected {self.type.value}")


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    trigger: str
    guard: Expr = TRUE
    action: Action = Action()
    # source line in the model file (0 if synthetic); not part of arc identity
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Diagram:
    name: str
    nodes: tuple[str, ...]
    initial: str
    variables: tuple[ContextVariable, ...] = ()
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("diagram needs at least one node")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node labels")
        if self.initial not in self.nodes:
            raise ValueError(f"initial node {self.initial!r} is not declared")
        declared = set(self.nodes)
        for a in self.arcs:
            if a.source not in declared or a.target not in declared:
                raise ValueError(
                    f"arc {a.source!r} -> {a.target!r} uses an undeclared node")

    def variable(self, name: str) -> ContextVariable | None:
        for v in self.variables:
            if v.name == name:
                return v
        return None


@dataclass(frozen=True)
class MachineState:
    """⟨current node, previous node, valuation⟩ of a running diagram."""

    curr: str
    prev: str
    valuation: dict[str, Value] = field(default_factory=dict)


def trigger_set(d: Diagram) -> tuple[str, ...]:
    """Distinct triggers in first-appearance order over the arcs."""
    seen: dict[str, None] = {}
    for a in d.arcs:
        seen.setdefault(a.trigger, None)
    return tuple(seen)


def arcs_for(d: Diagram, node: str, trigger: str) -> tuple[Arc, ...]:
    """All arcs leaving `node` on `trigger`, in declaration order."""
    if node not in d.nodes:
        raise ValueError(f"unknown node {node!r}")
    return tuple(a for a in d.arcs if a.source == node and a.trigger == trigger)


def source_nodes(d: Diagram, trigger: str) -> tuple[str, ...]:
    """Distinct source nodes of the trigger's arcs, in first-appearance order."""
    seen: dict[str, None] = {}
    for a in d.arcs:
        if a.trigger == trigger:
            seen.setdefault(a.source, None)
    return tuple(seen)
