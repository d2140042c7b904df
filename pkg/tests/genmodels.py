"""Seeded random diagram generator for the semantics property suite.

Generated diagrams are always well-typed by construction: guards compare a
variable with a literal of its own type, and actions assign simple
same-typed expressions. Integer arithmetic can still trap on overflow at
run time; callers treat a trap as a (deterministic) step outcome.
"""

import random
import string

from emuc.model import (
    Arc,
    Assignment,
    Action,
    Binary,
    BinaryOp,
    ContextVariable,
    Diagram,
    Lit,
    NumericType,
    Unary,
    UnaryOp,
    Value,
    Var,
)

_TYPES = [NumericType.REAL64, NumericType.INT32,
          NumericType.UINT32, NumericType.BOOL8]
_CMP = [BinaryOp.LT, BinaryOp.LE, BinaryOp.GT, BinaryOp.GE,
        BinaryOp.EQ, BinaryOp.NE]


def _lit(rng: random.Random, t: NumericType) -> Lit:
    if t is NumericType.REAL64:
        x = rng.choice([0.0, 0.1, 0.5, 1.0, 2.5, 10.0, -3.25])
        return Lit(x, t, repr(x))
    if t is NumericType.BOOL8:
        b = rng.choice([True, False])
        return Lit(b, t, "true" if b else "false")
    lo = 0 if t is NumericType.UINT32 else -20
    n = rng.randint(lo, 20)
    return Lit(n, t, str(n))


def _guard(rng: random.Random, variables):
    if not variables or rng.random() < 0.25:
        return Lit(True, NumericType.BOOL8, "true")
    v = rng.choice(variables)
    if v.type is NumericType.BOOL8:
        if rng.random() < 0.5:
            return Var(v.name)
        return Unary(UnaryOp.NOT, Var(v.name))
    return Binary(rng.choice(_CMP), Var(v.name), _lit(rng, v.type))


def _rhs(rng: random.Random, v: ContextVariable, variables):
    t = v.type
    if t is NumericType.BOOL8:
        if rng.random() < 0.5:
            return _lit(rng, t)
        return Unary(UnaryOp.NOT, Var(v.name))
    choice = rng.random()
    if choice < 0.3:
        return _lit(rng, t)
    peers = [w for w in variables if w.type is t]
    other = rng.choice(peers)
    op = rng.choice([BinaryOp.ADD, BinaryOp.SUB]
                    if t is not NumericType.UINT32 else [BinaryOp.ADD])
    if choice < 0.65:
        return Binary(op, Var(other.name), _lit(rng, t))
    return Binary(op, Var(v.name), Var(other.name))


def _action(rng: random.Random, variables) -> Action:
    if not variables or rng.random() < 0.2:
        return Action(())
    k = rng.randint(1, min(2, len(variables)))
    targets = rng.sample(list(variables), k)
    return Action(tuple(
        Assignment(v.name, _rhs(rng, v, variables)) for v in targets))


def random_diagram(seed: int) -> Diagram:
    rng = random.Random(seed)
    n_nodes = rng.randint(1, 4)
    nodes = tuple(string.ascii_lowercase[i] for i in range(n_nodes))
    variables = []
    for i in range(rng.randint(0, 3)):
        t = rng.choice(_TYPES)
        variables.append(ContextVariable(
            f"v{i}", t, Value(t, _lit(rng, t).payload)))
    variables = tuple(variables)
    triggers = [f"t{i}" for i in range(rng.randint(1, 3))]
    arcs = []
    for _ in range(rng.randint(1, 8)):
        arcs.append(Arc(
            source=rng.choice(nodes),
            target=rng.choice(nodes),
            trigger=rng.choice(triggers),
            guard=_guard(rng, variables),
            action=_action(rng, variables),
        ))
    return Diagram(name=f"g{seed}", nodes=nodes, initial=nodes[0],
                   variables=variables, arcs=tuple(arcs))
