"""MISRA-style C generation: header, implementation, makefile, test driver, docs.

The generated module follows a fixed layout: sized typedefs, a node-label
enum, a `state` struct (one field per context variable plus curr_node and
prev_node), `enter`/`leave`/`init` utilities, and per trigger one permission
function `per_<t>` and one transition function `<t>`.  Transition functions
test arcs in declaration order with early returns, so first-match resolution
is identical to the interpreter's.

The test driver reads trigger names from stdin and prints the state after
every line in the interpreter's trace format, including a shortest
round-trip decimal rendering of real64 fields that is byte-compatible with
Python's `repr`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    Arc,
    Binary,
    BinaryOp,
    Diagram,
    Expr,
    Lit,
    NumericType,
    Unary,
    UnaryOp,
    Value,
    Var,
    arcs_for,
    is_literal_true,
    source_nodes,
    trigger_set,
)

DEFAULT_TYPE_NAMES: dict[NumericType, str] = {
    NumericType.BOOL8: "UC_8",
    NumericType.REAL64: "D_64",
    NumericType.INT32: "I_32",
    NumericType.UINT32: "UI_32",
}

_C_BASE = {
    "UC_8": "unsigned char",
    "D_64": "double",
    "I_32": "int32_t",
    "UI_32": "uint32_t",
}


class CodegenError(Exception):
    pass


@dataclass(frozen=True)
class CodegenConfig:
    base_name: str
    emit_asserts: bool = True
    word_size_map: dict[NumericType, str] = field(
        default_factory=lambda: dict(DEFAULT_TYPE_NAMES))


@dataclass(frozen=True)
class GeneratedBundle:
    base_name: str
    header: str
    impl: str
    makefile: str
    test_driver: str
    doc: str

    def files(self) -> dict[str, str]:
        return {
            f"{self.base_name}.h": self.header,
            f"{self.base_name}.c": self.impl,
            "Makefile": self.makefile,
            f"{self.base_name}_driver.c": self.test_driver,
            f"{self.base_name}.md": self.doc,
        }

    def write_to(self, directory) -> list[str]:
        import os
        os.makedirs(directory, exist_ok=True)
        written = []
        for name, text in self.files().items():
            path = os.path.join(str(directory), name)
            with open(path, "w", encoding="ascii") as fh:
                fh.write(text)
            written.append(path)
        return written


class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.level = 0

    def line(self, text: str = "") -> None:
        self.lines.append("    " * self.level + text if text else "")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# --- Literals and expressions ------------------------------------------------


def render_literal(v: Value) -> str:
    """C spelling of a typed value, with explicit type suffixes."""
    if v.type is NumericType.BOOL8:
        return "true" if v.payload else "false"
    if v.type is NumericType.UINT32:
        return f"{v.payload}U"
    if v.type is NumericType.INT32:
        return str(v.payload)
    # real64: full fractional part, no float suffix (the target type is 64-bit)
    text = repr(float(v.payload))
    return text


def _c_lit(e: Lit) -> str:
    if e.type is None:
        raise CodegenError(f"unresolved literal {e.lexeme or e.payload!r}; "
                           "run the analyzer first")
    if e.lexeme is not None and e.type is not NumericType.BOOL8:
        # keep the author's spelling when it is a valid C constant of the
        # right value (`display < 10` rather than `display < 10.0`)
        if e.type is NumericType.UINT32:
            return e.lexeme + "U"
        if e.type is NumericType.INT32:
            return e.lexeme
        if "." not in e.lexeme and "e" not in e.lexeme and "E" not in e.lexeme:
            # integral lexeme used as a double: C converts exactly while the
            # value fits an int constant
            if abs(int(e.lexeme)) <= 2**31 - 1:
                return e.lexeme
            return render_literal(e.value)
        return e.lexeme
    return render_literal(e.value)


_C_OP = {
    BinaryOp.ADD: "+", BinaryOp.SUB: "-", BinaryOp.MUL: "*", BinaryOp.DIV: "/",
    BinaryOp.LT: "<", BinaryOp.LE: "<=", BinaryOp.GT: ">", BinaryOp.GE: ">=",
    BinaryOp.EQ: "==", BinaryOp.NE: "!=", BinaryOp.AND: "&&", BinaryOp.OR: "||",
}

_C_PREC = {
    BinaryOp.OR: 1, BinaryOp.AND: 2,
    BinaryOp.LT: 4, BinaryOp.LE: 4, BinaryOp.GT: 4, BinaryOp.GE: 4,
    BinaryOp.EQ: 4, BinaryOp.NE: 4,
    BinaryOp.ADD: 5, BinaryOp.SUB: 5,
    BinaryOp.MUL: 6, BinaryOp.DIV: 6,
}
_C_UNARY_PREC = 7


def c_expr(e: Expr, names: dict[str, str] | None = None, parent_prec: int = 0) -> str:
    """Render an expression as C, mapping variables through `names`
    (default: `st-><name>`)."""
    if isinstance(e, Lit):
        return _c_lit(e)
    if isinstance(e, Var):
        if names and e.name in names:
            return names[e.name]
        return f"st->{e.name}"
    if isinstance(e, Unary):
        if e.op is UnaryOp.FLOOR:
            return f"floor({c_expr(e.operand, names)})"
        if e.op is UnaryOp.NOT:
            inner = c_expr(e.operand, names, _C_UNARY_PREC + 1)
            if not isinstance(e.operand, (Lit, Var)):
                inner = f"({c_expr(e.operand, names)})"
            return f"!{inner}"
        inner = c_expr(e.operand, names, _C_UNARY_PREC)
        text = f"-{inner}"
        return f"({text})" if parent_prec > _C_UNARY_PREC else text
    assert isinstance(e, Binary)
    prec = _C_PREC[e.op]
    left = c_expr(e.left, names, prec)
    right = c_expr(e.right, names, prec + 1)
    text = f"{left} {_C_OP[e.op]} {right}"
    return f"({text})" if parent_prec > prec else text


def _expr_vars(e: Expr, acc: set[str]) -> None:
    if isinstance(e, Var):
        acc.add(e.name)
    elif isinstance(e, Unary):
        _expr_vars(e.operand, acc)
    elif isinstance(e, Binary):
        _expr_vars(e.left, acc)
        _expr_vars(e.right, acc)


def _uses_floor(e: Expr) -> bool:
    if isinstance(e, Unary):
        return e.op is UnaryOp.FLOOR or _uses_floor(e.operand)
    if isinstance(e, Binary):
        return _uses_floor(e.left) or _uses_floor(e.right)
    return False


def _diagram_uses_floor(d: Diagram) -> bool:
    for a in d.arcs:
        if _uses_floor(a.guard):
            return True
        for asg in a.action.assignments:
            if _uses_floor(asg.rhs):
                return True
    return False


def _typedef_name(cfg: CodegenConfig, t: NumericType) -> str:
    try:
        return cfg.word_size_map[t]
    except KeyError:
        raise CodegenError(f"no C typedef configured for {t.value}") from None


def _used_types(d: Diagram) -> list[NumericType]:
    used = [NumericType.BOOL8]  # permission functions always need it
    for t in (NumericType.REAL64, NumericType.INT32, NumericType.UINT32):
        if any(v.type is t for v in d.variables):
            used.append(t)
    return used


# --- Header ------------------------------------------------------------------


def emit_header(d: Diagram, cfg: CodegenConfig) -> str:
    w = _Writer()
    guard = f"{cfg.base_name.upper()}_H"
    w.line(f"#ifndef {guard}")
    w.line(f"#define {guard}")
    w.line()
    if cfg.emit_asserts:
        w.line("#include <assert.h>")
    if _diagram_uses_floor(d):
        w.line("#include <math.h>")
    if any(v.type.is_integer for v in d.variables):
        w.line("#include <stdint.h>")
    w.line()
    w.line("#define true (1U)")
    w.line("#define false (0U)")
    w.line()
    for t in _used_types(d):
        name = _typedef_name(cfg, t)
        base = _C_BASE.get(name)
        if base is None:
            raise CodegenError(f"unknown typedef target {name!r}")
        w.line(f"typedef {base} {name};")
    w.line()
    w.line(f"typedef enum {{ {', '.join(d.nodes)} }} node_label;")
    w.line()
    w.line("typedef struct {")
    for v in d.variables:
        w.line(f"    {_typedef_name(cfg, v.type)} {v.name};")
    w.line("    node_label curr_node;")
    w.line("    node_label prev_node;")
    w.line("} state;")
    w.line()
    w.line("void enter(node_label n, state* st);")
    w.line("void leave(node_label n, state* st);")
    w.line()
    w.line("void init(state* st);")
    w.line()
    bool_t = _typedef_name(cfg, NumericType.BOOL8)
    triggers = trigger_set(d)
    for t in triggers:
        w.line(f"{bool_t} per_{t}(const state* st);")
    w.line()
    for t in triggers:
        w.line(f"state {t}(state* st);")
    w.line()
    w.line(f"#endif /* {guard} */")
    return w.text()


# --- Implementation ----------------------------------------------------------


def _node_assert(sources: tuple[str, ...]) -> str:
    return " || ".join(f"st->curr_node == {n}" for n in sources)


def _guard_assert(d: Diagram, trigger: str, sources: tuple[str, ...]) -> str | None:
    """Disjunction-of-guards assert body, or None when trivially true."""
    per_node: list[tuple[str, list[Expr]]] = []
    for n in sources:
        guards = [a.guard for a in arcs_for(d, n, trigger)]
        if any(is_literal_true(g) for g in guards):
            guards = []  # the node's arcs always fire; its term is the node test
        per_node.append((n, guards))
    if all(not gs for _, gs in per_node):
        return None
    if len(per_node) == 1:
        _, guards = per_node[0]
        return " || ".join(c_expr(g, None, 1) for g in guards)
    terms = []
    for n, guards in per_node:
        if not guards:
            terms.append(f"st->curr_node == {n}")
        else:
            disj = " || ".join(c_expr(g, None, 1) for g in guards)
            terms.append(f"(st->curr_node == {n} && ({disj}))")
    return " || ".join(terms)


def _emit_transition_body(w: _Writer, d: Diagram, cfg: CodegenConfig,
                          trigger: str) -> None:
    sources = source_nodes(d, trigger)
    if cfg.emit_asserts:
        w.line(f"    assert({_node_assert(sources)});")
        guard_assert = _guard_assert(d, trigger, sources)
        if guard_assert is not None:
            w.line(f"    assert({guard_assert});")
    for arc in (a for a in d.arcs if a.trigger == trigger):
        guard_c = c_expr(arc.guard, None, 2)  # at && level
        w.line(f"    if ({guard_c} && st->curr_node == {arc.source}) {{")
        _emit_arc_body(w, d, cfg, arc)
        w.line("        return *st;")
        w.line("    }")
    w.line("    return *st;")


def _emit_arc_body(w: _Writer, d: Diagram, cfg: CodegenConfig, arc: Arc) -> None:
    # every right-hand side must read the pre-state: capture any variable
    # that a later assignment reads after an earlier one wrote it
    assignments = arc.action.assignments
    needs_pre: set[str] = set()
    written: set[str] = set()
    for a in assignments:
        rhs_vars: set[str] = set()
        _expr_vars(a.rhs, rhs_vars)
        needs_pre |= rhs_vars & written
        written.add(a.target)
    for v in d.variables:
        if v.name in needs_pre:
            tname = _typedef_name(cfg, v.type)
            w.line(f"        const {tname} pre_{v.name} = st->{v.name};")
    w.line(f"        leave({arc.source}, st);")
    written = set()
    for a in assignments:
        names = {n: f"pre_{n}" for n in written & needs_pre}
        w.line(f"        st->{a.target} = {c_expr(a.rhs, names)};")
        written.add(a.target)
    w.line(f"        enter({arc.target}, st);")
    if cfg.emit_asserts:
        w.line(f"        assert(st->curr_node == {arc.target});")


def emit_impl(d: Diagram, cfg: CodegenConfig) -> str:
    w = _Writer()
    w.line(f'#include "{cfg.base_name}.h"')
    w.line()
    w.line("void enter(node_label n, state* st) {")
    w.line("    st->curr_node = n;")
    w.line("}")
    w.line()
    w.line("void leave(node_label n, state* st) {")
    w.line("    st->prev_node = n;")
    w.line("}")
    w.line()
    w.line("void init(state* st) {")
    for v in d.variables:
        w.line(f"    st->{v.name} = {render_literal(v.initial)};")
    w.line(f"    st->curr_node = {d.initial};")
    w.line(f"    st->prev_node = {d.initial};")
    w.line("}")
    bool_t = _typedef_name(cfg, NumericType.BOOL8)
    triggers = trigger_set(d)
    for t in triggers:
        w.line()
        w.line(f"{bool_t} per_{t}(const state* st) {{")
        for n in source_nodes(d, t):
            w.line(f"    if (st->curr_node == {n}) {{")
            w.line("        return true;")
            w.line("    }")
        w.line("    return false;")
        w.line("}")
    for t in triggers:
        w.line()
        w.line(f"state {t}(state* st) {{")
        _emit_transition_body(w, d, cfg, t)
        w.line("}")
    return w.text()


# --- Makefile ----------------------------------------------------------------


def emit_makefile(d: Diagram, cfg: CodegenConfig) -> str:
    b = cfg.base_name
    return (
        "CC ?= cc\n"
        "CFLAGS ?= -std=c99 -pedantic -Wall -Wextra -Werror -O2\n"
        "LDLIBS = -lm\n"
        "\n"
        f"all: {b}_driver\n"
        "\n"
        f"{b}_driver: {b}.c {b}_driver.c {b}.h\n"
        f"\t$(CC) $(CFLAGS) -o {b}_driver {b}.c {b}_driver.c $(LDLIBS)\n"
        "\n"
        "clean:\n"
        f"\trm -f {b}_driver *.o\n"
        "\n"
        ".PHONY: all clean\n"
    )


# --- Test driver ---------------------------------------------------------------

_FMT_REAL = r"""
static void fmt_real(D_64 v, C_8* out, size_t cap) {
    C_8 sci[40];
    C_8 digits[40];
    int nd = 0;
    int exp10 = 0;
    int prec;
    int i;
    int pos = 0;
    D_64 a;
    if (isnan(v)) {
        (void)snprintf(out, cap, "nan");
        return;
    }
    if (isinf(v)) {
        (void)snprintf(out, cap, "%s", signbit(v) ? "-inf" : "inf");
        return;
    }
    a = fabs(v);
    /* shortest decimal that parses back to the same double */
    for (prec = 0; prec < 17; prec++) {
        (void)snprintf(sci, sizeof sci, "%.*e", prec, a);
        if (strtod(sci, NULL) == a) {
            break;
        }
    }
    for (i = 0; sci[i] != 'e' && sci[i] != '\0'; i++) {
        if (sci[i] != '.') {
            digits[nd] = sci[i];
            nd = nd + 1;
        }
    }
    digits[nd] = '\0';
    if (sci[i] == 'e') {
        exp10 = atoi(&sci[i + 1]);
    }
    if (signbit(v)) {
        out[pos] = '-';
        pos = pos + 1;
    }
    if ((exp10 >= -4) && (exp10 < 16)) {
        if (exp10 >= nd - 1) {
            for (i = 0; i < nd; i++) {
                out[pos] = digits[i];
                pos = pos + 1;
            }
            for (i = 0; i < exp10 - (nd - 1); i++) {
                out[pos] = '0';
                pos = pos + 1;
            }
            out[pos] = '.';
            pos = pos + 1;
            out[pos] = '0';
            pos = pos + 1;
        } else if (exp10 >= 0) {
            for (i = 0; i <= exp10; i++) {
                out[pos] = digits[i];
                pos = pos + 1;
            }
            out[pos] = '.';
            pos = pos + 1;
            for (i = exp10 + 1; i < nd; i++) {
                out[pos] = digits[i];
                pos = pos + 1;
            }
        } else {
            out[pos] = '0';
            pos = pos + 1;
            out[pos] = '.';
            pos = pos + 1;
            for (i = 0; i < (-exp10) - 1; i++) {
                out[pos] = '0';
                pos = pos + 1;
            }
            for (i = 0; i < nd; i++) {
                out[pos] = digits[i];
                pos = pos + 1;
            }
        }
        out[pos] = '\0';
    } else {
        out[pos] = digits[0];
        pos = pos + 1;
        if (nd > 1) {
            out[pos] = '.';
            pos = pos + 1;
            for (i = 1; i < nd; i++) {
                out[pos] = digits[i];
                pos = pos + 1;
            }
        }
        (void)snprintf(&out[pos], cap - (size_t)pos, "e%+03d", exp10);
    }
}
""".strip("\n")


def emit_test_driver(d: Diagram, cfg: CodegenConfig) -> str:
    b = cfg.base_name
    triggers = trigger_set(d)
    has_real = any(v.type is NumericType.REAL64 for v in d.variables)
    w = _Writer()
    w.line("#include <stdio.h>")
    w.line("#include <stdlib.h>")
    w.line("#include <string.h>")
    if has_real:
        w.line("#include <math.h>")
    w.line(f'#include "{b}.h"')
    w.line()
    w.line("typedef char C_8;")
    w.line()
    w.line("static const C_8* node_name(node_label n) {")
    w.line("    switch (n) {")
    for n in d.nodes:
        w.line(f'    case {n}: return "{n}";')
    w.line('    default: return "?";')
    w.line("    }")
    w.line("}")
    if has_real:
        w.line()
        for line in _FMT_REAL.split("\n"):
            w.line(line)
    w.line()
    w.line("static void print_state(const state* st) {")
    fmt_parts = ["%s", "%s"]
    args = ["node_name(st->curr_node)", "node_name(st->prev_node)"]
    buf_count = 0
    for v in d.variables:
        if v.type is NumericType.REAL64:
            buf_count += 1
    for i in range(buf_count):
        w.line(f"    C_8 buf{i}[40];")
    i = 0
    for v in d.variables:
        if v.type is NumericType.REAL64:
            w.line(f"    fmt_real(st->{v.name}, buf{i}, sizeof buf{i});")
            fmt_parts.append(f"{v.name}=%s")
            args.append(f"buf{i}")
            i += 1
        elif v.type is NumericType.INT32:
            fmt_parts.append(f"{v.name}=%ld")
            args.append(f"(long)st->{v.name}")
        elif v.type is NumericType.UINT32:
            fmt_parts.append(f"{v.name}=%lu")
            args.append(f"(unsigned long)st->{v.name}")
        else:
            fmt_parts.append(f"{v.name}=%s")
            args.append(f'(st->{v.name} == true) ? "true" : "false"')
    fmt = ";".join(fmt_parts)
    w.line(f'    (void)printf("{fmt}\\n", {", ".join(args)});')
    w.line("}")
    w.line()
    w.line("int main(void) {")
    w.line("    state st;")
    w.line("    C_8 line[256];")
    w.line("    init(&st);")
    w.line("    print_state(&st);")
    w.line("    while (fgets(line, (int)sizeof line, stdin) != NULL) {")
    w.line("        size_t len = strlen(line);")
    w.line("        while ((len > 0U) && ((line[len - 1U] == '\\n') || (line[len - 1U] == '\\r'))) {")
    w.line("            line[len - 1U] = '\\0';")
    w.line("            len = len - 1U;")
    w.line("        }")
    w.line("        if (line[0] == '\\0') {")
    w.line("            continue;")
    w.line("        }")
    first = True
    for t in triggers:
        kw = "if" if first else "} else if"
        w.line(f'        {kw} (strcmp(line, "{t}") == 0) {{')
        w.line(f"            if (per_{t}(&st) == true) {{")
        w.line(f"                (void){t}(&st);")
        w.line("            }")
        first = False
    if triggers:
        w.line("        } else {")
        w.line('            (void)fprintf(stderr, "unknown trigger: %s\\n", line);')
        w.line("            return 1;")
        w.line("        }")
    else:
        w.line('        (void)fprintf(stderr, "unknown trigger: %s\\n", line);')
        w.line("        return 1;")
    w.line("        print_state(&st);")
    w.line("    }")
    w.line("    return 0;")
    w.line("}")
    return w.text()


# --- Documentation manual ------------------------------------------------------


def emit_docs(d: Diagram, cfg: CodegenConfig) -> str:
    from .parser import format_expr, format_action, format_value

    out = [f"# {d.name}", ""]
    out.append(f"Generated module `{cfg.base_name}` for the `{d.name}` state machine.")
    out.append("")
    out.append("## Nodes")
    out.append("")
    for n in d.nodes:
        marker = " (initial)" if n == d.initial else ""
        out.append(f"- `{n}`{marker}")
    out.append("")
    out.append("## Context variables")
    out.append("")
    if d.variables:
        out.append("| name | type | initial |")
        out.append("| --- | --- | --- |")
        for v in d.variables:
            out.append(f"| `{v.name}` | {v.type.value} | `{format_value(v.initial)}` |")
    else:
        out.append("No context variables.")
    out.append("")
    out.append("## Triggers")
    out.append("")
    triggers = trigger_set(d)
    if not triggers:
        out.append("No triggers.")
    for t in triggers:
        out.append(f"### `{t}`")
        out.append("")
        out.append(f"Functions: `per_{t}` (permission), `{t}` (transition).")
        out.append("")
        out.append("| source | target | guard | action |")
        out.append("| --- | --- | --- | --- |")
        for a in d.arcs:
            if a.trigger == t:
                guard = format_expr(a.guard)
                action = format_action(a.action) or "(none)"
                out.append(f"| `{a.source}` | `{a.target}` | `{guard}` | `{action}` |")
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


# --- Bundle ---------------------------------------------------------------------


def generate_bundle(d: Diagram, cfg: CodegenConfig | None = None) -> GeneratedBundle:
    if cfg is None:
        cfg = CodegenConfig(base_name=d.name)
    return GeneratedBundle(
        base_name=cfg.base_name,
        header=emit_header(d, cfg),
        impl=emit_impl(d, cfg),
        makefile=emit_makefile(d, cfg),
        test_driver=emit_test_driver(d, cfg),
        doc=emit_docs(d, cfg),
    )
