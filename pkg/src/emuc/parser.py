"""Parser for the `.emuc` model format and its guard/action expression grammar.

The model format is line-oriented (see docs/model-format.md):

    diagram minimed
    nodes off, on
    initial off
    var display: real64 = 0.0
    on -> on : click_UP [display < 10] {display := display + 0.1}

Expressions use the precedence ladder (loosest first):
``or`` < ``and`` < ``not`` < comparisons < ``+ -`` < ``* /`` < unary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    Action,
    Arc,
    Assignment,
    Binary,
    BinaryOp,
    ContextVariable,
    Diagram,
    Expr,
    Lit,
    NumericType,
    TRUE,
    Unary,
    UnaryOp,
    Value,
    Var,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")

# Names that would collide with keywords of the model language or with
# identifiers the C generator emits verbatim.
RESERVED = frozenset({
    # model language
    "diagram", "nodes", "initial", "var", "true", "false", "and", "or", "not",
    "floor", "real64", "int32", "uint32", "bool8",
    # C keywords (C99)
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if", "inline",
    "int", "long", "register", "restrict", "return", "short", "signed",
    "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned",
    "void", "volatile", "while",
    # names owned by the generated module
    "state", "node_label", "init", "enter", "leave", "assert", "main",
})

TYPE_NAMES = {
    "real64": NumericType.REAL64,
    "int32": NumericType.INT32,
    "uint32": NumericType.UINT32,
    "bool8": NumericType.BOOL8,
}


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int  # 1-based
    col: int  # 1-based
    end_col: int = 0

    def render(self, filename: str = "<model>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.severity}: {self.message}"


def error(message: str, line: int, col: int, end_col: int = 0) -> ParseDiagnostic:
    return ParseDiagnostic("error", message, line, col, end_col or col)


class ParseError(Exception):
    """Single-diagnostic failure, raised by the expression parser."""

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class ParseFailure(Exception):
    """Model-level failure carrying every collected diagnostic."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics) or "parse failed")
        self.diagnostics = diagnostics


# --- Lexer ----------------------------------------------------------------

_PUNCT = ["&&", "||", "<=", ">=", "==", "!=", ":=", "->", "<", ">", "+", "-",
          "*", "/", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "!"]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "punct" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    """Lex `text`, reporting positions relative to (line, col)."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":  # comment to end of line
            j = text.find("\n", i)
            if j < 0:
                break
            col += j - i
            i = j
            continue
        m = IDENT_RE.match(text, i)
        if m:
            tokens.append(Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = NUMBER_RE.match(text, i)
        if m:
            tokens.append(Token("number", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, line, col))
                col += len(p)
                i += len(p)
                break
        else:
            raise ParseError(error(f"unexpected character {c!r}", line, col))
    tokens.append(Token("eof", "", line, col))
    return tokens


# --- Expression parser (precedence climbing) -------------------------------

_CMP_OPS = {"<": BinaryOp.LT, "<=": BinaryOp.LE, ">": BinaryOp.GT,
            ">=": BinaryOp.GE, "==": BinaryOp.EQ, "=": BinaryOp.EQ,
            "!=": BinaryOp.NE}


class _ExprParser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.cur
        self.pos += 1
        return t

    def expect_punct(self, text: str) -> Token:
        t = self.cur
        if t.kind != "punct" or t.text != text:
            raise ParseError(error(f"expected {text!r}, found {t.text or 'end of input'!r}",
                                   t.line, t.col))
        return self.advance()

    def fail(self, msg: str) -> ParseError:
        t = self.cur
        return ParseError(error(msg, t.line, t.col))

    def parse_or(self) -> Expr:
        e = self.parse_and()
        while self._at_word("or") or self._at_punct("||"):
            self.advance()
            e = Binary(BinaryOp.OR, e, self.parse_and())
        return e

    def parse_and(self) -> Expr:
        e = self.parse_not()
        while self._at_word("and") or self._at_punct("&&"):
            self.advance()
            e = Binary(BinaryOp.AND, e, self.parse_not())
        return e

    def parse_not(self) -> Expr:
        if self._at_word("not") or self._at_punct("!"):
            self.advance()
            return Unary(UnaryOp.NOT, self.parse_not())
        return self.parse_cmp()

    def parse_cmp(self) -> Expr:
        e = self.parse_add()
        t = self.cur
        if t.kind == "punct" and t.text in _CMP_OPS:
            self.advance()
            e = Binary(_CMP_OPS[t.text], e, self.parse_add())
            u = self.cur
            if u.kind == "punct" and u.text in _CMP_OPS:
                raise ParseError(error("comparisons do not chain; use parentheses and 'and'",
                                       u.line, u.col))
        return e

    def parse_add(self) -> Expr:
        e = self.parse_mul()
        while self._at_punct("+") or self._at_punct("-"):
            op = BinaryOp.ADD if self.advance().text == "+" else BinaryOp.SUB
            e = Binary(op, e, self.parse_mul())
        return e

    def parse_mul(self) -> Expr:
        e = self.parse_unary()
        while self._at_punct("*") or self._at_punct("/"):
            op = BinaryOp.MUL if self.advance().text == "*" else BinaryOp.DIV
            e = Binary(op, e, self.parse_unary())
        return e

    def parse_unary(self) -> Expr:
        if self._at_punct("-"):
            self.advance()
            return Unary(UnaryOp.NEG, self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        t = self.cur
        if t.kind == "number":
            self.advance()
            if "." in t.text or "e" in t.text or "E" in t.text:
                return Lit(float(t.text), NumericType.REAL64, t.text)
            return Lit(int(t.text), None, t.text)  # analyzer resolves the type
        if t.kind == "ident":
            if t.text == "true":
                self.advance()
                return Lit(True, NumericType.BOOL8, "true")
            if t.text == "false":
                self.advance()
                return Lit(False, NumericType.BOOL8, "false")
            if t.text == "floor":
                self.advance()
                self.expect_punct("(")
                inner = self.parse_or()
                self.expect_punct(")")
                return Unary(UnaryOp.FLOOR, inner)
            if t.text in ("not", "and", "or"):
                raise self.fail(f"unexpected keyword {t.text!r}")
            self.advance()
            return Var(t.text)
        if t.kind == "punct" and t.text == "(":
            self.advance()
            e = self.parse_or()
            self.expect_punct(")")
            return e
        raise self.fail(f"expected expression, found {t.text or 'end of input'!r}")

    def _at_word(self, w: str) -> bool:
        return self.cur.kind == "ident" and self.cur.text == w

    def _at_punct(self, p: str) -> bool:
        return self.cur.kind == "punct" and self.cur.text == p


def parse_expr(source: str, line: int = 1, col: int = 1) -> Expr:
    """Parse a single expression; raises ParseError with a located diagnostic."""
    p = _ExprParser(tokenize(source, line, col))
    e = p.parse_or()
    if p.cur.kind != "eof":
        raise p.fail(f"unexpected trailing input {p.cur.text!r}")
    return e


def parse_action(source: str, line: int = 1, col: int = 1) -> Action:
    """Parse `x := e; y := e; ...` (semicolon separated, trailing `;` allowed)."""
    p = _ExprParser(tokenize(source, line, col))
    assignments: list[Assignment] = []
    while p.cur.kind != "eof":
        t = p.cur
        if t.kind != "ident":
            raise p.fail("expected assignment target")
        p.advance()
        p.expect_punct(":=")
        rhs = p.parse_or()
        assignments.append(Assignment(t.text, rhs))
        if p._at_punct(";"):
            p.advance()
        elif p.cur.kind != "eof":
            raise p.fail("expected ';' between assignments")
    return Action(tuple(assignments))


# --- Diagram parser ---------------------------------------------------------

_ARC_RE = re.compile(
    r"^\s*(?P<src>[A-Za-z_]\w*)\s*->\s*(?P<tgt>[A-Za-z_]\w*)\s*:\s*(?P<trig>[A-Za-z_]\w*)"
    r"\s*(?:\[(?P<guard>[^\]]*)\])?\s*(?:\{(?P<action>[^}]*)\})?\s*$")


def _check_ident(name: str, what: str, line: int, col: int,
                 diags: list[ParseDiagnostic]) -> bool:
    if not IDENT_RE.fullmatch(name):
        diags.append(error(f"{what} {name!r} is not a valid identifier", line, col))
        return False
    if name in RESERVED:
        diags.append(error(f"{what} {name!r} is a reserved word", line, col))
        return False
    return True


def parse_diagram(source: str) -> Diagram:
    """Parse a full model file.  Raises ParseFailure listing every error."""
    diags: list[ParseDiagnostic] = []
    name: str | None = None
    nodes: list[str] = []
    initial: str | None = None
    variables: list[ContextVariable] = []
    arcs: list[Arc] = []

    lines = source.split("\n")
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].rstrip()
        if not text.strip():
            continue
        stripped = text.strip()
        indent = len(text) - len(text.lstrip()) + 1

        if name is None:
            m = re.fullmatch(r"diagram\s+([A-Za-z_]\w*)", stripped)
            if not m:
                diags.append(error("expected diagram header ('diagram <name>')",
                                   lineno, indent))
                break
            if _check_ident(m.group(1), "diagram name", lineno, indent, diags):
                name = m.group(1)
            continue

        if stripped.startswith("nodes"):
            rest = stripped[len("nodes"):].strip()
            for part in filter(None, (p.strip() for p in rest.split(","))):
                if _check_ident(part, "node", lineno, indent, diags):
                    if part in nodes:
                        diags.append(error(f"duplicate node {part!r}", lineno, indent))
                    else:
                        nodes.append(part)
            continue

        if stripped.startswith("initial"):
            rest = stripped[len("initial"):].strip()
            if initial is not None:
                diags.append(error("initial node declared twice", lineno, indent))
            initial = rest
            continue

        if stripped.startswith("var "):
            m = re.fullmatch(r"var\s+([A-Za-z_]\w*)\s*:\s*(\w+)\s*=\s*(.+)", stripped)
            if not m:
                diags.append(error("malformed variable ('var <name>: <type> = <initial>')",
                                   lineno, indent))
                continue
            vname, tname, init_text = m.groups()
            if not _check_ident(vname, "variable", lineno, indent, diags):
                continue
            ntype = TYPE_NAMES.get(tname)
            if ntype is None:
                diags.append(error(f"unknown type {tname!r}", lineno, indent))
                continue
            if any(v.name == vname for v in variables):
                diags.append(error(f"duplicate variable {vname!r}", lineno, indent))
                continue
            try:
                lit = parse_expr(init_text, lineno, indent)
            except ParseError as exc:
                diags.append(exc.diagnostic)
                continue
            value = _initial_value(lit, ntype)
            if value is None:
                diags.append(error(f"initial value of {vname!r} must be a "
                                   f"{ntype.value} literal", lineno, indent))
                continue
            variables.append(ContextVariable(vname, ntype, value))
            continue

        if "->" in stripped:
            m = _ARC_RE.match(text)
            if not m:
                diags.append(error("malformed arc ('src -> tgt : trigger [guard] {action}')",
                                   lineno, indent))
                continue
            src, tgt, trig = m.group("src"), m.group("tgt"), m.group("trig")
            ok = _check_ident(trig, "trigger", lineno, indent, diags)
            guard: Expr = TRUE
            action = Action()
            try:
                if m.group("guard") is not None:
                    guard = parse_expr(m.group("guard"), lineno, text.index("[") + 2)
                if m.group("action") is not None:
                    action = parse_action(m.group("action"), lineno, text.index("{") + 2)
            except ParseError as exc:
                diags.append(exc.diagnostic)
                continue
            if ok:
                arcs.append(Arc(src, tgt, trig, guard, action, line=lineno))
            continue

        diags.append(error(f"unrecognized line {stripped!r}", lineno, indent))

    if name is None and not diags:
        diags.append(error("expected diagram header", max(len(lines), 1), 1))
    if name is not None:
        if not nodes:
            diags.append(error("no nodes declared", 1, 1))
        if initial is None:
            diags.append(error("no initial node declared", 1, 1))
        elif nodes and initial not in nodes:
            diags.append(error(f"unknown initial node {initial!r}", 1, 1))
        node_set = set(nodes)
        for a in arcs:
            for endpoint in (a.source, a.target):
                if endpoint not in node_set:
                    diags.append(error(f"arc references undeclared node {endpoint!r}",
                                       a.line, 1))

    if diags:
        raise ParseFailure(diags)
    assert name is not None and initial is not None
    return Diagram(name, tuple(nodes), initial, tuple(variables), tuple(arcs))


def _initial_value(e: Expr, ntype: NumericType) -> Value | None:
    """Constant-fold a (possibly negated) literal into a typed initial Value."""
    negate = False
    while isinstance(e, Unary) and e.op is UnaryOp.NEG:
        negate = not negate
        e = e.operand
    if not isinstance(e, Lit):
        return None
    payload = e.payload
    if isinstance(payload, bool):
        if negate or ntype is not NumericType.BOOL8:
            return None
        return Value(ntype, payload)
    if ntype is NumericType.BOOL8:
        return None
    if negate:
        payload = -payload
    if ntype is NumericType.REAL64:
        return Value(ntype, float(payload))
    if isinstance(payload, float):
        return None
    try:
        return Value(ntype, payload)
    except ValueError:
        return None


# --- Printers ---------------------------------------------------------------

_PREC = {
    BinaryOp.OR: 1, BinaryOp.AND: 2,
    BinaryOp.LT: 4, BinaryOp.LE: 4, BinaryOp.GT: 4, BinaryOp.GE: 4,
    BinaryOp.EQ: 4, BinaryOp.NE: 4,
    BinaryOp.ADD: 5, BinaryOp.SUB: 5,
    BinaryOp.MUL: 6, BinaryOp.DIV: 6,
}
_NOT_PREC = 3
_UNARY_PREC = 7


def format_expr(e: Expr, parent_prec: int = 0) -> str:
    """Render an expression in model syntax with minimal parentheses."""
    if isinstance(e, Lit):
        if e.lexeme is not None:
            return e.lexeme
        if isinstance(e.payload, bool):
            return "true" if e.payload else "false"
        return repr(e.payload)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op is UnaryOp.FLOOR:
            return f"floor({format_expr(e.operand)})"
        if e.op is UnaryOp.NOT:
            text = f"not {format_expr(e.operand, _NOT_PREC)}"
            return f"({text})" if parent_prec > _NOT_PREC else text
        text = f"-{format_expr(e.operand, _UNARY_PREC)}"
        return f"({text})" if parent_prec > _UNARY_PREC else text
    assert isinstance(e, Binary)
    prec = _PREC[e.op]
    # comparisons are non-associative: parenthesize any nested comparison
    lmin = prec + 1 if e.op in _CMP_SET else prec
    left = format_expr(e.left, lmin)
    right = format_expr(e.right, prec + 1)
    text = f"{left} {e.op.value} {right}"
    return f"({text})" if parent_prec > prec else text


_CMP_SET = {BinaryOp.LT, BinaryOp.LE, BinaryOp.GT, BinaryOp.GE, BinaryOp.EQ, BinaryOp.NE}


def format_action(action: Action) -> str:
    return "; ".join(f"{a.target} := {format_expr(a.rhs)}" for a in action.assignments)


def format_value(v: Value) -> str:
    if v.type is NumericType.BOOL8:
        return "true" if v.payload else "false"
    if v.type is NumericType.REAL64:
        return repr(float(v.payload))
    return str(v.payload)


def format_diagram(d: Diagram) -> str:
    """Render a Diagram back to model syntax (round-trips through parse_diagram)."""
    out = [f"diagram {d.name}", ""]
    out.append("nodes " + ", ".join(d.nodes))
    out.append(f"initial {d.initial}")
    if d.variables:
        out.append("")
        for v in d.variables:
            out.append(f"var {v.name}: {v.type.value} = {format_value(v.initial)}")
    if d.arcs:
        out.append("")
        for a in d.arcs:
            line = f"{a.source} -> {a.target} : {a.trigger}"
            if not is_lit_true(a.guard):
                line += f" [{format_expr(a.guard)}]"
            if a.action:
                line += " {" + format_action(a.action) + "}"
            out.append(line)
    return "\n".join(out) + "\n"


def is_lit_true(e: Expr) -> bool:
    return isinstance(e, Lit) and e.payload is True
