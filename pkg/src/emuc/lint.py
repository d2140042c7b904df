"""Lexical checks for generated (or foreign) C text.

Two surfaces: the header-structure grammar (section presence and order) and
the named MISRA-subset rules:

* R1: no `goto`.
* R2: integer literals used next to unsigned-typed operands must carry a `U`
  suffix (heuristic, line-level).
* R3: declarations use the sized typedefs; bare `char`/`double` may appear
  only on typedef lines.

This is a token-stream analysis, not a C parser; the intended input is
machine-generated code, foreign input is best-effort.
"""

from __future__ import annotations

import re

from .parser import ParseDiagnostic

UNSIGNED_TYPEDEFS = ("UC_8", "UI_32", "size_t")


def _strip_comments_and_strings(source: str) -> str:
    """Blank out comments, string literals, and char literals, keeping layout."""
    out = []
    i = 0
    n = len(source)
    mode = "code"
    while i < n:
        c = source[i]
        if mode == "code":
            if source.startswith("/*", i):
                mode = "block"
                out.append("  ")
                i += 2
                continue
            if source.startswith("//", i):
                mode = "line"
                out.append("  ")
                i += 2
                continue
            if c == '"':
                mode = "str"
                out.append(" ")
                i += 1
                continue
            if c == "'":
                mode = "chr"
                out.append(" ")
                i += 1
                continue
            out.append(c)
        elif mode == "block":
            if source.startswith("*/", i):
                mode = "code"
                out.append("  ")
                i += 2
                continue
            out.append("\n" if c == "\n" else " ")
        elif mode == "line":
            if c == "\n":
                mode = "code"
                out.append("\n")
            else:
                out.append(" ")
        else:  # str / chr
            if c == "\\" and i + 1 < n:
                out.append("  ")
                i += 2
                continue
            if (mode == "str" and c == '"') or (mode == "chr" and c == "'"):
                mode = "code"
                out.append(" ")
            else:
                out.append("\n" if c == "\n" else " ")
        i += 1
    return "".join(out)


# --- Header grammar (section presence and order) ----------------------------

_SECTIONS = [
    "preprocessor_directives",
    "constant_definitions",
    "typedef_definitions",
    "state_labels_enum",
    "state_structure",
    "utility_functions",
    "init_function",
    "permission_functions",
    "transition_functions",
]
_RANK = {name: i for i, name in enumerate(_SECTIONS)}

_SCALAR_TYPEDEF_RE = re.compile(r"^typedef\s+(?!enum\b)(?!struct\b)[\w\s*]+;\s*$")
_ENUM_RE = re.compile(r"^typedef\s+enum\b.*node_label\s*;\s*$")
_STRUCT_OPEN_RE = re.compile(r"^typedef\s+struct\b")
_UTILITY_RE = re.compile(r"^void\s+(enter|leave)\s*\(\s*node_label\b.*\)\s*;\s*$")
_INIT_RE = re.compile(r"^void\s+init\s*\(\s*state\s*\*\s*\w+\s*\)\s*;\s*$")
_PERMISSION_RE = re.compile(r"^\w+\s+per_\w+\s*\(\s*const\s+state\s*\*\s*\w+\s*\)\s*;\s*$")
_TRANSITION_RE = re.compile(r"^state\s+(\w+)\s*\(\s*state\s*\*\s*\w+\s*\)\s*;\s*$")


def check_header_grammar(header: str) -> list[ParseDiagnostic]:
    """Verify the fixed header layout: sections present and in order."""
    diags: list[ParseDiagnostic] = []
    seen: dict[str, int] = {}
    max_rank = -1
    max_section = None
    in_struct = False

    def classify(line: str) -> str | None:
        nonlocal in_struct
        if in_struct:
            if re.search(r"}\s*state\s*;", line):
                in_struct = False
            return "state_structure"
        if line.startswith("#"):
            if line.startswith(("#endif", "#else", "#elif")):
                return None  # guard closers may legally trail everything
            if line.startswith("#define") and not line.rstrip().endswith("_H"):
                return "constant_definitions"
            return "preprocessor_directives"
        if _ENUM_RE.match(line):
            return "state_labels_enum"
        if _STRUCT_OPEN_RE.match(line):
            if not re.search(r"}\s*state\s*;", line):
                in_struct = True
            return "state_structure"
        if _SCALAR_TYPEDEF_RE.match(line):
            return "typedef_definitions"
        if _UTILITY_RE.match(line):
            return "utility_functions"
        if _INIT_RE.match(line):
            return "init_function"
        if _PERMISSION_RE.match(line):
            return "permission_functions"
        if _TRANSITION_RE.match(line):
            return "transition_functions"
        return "unknown"

    clean = _strip_comments_and_strings(header)
    for lineno, raw in enumerate(clean.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        section = classify(line)
        if section is None:
            continue
        if section == "unknown":
            diags.append(ParseDiagnostic(
                "warning", f"unrecognized header line: {raw.strip()!r}", lineno, 1))
            continue
        rank = _RANK[section]
        seen.setdefault(section, lineno)
        if rank < max_rank and section != max_section:
            diags.append(ParseDiagnostic(
                "error",
                f"section {section} appears after {max_section}", lineno, 1))
        if rank > max_rank:
            max_rank = rank
            max_section = section

    required = ["preprocessor_directives", "typedef_definitions",
                "state_labels_enum", "state_structure", "utility_functions",
                "init_function"]
    for section in required:
        if section not in seen:
            diags.append(ParseDiagnostic(
                "error", f"missing header section: {section}", 1, 1))
    return diags


# --- MISRA-subset rules -------------------------------------------------------

_INT_LIT_RE = re.compile(r"(?<![\w.])(\d+)(?![\w.])")


def _unsigned_identifiers(clean: str) -> set[str]:
    """Identifiers declared with an unsigned sized typedef (or size_t)."""
    found: set[str] = set()
    decl = re.compile(
        r"\b(?:%s)\s+\**([A-Za-z_]\w*)" % "|".join(UNSIGNED_TYPEDEFS))
    for m in decl.finditer(clean):
        found.add(m.group(1))
    return found


def check_rules(source: str, extra_unsigned: set[str] | None = None
                ) -> list[ParseDiagnostic]:
    """Token-level MISRA-subset checks; see the module docstring for the rules."""
    diags: list[ParseDiagnostic] = []
    clean = _strip_comments_and_strings(source)
    unsigned_ids = _unsigned_identifiers(clean) | (extra_unsigned or set())

    in_typedef_block = False
    for lineno, line in enumerate(clean.split("\n"), start=1):
        stripped = line.strip()
        if not stripped:
            continue

        if re.search(r"\bgoto\b", line):
            col = line.index("goto") + 1
            diags.append(ParseDiagnostic(
                "error", "R1: use of 'goto' is barred", lineno, col))

        is_typedef = stripped.startswith("typedef") or in_typedef_block
        if stripped.startswith("typedef") and "{" in stripped and "}" not in stripped:
            in_typedef_block = True
        elif in_typedef_block and "}" in stripped:
            in_typedef_block = False
        if not is_typedef:
            for m in re.finditer(r"\b(double|char)\b", line):
                diags.append(ParseDiagnostic(
                    "error",
                    f"R3: bare '{m.group(1)}' outside the typedef block; "
                    "use a sized typedef", lineno, m.start() + 1))

        line_idents = set(re.findall(r"[A-Za-z_]\w*", line))
        if line_idents & unsigned_ids:
            for m in _INT_LIT_RE.finditer(line):
                diags.append(ParseDiagnostic(
                    "error",
                    f"R2: unsuffixed integer literal {m.group(1)} in an "
                    "unsigned context (expected 'U' suffix)", lineno, m.start() + 1))
    return diags


def check_bundle(bundle) -> dict[str, list[ParseDiagnostic]]:
    """Run the grammar check on the header and the rule checks on all C files."""
    header_ids = _unsigned_identifiers(_strip_comments_and_strings(bundle.header))
    return {
        f"{bundle.base_name}.h": (check_header_grammar(bundle.header)
                                  + check_rules(bundle.header)),
        f"{bundle.base_name}.c": check_rules(bundle.impl, header_ids),
        f"{bundle.base_name}_driver.c": check_rules(bundle.test_driver, header_ids),
    }
