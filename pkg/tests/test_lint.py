"""Header-grammar and coding-rule checks on generated and mutated C text."""

from conftest import corpus_paths, load
from emuc import lint
from emuc.codegen import generate_bundle


def _bundle(path):
    return generate_bundle(load(path))


class TestHeaderGrammar:
    def test_whole_corpus_headers_are_clean(self):
        for path in corpus_paths():
            diags = lint.check_header_grammar(_bundle(path).header)
            assert diags == [], (path.name, [d.message for d in diags])

    def test_reordered_sections_detected(self, minimed):
        header = generate_bundle(minimed).header
        lines = header.splitlines(keepends=True)
        enum = [l for l in lines if "node_label;" in l][0]
        moved = [l for l in lines if l is not enum]
        moved.append(enum)  # enum now trails the function prototypes
        diags = lint.check_header_grammar("".join(moved))
        assert any("appears after" in d.message for d in diags)

    def test_missing_init_detected(self, minimed):
        header = generate_bundle(minimed).header
        broken = header.replace("void init(state* st);\n", "")
        diags = lint.check_header_grammar(broken)
        assert any("missing header section: init_function" in d.message
                   for d in diags)

    def test_foreign_lines_warned_not_errored(self, minimed):
        header = generate_bundle(minimed).header
        patched = header.replace(
            "void init(state* st);",
            "void init(state* st);\nint helper(int x);")
        diags = lint.check_header_grammar(patched)
        assert diags and all(d.severity == "warning" for d in diags)


class TestRules:
    def test_whole_corpus_bundles_are_clean(self):
        for path in corpus_paths():
            for fname, diags in lint.check_bundle(_bundle(path)).items():
                errors = [d for d in diags if d.severity == "error"]
                assert errors == [], (path.name, fname,
                                      [d.message for d in errors])

    def test_goto_flagged(self):
        diags = lint.check_rules("void f(void) { goto end; end: return; }\n")
        assert len(diags) == 1
        assert "R1" in diags[0].message

    def test_goto_in_comment_or_string_ignored(self):
        ok = 'void f(void) { /* goto */ puts("goto"); }\n'
        assert lint.check_rules(ok) == []

    def test_bare_double_flagged(self):
        diags = lint.check_rules("double x = 1.0;\n")
        assert any("R3" in d.message and "double" in d.message for d in diags)

    def test_bare_char_flagged_outside_typedef(self):
        assert lint.check_rules("char c;\n")
        assert lint.check_rules("typedef char C_8;\n") == []

    def test_unsuffixed_literal_in_unsigned_context(self):
        src = "UI_32 n;\nn = n + 1;\n"
        diags = lint.check_rules(src)
        assert any("R2" in d.message for d in diags)
        assert lint.check_rules("UI_32 n;\nn = n + 1U;\n") == []

    def test_diagnostic_positions(self):
        diags = lint.check_rules("int a;\ngoto x;\n")
        assert diags[0].line == 2

    def test_unsigned_context_can_cross_files(self):
        # the header declares the variable; the impl uses it
        diags = lint.check_rules("st->n = st->n + 2;\n", extra_unsigned={"n"})
        assert any("R2" in d.message for d in diags)
