"""Template-driven rendering of a test suite into test-script text."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Optional

from .testgen import TestSuite, format_call


class CodegenError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__("%s: %s" % (code, message))
        self.code = code


@dataclass
class Template:
    id: str
    ext: str
    header: str
    fixture_block: str      # placeholders {{net}}, {{tests}}
    per_test_block: str     # placeholders {{n}}, {{calls}}, {{oracleComments}}


@dataclass
class RenderedScript:
    file_name: str
    body: str


FIXTURE_STYLE = Template(
    id="fixture-style",
    ext="cs",
    header=(
        "// Test code generated by atcg\n"
        "using System;\n"
        "using NUnit.Framework;\n"
    ),
    fixture_block=(
        "[TestFixture]\n"
        "public class {{net}}Tester_RT {\n"
        "    private {{net}} {{net}};\n"
        "\n"
        "    [SetUp]\n"
        "    public void Init() {\n"
        "        {{net}} = new {{net}}();\n"
        "    }\n"
        "\n"
        "    private void Assert(bool condition, string errorMessage) {\n"
        "        if (!condition) {\n"
        "            Console.WriteLine(errorMessage);\n"
        "            Environment.Exit(1);\n"
        "        }\n"
        "    }\n"
        "\n"
        "{{tests}}}\n"
    ),
    per_test_block=(
        "    [Test]\n"
        "    public void Test{{n}}() {\n"
        "{{calls}}"
        "{{oracleComments}}"
        "    }\n"
    ),
)

_BUILTINS: Dict[str, Template] = {FIXTURE_STYLE.id: FIXTURE_STYLE}


def load_template(path: str) -> Template:
    """Load a template file: three blocks (header, fixture, per-test)
    separated by lines of exactly ``---``. The extension is taken from the
    file name's inner suffix (``name.<ext>.tmpl``), defaulting to txt."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    blocks = []
    current = []
    for line in text.splitlines(keepends=True):
        if line.rstrip("\n") == "---":
            blocks.append("".join(current))
            current = []
        else:
            current.append(line)
    blocks.append("".join(current))
    if len(blocks) != 3:
        raise CodegenError("bad-template",
                           "%s: expected 3 blocks separated by ---" % path)
    base = os.path.basename(path)
    stem, _, _ = base.rpartition(".")
    _, _, ext = stem.rpartition(".")
    return Template(id=base, ext=ext or "txt", header=blocks[0],
                    fixture_block=blocks[1], per_test_block=blocks[2])


def get_template(template_id: str) -> Template:
    if template_id in _BUILTINS:
        return _BUILTINS[template_id]
    if os.path.isfile(template_id):
        return load_template(template_id)
    raise CodegenError("unknown-template",
                       "no template %r registered" % template_id)


def render(suite: TestSuite, template_id: str) -> RenderedScript:
    """Expand the template over the suite; pure text substitution, one test
    routine per scenario in suite order."""
    template = get_template(template_id)
    net = suite.net_id

    expansions = []
    for i, scenario in enumerate(suite.scenarios, start=1):
        visible = [r for r in scenario.records if not r.silent]
        calls = "".join("        %s.%s;\n"
                        % (net, format_call(r.transition_name, r.args))
                        for r in visible)
        oracle = "".join("        // expect: %s\n" % r.annotation
                         for r in visible if r.annotation)
        text = (template.per_test_block
                .replace("{{n}}", str(i))
                .replace("{{calls}}", calls)
                .replace("{{oracleComments}}", oracle))
        expansions.append(text)

    fixture = (template.fixture_block
               .replace("{{net}}", net)
               .replace("{{tests}}", "\n".join(expansions)))
    header = template.header.replace("{{net}}", net)
    return RenderedScript(
        file_name="%sTester_RT.%s" % (net, template.ext),
        body=header + "\n" + fixture,
    )
