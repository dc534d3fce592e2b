import io
import json

import pytest

from repunit.cli import run_command
from repunit.records import read_jsonl


class CliResult:
    def __init__(self, code, out, err):
        self.code = code
        self.out = out
        self.err = err

    @property
    def header(self):
        return json.loads(self.out.splitlines()[0])

    @property
    def records(self):
        return [r for r in read_jsonl(self.out) if r.kind != "header"]


@pytest.fixture
def cli():
    def run(*argv, env=None):
        out, err = io.StringIO(), io.StringIO()
        code = run_command([str(a) for a in argv], env=env or {}, stdout=out, stderr=err)
        return CliResult(code, out.getvalue(), err.getvalue())

    return run
