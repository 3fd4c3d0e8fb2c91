"""Run reports of the `opkit` command.

A `RunReport` collects the inputs (path and sha256), the law checks run,
their witnesses and the command's result. `to_json()` is deterministic:
keys are sorted and timings only appear when they were requested, so equal
inputs and seed give byte-identical reports.
"""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from opkit.errors import OpkitError
from opkit.fincat import CheckReport

from .formats import file_digest

logger = logging.getLogger(__name__)

SCHEMA = 'opkit.run-report/1'
PASS, FAIL, ERROR = 'pass', 'fail', 'error'


@dataclass
class RunReport:
    command: str
    seed: int = 0
    inputs: List[Dict] = field(default_factory=list)
    checks: List[Dict] = field(default_factory=list)
    witnesses: List[Dict] = field(default_factory=list)
    result: Dict = field(default_factory=dict)
    error: Optional[str] = None
    exit_code: int = 0
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        if self.error is not None:
            return ERROR
        return FAIL if self.witnesses else PASS

    def add_input(self, path) -> None:
        self.inputs.append({'path': str(path), 'sha256': file_digest(path)})

    def absorb(self, check: CheckReport) -> CheckReport:
        self.checks.append(check.to_dict())
        for w in check.witnesses:
            entry = dict(w)
            entry.setdefault('check', check.name)
            self.witnesses.append(entry)
        if not check.passed and self.exit_code == 0:
            self.exit_code = 1
        return check

    def absorb_all(self, checks: Iterable[CheckReport]) -> None:
        for check in checks:
            self.absorb(check)

    def fail(self, exc: Exception) -> None:
        self.error = str(exc) or type(exc).__name__
        self.exit_code = exc.exit_code if isinstance(exc, OpkitError) else 1
        self.witnesses.append({'kind': 'error', 'error': type(exc).__name__, 'message': str(exc)})

    @contextmanager
    def timed(self, label: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[label] = round(time.perf_counter() - start, 6)

    def to_dict(self, include_timings: bool = False) -> Dict:
        data = {
            'schema': SCHEMA,
            'command': self.command,
            'seed': self.seed,
            'inputs': list(self.inputs),
            'outcome': self.outcome,
            'exit_code': self.exit_code,
            'checks': list(self.checks),
            'witnesses': list(self.witnesses),
            'result': self.result,
        }
        if self.error is not None:
            data['error'] = self.error
        if include_timings:
            data['timings'] = dict(self.timings)
        return data

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), sort_keys=True, indent=2, ensure_ascii=False, default=str)

    def render_text(self, include_timings: bool = False) -> str:
        lines = [f"{self.command}: {self.outcome.upper()}"]
        for entry in self.inputs:
            lines.append(f"  input {entry['path']} sha256={entry['sha256'][:12]}")
        if self.checks:
            lines.append(checks_table(self.checks))
        for w in self.witnesses[:5]:
            detail = ', '.join(f"{k}={v}" for k, v in sorted(w.items()))
            lines.append(f"  witness: {detail}")
        if len(self.witnesses) > 5:
            lines.append(f"  ... {len(self.witnesses) - 5} more witnesses")
        if include_timings and self.timings:
            lines.append(table([{'step': k, 'seconds': v} for k, v in self.timings.items()], ['step', 'seconds']))
        return '\n'.join(lines)


def table(rows: Sequence[Dict], columns: Sequence[str]) -> str:
    if not rows:
        return '(no rows)'
    frame = pd.DataFrame(list(rows), columns=list(columns))
    return frame.to_string(index=False)


def checks_table(checks: Sequence[Dict]) -> str:
    rows = [{'check': c['name'], 'instances': c['instances'], 'passed': c['passed'],
             'witnesses': len(c['witnesses'])} for c in checks]
    return table(rows, ['check', 'instances', 'passed', 'witnesses'])


def runs_table(records: Sequence[Dict]) -> str:
    columns = ['id', 'created_at', 'command', 'outcome', 'exit_code', 'seed', 'witness_count']
    return table([{k: r.get(k) for k in columns} for r in records], columns)
