import json

import pandas as pd

from ..lab import report
from ..lab.checks import CheckReport

reports = [
    CheckReport.judge('holder', {'pq': {'p': 2.0, 'q': 'inf'}, 'cells': 3}, 1.0, 2.0, 0.0),
    CheckReport.judge('ac_norm', {'item': 'x'}, 2.0, 1.0, 0.0),
    CheckReport.skipped('equivalence', {'pq': {'p': 2.0, 'q': 1.0}}, 'infinite quasinorm'),
]


def test_summary_frame():
    frame = report.summary_frame(reports)
    assert list(frame.columns) == list(report.SUMMARY_COLUMNS)
    assert list(frame['verdict']) == ['PASS', 'FAIL', 'SKIP']
    assert frame['params'][0] == '{"cells": 3, "pq": {"p": 2.0, "q": "inf"}}'


def test_write_csv(tmp_path):
    path = tmp_path / 'summary.csv'
    report.write_csv(reports, str(path))
    text = path.read_text()
    assert text.splitlines()[0] == 'check_id,params,lhs,rhs,margin,verdict'
    assert '\r' not in text
    frame = pd.read_csv(path)
    assert list(frame['margin'][:2]) == [1.0, -1.0]


def test_jsonl(tmp_path):
    path = tmp_path / 'details.jsonl'
    report.write_jsonl(reports, str(path), meta={'suite': 'demo'})
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    header = json.loads(lines[0])
    assert header['meta'] == {'suite': 'demo'}
    assert 'timestamp' in header
    first = json.loads(lines[1])
    assert first['check_id'] == 'holder'
    assert first['verdict'] == 'PASS'
    skipped = json.loads(lines[3])
    assert skipped['lhs'] == 'nan' and skipped['reason'] == 'infinite quasinorm'


def test_jsonl_without_header():
    lines = report.jsonl_lines(reports, timestamp=False)
    assert len(lines) == 3
    assert lines == report.jsonl_lines(reports, timestamp=False)


def test_pretty_table():
    text = report.format_pretty(reports)
    lines = text.splitlines()
    assert lines[0].split()[:3] == ['verdict', 'check_id', 'margin']
    assert lines[2].startswith('FAIL')
    assert lines[3].split()[2] == '-'
    assert report.counts_line({'PASS': 1, 'FAIL': 1, 'SKIP': 1}) == 'PASS=1 FAIL=1 SKIP=1'
