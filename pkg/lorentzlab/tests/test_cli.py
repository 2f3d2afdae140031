import io
import json
import os
import subprocess
import sys

import pandas as pd
import pytest

from .. import cli
from ..lab import suite as lab_suite

PACKAGE_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


@pytest.mark.parametrize("argv,expected", [
    (['norm', 'u_radial(r=1,alpha=1,n=2,p=2)', '--p', '2', '--q', 'inf'], '0.5\n'),
    (['norm', 'power_singularity(r=1,n=1,p=2)', '--p', '2', '--q', 'inf'], '1.41421356237\n'),
    (['norm', 'power_singularity(r=1,n=1,p=2)', '--p', '2', '--q', '1'], 'INFINITE(HEAD_DIVERGENCE)\n'),
    (['norm', 'u_radial(r=1,alpha=1,n=2,p=2)', '--q', '1'], 'INFINITE(LOG_EXPONENT_TEST)\n'),
])
def test_norm(capsys, argv, expected):
    assert cli.main(argv) == cli.EXIT_OK
    assert capsys.readouterr().out == expected


def test_norm_json(capsys):
    argv = ['norm', 'u_radial(r=1,alpha=1,n=2,p=2)', '--format', 'json', '--no-timestamp']
    assert cli.main(argv) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['norm'] == {'finite': pytest.approx(0.5, rel=1e-10)}
    assert payload['pq'] == {'p': 2.0, 'q': 'inf'}
    assert 'timestamp' not in payload
    assert cli.main(argv[:-1]) == cli.EXIT_OK
    assert 'timestamp' in json.loads(capsys.readouterr().out)


def test_witness(capsys):
    assert cli.main(['witness', '--p', '2', '--q1', '2', '--q2', 'inf']) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('alpha = 0.5\n')
    assert '(closed form 1)' in out
    assert cli.main(['witness', '--p', '2', '--q1', '1', '--q2', '2']) == cli.EXIT_OK
    assert '(closed form 0.707106781187)' in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ['witness', '--p', '2', '--q1', '2', '--q2', '2'],
    ['verify', 'bogus'],
    ['norm', 'u_radial(r=1,alpha=1,n=2)'],
    ['norm', 'linear(slope=1,a=0,b=1)'],
    ['sweep', 'u_radial', '--grid', 'alpha=1;alpha=2'],
    [],
])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == cli.EXIT_USAGE
    assert capsys.readouterr().err != ''


def test_sweep_writes_csv_by_default(capsys):
    argv = ['sweep', 'u_radial', '--grid', 'r=1;n=2;p=2;alpha=1;q=1,inf']
    assert cli.main(argv) == cli.EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame['status']) == ['INFINITE', 'FINITE']
    assert frame['value'][1] == pytest.approx(0.5, rel=1e-10)


def test_sweep_to_file(tmp_path):
    path = tmp_path / 'sweep.json'
    argv = ['sweep', 'v', '--grid', 'r=1;alpha=1;n=2;p=3', '--functional', 'gradient',
            '--format', 'json', '--out', str(path)]
    assert cli.main(argv) == cli.EXIT_OK
    payload = json.loads(path.read_text())
    assert payload['functional'] == 'gradient'
    assert len(payload['rows']) == 1
    assert 'timestamp' in payload


def test_gallery(capsys):
    assert cli.main(['gallery', '--format', 'csv']) == cli.EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['item', 'target', 'p', 'q', 'status', 'closed_form', 'reason']
    assert len(frame) == 56


def test_verify_writes_results(capsys, monkeypatch, tmp_path):
    for key, value in {'p_grid': (2, 3), 'alpha_grid': (1,), 'n_grid': (2,),
                       'q_grid': (2, 'inf')}.items():
        monkeypatch.setitem(lab_suite.DEFAULT_SETTINGS, key, value)
    out = tmp_path / 'results'
    assert cli.main(['verify', 'inclusion', '--out', str(out), '--seed', '4']) == cli.EXIT_OK
    text = capsys.readouterr().out
    assert text.splitlines()[-1].startswith('inclusion: PASS=')
    assert 'FAIL=0' in text.splitlines()[-1]
    lines = (out / 'inclusion.jsonl').read_text().splitlines()
    assert json.loads(lines[0])['meta']['settings']['seed'] == 4
    summary = pd.read_csv(out / 'inclusion.csv')
    assert len(summary) == len(lines) - 1


def test_run_config_round_trip():
    args = cli.build_parser().parse_args(['sweep', 'u_radial', '--grid', 'alpha=0.5,1;q=2,inf'])
    config = cli.RunConfig.from_args(args)
    assert config.format == 'csv'
    assert cli.RunConfig.from_dict(config.to_dict()) == config
    args = cli.build_parser().parse_args(['witness', '--p', '2', '--q1', '1', '--q2', 'inf'])
    config = cli.RunConfig.from_args(args)
    assert config.format == 'pretty'
    assert cli.RunConfig.from_dict(config.to_dict()) == config


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=PACKAGE_ROOT)
    result = subprocess.run([sys.executable, '-m', 'lorentzlab', 'gallery', '--format', 'json',
                             '--no-timestamp'], capture_output=True, text=True, env=env, check=False)
    assert result.returncode == 0, result.stderr
    payload = json.loads(result.stdout)
    assert len(payload['entries']) == 56
