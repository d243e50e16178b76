import csv
import json
import os

import pytest

import soqdot
from soqdot import cli
from utils import *

SMALL_SWEEP = """
scenario = ci-sweep
sweep.alpha_max = 0.3
sweep.alpha_steps = 2
sweep.e_steps = 1
ci.n_orbitals = 6
ci.n_states = 6
"""

SMALL_VMC = """
scenario = vmc
vmc.kind = double-dot
vmc.ell = 3
vmc.n_samples = 10000
vmc.bins = 16
"""

def read_csv(path):
  with open(path, newline='') as f:
    return list(csv.reader(f))

def report(path):
  rows = read_csv(path)
  assert tuple(rows[0]) == cli.REPORT_COLUMNS
  return {r[0]: r for r in rows[1:]}

def error_line(capsys):
  lines = [l for l in capsys.readouterr().err.splitlines()
           if l.startswith('{')]
  assert lines
  return json.loads(lines[-1])

def write_config(tmp_path, text):
  path = tmp_path/'run.cfg'
  path.write_text(text)
  return str(path)

#
# Begin analytic scenario tests.
#

def test_analytic_report(tmp_path):
  out = tmp_path/'out'
  assert cli.main(['analytic', '--alpha', '0.4', '--beta', '1', '--out',
                   str(out), '-q']) == 0
  rep = report(out/'report.csv')
  assert set(rep) == set(soqdot.REPORT_FIELDS) | {'witness'}
  check_value("S_spin_pre", float(rep['S_spin_pre'][1]), 0.149787, 1e-6)
  check_value("gamma1", float(rep['gamma1'][3]), 0.976190476190476, 1e-9)
  check_value("witness", float(rep['witness'][3]), 0.0, 1e-10)
  assert rep['S_RB'][4] == 'nats' and rep['gamma0'][4] == '1'
  assert sorted(os.listdir(out)) == ['manifest.json', 'report.csv']

def test_manifest(tmp_path):
  out = tmp_path/'out'
  assert cli.main(['measure', '--out', str(out), '--seed', '9', '-q']) == 0
  with open(out/'manifest.json') as f:
    man = json.load(f)
  for key in ('scenario', 'seed', 'started', 'wall_time', 'versions',
              'config', 'summary', 'files', 'units'):
    assert key in man, key
  assert man['scenario'] == 'measure' and man['seed'] == 9
  assert man['config']['alpha'] == 0.4
  assert man['versions']['soqdot'] == soqdot.__version__
  assert list(man['files']) == ['report.csv']
  assert 'physical' not in man

def test_reruns_are_byte_identical(tmp_path):
  texts = []
  for name in ('a', 'b'):
    out = tmp_path/name
    assert cli.main(['memory', '--alpha', '0.3', '--out', str(out),
                     '-q']) == 0
    texts.append((out/'report.csv').read_bytes())
    with open(out/'manifest.json') as f:
      texts.append(json.load(f)['files'])
  assert texts[0] == texts[2] and texts[1] == texts[3]

def test_witness_scenario(tmp_path):
  out = tmp_path/'out'
  assert cli.main(['witness', '--alpha', '0.5', '--out', str(out),
                   '-q']) == 0
  rep = report(out/'report.csv')
  check_value("witness", float(rep['witness'][3]), 0.0, 1e-10)
  check_value("counterexample", float(rep['witness_counterexample'][3]),
              0.5, 1e-12)

def test_discord_scenario(tmp_path):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, "discord.grid = 16\n")
  assert cli.main(['discord', '--config', cfg, '--alpha', '0.2', '--out',
                   str(out), '-q']) == 0
  rep = report(out/'report.csv')
  check_value("difference", float(rep['discord_difference'][3]),
              0.008399558, 1e-7)
  assert rep['theta_pre'][4] == 'rad'

#
# Begin failure tests.
#

def test_unknown_scenario_writes_nothing(tmp_path, capsys):
  out = tmp_path/'out'
  assert cli.main(['plot', '--out', str(out)]) == 2
  assert not out.exists()
  err = error_line(capsys)
  assert err['status'] == 'error' and err['code'] == 2
  assert err['diagnostics'][0]['field'] == 'scenario'

def test_bad_config_file(tmp_path, capsys):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, "beta = -1\nseed = x\n")
  assert cli.main(['analytic', '--config', cfg, '--out', str(out)]) == 2
  assert not out.exists()
  fields = sorted(d['field'] for d in error_line(capsys)['diagnostics'])
  assert fields == ['beta', 'seed']

def test_missing_config_file(tmp_path, capsys):
  missing = str(tmp_path/'missing.cfg')
  assert cli.main(['analytic', '--config', missing]) == 2
  assert error_line(capsys)['diagnostics'][0]['field'] == 'config'

def test_bad_flag_value(tmp_path, capsys):
  assert cli.main(['analytic', '--alpha', 'abc', '--out',
                   str(tmp_path/'out')]) == 2
  assert error_line(capsys)['module'] == 'soqdot.config'
  assert not (tmp_path/'out').exists()

def test_lenient_unknown_key(tmp_path):
  cfg = write_config(tmp_path, "colour = blue\n")
  assert cli.main(['measure', '--config', cfg, '--out',
                   str(tmp_path/'strict'), '-q']) == 2
  with pytest.warns(UserWarning):
    status = cli.main(['measure', '--config', cfg, '--lenient', '--out',
                       str(tmp_path/'lenient'), '-q'])
  assert status == 0

def test_numeric_failure(tmp_path, capsys):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, "scenario = ci-sweep\ngrid.n_points = 64\n"
                     "ci.n_orbitals = 20\nsweep.alpha_steps = 1\n"
                     "sweep.e_steps = 1\n")
  assert cli.main(['--config', cfg, '--out', str(out), '-q']) == 3
  err = error_line(capsys)
  assert err['code'] == 3 and err['module'] == 'soqdot.dqd'
  assert not out.exists()

def test_unexpected_failure_is_numeric_exit(tmp_path, capsys, monkeypatch):
  def broken(cfg):
    raise ValueError("table length mismatch")
  monkeypatch.setitem(cli._SCENARIOS, 'analytic', broken)
  out = tmp_path/'out'
  assert cli.main(['analytic', '--out', str(out), '-q']) == 3
  err = error_line(capsys)
  assert err['status'] == 'error' and err['code'] == 3
  assert err['module'] == 'soqdot.cli'
  assert err['diagnostics'][0]['type'] == 'ValueError'
  assert not out.exists()

def test_version_flag(capsys):
  with pytest.raises(SystemExit):
    cli.main(['--version'])
  assert soqdot.__version__ in capsys.readouterr().out

#
# Begin sweep and Monte Carlo scenario tests.
#

def test_ci_sweep_scenario(tmp_path):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, SMALL_SWEEP)
  assert cli.main(['--config', cfg, '--out', str(out), '-q']) == 0
  rows = read_csv(out/'sweep.csv')
  assert tuple(rows[0]) == soqdot.SWEEP_COLUMNS
  assert len(rows) == 3
  assert [float(r[0]) for r in rows[1:]] == [0.0, 0.3]
  check_value("alpha zero", float(rows[1][4]), 0.0, 1e-8)

def test_ci_sweep_physical_columns(tmp_path):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, SMALL_SWEEP)
  assert cli.main(['--config', cfg, '--out', str(out), '--to-physical',
                   '-q']) == 0
  rows = read_csv(out/'sweep.csv')
  n = len(soqdot.SWEEP_COLUMNS)
  assert rows[0][n:] == ['alpha [meV*nm]', 'e_field [V/um]', 'ell [nm]']
  check_value("alpha", float(rows[2][n]), 0.3*114.0, 1e-9)
  check_value("ell", float(rows[2][n + 2]), 8.0, 1e-9)
  with open(out/'manifest.json') as f:
    phys = json.load(f)['physical']
  assert phys['ell'] == {'value': 8.0, 'unit': 'nm'}

def test_vmc_scenario(tmp_path):
  out = tmp_path/'out'
  cfg = write_config(tmp_path, SMALL_VMC)
  assert cli.main(['--config', cfg, '--alpha', '0.2', '--out', str(out),
                   '-q']) == 0
  rows = read_csv(out/'pairdist.csv')
  assert tuple(rows[0]) == cli.PAIR_COLUMNS and len(rows) == 1 + 16*16
  check_value("normalized", sum(float(r[2]) for r in rows[1:]), 1.0, 1e-9)
  with open(out/'runs.jsonl') as f:
    records = [json.loads(l) for l in f]
  assert records[-1]['kind'] == 'run'
  check_value("window", records[-1]['localization_window'], 0.9, 1e-12)
  assert 0.0 <= records[-1]['localization'] <= 1.0
  assert records[-1]['n_samples'] >= 10000
