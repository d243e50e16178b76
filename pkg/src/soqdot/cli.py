#
# The soqdot command: parses a configuration, runs one scenario and writes
# its CSV tables, a runs.jsonl log (vmc) and manifest.json atomically into
# the output directory.
#
#   soqdot <scenario> [--config FILE] [--alpha F] [--beta F] [--e-field F]
#          [--ell F] [--b-field F] [--seed N] [--out DIR] [--to-physical]
#
# Exit status: 0 on success, 2 for an invalid configuration (no files are
# written), 3 for a numeric failure. Failures print one JSON object on
# stderr.
#
import argparse
import csv
import hashlib
import io
import json
import logging
import os
import platform
import sys
import tempfile
import time
from logging import getLogger

import numpy
import scipy

from .analytic import (PI0, PI1, REPORT_FIELDS, UP, DOWN, X_BASIS, Z_BASIS,
                       build_states, closed_form_report,
                       numeric_report)
from .config import SCENARIOS, parse_config
from .dqd import CoulombParams, Grid1D, PotentialSpec, SWEEP_COLUMNS, \
                 entropy_sweep
from .errors import ConfigError, SoqdotError, NumericError
from .states import (DensityMatrix, berta_uncertainty, discord_details,
                     projective_measure, quantum_witness, reduced)
from .units import physical_kind, to_physical
from .version import version as __version__
from .vmc import (TrialParams, VmcSettings, metropolis_run, optimize_params,
                  pair_distribution, localization_fraction)

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['run', 'main', 'build_parser', 'format_number',
           'REPORT_COLUMNS', 'PAIR_COLUMNS']

REPORT_COLUMNS = ('field', 'closed_form', 'exact', 'numeric', 'units')
PAIR_COLUMNS = ('x1_bin', 'x2_bin', 'density')

_NATS = 'nats'
_UNITS = {name: _NATS for name in REPORT_FIELDS if name.startswith('S_')}
_UNITS.update({'discord_difference': _NATS, 'discord_pre': _NATS,
               'discord_post': _NATS, 'uncertainty_lhs': _NATS,
               'uncertainty_rhs': _NATS, 'uncertainty_slack': _NATS,
               'theta_pre': 'rad', 'phi_pre': 'rad', 'theta_post': 'rad',
               'phi_post': 'rad'})

_MEASURE_FIELDS = ('gamma0', 'gamma1', 'S_spin_pre', 'S_orb_pre',
                   'S_spin_post', 'S_orb_post', 'fidelity',
                   'fidelity_asymptotic', 'concurrence_pre',
                   'concurrence_post')
_MEMORY_FIELDS = ('S_AB_pure', 'S_AB_mixed', 'S_RB', 'S_QB', 'S_rhoA',
                  'S_rhoA_S')

_EXIT_CONFIG = 2
_EXIT_NUMERIC = 3

_handler = None


def format_number(v):
  """CSV text of a value: 17 significant digits for floats."""
  if isinstance(v, (bool, numpy.bool_)):
    return '1' if v else '0'
  if isinstance(v, (int, numpy.integer)):
    return str(int(v))
  if isinstance(v, str):
    return v
  return '%.17g' % float(v)

def _csv_text(header, rows):
  buf = io.StringIO()
  w = csv.writer(buf, lineterminator='\n')
  w.writerow(header)
  for r in rows:
    w.writerow([format_number(v) for v in r])
  return buf.getvalue()

def _with_physical(header, rows):
#
# Appends a GaAs-unit column after the table for every dimensioned column.
#
  extra = [(k, c) for k, c in enumerate(header) if physical_kind(c)]
  if not extra:
    return header, rows
  names = []
  for _, c in extra:
    _, unit = to_physical(c, 0.0)
    names.append("%s [%s]" % (c, unit))
  out = []
  for r in rows:
    r = list(r)
    out.append(r + [float(to_physical(c, r[k])[0]) for k, c in extra])
  return list(header) + names, out

def _report(names, closed, exact, numeric):
  return [(n, closed.get(n, numpy.nan), exact.get(n, numpy.nan),
           numeric[n], _UNITS.get(n, '1')) for n in names]

def _closed(rep):
  return {n: rep.value(n) for n in REPORT_FIELDS}

def _check_finite(scenario, rows, columns):
  for r in rows:
    for c in columns:
      v = r[c]
      if isinstance(v, float) and not numpy.isfinite(v):
        raise NumericError("%s: Error: non-finite value in column %d" %
                           (scenario, c))

################################################################
#
# Scenarios. Each returns (files, summary) where files maps a file name to
# its text and summary is recorded in the manifest.
#
def _analytic(cfg):
  p = cfg.params
  rep = closed_form_report(p)
  num = numeric_report(p, cfg['discord.grid'])
  closed, exact = _closed(rep), dict(rep.exact)
  closed['witness'] = exact['witness'] = 0.0
  rows = _report(REPORT_FIELDS + ('witness',), closed, exact, num)
  _check_finite('analytic', rows, (3,))
  return {'report.csv': (REPORT_COLUMNS, rows)}, \
         {'z_approx': list(rep.z_approx)}

def _measure(cfg):
  p = cfg.params
  rep = closed_form_report(p)
  num = numeric_report(p, cfg['discord.grid'])
  rows = _report(_MEASURE_FIELDS, _closed(rep), rep.exact, num)
  _check_finite('measure', rows, (3,))
  return {'report.csv': (REPORT_COLUMNS, rows)}, {}

def _discord(cfg):
  p = cfg.params
  rep = closed_form_report(p)
  st = build_states(p)
  rec = projective_measure(st.rho_AB, [PI0, PI1], subsystem=1)
  post = reduced(rec[1].post_state, (1, 2))
  side, grid = cfg['discord.side'], cfg['discord.grid']
  pre = discord_details(st.rho_S, side, grid)
  after = discord_details(post, side, grid)
  num = {'discord_difference': pre.value - after.value,
         'discord_pre': pre.value, 'discord_post': after.value,
         'theta_pre': pre.theta, 'phi_pre': pre.phi,
         'theta_post': after.theta, 'phi_post': after.phi}
  closed = {'discord_difference': rep.discord_difference}
  exact = {'discord_difference': rep.exact['discord_difference']}
  rows = _report(('discord_difference', 'discord_pre', 'discord_post',
                  'theta_pre', 'phi_pre', 'theta_post', 'phi_post'),
                 closed, exact, num)
  _check_finite('discord', rows, (3,))
  return {'report.csv': (REPORT_COLUMNS, rows)}, {'measured_side': side}

def _witness(cfg):
  p = cfg.params
  rep = closed_form_report(p)
  num = numeric_report(p, cfg['discord.grid'])
#
# Channel, blind measurement and probe on one qubit prepared in |+>.
#
  plus = (UP + DOWN)/numpy.sqrt(2.0)
  rho = DensityMatrix(numpy.kron(numpy.outer(plus, plus), PI1), (2, 2))
  num['witness_counterexample'] = quantum_witness(
    rho, [X_BASIS], [PI0, PI1], PI0, channel_subsystem=0,
    blind_subsystem=0, probe_subsystem=0)
  G = rep.witness_prob
  closed = {'witness_prob': G, 'witness_unmeasured': G, 'witness': 0.0,
            'witness_counterexample': 0.5}
  exact = {'witness_prob': rep.exact['witness_prob'],
           'witness_unmeasured': rep.exact['witness_prob'], 'witness': 0.0,
           'witness_counterexample': 0.5}
  rows = _report(('witness_prob', 'witness_unmeasured', 'witness',
                  'witness_counterexample'), closed, exact, num)
  _check_finite('witness', rows, (3,))
  return {'report.csv': (REPORT_COLUMNS, rows)}, \
         {'channel': 'bit flip on A', 'blind': 'z on A', 'probe': 'up on B'}

def _memory(cfg):
  p = cfg.params
  rep = closed_form_report(p)
  num = numeric_report(p, cfg['discord.grid'])
  mem = berta_uncertainty(build_states(p).rho_S, Z_BASIS, X_BASIS, 0)
  closed, exact = _closed(rep), dict(rep.exact)
  closed['uncertainty_lhs'] = rep.S_RB + rep.S_QB
  exact['uncertainty_lhs'] = exact['S_RB'] + exact['S_QB']
  closed['uncertainty_rhs'] = numpy.log(2.0) + rep.S_AB_mixed
  exact['uncertainty_rhs'] = numpy.log(2.0) + exact['S_AB_mixed']
  for d in (closed, exact):
    d['uncertainty_slack'] = d['uncertainty_lhs'] - d['uncertainty_rhs']
  num.update(uncertainty_lhs=mem.lhs, uncertainty_rhs=mem.rhs,
             uncertainty_slack=mem.slack)
  rows = _report(_MEMORY_FIELDS + ('uncertainty_lhs', 'uncertainty_rhs',
                                   'uncertainty_slack'), closed, exact, num)
  _check_finite('memory', rows, (3,))
  return {'report.csv': (REPORT_COLUMNS, rows)}, {'overlap_c': mem.c}

def _ci_sweep(cfg):
  cp = CoulombParams(cfg['coulomb.strength'], cfg['coulomb.softening'])
  grid = Grid1D(cfg['grid.x_min'], cfg['grid.x_max'], cfg['grid.n_points'])
  table = entropy_sweep(cfg.alphas(), cfg.e_fields(), ell=cfg['ell'], cp=cp,
                        beta=cfg['beta'], grid=grid,
                        n_orbitals=cfg['ci.n_orbitals'],
                        n_states=cfg['ci.n_states'],
                        b_field=cfg['b_field'], post=cfg['sweep.post'],
                        cluster_tol=cfg['sweep.cluster_tol'],
                        physical_only=cfg['ci.physical_only'],
                        workers=cfg['sweep.workers'] or None)
  rows = [r.values() for r in table.rows]
  _check_finite('ci-sweep', rows, (4, 5, 6, 8))
  return {'sweep.csv': (SWEEP_COLUMNS, rows)}, dict(table.metadata)

def _run_record(kind, est, tp, extra=None):
  rec = {'kind': kind, 'seed': est.seed, 'n_samples': est.n_samples,
         'energy': est.energy_mean, 'energy_err': est.energy_err,
         'energy_variance': est.energy_variance,
         'constraint_residual': est.constraint_mean - 1.0,
         'constraint_err': est.constraint_err, 's2': est.s2_mean,
         'acceptance': est.acceptance, 'step': est.step,
         'centroid': est.centroid_mean, 'centroid_err': est.centroid_err,
         'n_rejected': est.n_rejected, 'flags': list(est.flags),
         'params': {'jastrow_b': tp.jastrow_b, 'spinor_mix': tp.spinor_mix,
                    'lagrange_lambda': tp.lagrange_lambda,
                    'width_scale': tp.width_scale}}
  rec.update(extra or {})
  return rec

def _vmc(cfg):
  p = cfg.params
  pot = PotentialSpec(cfg['vmc.kind'], p.beta, cfg['vmc.ell'], p.e_field)
  cp = CoulombParams(cfg['coulomb.strength'], cfg['coulomb.softening'])
  st = VmcSettings(n_chains=cfg['vmc.n_chains'],
                   n_walkers=cfg['vmc.n_walkers'], bins=cfg['vmc.bins'],
                   workers=cfg['vmc.workers'] or None)
  tp = TrialParams(jastrow_b=cfg['vmc.jastrow_b'],
                   spinor_mix=cfg['vmc.spinor_mix'],
                   lagrange_lambda=cfg['vmc.lagrange_lambda'],
                   width_scale=cfg['vmc.width_scale'],
                   n_electrons=cfg['vmc.n_electrons'] or None)
  records = []
  summary = {}
  if cfg['vmc.optimize']:
    tp, info = optimize_params(pot, p.alpha, None, cfg.seed, cp, p.b_field,
                               tp, cfg['vmc.opt_samples'], st,
                               cfg['vmc.max_passes'], full_output=True)
    for h in info.history:
      records.append({'kind': 'optimize', 'pass': h['pass'],
                      'lagrangian': h['lagrangian'], 'energy': h['energy'],
                      'energy_err': h['energy_err'],
                      'constraint_residual': h['residual'],
                      'params': {'jastrow_b': h['params'].jastrow_b,
                                 'spinor_mix': h['params'].spinor_mix,
                                 'lagrange_lambda':
                                   h['params'].lagrange_lambda}})
    summary['optimizer_converged'] = info.converged
  est = metropolis_run(tp, pot, p.alpha, None, cfg['vmc.n_samples'],
                       cfg.seed, cp, p.b_field, st)
  if not numpy.isfinite(est.energy_mean):
    raise NumericError("vmc: Error: non-finite energy estimate")
  window = 0.3*cfg['vmc.ell'] if cfg['vmc.ell'] > 0.0 else 1.0
  records.append(_run_record('run', est, tp, {
    'localization': localization_fraction(est, window),
    'localization_window': window}))
  rho = pair_distribution(est)
  runs = ''.join(json.dumps(r, sort_keys=True, default=_json_default) + '\n'
                 for r in records)
  summary.update(flags=list(est.flags), energy=est.energy_mean,
                 energy_err=est.energy_err)
  return {'pairdist.csv': (PAIR_COLUMNS, list(rho.rows())),
          'runs.jsonl': runs}, summary

_SCENARIOS = {'analytic': _analytic, 'measure': _measure,
              'discord': _discord, 'witness': _witness, 'memory': _memory,
              'ci-sweep': _ci_sweep, 'vmc': _vmc}

################################################################
def _json_default(o):
  if isinstance(o, (numpy.generic,)):
    return o.item()
  if isinstance(o, numpy.ndarray):
    return o.tolist()
  return str(o)

def _fail(code, module, diagnostics):
  doc = {'status': 'error', 'code': code, 'module': module,
         'diagnostics': diagnostics}
  sys.stderr.write(json.dumps(doc, default=_json_default) + '\n')
  return code

def _config_failure(e):
  return _fail(_EXIT_CONFIG, 'soqdot.config',
               [{'field': f, 'message': m} for f, m in e.diagnostics])

def _origin(e):
#
# Innermost soqdot module in the traceback.
#
  module = 'soqdot'
  tb = e.__traceback__
  while tb is not None:
    name = tb.tb_frame.f_globals.get('__name__', '')
    if name.startswith('soqdot.'):
      module = name
    tb = tb.tb_next
  return module

def _check_writable(path):
  d = os.path.abspath(path)
  while not os.path.exists(d):
    parent = os.path.dirname(d)
    if parent == d:
      break
    d = parent
  if not os.path.isdir(d) or not os.access(d, os.W_OK):
    raise ConfigError([('output_dir', "%r is not a writable directory" %
                        path)])

def _write_atomic(out_dir, files):
#
# Every file goes to a temporary name first; renames happen only once all
# of them are on disk.
#
  os.makedirs(out_dir, exist_ok=True)
  staged = []
  try:
    for name, text in files.items():
      fd, tmp = tempfile.mkstemp(dir=out_dir, prefix='.' + name + '.',
                                 suffix='.tmp')
      staged.append((tmp, os.path.join(out_dir, name)))
      with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
  except BaseException:
    for tmp, _ in staged:
      if os.path.exists(tmp):
        os.unlink(tmp)
    raise
  for tmp, dest in staged:
    os.replace(tmp, dest)

def _physical_entry(name, value):
  v, unit = to_physical(name, value)
  return {'value': float(v), 'unit': unit}

def _versions():
  return {'soqdot': __version__, 'numpy': numpy.__version__,
          'scipy': scipy.__version__, 'python': platform.python_version()}

################################################################
def run(cfg):
  """
Runs one scenario and writes its outputs.

status = soqdot.run(cfg)

cfg -- RunConfig.

Tables are computed in full before anything is written; the files and
then manifest.json are moved into cfg.output_dir by rename. Returns the
exit status (0, 2 or 3); failures are reported as one JSON line on
stderr. Any exception raised while computing maps to status 3.
  """
  try:
    _check_writable(cfg.output_dir)
  except ConfigError as e:
    return _config_failure(e)
  started = time.time()
  stamp = time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime(started))
  logger.info("run: scenario %s, seed %d, output %s", cfg.scenario, cfg.seed,
              cfg.output_dir)
  try:
    tables, summary = _SCENARIOS[cfg.scenario](cfg)
  except (SoqdotError, numpy.linalg.LinAlgError, ArithmeticError) as e:
    logger.error("run: %s failed: %s", cfg.scenario, e)
    return _fail(_EXIT_NUMERIC, _origin(e),
                 [{'message': str(e), 'type': type(e).__name__}])
  except Exception as e:
    logger.exception("run: %s failed unexpectedly", cfg.scenario)
    return _fail(_EXIT_NUMERIC, _origin(e),
                 [{'message': str(e), 'type': type(e).__name__}])
  files = {}
  for name, body in tables.items():
    if isinstance(body, str):
      files[name] = body
      continue
    header, rows = body
    if cfg.to_physical:
      header, rows = _with_physical(header, rows)
    files[name] = _csv_text(header, rows)
  manifest = {
    'scenario': cfg.scenario, 'seed': cfg.seed, 'started': stamp,
    'wall_time': time.time() - started, 'versions': _versions(),
    'config': cfg.flat(), 'summary': summary,
    'files': {n: hashlib.sha256(t.encode('utf-8')).hexdigest()
              for n, t in files.items()},
    'units': {'entropy': _NATS, 'length': 'd0',
              'energy': 'hbar^2/(m d0^2)'},
  }
  if cfg.to_physical:
    manifest['physical'] = {k: _physical_entry(k, cfg[k])
                            for k in ('alpha', 'beta', 'e_field', 'ell')}
  files['manifest.json'] = json.dumps(manifest, indent=2, sort_keys=True,
                                      default=_json_default) + '\n'
  try:
    _write_atomic(cfg.output_dir, files)
  except OSError as e:
    return _fail(_EXIT_CONFIG, 'soqdot.cli',
                 [{'field': 'output_dir', 'message': str(e)}])
  logger.info("run: wrote %s to %s", ", ".join(sorted(files)),
              cfg.output_dir)
  return 0

class _Parser(argparse.ArgumentParser):
  def error(self, message):
    raise ConfigError([('<arguments>', message)])

def build_parser():
  ap = _Parser(prog='soqdot', description="Spin-orbit coupled double "
               "quantum dot: entropies, correlations and VMC pair "
               "densities.")
  ap.add_argument('scenario', nargs='?', default=None,
                  help="one of: %s" % ", ".join(SCENARIOS))
  ap.add_argument('--config', metavar='FILE', help="key = value file")
  ap.add_argument('--alpha', type=float)
  ap.add_argument('--beta', type=float)
  ap.add_argument('--e-field', dest='e_field', type=float)
  ap.add_argument('--ell', type=float)
  ap.add_argument('--b-field', dest='b_field', type=float)
  ap.add_argument('--seed', type=int)
  ap.add_argument('--out', dest='output_dir', metavar='DIR')
  ap.add_argument('--to-physical', dest='to_physical', action='store_const',
                  const=True, default=None,
                  help="append GaAs-unit columns")
  ap.add_argument('--lenient', action='store_true',
                  help="warn about unknown config keys instead of failing")
  ap.add_argument('-v', '--verbose', action='store_true')
  ap.add_argument('-q', '--quiet', action='store_true')
  ap.add_argument('--version', action='version',
                  version='soqdot %s' % __version__)
  return ap

def _configure_logging(verbose, quiet):
  global _handler
  root = getLogger("soqdot")
  if _handler is not None:
    root.removeHandler(_handler)
  _handler = logging.StreamHandler(sys.stderr)
  _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: "
                                          "%(message)s"))
  root.addHandler(_handler)
  root.setLevel(logging.DEBUG if verbose else
                logging.WARNING if quiet else logging.INFO)

def main(argv=None):
  """
Command-line entry point.

status = soqdot.main(['analytic', '--alpha', '0.4'])
  """
  try:
    args = build_parser().parse_args(argv)
  except ConfigError as e:
    return _config_failure(e)
  _configure_logging(args.verbose, args.quiet)
  text = ''
  try:
    if args.config:
      try:
        with open(args.config, encoding='utf-8') as f:
          text = f.read()
      except OSError as e:
        raise ConfigError([('config', "cannot read %s: %s" %
                            (args.config, e.strerror))])
    overrides = {k: getattr(args, k) for k in
                 ('scenario', 'alpha', 'beta', 'e_field', 'ell', 'b_field',
                  'seed', 'output_dir', 'to_physical')}
    cfg = parse_config(text, strict=not args.lenient, overrides=overrides)
  except ConfigError as e:
    return _config_failure(e)
  return run(cfg)
