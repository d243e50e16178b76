#
# Run configuration: a flat "key = value" text format with "#" comments
# and dotted section prefixes (coulomb., grid., ci., sweep., discord.,
# vmc.). Every key, its type, default and validity range is listed once in
# FIELDS; parsing, validation, serialization and the command-line overlay
# are all driven by that table.
#
import math
import warnings
from collections import namedtuple
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict

import numpy

from .analytic import ModelParams
from .dqd import PotentialSpec
from .errors import ConfigError, DomainError
from .vmc import MIN_SAMPLES

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['RunConfig', 'Field', 'FIELDS', 'SCENARIOS', 'parse_config',
           'serialize_config', 'normalize', 'default_config']

SCENARIOS = ('analytic', 'measure', 'discord', 'witness', 'memory',
             'ci-sweep', 'vmc')

#
# check is a predicate on the coerced value and expect the text shown when
# it fails.
#
Field = namedtuple('Field', ['key', 'type', 'default', 'check', 'expect'])

def _any(v):
  return True

def _ge(lo):
  return lambda v: v >= lo

def _gt(lo):
  return lambda v: v > lo

def _within(lo, hi):
  return lambda v: lo <= v <= hi

def _one_of(*names):
  return lambda v: v in names

FIELDS = (
  Field('scenario', str, 'analytic', _one_of(*SCENARIOS),
        'one of ' + ', '.join(SCENARIOS)),
  Field('alpha', float, 0.4, _ge(0.0), '>= 0'),
  Field('beta', float, 1.0, _gt(0.0), '> 0'),
  Field('e_field', float, 0.0, _within(0.0, 8.0), 'in [0, 8]'),
  Field('ell', float, 0.8, _ge(0.0), '>= 0'),
  Field('b_field', float, 0.0, _any, 'any float'),
  Field('seed', int, 1, _ge(0), '>= 0'),
  Field('output_dir', str, 'soqdot-out', lambda v: v != '' and '#' not in v,
        "a non-empty path without '#'"),
  Field('to_physical', bool, False, _any, 'true or false'),
  Field('coulomb.strength', float, 1.0, _ge(0.0), '>= 0'),
  Field('coulomb.softening', float, 0.1, _gt(0.0), '> 0'),
  Field('grid.x_min', float, -12.0, _any, 'any float'),
  Field('grid.x_max', float, 12.0, _any, 'any float'),
  Field('grid.n_points', int, 1024, _ge(64), '>= 64'),
  Field('ci.n_orbitals', int, 20, _ge(2), '>= 2'),
  Field('ci.n_states', int, 20, _ge(1), '>= 1'),
  Field('ci.physical_only', bool, True, _any, 'true or false'),
  Field('sweep.alpha_max', float, 0.9, lambda v: 0.0 <= v < 1.0,
        'in [0, 1)'),
  Field('sweep.alpha_steps', int, 10, _ge(1), '>= 1'),
  Field('sweep.e_max', float, 8.0, _within(0.0, 8.0), 'in [0, 8]'),
  Field('sweep.e_steps', int, 10, _ge(1), '>= 1'),
  Field('sweep.post', str, 'outcome1', _one_of('outcome1', 'average'),
        'outcome1 or average'),
  Field('sweep.cluster_tol', float, 1e-3, _gt(0.0), '> 0'),
  Field('sweep.workers', int, 0, _ge(0), '>= 0'),
  Field('discord.grid', int, 64, _ge(8), '>= 8'),
  Field('discord.side', str, 'A', _one_of('A', 'B'), 'A or B'),
  Field('vmc.kind', str, 'four-dot', _one_of(*PotentialSpec.KINDS),
        'one of ' + ', '.join(PotentialSpec.KINDS)),
  Field('vmc.ell', float, 2.0, _ge(0.0), '>= 0'),
  Field('vmc.n_electrons', int, 0, _ge(0), '>= 0 (0 = one per well)'),
  Field('vmc.n_samples', int, 100000, _ge(MIN_SAMPLES), '>= %d' % MIN_SAMPLES),
  Field('vmc.n_chains', int, 4, _ge(1), '>= 1'),
  Field('vmc.n_walkers', int, 32, _ge(1), '>= 1'),
  Field('vmc.bins', int, 128, _ge(8), '>= 8'),
  Field('vmc.jastrow_b', float, 0.5, _ge(0.0), '>= 0'),
  Field('vmc.spinor_mix', float, 0.0, _within(-0.5, 0.5), 'in [-0.5, 0.5]'),
  Field('vmc.lagrange_lambda', float, 1.0, _any, 'any float'),
  Field('vmc.width_scale', float, 1.0, _gt(0.0), '> 0'),
  Field('vmc.optimize', bool, False, _any, 'true or false'),
  Field('vmc.opt_samples', int, 20000, _ge(MIN_SAMPLES),
        '>= %d' % MIN_SAMPLES),
  Field('vmc.max_passes', int, 20, _ge(1), '>= 1'),
  Field('vmc.workers', int, 0, _ge(0), '>= 0'),
)

_BY_KEY = {f.key: f for f in FIELDS}
_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')
_TYPE_NAMES = {float: 'float', int: 'int', bool: 'bool', str: 'string'}


@dataclass(frozen=True)
class RunConfig:
  """
A validated run configuration.

params -- ModelParams built from alpha, beta, e_field, ell and b_field.

settings -- every dotted key (coulomb., grid., ...) with its value.

cfg[key] looks up any key of FIELDS.
  """
  scenario: str = 'analytic'
  params: ModelParams = field(default_factory=ModelParams)
  seed: int = 1
  output_dir: str = 'soqdot-out'
  to_physical: bool = False
  settings: Dict[str, Any] = field(default_factory=dict)

  def __getitem__(self, key):
    if key not in _BY_KEY:
      raise KeyError(key)
    if '.' in key:
      return self.settings.get(key, _BY_KEY[key].default)
    if hasattr(self.params, key):
      return getattr(self.params, key)
    return getattr(self, key)

  def flat(self):
    """All keys in table order."""
    return {f.key: self[f.key] for f in FIELDS}

  def alphas(self):
    return numpy.linspace(0.0, self['sweep.alpha_max'],
                          self['sweep.alpha_steps'])

  def e_fields(self):
    return numpy.linspace(0.0, self['sweep.e_max'], self['sweep.e_steps'])


def _coerce(value, typ):
#
# Returns (value, None) or (None, message).
#
  name = _TYPE_NAMES[typ]
  bad = (None, "expected %s, got %r" % (name, value))
  if isinstance(value, str):
    text = value.strip()
    if typ is str:
      if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        text = text[1:-1]
      return text, None
    if typ is bool:
      low = text.lower()
      if low in _TRUE:
        return True, None
      if low in _FALSE:
        return False, None
      return bad
    try:
      v = float(text)
    except ValueError:
      return bad
    if typ is int:
      try:
        return int(text), None
      except ValueError:
        if math.isfinite(v) and v == int(v):
          return int(v), None
        return bad
  else:
    if typ is bool:
      return (value, None) if isinstance(value, (bool, numpy.bool_)) else bad
    if typ is str or isinstance(value, (bool, numpy.bool_)):
      return bad
    if typ is int:
      if isinstance(value, (int, numpy.integer)):
        return int(value), None
      return bad
    if not isinstance(value, (int, float, numpy.integer, numpy.floating)):
      return bad
    v = float(value)
  if not math.isfinite(v):
    return None, "expected a finite float, got %r" % (value,)
  return v, None

def _split_lines(text):
#
# Yields (line number, key, raw value) or (line number, None, message).
#
  for n, line in enumerate(text.splitlines(), 1):
    body = line.split('#', 1)[0].strip()
    if not body:
      continue
    key, sep, raw = body.partition('=')
    key = key.strip()
    if not sep or not key:
      yield n, None, "expected 'key = value', got %r" % body
      continue
    yield n, key, raw.strip()

def _read(text, strict, diagnostics):
  if isinstance(text, (bytes, bytearray)):
    text = bytes(text).decode('utf-8', errors='replace')
  if text is None:
    text = ''
  if not isinstance(text, str):
    diagnostics.append(('<document>', "expected text, got %s" %
                        type(text).__name__))
    return {}
  values = {}
  seen = {}
  for n, key, raw in _split_lines(text):
    if key is None:
      diagnostics.append(('line %d' % n, raw))
      continue
    if key not in _BY_KEY:
      if strict:
        diagnostics.append((key, "unknown key (line %d)" % n))
      else:
        warnings.warn("parse_config: ignoring unknown key %r (line %d)" %
                      (key, n))
      continue
    if key in seen:
      diagnostics.append((key, "duplicate key (lines %d and %d)" %
                          (seen[key], n)))
      continue
    seen[key] = n
    values[key] = raw
  return values

def _validate(values, diagnostics):
  out = {}
  for f in FIELDS:
    if f.key not in values:
      out[f.key] = f.default
      continue
    v, err = _coerce(values[f.key], f.type)
    if err is None and not f.check(v):
      err = "expected %s %s, got %r" % (_TYPE_NAMES[f.type], f.expect, v)
    if err is not None:
      diagnostics.append((f.key, err))
      out[f.key] = f.default
    else:
      out[f.key] = v
  if out['grid.x_max'] <= out['grid.x_min']:
    diagnostics.append(('grid.x_max', "must exceed grid.x_min = %r" %
                        out['grid.x_min']))
  wells = {'single-dot': 1, 'double-dot': 2, 'four-dot': 4}[out['vmc.kind']]
  if out['vmc.n_electrons'] > 2*wells:
    diagnostics.append(('vmc.n_electrons', "at most %d electrons fit in %d "
                        "wells" % (2*wells, wells)))
  return out

def _build(out, diagnostics):
  try:
    params = ModelParams(out['alpha'], out['beta'], out['e_field'],
                         out['ell'], out['b_field'])
  except DomainError as e:
    diagnostics.append(('alpha', str(e)))
    return None
  ratio = params.alpha/math.sqrt(params.beta)
  if ratio >= 0.7:
    warnings.warn("parse_config: alpha/sqrt(beta) = %.3g is beyond the "
                  "perturbative range (< 0.7)" % ratio, RuntimeWarning)
  settings = {k: v for k, v in out.items() if '.' in k}
  return RunConfig(out['scenario'], params, out['seed'], out['output_dir'],
                   out['to_physical'], settings)

################################################################
def parse_config(text, strict=True, overrides=None):
  """
Parses a configuration document.

cfg = soqdot.parse_config(text, strict=True, overrides=None)

text -- "key = value" lines; "#" starts a comment; omitted keys take
        their FIELDS default.

strict -- unknown keys are errors; when False they only warn.

overrides -- mapping of key to value applied on top of the document
             (command-line flags). Values may be text or typed.

Never raises anything but ConfigError, whose diagnostics list every
offending field with the expected type or range.
  """
  diagnostics = []
  try:
    values = _read(text, strict, diagnostics)
    for key, v in (overrides or {}).items():
      if v is None:
        continue
      if key not in _BY_KEY:
        diagnostics.append((key, "unknown key"))
        continue
      values[key] = v
    out = _validate(values, diagnostics)
    cfg = None if diagnostics else _build(out, diagnostics)
  except Exception as e:
    diagnostics.append(('<document>', "unreadable: %s" % e))
  if diagnostics:
    logger.debug("parse_config: %d diagnostics", len(diagnostics))
    raise ConfigError(diagnostics)
  return cfg

def default_config():
  return parse_config('')

def _format(v):
  if isinstance(v, bool):
    return 'true' if v else 'false'
  if isinstance(v, float):
    return repr(v)
  return str(v)

################################################################
def serialize_config(cfg):
  """
Canonical text of a RunConfig: every key in FIELDS order, one
"key = value" line each, floats in shortest round-trip form.

text = soqdot.serialize_config(cfg)
  """
  return ''.join("%s = %s\n" % (k, _format(v)) for k, v in cfg.flat().items())

def normalize(text, strict=True):
  """
Canonical form of a configuration document: comments and blank lines
dropped, defaults filled in, keys in FIELDS order and values rewritten
in canonical form. Raises ConfigError for invalid documents.
  """
  diagnostics = []
  values = _read(text, strict, diagnostics)
  out = _validate(values, diagnostics)
  if not diagnostics:
    _build(out, diagnostics)
  if diagnostics:
    raise ConfigError(diagnostics)
  return ''.join("%s = %s\n" % (f.key, _format(out[f.key])) for f in FIELDS)
