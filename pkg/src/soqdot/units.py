#
# Conversion of dimensionless model quantities to GaAs units
# (m* = 0.067 m_e, d0 = 10 nm, hbar omega = 11.4 meV at beta = 1).
#
# Conversions are applied to output columns only; every computation runs
# in dimensionless units.
#
import numpy

from .errors import DomainError

__all__ = ['GAAS', 'PHYSICAL_UNITS', 'physical_kind', 'to_physical']

GAAS = {
  'length': (10.0, 'nm'),
  'energy': (11.4, 'meV'),
  'e_field': (1.1, 'V/um'),
  'alpha': (114.0, 'meV*nm'),
}

#
# Column name -> quantity kind.
#
PHYSICAL_UNITS = {
  'alpha': 'alpha',
  'e_field': 'e_field',
  'ell': 'length',
  'x': 'length',
  'x1_bin': 'length',
  'x2_bin': 'length',
  'centroid': 'length',
  'centroid_err': 'length',
  'beta': 'energy',
  'b_field': 'energy',
  'energy': 'energy',
  'energy_err': 'energy',
}

def physical_kind(name):
  """Quantity kind of a column, or None for dimensionless columns."""
  return PHYSICAL_UNITS.get(name)

################################################################
def to_physical(name, value):
  """
Converts a dimensionless column value to GaAs units.

v, unit = soqdot.to_physical('e_field', 2.0)

name -- a column listed in PHYSICAL_UNITS, or one of the kinds 'length',
        'energy', 'e_field', 'alpha'.

value -- scalar or array.

beta enters as the confinement energy hbar omega = 11.4 meV * beta.
  """
  kind = PHYSICAL_UNITS.get(name, name)
  if kind not in GAAS:
    raise DomainError("to_physical: Error: no physical unit for %r" % (name,))
  scale, unit = GAAS[kind]
  return numpy.asarray(value, dtype=float)*scale, unit
