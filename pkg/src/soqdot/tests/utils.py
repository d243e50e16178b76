import numpy

#
# Shared helpers for the soqdot tests. Test modules pull these in with
# "from utils import *".
#

__all__ = ['numpy', 'check_value', 'check_values', 'make_rng',
           'random_state', 'random_density', 'random_unitary']

#
# Compare two single values for equality.
#
def check_value(title, value1, value2, delta=None):
  if delta is None:
    delta = 1e-8
  diff = abs(value1 - value2)
  assert diff < delta, "%s: |%r - %r| = %.3e >= %.1e" % \
                       (title, value1, value2, diff, delta)

#
# Compare two numpy values for equality.
#
def check_values(title, values1, values2, delta=1e-8):
  v1 = numpy.asarray(values1)
  v2 = numpy.asarray(values2)
  assert v1.shape == v2.shape or v1.size == v2.size, \
    "%s: shapes %s and %s differ" % (title, v1.shape, v2.shape)
# First see if values are exactly equal.
  if numpy.array_equal(v1, v2):
    return
  diff = numpy.max(numpy.abs(v1.ravel() - v2.ravel()))
  assert diff < delta, "%s: max diff = %.3e >= %.1e" % (title, diff, delta)

def make_rng(seed=20240521):
  return numpy.random.default_rng(seed)

#
# Random pure state of dimension d.
#
def random_state(rng, d):
  v = rng.normal(size=d) + 1j*rng.normal(size=d)
  return v/numpy.linalg.norm(v)

#
# Random density matrix of dimension d and rank r (full rank by default).
#
def random_density(rng, d, r=None):
  r = d if r is None else r
  G = rng.normal(size=(d, r)) + 1j*rng.normal(size=(d, r))
  rho = G @ G.conj().T
  rho = 0.5*(rho + rho.conj().T)
  return rho/numpy.trace(rho).real

def random_unitary(rng, d):
  Q, R = numpy.linalg.qr(rng.normal(size=(d, d)) + 1j*rng.normal(size=(d, d)))
  return Q*(numpy.diag(R)/numpy.abs(numpy.diag(R)))
