#
# Dense complex linear algebra used by every other module: Hermitian
# eigendecomposition, spectral matrix functions, tensor products and
# partial traces over multi-factor shapes.
#
# Matrices are plain numpy arrays of dtype complex128. Decompositions are
# delegated to LAPACK through scipy.linalg.
#
import functools
import operator
from collections import namedtuple

import numpy
import scipy.linalg

from .errors import DomainError, NotHermitianError, ShapeError

__all__ = ['HermitianEig', 'HERMITIAN_TOL', 'as_matrix', 'max_asymmetry',
           'is_hermitian', 'check_hermitian', 'hermitian_eig',
           'matrix_function', 'kron', 'partial_trace', 'embed',
           'trace_norm', 'product']

HERMITIAN_TOL = 1e-9

HermitianEig = namedtuple('HermitianEig', ['eigenvalues', 'eigenvectors'])

def product(seq):
  """Product of a sequence."""
  return functools.reduce(operator.mul, seq, 1)

def as_matrix(A, where="as_matrix"):
  """
Converts A to a square complex128 array with finite entries.

M = soqdot.as_matrix(A)
  """
  M = numpy.asarray(A, dtype=complex)
  if M.ndim != 2 or M.shape[0] != M.shape[1]:
    raise ShapeError("%s: Error: expected a square matrix, got shape %s" %
                     (where, M.shape))
  if not numpy.all(numpy.isfinite(M)):
    raise DomainError("%s: Error: matrix has NaN or Inf entries" % where)
  return M

def max_asymmetry(A):
  """Largest entry of |A - A^dagger|."""
  M = numpy.asarray(A)
  if M.size == 0:
    return 0.0
  return float(numpy.max(numpy.abs(M - M.conj().T)))

def is_hermitian(A, tol=HERMITIAN_TOL):
  return max_asymmetry(A) <= tol

def check_hermitian(A, where="check_hermitian", tol=HERMITIAN_TOL):
  """
Validates that A is Hermitian within tol per entry and returns the
symmetrized matrix (A + A^dagger)/2.

H = soqdot.check_hermitian(A, where="caller")
  """
  M = as_matrix(A, where)
  asym = max_asymmetry(M)
  if asym > tol:
    raise NotHermitianError("%s: Error: matrix is not Hermitian "
                            "(max asymmetry %.3e > %.1e)" % (where, asym, tol),
                            asymmetry=asym)
  return 0.5*(M + M.conj().T)

################################################################
def hermitian_eig(A):
  """
Eigendecomposition of a Hermitian matrix.

eig = soqdot.hermitian_eig(A)

A -- square complex matrix, Hermitian within 1e-9 per entry.

Returns a HermitianEig with real ascending eigenvalues and a matrix whose
columns are the orthonormal eigenvectors.
  """
  H = check_hermitian(A, "hermitian_eig")
  if numpy.isrealobj(A):
    H = H.real
  if H.shape[0] == 0:
    return HermitianEig(numpy.zeros(0), numpy.zeros((0, 0), dtype=complex))
  w, v = scipy.linalg.eigh(H)
  return HermitianEig(w, v)

################################################################
def _apply_scalar(f, x):
  try:
    y = f(x)
  except TypeError:
    y = numpy.array([f(t) for t in x])
  return numpy.asarray(y, dtype=float)

def matrix_function(A, f, tol=HERMITIAN_TOL):
  """
Applies a real scalar function to a Hermitian matrix through its spectrum.

F = soqdot.matrix_function(A, f)

A -- Hermitian matrix.

f -- real map evaluated on the eigenvalues (numpy ufunc or scalar
     callable).

tol -- eigenvalues in [-tol, 0) are retried as 0 when f is undefined on
       them; anything else undefined raises DomainError.
  """
  w, v = hermitian_eig(A)
  with numpy.errstate(invalid='raise', divide='raise'):
    try:
      fw = _apply_scalar(f, w)
      ok = numpy.all(numpy.isfinite(fw))
    except (FloatingPointError, ValueError):
      ok = False
    if not ok:
      if numpy.any(w < -tol):
        raise DomainError("matrix_function: Error: function undefined at "
                          "eigenvalue %.3e" % w.min())
      try:
        fw = _apply_scalar(f, numpy.where(w < 0.0, 0.0, w))
      except (FloatingPointError, ValueError):
        fw = numpy.array([numpy.nan])
      if not numpy.all(numpy.isfinite(fw)):
        raise DomainError("matrix_function: Error: function undefined on "
                          "the spectrum")
  F = (v*fw) @ v.conj().T
  return 0.5*(F + F.conj().T)

################################################################
def kron(A, B, *more):
  """
Tensor (Kronecker) product of two or more matrices.

C = soqdot.kron(A, B)

kron(A,B)[i*dB+k, j*dB+l] = A[i,j]*B[k,l].
  """
  mats = [numpy.asarray(A, dtype=complex), numpy.asarray(B, dtype=complex)]
  mats.extend(numpy.asarray(m, dtype=complex) for m in more)
  return functools.reduce(numpy.kron, mats)

def _check_dims(n, dims, where):
  dims = tuple(int(d) for d in dims)
  if len(dims) == 0 or min(dims) < 1:
    raise ShapeError("%s: Error: invalid factor dimensions %s" % (where, dims))
  if product(dims) != n:
    raise ShapeError("%s: Error: factor dimensions %s do not multiply to %d" %
                     (where, dims, n))
  return dims

################################################################
def partial_trace(M, dims, keep):
  """
Partial trace of an operator on a multi-factor space.

R = soqdot.partial_trace(M, dims, keep)

M -- square matrix on the space of shape dims.

dims -- ordered factor dimensions; their product must equal M's dimension.

keep -- non-empty collection of factor indices to keep. The result acts
        on the kept factors in ascending index order.
  """
  M = as_matrix(M, "partial_trace")
  dims = _check_dims(M.shape[0], dims, "partial_trace")
  keep = sorted(set(int(k) for k in keep))
  if len(keep) == 0 or keep[0] < 0 or keep[-1] >= len(dims):
    raise ShapeError("partial_trace: Error: invalid keep set %s for %d "
                     "factors" % (keep, len(dims)))
  t = M.reshape(dims + dims)
  for k in reversed(range(len(dims))):
    if k in keep:
      continue
    t = numpy.trace(t, axis1=k, axis2=k + t.ndim//2)
  d = product(dims[k] for k in keep)
  return t.reshape(d, d)

def embed(op, dims, index):
  """
Lifts an operator on factor `index` to the full space of shape dims.

O = soqdot.embed(op, dims, index)
  """
  op = numpy.asarray(op, dtype=complex)
  dims = tuple(int(d) for d in dims)
  if not 0 <= index < len(dims):
    raise ShapeError("embed: Error: factor index %d out of range" % index)
  if op.shape != (dims[index], dims[index]):
    raise ShapeError("embed: Error: operator shape %s does not match factor "
                     "dimension %d" % (op.shape, dims[index]))
  left = numpy.eye(product(dims[:index]), dtype=complex)
  right = numpy.eye(product(dims[index+1:]), dtype=complex)
  return numpy.kron(numpy.kron(left, op), right)

################################################################
def trace_norm(M):
  """
Sum of the singular values of M.

t = soqdot.trace_norm(M)
  """
  M = numpy.asarray(M, dtype=complex)
  if M.size == 0:
    return 0.0
  return float(numpy.sum(scipy.linalg.svdvals(M)))
