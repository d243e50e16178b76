#
# Quantum states on multi-factor Hilbert spaces and the information
# measures computed from them: entropies, fidelity, concurrence,
# projective measurements, channels, discord, the quantum witness and the
# entropic uncertainty relation with quantum memory.
#
# All logarithms are natural; entropies are in nats.
#
from dataclasses import dataclass
from logging import getLogger
from typing import Optional, Tuple

import numpy
import scipy.optimize

from .errors import DomainError, ShapeError, StateError
from .linalg import (HERMITIAN_TOL, as_matrix, check_hermitian, embed, kron,
                     matrix_function, partial_trace, product, trace_norm)

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['SubsystemShape', 'StateVector', 'DensityMatrix',
           'MeasurementRecord', 'DiscordResult', 'UncertaintyRecord',
           'SIGMA_X', 'SIGMA_Y', 'SIGMA_Z', 'IDENTITY2',
           'pure_density', 'reduced', 'spectrum', 'von_neumann_entropy',
           'shannon_entropy', 'linear_entropy', 'conditional_entropy',
           'mutual_information', 'uhlmann_fidelity', 'concurrence2q',
           'projective_measure', 'dephase', 'kraus_apply',
           'witness_probabilities', 'quantum_witness', 'basis_from_bloch',
           'discord_details', 'quantum_discord', 'berta_uncertainty']

NORM_TOL = 1e-10

IDENTITY2 = numpy.eye(2, dtype=complex)
SIGMA_X = numpy.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = numpy.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = numpy.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class SubsystemShape:
  """Ordered tensor-factor dimensions of a state."""
  dims: Tuple[int, ...]

  def __post_init__(self):
    dims = tuple(int(d) for d in self.dims)
    if len(dims) == 0 or min(dims) < 1:
      raise ShapeError("SubsystemShape: Error: invalid dimensions %s" %
                       (self.dims,))
    object.__setattr__(self, 'dims', dims)

  @property
  def dim(self):
    return product(self.dims)

  def complement(self, factors):
    factors = set(factors)
    return tuple(k for k in range(len(self.dims)) if k not in factors)


def _shape(shape, n, where):
  if shape is None:
    shape = SubsystemShape((n,))
  elif not isinstance(shape, SubsystemShape):
    shape = SubsystemShape(tuple(shape))
  if shape.dim != n:
    raise ShapeError("%s: Error: shape %s does not match dimension %d" %
                     (where, shape.dims, n))
  return shape


class StateVector:
  """
Normalized state vector carrying its tensor-factor shape.

psi = soqdot.StateVector(amplitudes, dims)
  """

  def __init__(self, amplitudes, shape=None):
    a = numpy.asarray(amplitudes, dtype=complex).ravel()
    if not numpy.all(numpy.isfinite(a)):
      raise StateError("StateVector: Error: non-finite amplitudes")
    norm = float(numpy.vdot(a, a).real)
    if abs(norm - 1.0) > NORM_TOL:
      raise StateError("StateVector: Error: amplitudes not normalized "
                       "(norm^2 = %.12g)" % norm)
    self.amplitudes = a
    self.shape = _shape(shape, a.size, "StateVector")
    self.amplitudes.setflags(write=False)

  @classmethod
  def normalized(cls, amplitudes, shape=None):
    a = numpy.asarray(amplitudes, dtype=complex).ravel()
    norm = numpy.sqrt(numpy.vdot(a, a).real)
    if norm == 0.0:
      raise StateError("StateVector: Error: zero vector cannot be normalized")
    return cls(a/norm, shape)

  @property
  def dims(self):
    return self.shape.dims

  def tensor(self):
    return self.amplitudes.reshape(self.dims)


class DensityMatrix:
  """
Density matrix carrying its tensor-factor shape.

rho = soqdot.DensityMatrix(matrix, dims)

The matrix must be Hermitian within 1e-9, have unit trace within 1e-9 and
smallest eigenvalue >= -1e-9. It is stored symmetrized and read-only.
  """

  def __init__(self, matrix, shape=None, check=True):
    M = as_matrix(matrix, "DensityMatrix")
    self.shape = _shape(shape, M.shape[0], "DensityMatrix")
    if check:
      M = check_hermitian(M, "DensityMatrix")
      tr = numpy.trace(M).real
      if abs(tr - 1.0) > HERMITIAN_TOL:
        raise StateError("DensityMatrix: Error: trace %.12g != 1" % tr)
      lmin = numpy.linalg.eigvalsh(M)[0]
      if lmin < -HERMITIAN_TOL:
        raise StateError("DensityMatrix: Error: negative eigenvalue %.3e" %
                         lmin)
    self.matrix = M
    self.matrix.setflags(write=False)

  @property
  def dims(self):
    return self.shape.dims

  @property
  def dim(self):
    return self.matrix.shape[0]

  def __repr__(self):
    return "DensityMatrix(dims=%s)" % (self.dims,)


@dataclass(frozen=True)
class MeasurementRecord:
  outcome: int
  probability: float
  post_state: Optional[DensityMatrix]

  @property
  def absent(self):
    return self.post_state is None


def _density(rho, where):
  if isinstance(rho, DensityMatrix):
    return rho
  if isinstance(rho, StateVector):
    return pure_density(rho)
  M = as_matrix(rho, where)
  return DensityMatrix(M)

################################################################
def pure_density(psi):
  """
Projector onto a normalized state vector.

rho = soqdot.pure_density(psi)

psi -- StateVector (or a normalized 1-D array).
  """
  if not isinstance(psi, StateVector):
    psi = StateVector(psi)
  a = psi.amplitudes
  return DensityMatrix(numpy.outer(a, a.conj()), psi.shape)

def reduced(rho, keep):
  """
Reduced density matrix on the kept factors.

rho_k = soqdot.reduced(rho, keep)
  """
  rho = _density(rho, "reduced")
  keep = sorted(set(keep))
  M = partial_trace(rho.matrix, rho.dims, keep)
  return DensityMatrix(M, tuple(rho.dims[k] for k in keep))

def spectrum(rho, tol=HERMITIAN_TOL):
  """
Eigenvalues of a density matrix with [-tol, 0) clamped to 0.
Eigenvalues below -tol raise DomainError.
  """
  M = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
  w = numpy.linalg.eigvalsh(0.5*(M + M.conj().T))
  if w.size and w[0] < -tol:
    raise DomainError("spectrum: Error: eigenvalue %.3e below -%.0e" %
                      (w[0], tol))
  return numpy.clip(w, 0.0, None)

def shannon_entropy(p):
  """
Shannon entropy in nats with 0 ln 0 = 0.

h = soqdot.shannon_entropy(p)
  """
  p = numpy.asarray(p, dtype=float)
  p = p[p > 0.0]
  return float(-numpy.sum(p*numpy.log(p)))

################################################################
def von_neumann_entropy(rho):
  """
Von Neumann entropy S = -tr(rho ln rho) in nats.

S = soqdot.von_neumann_entropy(rho)

rho -- DensityMatrix or square array.
  """
  return shannon_entropy(spectrum(rho))

def linear_entropy(rho):
  """1 - tr(rho^2)."""
  M = _density(rho, "linear_entropy").matrix
  return float(1.0 - numpy.real(numpy.trace(M @ M)))

################################################################
def conditional_entropy(rho, a_factors=(0,)):
  """
Quantum conditional entropy S(A|B) = S(rho_AB) - S(rho_B).

S = soqdot.conditional_entropy(rho, a_factors=(0,))

rho -- DensityMatrix whose shape has at least two factors.

a_factors -- factor indices forming A; every other factor forms B.
  """
  rho = _density(rho, "conditional_entropy")
  if len(rho.dims) < 2:
    raise ShapeError("conditional_entropy: Error: need a bipartite shape, "
                     "got %s" % (rho.dims,))
  b = rho.shape.complement(a_factors)
  if len(b) == 0 or len(b) == len(rho.dims):
    raise ShapeError("conditional_entropy: Error: invalid A factors %s" %
                     (tuple(a_factors),))
  return von_neumann_entropy(rho) - von_neumann_entropy(reduced(rho, b))

def mutual_information(rho, a_factors=(0,)):
  rho = _density(rho, "mutual_information")
  b = rho.shape.complement(a_factors)
  return (von_neumann_entropy(reduced(rho, a_factors)) +
          von_neumann_entropy(reduced(rho, b)) - von_neumann_entropy(rho))

################################################################
def uhlmann_fidelity(rho, sigma):
  """
Uhlmann fidelity in the squared convention,
F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 = ||sqrt(rho) sqrt(sigma)||_1^2.

F = soqdot.uhlmann_fidelity(rho, sigma)
  """
  r = _density(rho, "uhlmann_fidelity").matrix
  s = _density(sigma, "uhlmann_fidelity").matrix
  if r.shape != s.shape:
    raise ShapeError("uhlmann_fidelity: Error: dimensions %d and %d differ" %
                     (r.shape[0], s.shape[0]))
  rq = matrix_function(r, numpy.sqrt)
  sq = matrix_function(s, numpy.sqrt)
  return trace_norm(rq @ sq)**2

################################################################
def concurrence2q(rho):
  """
Wootters concurrence of a two-qubit density matrix.

C = soqdot.concurrence2q(rho)
  """
  rho = _density(rho, "concurrence2q")
  if rho.dim != 4 or rho.dims not in ((2, 2), (4,)):
    raise ShapeError("concurrence2q: Error: expected a two-qubit state, got "
                     "shape %s" % (rho.dims,))
  r = rho.matrix
  yy = kron(SIGMA_Y, SIGMA_Y)
  tilde = yy @ r.conj() @ yy
  rq = matrix_function(r, numpy.sqrt)
#
# Eigenvalues of sqrt(rho) tilde sqrt(rho) are the R_i of rho tilde.
#
  K = rq @ tilde @ rq
  R = numpy.linalg.eigvalsh(0.5*(K + K.conj().T))
  R = numpy.sort(numpy.clip(R, 0.0, None))[::-1]
  s = numpy.sqrt(R)
  return float(max(0.0, s[0] - s[1] - s[2] - s[3]))

################################################################
def _check_projectors(projectors, d, where):
  P = [as_matrix(p, where) for p in projectors]
  if len(P) == 0:
    raise StateError("%s: Error: empty projector set" % where)
  total = numpy.zeros((d, d), dtype=complex)
  for i, p in enumerate(P):
    if p.shape != (d, d):
      raise ShapeError("%s: Error: projector %d has shape %s, expected %s" %
                       (where, i, p.shape, (d, d)))
    if numpy.max(numpy.abs(p @ p - p)) > HERMITIAN_TOL or \
       numpy.max(numpy.abs(p - p.conj().T)) > HERMITIAN_TOL:
      raise StateError("%s: Error: operator %d is not an orthogonal "
                       "projector" % (where, i))
    for j in range(i):
      if numpy.max(numpy.abs(P[j] @ p)) > HERMITIAN_TOL:
        raise StateError("%s: Error: projectors %d and %d overlap" %
                         (where, j, i))
    total += p
  if numpy.max(numpy.abs(total - numpy.eye(d))) > HERMITIAN_TOL:
    raise StateError("%s: Error: projectors are incomplete (sum != I)" %
                     where)
  return P

def projective_measure(rho, projectors, subsystem=0):
  """
Projective measurement of one tensor factor.

records = soqdot.projective_measure(rho, projectors, subsystem)

rho -- DensityMatrix.

projectors -- orthogonal projectors on factor `subsystem`, summing to I.

subsystem -- factor index measured.

Returns one MeasurementRecord per projector. Outcomes with zero
probability carry post_state None.
  """
  rho = _density(rho, "projective_measure")
  d = rho.dims[subsystem]
  P = _check_projectors(projectors, d, "projective_measure")
  M = rho.matrix
  norm = numpy.trace(M).real
  records = []
  for k, p in enumerate(P):
    full = embed(p, rho.dims, subsystem)
    prob = float(numpy.trace(full @ M).real/norm)
    if prob <= 1e-14:
      records.append(MeasurementRecord(k, max(prob, 0.0), None))
      continue
    post = full @ M @ full/(prob*norm)
    records.append(MeasurementRecord(k, prob, DensityMatrix(post, rho.shape)))
  return records

def dephase(rho, projectors, subsystem=0):
  """
Blind (non-selective) measurement: sum_k P_k rho P_k on one factor.

xi = soqdot.dephase(rho, projectors, subsystem)
  """
  rho = _density(rho, "dephase")
  P = _check_projectors(projectors, rho.dims[subsystem], "dephase")
  out = numpy.zeros_like(rho.matrix)
  for p in P:
    full = embed(p, rho.dims, subsystem)
    out += full @ rho.matrix @ full
  return DensityMatrix(out, rho.shape)

def kraus_apply(rho, operators, subsystem=None):
  """
Applies the channel N(rho) = sum_i L_i rho L_i^dagger.

out = soqdot.kraus_apply(rho, operators, subsystem=None)

operators -- Kraus operators with sum L^dagger L = I within 1e-9.

subsystem -- factor the operators act on; None means the full space.
  """
  rho = _density(rho, "kraus_apply")
  d = rho.dim if subsystem is None else rho.dims[subsystem]
  L = [numpy.asarray(op, dtype=complex) for op in operators]
  total = numpy.zeros((d, d), dtype=complex)
  for op in L:
    if op.shape != (d, d):
      raise ShapeError("kraus_apply: Error: operator shape %s, expected %s" %
                       (op.shape, (d, d)))
    total += op.conj().T @ op
  if numpy.max(numpy.abs(total - numpy.eye(d))) > HERMITIAN_TOL:
    raise StateError("kraus_apply: Error: Kraus set is not trace preserving")
  out = numpy.zeros_like(rho.matrix)
  for op in L:
    full = op if subsystem is None else embed(op, rho.dims, subsystem)
    out += full @ rho.matrix @ full.conj().T
  return DensityMatrix(out, rho.shape)

################################################################
def witness_probabilities(rho, channel, blind, probe, channel_subsystem=0,
                          blind_subsystem=0, probe_subsystem=1):
  """
Probe probabilities with and without the blind measurement.

P, G = soqdot.witness_probabilities(rho, channel, blind, probe)

P = tr(probe N(rho)), G = tr(probe N(Xi)) with Xi the blind-measured state.
  """
  rho = _density(rho, "quantum_witness")
  xi = dephase(rho, blind, blind_subsystem)
  probe = embed(probe, rho.dims, probe_subsystem)
  P = numpy.trace(probe @ kraus_apply(rho, channel, channel_subsystem).matrix)
  G = numpy.trace(probe @ kraus_apply(xi, channel, channel_subsystem).matrix)
  return float(P.real), float(G.real)

def quantum_witness(rho, channel, blind, probe, channel_subsystem=0,
                    blind_subsystem=0, probe_subsystem=1):
  """
Quantum witness W = |tr{probe (N(rho) - N(Xi))}|.

W = soqdot.quantum_witness(rho, channel, blind, probe)

channel -- Kraus operators acting on factor channel_subsystem.

blind -- projectors of the blind measurement on factor blind_subsystem.

probe -- projector on factor probe_subsystem.
  """
  P, G = witness_probabilities(rho, channel, blind, probe, channel_subsystem,
                               blind_subsystem, probe_subsystem)
  return abs(P - G)

################################################################
def basis_from_bloch(theta, phi):
  """
Orthonormal qubit basis (columns) along the Bloch direction (theta, phi).

U = soqdot.basis_from_bloch(theta, phi)
  """
  c, s = numpy.cos(theta/2), numpy.sin(theta/2)
  e = numpy.exp(1j*phi)
  return numpy.array([[c, -s*e.conjugate()], [s*e, c]], dtype=complex)

@dataclass(frozen=True)
class DiscordResult:
  value: float
  theta: float
  phi: float
  measured_side: str


def _bloch_projectors(theta, phi):
  theta = numpy.asarray(theta, dtype=float)
  phi = numpy.asarray(phi, dtype=float)
  n = numpy.stack([numpy.sin(theta)*numpy.cos(phi),
                   numpy.sin(theta)*numpy.sin(phi),
                   numpy.cos(theta)], axis=-1)
  ns = numpy.einsum('...k,kij->...ij', n, numpy.array([SIGMA_X, SIGMA_Y,
                                                        SIGMA_Z]))
  return 0.5*(IDENTITY2 + ns), 0.5*(IDENTITY2 - ns)

def _batch_entropy(M):
  w = numpy.clip(numpy.linalg.eigvalsh(M), 0.0, None)
  with numpy.errstate(divide='ignore', invalid='ignore'):
    terms = numpy.where(w > 0.0, -w*numpy.log(w), 0.0)
  return terms.sum(axis=-1)

def _conditional_cost(r, side, theta, phi):
#
# r[a,b,a',b'] is the two-qubit state; the measurement acts on `side`
# and the cost is sum_j p_j S(rho_other|j).
#
  cost = 0.0
  for P in _bloch_projectors(theta, phi):
    if side == 1:
      M = numpy.einsum('abcd,...db->...ac', r, P)
    else:
      M = numpy.einsum('abcd,...ca->...bd', r, P)
    p = numpy.einsum('...ii->...', M).real
    safe = numpy.where(p > 1e-15, p, 1.0)
    S = _batch_entropy(M/safe[..., None, None])
    cost = cost + numpy.where(p > 1e-15, p*S, 0.0)
  return cost

def discord_details(rho, measured_side='B', grid=64, tol=1e-8):
  """
Quantum discord of a two-qubit state with the minimising measurement.

res = soqdot.discord_details(rho, measured_side='B', grid=64, tol=1e-8)

measured_side -- 'A' or 'B'; the side on which rank-1 projective
                 measurements are optimised.

grid -- number of points per Bloch angle in the exhaustive search.

tol -- objective tolerance of the Nelder-Mead refinement.

D = S(rho_m) - S(rho_AB) + min sum_j p_j S(rho_{other|j}), m the measured
side.
  """
  rho = _density(rho, "quantum_discord")
  if rho.dim != 4 or rho.dims not in ((2, 2), (4,)):
    raise ShapeError("quantum_discord: Error: expected a two-qubit state, "
                     "got shape %s" % (rho.dims,))
  side = {'A': 0, 'B': 1}.get(str(measured_side).upper())
  if side is None:
    raise ShapeError("quantum_discord: Error: measured_side must be 'A' or "
                     "'B', got %r" % (measured_side,))
  rho = DensityMatrix(rho.matrix, (2, 2))
  r = rho.matrix.reshape(2, 2, 2, 2)
  theta = numpy.linspace(0.0, numpy.pi, int(grid))
  phi = numpy.linspace(0.0, 2*numpy.pi, int(grid), endpoint=False)
  T, F = numpy.meshgrid(theta, phi, indexing='ij')
  costs = _conditional_cost(r, side, T, F)
  i, j = numpy.unravel_index(numpy.argmin(costs), costs.shape)
  best = (float(costs[i, j]), float(T[i, j]), float(F[i, j]))
  res = scipy.optimize.minimize(
    lambda x: float(_conditional_cost(r, side, x[0], x[1])),
    x0=[best[1], best[2]], method='Nelder-Mead',
    options={'xatol': 1e-9, 'fatol': tol*1e-2, 'maxiter': 4000})
  if res.fun < best[0]:
    best = (float(res.fun), float(res.x[0]), float(res.x[1]))
  value = (von_neumann_entropy(reduced(rho, (side,))) -
           von_neumann_entropy(rho) + best[0])
  logger.debug("discord: side=%s value=%.12g theta=%.6f phi=%.6f",
               measured_side, value, best[1], best[2])
  return DiscordResult(value, best[1], best[2], 'AB'[side])

def quantum_discord(rho, measured_side='B', grid=64, tol=1e-8):
  """
Quantum discord of a two-qubit state (see discord_details).

D = soqdot.quantum_discord(rho, measured_side='B')
  """
  return discord_details(rho, measured_side, grid, tol).value

################################################################
@dataclass(frozen=True)
class UncertaintyRecord:
  S_RB: float
  S_QB: float
  c: float
  S_AB: float
  lhs: float
  rhs: float
  slack: float


def _basis(X, d, where):
  U = numpy.asarray(X, dtype=complex)
  if U.shape != (d, d):
    raise ShapeError("%s: Error: basis has shape %s, expected %s" %
                     (where, U.shape, (d, d)))
  if numpy.max(numpy.abs(U.conj().T @ U - numpy.eye(d))) > HERMITIAN_TOL:
    raise StateError("%s: Error: basis vectors are not a complete "
                     "orthonormal set" % where)
  return U

def berta_uncertainty(rho, X, Y, subsystem=0):
  """
Entropic uncertainty relation with quantum memory.

rec = soqdot.berta_uncertainty(rho, X, Y, subsystem=0)

rho -- bipartite DensityMatrix; factor `subsystem` is A, the rest is the
       memory B.

X, Y -- matrices whose columns are the two measurement bases on A.

Returns S(R|B), S(Q|B) of the X- and Y-dephased states, the overlap
c = max |<x_m|y_n>|^2, S(A|B), lhs = S(R|B) + S(Q|B),
rhs = ln(1/c) + S(A|B) and slack = lhs - rhs.
  """
  rho = _density(rho, "berta_uncertainty")
  d = rho.dims[subsystem]
  U = _basis(X, d, "berta_uncertainty")
  V = _basis(Y, d, "berta_uncertainty")
  PX = [numpy.outer(U[:, k], U[:, k].conj()) for k in range(d)]
  PY = [numpy.outer(V[:, k], V[:, k].conj()) for k in range(d)]
  a = (subsystem,)
  S_RB = conditional_entropy(dephase(rho, PX, subsystem), a)
  S_QB = conditional_entropy(dephase(rho, PY, subsystem), a)
  S_AB = conditional_entropy(rho, a)
  c = float(numpy.max(numpy.abs(U.conj().T @ V)**2))
  lhs = S_RB + S_QB
  rhs = -numpy.log(c) + S_AB
  return UncertaintyRecord(S_RB, S_QB, c, S_AB, lhs, float(rhs),
                           float(lhs - rhs))
