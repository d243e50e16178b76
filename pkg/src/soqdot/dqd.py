#
# Numerical two-electron model of the quasi-1D double dot: a finite
# difference single-particle solver, configuration interaction with a
# softened Coulomb kernel, the Rashba spin-orbit block over the lowest
# correlated states, reduced density matrices and entropy sweeps over
# (alpha, E0).
#
# Units are dimensionless: lengths in d0, energies in hbar^2/(m d0^2).
# The single-particle Hamiltonian is -(1/2) d^2/dx^2 + V(x) + E0 x with
# V(x) = (beta^2/2) min_c (x - c)^2 over the well centres c.
#
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import ClassVar, Dict, List, Optional, Tuple

import numpy
import scipy.linalg
import scipy.sparse
import scipy.special

from .analytic import PI0, PI1, T_MINUS, T_PLUS, T_ZERO, SINGLET
from .errors import DomainError, ShapeError
from .linalg import hermitian_eig, check_hermitian
from .states import (DensityMatrix, projective_measure, reduced,
                     von_neumann_entropy)

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['Grid1D', 'PotentialSpec', 'OrbitalSet', 'CiBasis',
           'CoulombParams', 'CiResult', 'SpinOrbitResult', 'RdmRecord',
           'TargetState', 'SweepRow', 'SweepTable', 'SWEEP_COLUMNS',
           'solve_single_particle', 'coulomb_matrix_elements',
           'ci_diagonalize', 'add_spin_orbit', 'numeric_rdms',
           'heitler_london', 'reference_state', 'select_target',
           'continue_target', 'track_targets',
           'measured_entropies', 'entropy_sweep']

SWEEP_COLUMNS = ('alpha', 'e_field', 'ell', 'coulomb', 'S_pre', 'S_post',
                 'delta_S', 'overlap_flag', 'overlap')

#
# Two-spin basis order uu, ud, du, dd.
#
_SPIN_BASIS = numpy.eye(4)
_SIGMA_Y = numpy.array([[0, -1j], [1j, 0]])
_SIGMA_Z = numpy.diag([1.0, -1.0])

REFINE_TOL = 1e-4
PROBE_LEVELS = 10
TRACK_STEP = 0.05


@dataclass(frozen=True)
class PotentialSpec:
  """
Confinement potential.

kind -- 'single-dot', 'double-dot' (wells at +-ell/2) or 'four-dot'
        (wells at +-ell/2, +-3 ell/2).
  """
  kind: str = 'double-dot'
  beta: float = 1.0
  ell: float = 0.8
  e_field: float = 0.0

  KINDS: ClassVar[Tuple[str, ...]] = ('single-dot', 'double-dot', 'four-dot')

  def __post_init__(self):
    if self.kind not in self.KINDS:
      raise DomainError("PotentialSpec: Error: kind must be one of %s, got "
                        "%r" % (", ".join(self.KINDS), self.kind))
    if not self.beta > 0.0:
      raise DomainError("PotentialSpec: Error: beta must be > 0")
    if not self.ell >= 0.0:
      raise DomainError("PotentialSpec: Error: ell must be >= 0")

  def branch_centers(self):
    """Parabola centres without the field shift."""
    h = 0.5*self.ell
    if self.kind == 'single-dot':
      return numpy.array([0.0])
    if self.kind == 'double-dot':
      return numpy.array([-h, h])
    return numpy.array([-3*h, -h, h, 3*h])

  @property
  def shift(self):
    """Field displacement d = E0/beta^2 of every minimum."""
    return self.e_field/self.beta**2

  def centers(self):
    return self.branch_centers() - self.shift

  def confinement(self, x):
    x = numpy.asarray(x, dtype=float)
    d = x[..., None] - self.branch_centers()
    return 0.5*self.beta**2*numpy.min(d*d, axis=-1)

  def __call__(self, x):
    return self.confinement(x) + self.e_field*numpy.asarray(x, dtype=float)


@dataclass(frozen=True)
class Grid1D:
  x_min: float = -12.0
  x_max: float = 12.0
  n_points: int = 1024

  def __post_init__(self):
    if int(self.n_points) < 64:
      raise ShapeError("Grid1D: Error: n_points must be >= 64, got %d" %
                       self.n_points)
    if not self.x_max > self.x_min:
      raise ShapeError("Grid1D: Error: x_max must exceed x_min")
    object.__setattr__(self, 'n_points', int(self.n_points))

  @property
  def spacing(self):
    return (self.x_max - self.x_min)/(self.n_points - 1)

  @property
  def x(self):
    return numpy.linspace(self.x_min, self.x_max, self.n_points)

  def weights(self):
    """Trapezoid quadrature weights."""
    w = numpy.full(self.n_points, self.spacing)
    w[0] = w[-1] = 0.5*self.spacing
    return w

  def covers(self, pot):
    c = pot.centers()
    m = 5.0/math.sqrt(pot.beta)
    return c.min() - m >= self.x_min and c.max() + m <= self.x_max

  def refined(self):
    """The same box with half the spacing."""
    return Grid1D(self.x_min, self.x_max, 2*self.n_points - 1)

  @classmethod
  def for_potential(cls, pot, x_min=-12.0, x_max=12.0, n_points=1024):
    """
Default box, widened (at the default spacing) when the potential minima
plus 5/sqrt(beta) fall outside it.
    """
    g = cls(x_min, x_max, n_points)
    if g.covers(pot):
      return g
    c = pot.centers()
    m = 5.0/math.sqrt(pot.beta)
    lo = min(x_min, c.min() - m - 1.0)
    hi = max(x_max, c.max() + m + 1.0)
    n = int(math.ceil((hi - lo)/g.spacing)) + 1
    logger.info("Grid1D: widened box to [%.3g, %.3g] with %d points",
                lo, hi, n)
    return cls(lo, hi, max(n, n_points))


@dataclass(frozen=True, eq=False)
class OrbitalSet:
  """
Single-particle orbitals sampled on a grid.

orbitals has shape (n_orbitals, n_points); rows are orthonormal under the
grid's trapezoid weights.
  """
  grid: Grid1D
  energies: numpy.ndarray
  orbitals: numpy.ndarray
  metadata: Dict = field(default_factory=dict)

  @property
  def n(self):
    return len(self.energies)

  def overlap(self):
    w = self.grid.weights()
    return (self.orbitals*w) @ self.orbitals.T

  def derivative_matrix(self):
    """
D[i,k] = <phi_i|d/dx phi_k>, exactly antisymmetric.
    """
    G = _first_derivative(self.grid)
    return self.grid.spacing*(self.orbitals @ (G @ self.orbitals.T))


@dataclass(frozen=True)
class CoulombParams:
  """
Softened interaction strength/sqrt((x1 - x2)^2 + softening^2).
strength is e^2/(kappa d0) in energy units (about 1 for GaAs at d0 = 10 nm).
  """
  strength: float = 1.0
  softening: float = 0.1

  def __post_init__(self):
    if not self.strength >= 0.0:
      raise DomainError("CoulombParams: Error: strength must be >= 0")
    if not self.softening > 0.0:
      raise DomainError("CoulombParams: Error: softening must be > 0")

  def kernel(self, x):
    d = x[:, None] - x[None, :]
    return self.strength/numpy.sqrt(d*d + self.softening**2)


@dataclass(frozen=True, eq=False)
class CiBasis:
  """
Two-electron pair functions (i, j, b): b = +1 is (|ij> + |ji>)/sqrt(2)
with i <= j (|ii> for i == j), b = -1 is (|ij> - |ji>)/sqrt(2) with i < j.
Symmetric pairs come first.
  """
  n_orbitals: int
  pairs: Tuple[Tuple[int, int, int], ...]

  @classmethod
  def build(cls, n_orbitals):
    n = int(n_orbitals)
    sym = [(i, j, 1) for i in range(n) for j in range(i, n)]
    anti = [(i, j, -1) for i in range(n) for j in range(i + 1, n)]
    return cls(n, tuple(sym + anti))

  def __len__(self):
    return len(self.pairs)

  def block(self, b):
    return [k for k, p in enumerate(self.pairs) if p[2] == b]

  def transform(self, b):
    """
Rows are the pair functions of parity b in the product basis |i>|j>,
flattened as i*n + j.
    """
    n = self.n_orbitals
    rows = [p for p in self.pairs if p[2] == b]
    T = numpy.zeros((len(rows), n*n))
    s = 1.0/math.sqrt(2.0)
    for r, (i, j, sign) in enumerate(rows):
      if i == j:
        T[r, i*n + i] = 1.0
      else:
        T[r, i*n + j] = s
        T[r, j*n + i] = sign*s
    return T

  def energies(self, orbitals):
    e = orbitals.energies
    return numpy.array([e[i] + e[j] for i, j, b in self.pairs])


@dataclass(eq=False)
class CiResult:
  """
Correlated two-electron orbital states. coefficients[k] is the n x n
matrix C with Psi_k(x1, x2) = sum_ij C_ij phi_i(x1) phi_j(x2); parity[k] is
+1 for symmetric and -1 for antisymmetric states.
  """
  orbitals: OrbitalSet
  energies: numpy.ndarray
  coefficients: numpy.ndarray
  parity: numpy.ndarray
  metadata: Dict = field(default_factory=dict)

  def __len__(self):
    return len(self.energies)


@dataclass(eq=False)
class SpinOrbitResult:
  """
Eigenpairs of the CI + spin-orbit Hamiltonian. vectors[:, m] lives in the
restricted basis spanned by the columns of `basis` (rows index CI state k
times two-spin state s as k*4 + s).
  """
  ci: CiResult
  n_states: int
  energies: numpy.ndarray
  vectors: numpy.ndarray
  basis: numpy.ndarray
  hamiltonian: numpy.ndarray
  metadata: Dict = field(default_factory=dict)

  def product_vector(self, v):
    """Amplitudes c[k, s] of a restricted-basis vector."""
    v = numpy.asarray(v)
    if v.shape == (self.basis.shape[1],):
      v = self.basis @ v
    if v.shape != (4*self.n_states,):
      raise ShapeError("SpinOrbitResult: Error: vector length %d does not "
                       "match the spin-orbit basis" % v.shape[0])
    return v.reshape(self.n_states, 4)


@dataclass(frozen=True)
class RdmRecord:
  state: DensityMatrix
  spin_rdm: DensityMatrix
  orbital_rdm: DensityMatrix


@dataclass(frozen=True, eq=False)
class TargetState:
  """
Tracked two-electron state. manifold holds the eigenvectors (columns, in
the restricted basis) whose span the state is projected on; cluster lists
their indices in the spin-orbit result.
  """
  vector: numpy.ndarray
  overlap: float
  index: int
  cluster: Tuple[int, ...]
  flagged: bool
  manifold: Optional[numpy.ndarray] = None


def _kinetic_band(grid):
#
# Five-point central difference for -(1/2) d^2/dx^2 in lower banded form.
#
  h2 = grid.spacing**2
  n = grid.n_points
  band = numpy.empty((3, n))
  band[0] = 1.25/h2
  band[1] = -2.0/(3.0*h2)
  band[2] = 1.0/(24.0*h2)
  return band

def _first_derivative(grid):
  h = grid.spacing
  n = grid.n_points
  c = numpy.array([1.0, -8.0, 0.0, 8.0, -1.0])/(12.0*h)
  return scipy.sparse.diags(c, [-2, -1, 0, 1, 2], shape=(n, n), format='csr')

def _lowest_levels(grid, pot, n_orbitals):
  band = _kinetic_band(grid)
  band[0] = band[0] + pot(grid.x)
  w, v = scipy.linalg.eig_banded(band, lower=True, select='i',
                                 select_range=(0, n_orbitals - 1))
  return w, v

################################################################
def solve_single_particle(grid, pot, n_orbitals=80, probe=True):
  """
Lowest single-particle eigenpairs of -(1/2) d^2/dx^2 + V(x) + E0 x.

orb = soqdot.solve_single_particle(grid, pot, n_orbitals=80)

grid -- Grid1D, Dirichlet walls outside [x_min, x_max].

pot -- PotentialSpec.

n_orbitals -- number of levels, at most grid.n_points/4.

probe -- re-solve the lowest levels on a grid with half the spacing; a
         relative change above 1e-4 sets metadata['coarse_grid'].
  """
  n_orbitals = int(n_orbitals)
  if n_orbitals < 1 or n_orbitals > grid.n_points//4:
    raise DomainError("solve_single_particle: Error: n_orbitals must be in "
                      "[1, %d], got %d" % (grid.n_points//4, n_orbitals))
  if not grid.covers(pot):
    warnings.warn("solve_single_particle: grid does not cover the potential "
                  "minima +- 5/sqrt(beta)", RuntimeWarning)
  w, v = _lowest_levels(grid, pot, n_orbitals)
  phi = v.T/math.sqrt(grid.spacing)
#
# Fix the sign: largest lobe positive.
#
  k = numpy.argmax(numpy.abs(phi), axis=1)
  phi *= numpy.sign(phi[numpy.arange(n_orbitals), k])[:, None]
  meta = {'n_orbitals': n_orbitals, 'n_points': grid.n_points,
          'spacing': grid.spacing, 'kind': pot.kind, 'coarse_grid': False}
  if probe:
    m = min(PROBE_LEVELS, n_orbitals)
    wf, _ = _lowest_levels(grid.refined(), pot, m)
    rel = numpy.abs(wf - w[:m])/numpy.maximum(numpy.abs(w[:m]), 0.5*pot.beta)
    meta['refinement_change'] = float(rel.max())
    if rel.max() > REFINE_TOL:
      meta['coarse_grid'] = True
      logger.warning("solve_single_particle: coarse grid, refinement changes "
                     "levels by %.2e relative", rel.max())
  logger.debug("solve_single_particle: %s beta=%g ell=%g E0=%g, E0..=%s",
               pot.kind, pot.beta, pot.ell, pot.e_field, w[:3])
  return OrbitalSet(grid, w, phi, meta)

################################################################
def _pair_integrals(orbitals, cp):
#
# V[i,j,k,l] = <phi_i phi_j|V|phi_k phi_l>, particle 1 carries i -> k.
#
  n = orbitals.n
  if cp.strength == 0.0:
    return numpy.zeros((n, n, n, n))
  x = orbitals.grid.x
  w = orbitals.grid.weights()
  phi = orbitals.orbitals
  R = (phi[:, None, :]*phi[None, :, :]*w).reshape(n*n, -1)
  M = R @ cp.kernel(x) @ R.T
  return M.reshape(n, n, n, n).transpose(0, 2, 1, 3)

def _block_matrix(V4, basis, b):
  n = basis.n_orbitals
  T = basis.transform(b)
  V = V4[:n, :n, :n, :n].reshape(n*n, n*n)
  return T @ V @ T.T

def coulomb_matrix_elements(orbitals, basis, cp):
  """
Coulomb matrix between CI pair functions.

V = soqdot.coulomb_matrix_elements(orbitals, basis, cp)

Symmetric and antisymmetric pairs never couple; the matrix is ordered
like basis.pairs.
  """
  if basis.n_orbitals > orbitals.n:
    raise ShapeError("coulomb_matrix_elements: Error: basis needs %d "
                     "orbitals, only %d available" %
                     (basis.n_orbitals, orbitals.n))
  V4 = _pair_integrals(orbitals, cp)
  return scipy.linalg.block_diag(_block_matrix(V4, basis, 1),
                                 _block_matrix(V4, basis, -1))

def _ci_levels(orbitals, V4, n):
  basis = CiBasis.build(n)
  e = orbitals.energies
  energies, coeffs, parity = [], [], []
  for b in (1, -1):
    rows = [p for p in basis.pairs if p[2] == b]
    if len(rows) == 0:
      continue
    H = _block_matrix(V4, basis, b)
    H[numpy.diag_indices_from(H)] += [e[i] + e[j] for i, j, _ in rows]
    w, v = hermitian_eig(H)
    C = (basis.transform(b).T @ v.real).T.reshape(-1, n, n)
    energies.append(w)
    coeffs.append(C)
    parity.append(numpy.full(len(w), b))
  energies = numpy.concatenate(energies)
  order = numpy.argsort(energies, kind='stable')
  return (energies[order], numpy.concatenate(coeffs)[order],
          numpy.concatenate(parity)[order])

################################################################
def ci_diagonalize(orbitals, basis=None, cp=None, check_convergence=True):
  """
Fully correlated two-electron orbital states.

ci = soqdot.ci_diagonalize(orbitals, basis, cp)

orbitals -- OrbitalSet.

basis -- CiBasis; defaults to all pairs of the orbitals.

cp -- CoulombParams; defaults to CoulombParams().

The lowest levels are compared with a basis of 3/4 of the orbitals; a
relative change above 1e-4 sets metadata['converged'] to False.
  """
  if cp is None:
    cp = CoulombParams()
  if basis is None:
    basis = CiBasis.build(orbitals.n)
  n = basis.n_orbitals
  if n > orbitals.n:
    raise ShapeError("ci_diagonalize: Error: basis needs %d orbitals, only "
                     "%d available" % (n, orbitals.n))
  V4 = _pair_integrals(orbitals, cp)
  energies, coeffs, parity = _ci_levels(orbitals, V4, n)
  meta = {'n_orbitals': n, 'n_states': len(energies),
          'coulomb': cp.strength, 'converged': True}
  m = (3*n)//4
  if check_convergence and cp.strength > 0.0 and m >= 2:
    small, _, _ = _ci_levels(orbitals, V4, m)
    k = min(PROBE_LEVELS, len(small))
    rel = numpy.abs(small[:k] - energies[:k]) / \
          numpy.maximum(numpy.abs(energies[:k]), 1.0)
    meta['convergence_change'] = float(rel.max())
    if rel.max() > REFINE_TOL:
      meta['converged'] = False
      logger.warning("ci_diagonalize: levels change by %.2e relative between "
                     "%d and %d orbitals", rel.max(), m, n)
  logger.info("ci_diagonalize: %d orbitals, %d pair states, E0=%.6g",
              n, len(energies), energies[0])
  return CiResult(orbitals, energies, coeffs, parity, meta)

################################################################
def _spin_sector(parity, physical_only):
  if not physical_only:
    return _SPIN_BASIS
  if parity > 0:
    return SINGLET.real[:, None]
  return numpy.stack([T_PLUS.real, T_ZERO.real, T_MINUS.real], axis=1)

def add_spin_orbit(ci, alpha, b_field=0.0, n_states=20, physical_only=True):
  """
Diagonalizes the CI states coupled by the Rashba term.

so = soqdot.add_spin_orbit(ci, alpha, b_field=0.0, n_states=20)

H = E_k delta - i alpha sum_i <Psi_k'|d/dx_i|Psi_k> sigma^y_i
    + b_field sum_i sigma^z_i

ci -- CiResult.

n_states -- number of lowest CI states entering the block.

physical_only -- keep only exchange-antisymmetric products (symmetric
                 orbitals with the singlet, antisymmetric orbitals with the
                 triplets); False carries all four spin states per orbital.
  """
  K = min(int(n_states), len(ci))
  C = ci.coefficients[:K]
  D = ci.orbitals.derivative_matrix()[:ci.coefficients.shape[1],
                                      :ci.coefficients.shape[1]]
  D1 = numpy.einsum('mij,ik,nkj->mn', C, D, C)
  D2 = numpy.einsum('mij,jl,nil->mn', C, D, C)
  I2 = numpy.eye(2)
  sy1 = numpy.kron(_SIGMA_Y, I2)
  sy2 = numpy.kron(I2, _SIGMA_Y)
  sz = numpy.kron(_SIGMA_Z, I2) + numpy.kron(I2, _SIGMA_Z)
  H = (numpy.kron(numpy.diag(ci.energies[:K]), numpy.eye(4)) -
       1j*alpha*(numpy.kron(D1, sy1) + numpy.kron(D2, sy2)) +
       b_field*numpy.kron(numpy.eye(K), sz))
  H = check_hermitian(H, "add_spin_orbit")
  blocks = []
  for k in range(K):
    S = _spin_sector(ci.parity[k], physical_only)
    e = numpy.zeros((K, 1))
    e[k] = 1.0
    blocks.append(numpy.kron(e, S))
  B = numpy.hstack(blocks)
  Hr = B.T @ H @ B
  w, v = hermitian_eig(Hr)
  meta = {'n_states': K, 'truncated': K < len(ci), 'alpha': alpha,
          'b_field': b_field, 'physical_only': physical_only}
  logger.info("add_spin_orbit: alpha=%g B=%g, %d CI states (%s), dim %d",
              alpha, b_field, K, "truncated" if meta['truncated'] else "all",
              Hr.shape[0])
  return SpinOrbitResult(ci, K, w, v, B, Hr, meta)

################################################################
def numeric_rdms(so, vector):
  """
Spin and orbital reduced density matrices of a total state.

rec = soqdot.numeric_rdms(so, vector)

vector -- a column of so.vectors, or any normalized vector in the
          restricted or full product basis.

The orbital RDM is expressed in the basis of the CI states.
  """
  c = so.product_vector(vector).reshape(-1)
  norm = numpy.vdot(c, c).real
  if abs(norm - 1.0) > 1e-9:
    c = c/math.sqrt(norm)
  state = DensityMatrix(numpy.outer(c, c.conj()), (so.n_states, 2, 2))
  return RdmRecord(state, reduced(state, (1, 2)), reduced(state, (0,)))

################################################################
def heitler_london(grid, pot, level, side):
  """
Harmonic-oscillator orbital of one well sampled on the grid.

phi = soqdot.heitler_london(grid, pot, level, side)

level -- oscillator quantum number.

side -- 'L' (leftmost well) or 'R' (rightmost well).
  """
  c = pot.centers()
  if side not in ('L', 'R'):
    raise DomainError("heitler_london: Error: side must be 'L' or 'R'")
  y = math.sqrt(pot.beta)*(grid.x - (c[0] if side == 'L' else c[-1]))
  norm = (pot.beta/math.pi)**0.25/math.sqrt(2.0**level*math.factorial(level))
  return norm*scipy.special.eval_hermite(level, y)*numpy.exp(-0.5*y*y)

def reference_state(so, pot):
  """
The unperturbed target |psi^A_01> T+ in the restricted basis.

ref, norm = soqdot.reference_state(so, pot)

The antisymmetrized Heitler-London product (ground orbital on the left,
first excited on the right) is projected on the CI states; norm is the
length of that projection before renormalization.
  """
  orb = so.ci.orbitals
  w = orb.grid.weights()
  a = (orb.orbitals*w) @ heitler_london(orb.grid, pot, 0, 'L')
  b = (orb.orbitals*w) @ heitler_london(orb.grid, pot, 1, 'R')
  n = so.ci.coefficients.shape[1]
  C = numpy.outer(a[:n], b[:n]) - numpy.outer(b[:n], a[:n])
  C /= numpy.linalg.norm(C)
  amp = numpy.einsum('kij,ij->k', so.ci.coefficients[:so.n_states], C)
  full = numpy.zeros((so.n_states, 4))
  full[:, 0] = amp
  ref = so.basis.T @ full.reshape(-1)
  norm = float(numpy.linalg.norm(ref))
  if norm == 0.0:
    raise DomainError("reference_state: Error: reference has no weight in "
                      "the spin-orbit basis")
  return ref/norm, norm

def select_target(so, ref, cluster_tol=1e-3):
  """
Eigenstate continued from a reference vector.

t = soqdot.select_target(so, ref, cluster_tol=1e-3)

The eigenvector of maximal overlap with ref fixes an energy; ref is
projected onto all eigenvectors within cluster_tol of it. overlap is the
squared norm of that projection and overlap < 0.5 sets `flagged`.
  """
  amp = so.vectors.conj().T @ ref
  p = numpy.abs(amp)**2
  k = int(numpy.argmax(p))
  cluster = numpy.flatnonzero(numpy.abs(so.energies - so.energies[k]) <=
                              cluster_tol)
  v = so.vectors[:, cluster] @ amp[cluster]
  overlap = float(numpy.vdot(v, v).real)
  v = v/math.sqrt(overlap)
  flagged = overlap < 0.5
  if flagged:
    logger.warning("select_target: ambiguous state tracking, overlap %.3f",
                   overlap)
  return TargetState(v, overlap, k, tuple(int(i) for i in cluster), flagged,
                     so.vectors[:, cluster])

def continue_target(so, previous):
  """
Target carried over from a nearby alpha on the same CI states.

t = soqdot.continue_target(so, previous)

previous -- TargetState from select_target or an earlier continue_target.

The new manifold is made of the eigenvectors with the largest weight in
the span of previous.manifold, as many as it had; equal weights go to the
lower energy. previous.vector is projected onto that manifold. overlap is
the squared norm of the projection; it, or the weakest selected weight,
falling below 0.5 sets `flagged`.
  """
  Q = previous.manifold
  if Q is None or Q.shape[0] != so.vectors.shape[0]:
    raise ShapeError("continue_target: Error: previous manifold does not "
                     "match the spin-orbit basis")
  m = Q.shape[1]
  w = numpy.sum(numpy.abs(Q.conj().T @ so.vectors)**2, axis=0)
  order = numpy.lexsort((so.energies, -numpy.round(w, 10)))
  cluster = numpy.sort(order[:m])
  P = so.vectors[:, cluster]
  v = P @ (P.conj().T @ previous.vector)
  overlap = float(numpy.vdot(v, v).real)
  if overlap == 0.0:
    raise DomainError("continue_target: Error: previous state has no weight "
                      "in the continued manifold")
  v = v/math.sqrt(overlap)
  weakest = float(w[cluster].min())
  flagged = overlap < 0.5 or weakest < 0.5
  if flagged:
    logger.warning("continue_target: ambiguous state tracking, overlap %.3f,"
                   " manifold weight %.3f", overlap, weakest)
  k = int(cluster[numpy.argmax(numpy.abs(P.conj().T @ v))])
  return TargetState(v, overlap, k, tuple(int(i) for i in cluster), flagged,
                     P)

def _tracking_path(alphas, step):
  points = sorted(set([0.0] + [float(a) for a in alphas]))
  path = [0.0]
  for lo, hi in zip(points[:-1], points[1:]):
    n = int(math.ceil((hi - lo)/step))
    path.extend(numpy.linspace(lo, hi, n + 1)[1:].tolist())
  return path

################################################################
def track_targets(ci, pot, alphas, b_field=0.0, n_states=20,
                  cluster_tol=1e-3, physical_only=True, step=TRACK_STEP):
  """
Adiabatic continuation of |psi^A_01> T+ from alpha = 0.

pairs = soqdot.track_targets(ci, pot, alphas)

At alpha = 0 the reference is projected on its quasi-degenerate cluster
(select_target); the cluster is then followed up in alpha with steps of
at most `step` (continue_target), so degenerate partners such as T- and T0
stay inside the projected manifold.

Returns one (SpinOrbitResult, TargetState) pair per entry of alphas, in
the order given. overlap is the product of the reference overlap and
every continuation step; flagged is set if any of them was.
  """
  alphas = [float(a) for a in alphas]
  if any(a < 0.0 for a in alphas):
    raise DomainError("track_targets: Error: alpha must be >= 0")
  wanted = set(alphas)
  found = {}
  t = None
  overlap, flagged = 1.0, False
  for a in _tracking_path(alphas, step):
    so = add_spin_orbit(ci, a, b_field, n_states, physical_only)
    if t is None:
      ref, _ = reference_state(so, pot)
      t = select_target(so, ref, cluster_tol)
    else:
      t = continue_target(so, t)
    overlap *= t.overlap
    flagged = flagged or t.flagged
    if a in wanted:
      found[a] = (so, replace(t, overlap=overlap, flagged=flagged))
  return [found[a] for a in alphas]

def measured_entropies(so, vector, post='outcome1'):
  """
Orbital entropies before and after projecting electron 1's spin up.

S_pre, S_post = soqdot.measured_entropies(so, vector, post='outcome1')

post -- 'outcome1' uses the spin-up outcome, 'average' weights both
        outcomes by their probabilities.
  """
  rec = numeric_rdms(so, vector)
  S_pre = von_neumann_entropy(rec.orbital_rdm)
  out = projective_measure(rec.state, [PI0, PI1], subsystem=1)
  if post == 'outcome1':
    if out[1].absent:
      raise DomainError("measured_entropies: Error: outcome 1 has zero "
                        "probability")
    S_post = von_neumann_entropy(reduced(out[1].post_state, (0,)))
  elif post == 'average':
    S_post = sum(r.probability*von_neumann_entropy(reduced(r.post_state, (0,)))
                 for r in out if not r.absent)
  else:
    raise DomainError("measured_entropies: Error: post must be 'outcome1' or "
                      "'average', got %r" % (post,))
  return S_pre, S_post


@dataclass(frozen=True)
class SweepRow:
  alpha: float
  e_field: float
  ell: float
  coulomb: float
  S_pre: float
  S_post: float
  delta_S: float
  overlap_flag: bool
  overlap: float

  def values(self):
    return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


@dataclass
class SweepTable:
  rows: List[SweepRow]
  metadata: Dict = field(default_factory=dict)

  columns = SWEEP_COLUMNS

  def __len__(self):
    return len(self.rows)

  def column(self, name):
    return numpy.array([getattr(r, name) for r in self.rows], dtype=float)

  def grid(self, name, alphas, e_fields):
    """Column reshaped to (len(alphas), len(e_fields))."""
    return self.column(name).reshape(len(alphas), len(e_fields))


def _sweep_field(e_field, alphas, ell, cp, settings):
  pot = PotentialSpec('double-dot', settings['beta'], ell, e_field)
  base = settings['grid']
  if base is None:
    grid = Grid1D.for_potential(pot)
  else:
    grid = Grid1D.for_potential(pot, base.x_min, base.x_max, base.n_points)
  orb = solve_single_particle(grid, pot, settings['n_orbitals'])
  ci = ci_diagonalize(orb, cp=cp)
  rows = []
  tracked = track_targets(ci, pot, alphas, settings['b_field'],
                          settings['n_states'], settings['cluster_tol'],
                          settings['physical_only'])
  for a, (so, t) in zip(alphas, tracked):
    S_pre, S_post = measured_entropies(so, t.vector, settings['post'])
    rows.append(SweepRow(float(a), float(e_field), float(ell), cp.strength,
                         S_pre, S_post, S_pre - S_post, t.flagged, t.overlap))
    logger.debug("entropy_sweep: alpha=%g E0=%g S_pre=%.6g S_post=%.6g",
                 a, e_field, S_pre, S_post)
  flags = {'coarse_grid': orb.metadata['coarse_grid'],
           'ci_converged': ci.metadata['converged']}
  return rows, flags

################################################################
def entropy_sweep(alphas, e_fields, ell=0.8, cp=None, beta=1.0, grid=None,
                  n_orbitals=20, n_states=20, b_field=0.0, post='outcome1',
                  cluster_tol=1e-3, physical_only=True, workers=None):
  """
Orbital entropies of the tracked state before and after the spin
measurement over an (alpha, E0) grid.

table = soqdot.entropy_sweep(alphas, e_fields, ell=0.8, cp=None)

alphas, e_fields -- values in [0, 1) and [0, 8].

cp -- CoulombParams (default strength 1, softening 0.1).

grid -- base Grid1D (default [-12, 12] with 1024 points), widened per field
        value when the shifted wells fall outside it.

n_orbitals -- single-particle orbitals in the CI basis.

n_states -- CI states entering the spin-orbit block.

post -- 'outcome1' or 'average'.

workers -- thread count for the per-field cells; None runs serially.

Within each E0 the target is continued from alpha = 0 by track_targets.
Rows are sorted by alpha, then E0.
  """
  alphas = [float(a) for a in alphas]
  e_fields = [float(e) for e in e_fields]
  if cp is None:
    cp = CoulombParams()
  bad = [a for a in alphas if not 0.0 <= a < 1.0]
  if bad:
    raise DomainError("entropy_sweep: Error: alpha values %s outside [0, 1)"
                      % bad)
  bad = [e for e in e_fields if not 0.0 <= e <= 8.0]
  if bad:
    raise DomainError("entropy_sweep: Error: E0 values %s outside [0, 8]" %
                      bad)
  if max(alphas, default=0.0)/math.sqrt(beta) >= 0.7:
    warnings.warn("entropy_sweep: alpha/sqrt(beta) >= 0.7 is beyond the "
                  "perturbative range", RuntimeWarning)
  if post not in ('outcome1', 'average'):
    raise DomainError("entropy_sweep: Error: post must be 'outcome1' or "
                      "'average', got %r" % (post,))
  settings = {'beta': beta, 'grid': grid, 'n_orbitals': n_orbitals,
              'n_states': n_states, 'b_field': b_field, 'post': post,
              'cluster_tol': cluster_tol, 'physical_only': physical_only}
  def cell(e):
    return _sweep_field(e, alphas, ell, cp, settings)

  if workers and workers > 1:
    with ThreadPoolExecutor(max_workers=workers) as pool:
      results = list(pool.map(cell, e_fields))
  else:
    results = [cell(e) for e in e_fields]
  rows = [r for res, _ in results for r in res]
  rows.sort(key=lambda r: (r.alpha, r.e_field))
  meta = {'coarse_grid': any(f['coarse_grid'] for _, f in results),
          'ci_converged': all(f['ci_converged'] for _, f in results),
          'flagged_rows': sum(r.overlap_flag for r in rows),
          'ell': ell, 'beta': beta, 'post': post}
  logger.info("entropy_sweep: %d rows, %d flagged", len(rows),
              meta['flagged_rows'])
  return SweepTable(rows, meta)
