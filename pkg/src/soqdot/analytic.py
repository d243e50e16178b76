#
# Closed-form model of two electrons in a spin-orbit coupled double dot:
# the perturbed two-electron state in the truncated basis of three orbital
# pair functions times four two-spin states, its reduced density matrices,
# the post-measurement states of a spin projection on electron 1, and every
# closed-form diagnostic derived from them.
#
# Orbital basis (factor 0): 0 = antisymmetric pair (0 left, 1 right),
# 1 = symmetric pair (1, 1), 2 = symmetric pair (0, 0).
# Spin factors 1 and 2 are electrons 1 (A) and 2 (B); qubit index 0 is
# spin up, 1 is spin down, so the two-spin order is uu, ud, du, dd.
#
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, Tuple

import numpy

from .errors import DomainError
from .states import (DensityMatrix, StateVector, berta_uncertainty,
                     concurrence2q, conditional_entropy, pure_density,
                     projective_measure, quantum_discord, reduced,
                     shannon_entropy, uhlmann_fidelity, von_neumann_entropy,
                     witness_probabilities, quantum_witness)

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['ModelParams', 'ModelStates', 'MeasurementOutcomes',
           'ClosedFormReport', 'UP', 'DOWN', 'PI0', 'PI1', 'T_PLUS', 'T_ZERO',
           'T_MINUS', 'SINGLET', 'Z_BASIS', 'X_BASIS', 'BIT_FLIP',
           'REPORT_FIELDS', 'build_states', 'particle_state',
           'measurement_outcomes', 'closed_form_report', 'numeric_report']

UP = numpy.array([1, 0], dtype=complex)
DOWN = numpy.array([0, 1], dtype=complex)
PI1 = numpy.outer(UP, UP)
PI0 = numpy.outer(DOWN, DOWN)

T_PLUS = numpy.kron(UP, UP)
T_ZERO = (numpy.kron(UP, DOWN) + numpy.kron(DOWN, UP))/numpy.sqrt(2)
T_MINUS = numpy.kron(DOWN, DOWN)
SINGLET = (numpy.kron(UP, DOWN) - numpy.kron(DOWN, UP))/numpy.sqrt(2)

Z_BASIS = numpy.eye(2, dtype=complex)
X_BASIS = numpy.array([[1, 1], [1, -1]], dtype=complex)/numpy.sqrt(2)
BIT_FLIP = [numpy.outer(UP, DOWN), numpy.outer(DOWN, UP)]

REPORT_FIELDS = ('gamma0', 'gamma1', 'S_spin_pre', 'S_orb_pre', 'S_spin_post',
                 'S_orb_post', 'fidelity', 'fidelity_asymptotic',
                 'concurrence_pre', 'concurrence_post', 'discord_difference',
                 'witness_prob', 'S_AB_pure', 'S_AB_mixed', 'S_RB', 'S_QB',
                 'S_rhoA', 'S_rhoA_S')


@dataclass(frozen=True)
class ModelParams:
  """
Dimensionless model parameters.

alpha -- Rashba strength.

beta -- confinement m*omega*d0^2/hbar.

e_field -- electric field E0 (E0 = 1 is 1.1 V/um in GaAs).

ell -- inter-dot distance in units of d0.

b_field -- Zeeman energy; not used by the closed forms.
  """
  alpha: float = 0.4
  beta: float = 1.0
  e_field: float = 0.0
  ell: float = 0.8
  b_field: float = 0.0

  def __post_init__(self):
    if not self.beta > 0.0:
      raise DomainError("ModelParams: Error: beta must be > 0, got %r" %
                        (self.beta,))
    if not self.alpha >= 0.0:
      raise DomainError("ModelParams: Error: alpha must be >= 0, got %r" %
                        (self.alpha,))
    if not self.alpha/numpy.sqrt(self.beta) < 1.0:
      raise DomainError("ModelParams: Error: alpha/sqrt(beta) = %.4g is "
                        "outside the perturbative range (< 1)" %
                        (self.alpha/numpy.sqrt(self.beta)))

  @property
  def q(self):
    """Weight 5 alpha^2/16 beta of the singlet admixture."""
    return 5.0*self.alpha**2/(16.0*self.beta)

  @property
  def Z(self):
    return 1.0 + self.q

  @property
  def coupling(self):
    """Admixture amplitude alpha/(2 sqrt(beta))."""
    return self.alpha/(2.0*numpy.sqrt(self.beta))


@dataclass(frozen=True)
class ModelStates:
  phi_M: StateVector
  rho_AB: DensityMatrix
  rho_S: DensityMatrix
  rho_or: DensityMatrix
  Z: float


@dataclass(frozen=True)
class MeasurementOutcomes:
  gamma0: float
  gamma1: float
  sigma1: DensityMatrix
  sigma2: DensityMatrix
  varrho1: DensityMatrix
  varrho2: DensityMatrix


@dataclass(frozen=True)
class ClosedFormReport:
  """
Closed-form diagnostics. Each field holds the printed formula; `exact`
maps field names to the exact value for the normalized state and
`z_approx` lists the fields evaluated with Z ~ 1. witness_prob is the
probability of the probe outcome on B; it is the same with or without the
blind measurement on A, so the witness itself is always 0.
  """
  params: ModelParams
  gamma0: float
  gamma1: float
  S_spin_pre: float
  S_orb_pre: float
  S_spin_post: float
  S_orb_post: float
  fidelity: float
  fidelity_asymptotic: float
  concurrence_pre: float
  concurrence_post: float
  discord_difference: float
  witness_prob: float
  S_AB_pure: float
  S_AB_mixed: float
  S_RB: float
  S_QB: float
  S_rhoA: float
  S_rhoA_S: float
  exact: Dict[str, float] = field(default_factory=dict)
  z_approx: Tuple[str, ...] = ()

  def value(self, name):
    return getattr(self, name)

  def rows(self):
    return [(name, getattr(self, name), self.exact[name])
            for name in REPORT_FIELDS]


def _orbital(k):
  e = numpy.zeros(3, dtype=complex)
  e[k] = 1.0
  return e

#
# Orbital combination (1/2)|psi_11> - |psi_00> multiplying the singlet.
#
_ADMIXED = 0.5*_orbital(1) - _orbital(2)

################################################################
def build_states(p):
  """
Perturbed two-electron state and its reduced density matrices.

states = soqdot.build_states(p)

p -- ModelParams.

phi_M is [|A01> T+ + alpha/(2 sqrt(beta)) ((1/2)|S11> - |S00>) S]/sqrt(Z)
with shape (3, 2, 2); rho_S is the two-spin state, rho_or the orbital
state.
  """
  amps = (numpy.kron(_orbital(0), T_PLUS) +
          p.coupling*numpy.kron(_ADMIXED, SINGLET))/numpy.sqrt(p.Z)
  phi = StateVector(amps, (3, 2, 2))
  rho = pure_density(phi)
  return ModelStates(phi_M=phi, rho_AB=rho, rho_S=reduced(rho, (1, 2)),
                     rho_or=reduced(rho, (0,)), Z=p.Z)

################################################################
def particle_state(p):
  """
The perturbed state written per electron.

psi = soqdot.particle_state(p)

Shape (4, 2, 4, 2): electron 1 orbital {L0, L1, R0, R1}, electron 1 spin,
electron 2 orbital, electron 2 spin.
  """
  L0, L1, R0, R1 = range(4)
  s2 = 1.0/numpy.sqrt(2)

  def pair(i, j, sign):
    m = numpy.zeros((4, 4), dtype=complex)
    m[i, j] += s2
    m[j, i] += sign*s2
    return m

  orb = [pair(L0, R1, -1.0), pair(L1, R1, 1.0), pair(L0, R0, 1.0)]
  spin = [T_PLUS.reshape(2, 2), SINGLET.reshape(2, 2)]
  c = p.coupling
  t = numpy.einsum('ij,ab->iajb', orb[0], spin[0])
  t += c*numpy.einsum('ij,ab->iajb', 0.5*orb[1] - orb[2], spin[1])
  return StateVector(t.ravel()/numpy.sqrt(p.Z), (4, 2, 4, 2))

################################################################
def measurement_outcomes(p):
  """
Probabilities and post-measurement states of the projection of electron
1's spin on {down, up}.

out = soqdot.measurement_outcomes(p)

sigma1, sigma2 are two-spin states and varrho1, varrho2 orbital states
for outcomes 0 (down) and 1 (up).
  """
  a2, b = p.alpha**2, p.beta
  r = 5.0*a2/(32.0*b)
  gamma0 = 5.0*a2/(10.0*a2 + 32.0*b)
  gamma1 = (5.0*a2 + 32.0*b)/(10.0*a2 + 32.0*b)
  du = numpy.kron(DOWN, UP)
  ud = numpy.kron(UP, DOWN)
  sigma1 = DensityMatrix(numpy.outer(du, du), (2, 2))
  sigma2 = DensityMatrix((numpy.outer(T_PLUS, T_PLUS) +
                          r*numpy.outer(ud, ud))/(1.0 + r), (2, 2))
  u = _ADMIXED
  varrho1 = DensityMatrix(0.8*numpy.outer(u, u.conj()), (3,))
  varrho2 = DensityMatrix((numpy.outer(_orbital(0), _orbital(0)) +
                           a2/(8.0*b)*numpy.outer(u, u.conj()))/(1.0 + r),
                          (3,))
  return MeasurementOutcomes(gamma0, gamma1, sigma1, sigma2, varrho1, varrho2)

################################################################
def _xlnx(x):
  return x*numpy.log(x) if x > 0.0 else 0.0

def closed_form_report(p):
  """
Every closed-form diagnostic of the model.

rep = soqdot.closed_form_report(p)

Fields hold the printed formulas, including their Z ~ 1 simplifications;
rep.exact holds the exact values of the same quantities for the
normalized state.
  """
  a2, b = p.alpha**2, p.beta
  q = p.q
  r = q/2.0
  Z = p.Z
  out = measurement_outcomes(p)
  g1 = out.gamma1
  A, B = 1.0/Z, q/Z
  t, u = r/Z, (1.0 + r)/Z

  S_spin_pre = -_xlnx(q)
  S_orb_pre = -_xlnx(a2/(16.0*b)) - _xlnx(a2/(4.0*b))
  S_post = -g1*_xlnx(r)
  fidelity = (1.0 + 5.0*a2/(16.0*b*numpy.sqrt(2)))/((1.0 + r)*(1.0 + q))
  fidelity_asym = 1.0 - 5.0*(3.0 - numpy.sqrt(2))*a2/(32.0*b)
  S_AB_pure = _xlnx(t) + _xlnx(u)
  S_AB_mixed = -_xlnx(A) - _xlnx(B) + _xlnx(t) + _xlnx(u)
  S_RB = -_xlnx(A) - _xlnx(t) + _xlnx(u)
  root = numpy.sqrt(25.0*a2**2 + 256.0*b**2)
  lam = [(5.0*a2 + 16.0*b + root)/(32.0*b*Z),
         (5.0*a2 + 16.0*b - root)/(32.0*b*Z)]
  h_lam = shannon_entropy(lam)
  S_QB = _xlnx(t) + _xlnx(u) + h_lam
#
# Diagonal of the one-electron state only.
#
  w1 = a2/(32.0*b)/(2.0*Z)
  w0 = 4.0*a2/(32.0*b)/(2.0*Z)
  S_rhoA = (-3.0*_xlnx(w1) - 3.0*_xlnx(w0) -
            _xlnx((1.0 + a2/(32.0*b))/(2.0*Z)) -
            _xlnx((1.0 + 4.0*a2/(32.0*b))/(2.0*Z)))
  S_rhoA_S = -_xlnx(u) - _xlnx(t)

#
# Exact counterparts. The orbital and spin entropies of the pure state
# coincide; the post-measurement spin state is (uu + r ud)/(1 + r).
#
  h_pre = shannon_entropy([A, B])
  h_post = shannon_entropy([1.0/(1.0 + r), r/(1.0 + r)])
  nu = numpy.sqrt(1.0 - 2.0*A*B)
  discord_exact = (shannon_entropy([u, t]) - h_pre +
                   shannon_entropy([(1.0 + nu)/2.0, (1.0 - nu)/2.0]))
  c2 = a2/(4.0*b)
  T = 0.5 + 5.0*c2/16.0
  d = numpy.sqrt(T*T - c2*c2/16.0)
  rhoA_spec = numpy.array([(T + d)/2, (T + d)/2, (T - d)/2, (T - d)/2,
                           c2/4, c2/4, c2/16, c2/16])/Z
  exact = {
    'gamma0': out.gamma0, 'gamma1': g1,
    'S_spin_pre': h_pre, 'S_orb_pre': h_pre,
    'S_spin_post': h_post, 'S_orb_post': h_post,
    'fidelity': (1.0 + r)/Z, 'fidelity_asymptotic': (1.0 + r)/Z,
    'concurrence_pre': B, 'concurrence_post': 0.0,
    'discord_difference': discord_exact,
    'witness_prob': (1.0 + r)/Z,
    'S_AB_pure': S_AB_pure, 'S_AB_mixed': S_AB_mixed,
    'S_RB': S_RB, 'S_QB': S_QB + numpy.log(2.0),
    'S_rhoA': shannon_entropy(rhoA_spec), 'S_rhoA_S': S_rhoA_S,
  }
  return ClosedFormReport(
    params=p, gamma0=out.gamma0, gamma1=g1,
    S_spin_pre=S_spin_pre, S_orb_pre=S_orb_pre,
    S_spin_post=S_post, S_orb_post=S_post,
    fidelity=fidelity, fidelity_asymptotic=fidelity_asym,
    concurrence_pre=q, concurrence_post=0.0,
    discord_difference=r*numpy.log(4.0),
    witness_prob=(1.0 + r)/Z,
    S_AB_pure=S_AB_pure, S_AB_mixed=S_AB_mixed, S_RB=S_RB, S_QB=S_QB,
    S_rhoA=S_rhoA, S_rhoA_S=S_rhoA_S,
    exact={k: float(v) for k, v in exact.items()},
    z_approx=('S_spin_pre', 'S_orb_pre', 'concurrence_pre'))

################################################################
def numeric_report(p, discord_grid=64):
  """
The report fields recomputed numerically from build_states(p).

values = soqdot.numeric_report(p)

Returns a dict keyed like ClosedFormReport plus 'witness' (the witness
value W of the noninvasive protocol) and 'witness_unmeasured'.

The bit-flip channel and the blind z measurement act on qubit A and the
probe projects qubit B on spin up. Operations on A leave the marginal of B
unchanged, so W = 0 for every state (no signalling) and
'witness_unmeasured' equals 'witness_prob'.
  """
  st = build_states(p)
  rec = projective_measure(st.rho_AB, [PI0, PI1], subsystem=1)
  post = rec[1].post_state
  spin_post = reduced(post, (1, 2))
  orb_post = reduced(post, (0,))
  fid = uhlmann_fidelity(spin_post, st.rho_S)
  P, G = witness_probabilities(st.rho_S, BIT_FLIP, [PI0, PI1], PI1)
  mem = berta_uncertainty(st.rho_S, Z_BASIS, X_BASIS, subsystem=0)
  one = reduced(pure_density(particle_state(p)), (0, 1))
  values = {
    'gamma0': rec[0].probability, 'gamma1': rec[1].probability,
    'S_spin_pre': von_neumann_entropy(st.rho_S),
    'S_orb_pre': von_neumann_entropy(st.rho_or),
    'S_spin_post': von_neumann_entropy(spin_post),
    'S_orb_post': von_neumann_entropy(orb_post),
    'fidelity': fid, 'fidelity_asymptotic': fid,
    'concurrence_pre': concurrence2q(st.rho_S),
    'concurrence_post': concurrence2q(spin_post),
    'discord_difference': (quantum_discord(st.rho_S, 'A', discord_grid) -
                           quantum_discord(spin_post, 'A', discord_grid)),
    'witness_prob': G,
    'S_AB_pure': conditional_entropy(st.rho_AB, (0, 1)),
    'S_AB_mixed': conditional_entropy(st.rho_S, (0,)),
    'S_RB': mem.S_RB, 'S_QB': mem.S_QB,
    'S_rhoA': von_neumann_entropy(one),
    'S_rhoA_S': von_neumann_entropy(reduced(st.rho_S, (0,))),
    'witness': quantum_witness(st.rho_S, BIT_FLIP, [PI0, PI1], PI1),
    'witness_unmeasured': P,
  }
  logger.debug("numeric_report: alpha=%g beta=%g done", p.alpha, p.beta)
  return values
