#
# Continuous-spin variational Monte Carlo for electrons in a chain of
# quantum dots.
#
# Each electron carries a position x and an auxiliary angle s in [0, 2 pi).
# A spin-up orbital contributes e^{is} and a spin-down one e^{-is}; the
# Pauli operators act on functions of s as
#   sigma_x = cos 2s - sin 2s d/ds,  sigma_y = sin 2s + cos 2s d/ds,
#   sigma_z = -i d/ds.
# Spin functions are kept as Fourier coefficients over e^{ims}, |m| <= 7,
# where these operators are fixed matrices.
#
# The trial state is a Slater determinant of Gaussian orbitals times a
# Jastrow factor. Local energies use determinant ratios with one row
# replaced (Jacobi's formula).
#
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import Dict, List, Optional, Tuple

import numpy
import scipy.optimize

from .dqd import CoulombParams, PotentialSpec
from .errors import DomainError

logger = getLogger("soqdot").getChild(__name__)

__all__ = ['WalkerConfig', 'TrialParams', 'VmcSettings', 'VmcEstimate',
           'PairDistribution', 'OptimizeInfo', 'trial_amplitude',
           'local_energy', 'metropolis_run', 'optimize_params',
           'pair_distribution', 'localization_fraction', 'centroid',
           'blocking_error', 'MIN_SAMPLES']

TWO_PI = 2.0*math.pi
MIN_SAMPLES = 10000

_MODES = numpy.arange(-7, 8)


def _spin_operators():
  n = len(_MODES)
  SX = numpy.zeros((n, n), dtype=complex)
  SY = numpy.zeros((n, n), dtype=complex)
  for k, m in enumerate(_MODES):
    if k + 2 < n:
      SX[k + 2, k] = 0.5*(1 - m)
      SY[k + 2, k] = 0.5j*(m - 1)
    if k - 2 >= 0:
      SX[k - 2, k] = 0.5*(1 + m)
      SY[k - 2, k] = 0.5j*(m + 1)
  SZ = numpy.diag(_MODES).astype(complex)
  return SX, SY, SZ

_SX, _SY, _SZ = _spin_operators()
_SZ2 = _SZ @ _SZ
_S2 = 0.25*(_SX @ _SX + _SY @ _SY + _SZ2)


@dataclass(frozen=True)
class WalkerConfig:
  """Positions (units of d0) and auxiliary spin angles of N electrons."""
  positions: numpy.ndarray
  spins: numpy.ndarray

  def __post_init__(self):
    x = numpy.asarray(self.positions, dtype=float).ravel()
    s = numpy.mod(numpy.asarray(self.spins, dtype=float).ravel(), TWO_PI)
    if x.shape != s.shape:
      raise DomainError("WalkerConfig: Error: %d positions but %d spin "
                        "angles" % (x.size, s.size))
    object.__setattr__(self, 'positions', x)
    object.__setattr__(self, 'spins', s)

  @property
  def n(self):
    return self.positions.size


@dataclass(frozen=True)
class TrialParams:
  """
Slater-Jastrow trial parameters.

jastrow_b -- strength b >= 0 of J = -b sum_{i<j} 1/sqrt((x_i - x_j)^2 + 1).

spinor_mix -- amplitude of e^{+-3is} added to each spin function.

lagrange_lambda -- multiplier of the <sigma_z^2> - 1 constraint.

width_scale -- orbitals are exp(-beta*width_scale*(x - c)^2/2).

phase_k -- orbital phase e^{i sigma k x} for spin sigma = +-1.

n_electrons -- defaults to the number of wells.

spins -- +1/-1 per electron; defaults to up on the first pass over the
         wells and down on the second.
  """
  jastrow_b: float = 0.5
  spinor_mix: float = 0.0
  lagrange_lambda: float = 1.0
  width_scale: float = 1.0
  phase_k: float = 0.0
  n_electrons: Optional[int] = None
  spins: Optional[Tuple[int, ...]] = None

  def __post_init__(self):
    if not self.jastrow_b >= 0.0:
      raise DomainError("TrialParams: Error: jastrow_b must be >= 0")
    if not self.width_scale > 0.0:
      raise DomainError("TrialParams: Error: width_scale must be > 0")


@dataclass(frozen=True)
class VmcSettings:
  n_chains: int = 4
  n_walkers: int = 32
  step: Optional[float] = None
  spin_step: float = math.pi/4
  bins: int = 128
  min_burn: int = 50
  node_tol: float = 1e-12
  exchange_moves: bool = True
  workers: Optional[int] = None


@dataclass(eq=False)
class VmcEstimate:
  energy_mean: float
  energy_err: float
  energy_variance: float
  imag_mean: float
  constraint_mean: float
  constraint_err: float
  s2_mean: float
  pair_histogram: numpy.ndarray
  bin_edges: numpy.ndarray
  centers: numpy.ndarray
  centroid_mean: float
  centroid_err: float
  n_samples: int
  seed: int
  acceptance: float
  step: float
  n_rejected: int
  flags: Tuple[str, ...] = ()
  params: Optional[TrialParams] = None
  potential: Optional[PotentialSpec] = None
  samples: Optional[Dict[str, numpy.ndarray]] = None

  @property
  def lagrangian(self):
    lam = self.params.lagrange_lambda if self.params else 0.0
    return self.energy_mean + lam*(self.constraint_mean - 1.0)


@dataclass(frozen=True)
class PairDistribution:
  density: numpy.ndarray
  x: numpy.ndarray

  def rows(self):
    """(x1_bin, x2_bin, density) triples."""
    i, j = numpy.indices(self.density.shape)
    return zip(self.x[i.ravel()], self.x[j.ravel()], self.density.ravel())


@dataclass
class OptimizeInfo:
  converged: bool
  passes: int
  objective: float
  history: List[Dict] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class _Model:
  centers: numpy.ndarray
  sigma: numpy.ndarray
  kappa: float
  b: float
  k: float
  C: numpy.ndarray
  pot: PotentialSpec


def _assign(pot, tp):
  c = pot.centers()
  n = tp.n_electrons if tp.n_electrons is not None else len(c)
  if n < 1:
    raise DomainError("trial: Error: need at least one electron")
  centers = numpy.array([c[i % len(c)] for i in range(n)])
  if tp.spins is not None:
    if len(tp.spins) != n:
      raise DomainError("trial: Error: %d spins for %d electrons" %
                        (len(tp.spins), n))
    sigma = numpy.array([1 if s > 0 else -1 for s in tp.spins])
  else:
    sigma = numpy.array([1 if (i//len(c)) % 2 == 0 else -1 for i in range(n)])
  seen = set()
  for ci, si in zip(centers, sigma):
    if (ci, si) in seen:
      raise DomainError("trial: Error: two electrons share the orbital at "
                        "x = %g with spin %+d" % (ci, si))
    seen.add((ci, si))
  return centers, sigma

def _model(tp, pot):
  centers, sigma = _assign(pot, tp)
  C = numpy.zeros((len(_MODES), len(centers)), dtype=complex)
  for j, sg in enumerate(sigma):
    C[7 + sg, j] = 1.0
    C[7 + 3*sg, j] = tp.spinor_mix
  return _Model(centers, sigma, pot.beta*tp.width_scale, tp.jastrow_b,
                tp.phase_k, C, pot)

def _orbitals(x, model):
  d = x[..., :, None] - model.centers
  g = -model.kappa*d + 1j*model.k*model.sigma
  phi = numpy.exp(-0.5*model.kappa*d*d +
                  1j*model.k*model.sigma*x[..., :, None])
  return phi, g*phi, (g*g - model.kappa)*phi

def _spin_rows(s, model, op=None):
  E = numpy.exp(1j*s[..., None]*_MODES)
  return E @ (model.C if op is None else op @ model.C)

def _jastrow(x, b):
  r = x[..., :, None] - x[..., None, :]
  q = 1.0 + r*r
  off = 1.0 - numpy.eye(x.shape[-1])
  g = off*q**-0.5
  g1 = off*(-r*q**-1.5)
  g2 = off*(2.0*r*r - 1.0)*q**-2.5
  return (-0.5*b*g.sum(axis=(-2, -1)), -b*g1.sum(axis=-1),
          -b*g2.sum(axis=-1))

def _log_prob(x, s, model):
  phi, _, _ = _orbitals(x, model)
  M = phi*_spin_rows(s, model)
  _, logabs = numpy.linalg.slogdet(M)
  J, _, _ = _jastrow(x, model.b)
  return 2.0*(logabs + J)

def _local_terms(x, s, model, alpha, cp, b_field, node_tol):
#
# x, s have shape (W, N). Returns the complex local energy, the per-electron
# mean of sigma_z^2 and s^2, and the mask of samples away from nodes.
#
  phi, phi1, phi2 = _orbitals(x, model)
  U = _spin_rows(s, model)
  M = phi*U
  n = x.shape[-1]
  _, logabs = numpy.linalg.slogdet(M)
  with numpy.errstate(divide='ignore'):
    scale = numpy.log(numpy.max(numpy.abs(M), axis=-1)).sum(axis=-1)
  ok = logabs > math.log(node_tol) + scale
  M = numpy.where(ok[:, None, None], M, numpy.eye(n))
  Minv = numpy.linalg.inv(M)

  def ratio(X):
    return numpy.einsum('wij,wji->wi', X, Minv)

  _, J1, J2 = _jastrow(x, model.b)
  Uy = _spin_rows(s, model, _SY)
  D1 = ratio(phi1*U)
  D2 = ratio(phi2*U)
  kinetic = -0.5*(D2 + 2.0*J1*D1 + J2 + J1*J1)
  so = -1j*alpha*(J1*ratio(phi*Uy) + ratio(phi1*Uy))
  zeeman = b_field*ratio(phi*_spin_rows(s, model, _SZ))
  e = (kinetic + so + zeeman).sum(axis=-1) + model.pot(x).sum(axis=-1)
  if cp.strength > 0.0 and n > 1:
    iu = numpy.triu_indices(n, 1)
    r = (x[:, :, None] - x[:, None, :])[:, iu[0], iu[1]]
    e = e + (cp.strength/numpy.sqrt(r*r + cp.softening**2)).sum(axis=-1)
  sz2 = ratio(phi*_spin_rows(s, model, _SZ2)).real.mean(axis=-1)
  s2 = ratio(phi*_spin_rows(s, model, _S2)).real.mean(axis=-1)
  return e, sz2, s2, ok

def _resolve(pot, e_field, cp):
  if e_field is not None and e_field != pot.e_field:
    pot = replace(pot, e_field=float(e_field))
  return pot, (cp if cp is not None else CoulombParams())

################################################################
def trial_amplitude(cfg, tp, pot):
  """
Slater-Jastrow amplitude psi_T(x, s) = D(x, s) e^J(x).

psi = soqdot.trial_amplitude(cfg, tp, pot)

cfg -- WalkerConfig with as many electrons as the trial.

Returns 0 for a singular Slater matrix.
  """
  model = _model(tp, pot)
  if cfg.n != len(model.centers):
    raise DomainError("trial_amplitude: Error: configuration has %d "
                      "electrons, trial has %d" % (cfg.n, len(model.centers)))
  x = cfg.positions[None]
  phi, _, _ = _orbitals(x, model)
  D = numpy.linalg.det(phi*_spin_rows(cfg.spins[None], model))[0]
  J, _, _ = _jastrow(x, model.b)
  return complex(D*numpy.exp(J[0]))

def local_energy(cfg, tp, pot, alpha, e_field=None, cp=None, b_field=0.0,
                 node_tol=1e-12):
  """
Real part of (H psi_T)/psi_T at one configuration.

e = soqdot.local_energy(cfg, tp, pot, alpha, e_field=None, cp=None)

H = sum_i [-(1/2) d^2/dx_i^2 + V(x_i) + E0 x_i - i alpha d/dx_i sigma_y,i
    + b_field sigma_z,i] + sum_{i<j} softened Coulomb.

Near a node (|D| < node_tol times the row scale) the sample is rejected:
NaN is returned and a warning logged.
  """
  pot, cp = _resolve(pot, e_field, cp)
  model = _model(tp, pot)
  e, _, _, ok = _local_terms(cfg.positions[None], cfg.spins[None], model,
                             alpha, cp, b_field, node_tol)
  if not ok[0]:
    logger.warning("local_energy: configuration is at a node, rejected")
    return float('nan')
  return float(e[0].real)

################################################################
def blocking_error(series):
  """
Standard error of a correlated series by repeated pairwise blocking;
the largest estimate over levels with at least 16 blocks.

err = soqdot.blocking_error(series)
  """
  x = numpy.asarray(series, dtype=float)
  x = x[numpy.isfinite(x)]
  if x.size < 2:
    return 0.0
  best = math.sqrt(x.var()/(x.size - 1))
  while x.size >= 32:
    if x.size % 2:
      x = x[:-1]
    x = 0.5*(x[0::2] + x[1::2])
    best = max(best, math.sqrt(x.var()/(x.size - 1)))
  return best

def _box(pot, bins):
  c = pot.centers()
  m = 5.0/math.sqrt(pot.beta)
  return numpy.linspace(c.min() - m, c.max() + m, bins + 1)

def _chain(model, rng, n_burn, n_measure, alpha, cp, b_field, st, keep):
  W = st.n_walkers
  n = len(model.centers)
  x = model.centers + rng.normal(scale=0.1/math.sqrt(model.kappa),
                                 size=(W, n))
  s = rng.uniform(0.0, TWO_PI, size=(W, n))
  lp = _log_prob(x, s, model)
  step = st.step if st.step else 0.5/math.sqrt(model.kappa)
  edges = _box(model.pot, st.bins)
  hist = numpy.zeros((st.bins, st.bins))
  series = {k: [] for k in ('e', 'sz2', 'x')}
  tot = {'e': 0.0, 'e2': 0.0, 'ei': 0.0, 'sz2': 0.0, 's2': 0.0, 'ok': 0,
         'acc': 0, 'prop': 0, 'rej': 0}
  kept = {'x': [], 's': []}
  acc = prop = 0
  for sweep in range(n_burn + n_measure):
    if sweep == n_burn:
      acc = prop = 0
    for i in range(n):
      xn = x.copy()
      sn = s.copy()
      xn[:, i] += step*rng.standard_normal(W)
      sn[:, i] = numpy.mod(sn[:, i] + rng.uniform(-st.spin_step, st.spin_step,
                                                  W), TWO_PI)
      lpn = _log_prob(xn, sn, model)
      with numpy.errstate(invalid='ignore'):
        delta = numpy.where(numpy.isfinite(lp), lpn - lp, numpy.inf)
        accept = numpy.log(rng.uniform(size=W)) < delta
      x[accept] = xn[accept]
      s[accept] = sn[accept]
      lp[accept] = lpn[accept]
      acc += int(accept.sum())
      prop += W
    if st.exchange_moves and n > 1:
#
# Relabelling two electrons leaves |psi|^2 unchanged; always accepted.
#
      a = rng.integers(n, size=W)
      b = (a + rng.integers(1, n, size=W)) % n
      w = numpy.arange(W)
      x[w, a], x[w, b] = x[w, b], x[w, a]
      s[w, a], s[w, b] = s[w, b], s[w, a]
    if sweep < n_burn:
      if (sweep + 1) % 5 == 0:
        step *= min(2.0, max(0.5, (acc/prop)/0.5))
        acc = prop = 0
      continue
    e, sz2, s2, ok = _local_terms(x, s, model, alpha, cp, b_field, st.node_tol)
    k = int(ok.sum())
    er = e.real[ok]
    tot['e'] += er.sum()
    tot['e2'] += (er*er).sum()
    tot['ei'] += e.imag[ok].sum()
    tot['sz2'] += sz2[ok].sum()
    tot['s2'] += s2[ok].sum()
    tot['ok'] += k
    tot['rej'] += W - k
    series['e'].append(er.mean() if k else numpy.nan)
    series['sz2'].append(sz2[ok].mean() if k else numpy.nan)
    series['x'].append(x.mean())
    pair = (x[:, 0], x[:, 1]) if n > 1 else (x[:, 0], x[:, 0])
    hist += numpy.histogram2d(pair[0], pair[1], bins=[edges, edges])[0]
    if keep:
      kept['x'].append(x.copy())
      kept['s'].append(s.copy())
  tot['acc'], tot['prop'] = acc, prop
  return tot, series, hist, kept, step

################################################################
def metropolis_run(tp, pot, alpha, e_field=None, n_samples=100000, seed=1,
                   cp=None, b_field=0.0, settings=None, keep_samples=False):
  """
Metropolis sampling of |psi_T(x, s)|^2.

est = soqdot.metropolis_run(tp, pot, alpha, e_field, n_samples, seed)

tp -- TrialParams.

pot -- PotentialSpec; e_field overrides pot.e_field when given.

n_samples -- measured samples over all chains and walkers (>= 10^4).

seed -- root seed; each chain draws from its own spawned sequence, so
        equal inputs give bit-identical results.

cp -- CoulombParams (default strength 1, softening 0.1).

settings -- VmcSettings.

keep_samples -- keep the sampled x and s in est.samples.

Each sweep moves every electron once (Gaussian step in x, uniform shift of
s) and then exchanges two labels. The step is tuned toward 50% acceptance
during burn-in (10% of the sweeps, at least settings.min_burn); acceptance
outside [0.2, 0.8] afterwards is flagged.
  """
  st = settings if settings is not None else VmcSettings()
  n_samples = int(n_samples)
  if n_samples < MIN_SAMPLES:
    raise DomainError("metropolis_run: Error: n_samples must be >= %d, got "
                      "%d" % (MIN_SAMPLES, n_samples))
  pot, cp = _resolve(pot, e_field, cp)
  model = _model(tp, pot)
  per_sweep = st.n_chains*st.n_walkers
  n_measure = int(math.ceil(n_samples/per_sweep))
  n_burn = max(st.min_burn, int(math.ceil(n_measure/9.0)))
  seqs = numpy.random.SeedSequence(int(seed)).spawn(st.n_chains)

  def chain(sq):
    return _chain(model, numpy.random.default_rng(sq), n_burn, n_measure,
                  alpha, cp, b_field, st, keep_samples)

  if st.workers and st.workers > 1:
    with ThreadPoolExecutor(max_workers=st.workers) as pool:
      results = list(pool.map(chain, seqs))
  else:
    results = [chain(sq) for sq in seqs]

  tot = {k: sum(r[0][k] for r in results) for k in results[0][0]}
  series = {k: numpy.nanmean([r[1][k] for r in results], axis=0)
            for k in ('e', 'sz2', 'x')}
  hist = sum(r[2] for r in results)
  count = max(tot['ok'], 1)
  e_mean = tot['e']/count
  acceptance = tot['acc']/max(tot['prop'], 1)
  flags = []
  if not 0.2 <= acceptance <= 0.8:
    flags.append('acceptance_out_of_range')
    logger.warning("metropolis_run: acceptance %.3f outside [0.2, 0.8]",
                   acceptance)
  if tot['rej']:
    flags.append('node_rejections')
    logger.warning("metropolis_run: %d samples rejected near nodes",
                   tot['rej'])
  samples = None
  if keep_samples:
    samples = {k: numpy.concatenate([numpy.concatenate(r[3][k]) for r in
                                     results]) for k in ('x', 's')}
  total = hist.sum()
  est = VmcEstimate(
    energy_mean=e_mean, energy_err=blocking_error(series['e']),
    energy_variance=max(tot['e2']/count - e_mean*e_mean, 0.0),
    imag_mean=tot['ei']/count,
    constraint_mean=tot['sz2']/count,
    constraint_err=blocking_error(series['sz2']),
    s2_mean=tot['s2']/count,
    pair_histogram=hist/total if total > 0 else hist,
    bin_edges=_box(pot, st.bins), centers=pot.centers(),
    centroid_mean=float(numpy.mean(series['x'])),
    centroid_err=blocking_error(series['x']),
    n_samples=n_measure*per_sweep, seed=int(seed), acceptance=acceptance,
    step=float(numpy.mean([r[4] for r in results])),
    n_rejected=int(tot['rej']), flags=tuple(flags), params=tp,
    potential=pot, samples=samples)
  logger.info("metropolis_run: E = %.8g +- %.2g, <sz^2> = %.6g, acceptance "
              "%.3f, %d samples", est.energy_mean, est.energy_err,
              est.constraint_mean, acceptance, est.n_samples)
  return est

################################################################
def _reweighted(est, tp, alpha, cp, b_field, node_tol):
#
# Correlated-sampling estimate of (E, <sigma_z^2>) for tp from the samples
# drawn with est.params.
#
  x, s = est.samples['x'], est.samples['s']
  old = _model(est.params, est.potential)
  new = _model(tp, est.potential)
  lw = _log_prob(x, s, new) - _log_prob(x, s, old)
  e, sz2, _, ok = _local_terms(x, s, new, alpha, cp, b_field, node_tol)
  lw = numpy.where(ok & numpy.isfinite(lw), lw, -numpy.inf)
  if not numpy.isfinite(lw).any():
    return numpy.inf, numpy.inf
  w = numpy.exp(lw - lw.max())
  w /= w.sum()
  return float(w @ numpy.where(ok, e.real, 0.0)), \
         float(w @ numpy.where(ok, sz2, 0.0))

def _coordinate(f, lo, hi, current, points=9):
  grid = numpy.linspace(lo, hi, points)
  vals = [f(v) for v in grid]
  k = int(numpy.argmin(vals))
  a, b = grid[max(k - 1, 0)], grid[min(k + 1, points - 1)]
  res = scipy.optimize.minimize_scalar(f, bounds=(a, b), method='bounded',
                                       options={'xatol': 1e-3*(hi - lo)})
  cands = [(f(current), current), (vals[k], grid[k]), (res.fun, res.x)]
  return min(cands, key=lambda t: t[0])[1]

def optimize_params(pot, alpha, e_field=None, seed=1, cp=None, b_field=0.0,
                    tp=None, n_samples=20000, settings=None, max_passes=20,
                    tol=1e-3, lambda_rate=1.0, jastrow_max=5.0,
                    full_output=False):
  """
Constrained variational optimization of the trial parameters.

tp = soqdot.optimize_params(pot, alpha, e_field, seed)

Minimizes L = <H> + lambda (<sigma_z^2> - 1). Each pass samples the
current trial once, then minimizes the reweighted L over jastrow_b and
spinor_mix in turn (grid bracketing, then bounded golden-section search)
and raises lambda by lambda_rate times the constraint residual. Passes
stop when L changes by less than tol relative; after max_passes the best
parameters so far are returned and flagged as not converged.

full_output -- also return an OptimizeInfo with the per-pass history.
  """
  pot, cp = _resolve(pot, e_field, cp)
  st = settings if settings is not None else VmcSettings()
  tp = tp if tp is not None else TrialParams()
  history = []
  best = None
  converged = False
  prev = None
  for k in range(int(max_passes)):
    est = metropolis_run(tp, pot, alpha, None, n_samples, seed, cp, b_field,
                         st, keep_samples=True)
    L = est.lagrangian
    residual = est.constraint_mean - 1.0
    history.append({'pass': k, 'params': tp, 'lagrangian': L,
                    'energy': est.energy_mean, 'energy_err': est.energy_err,
                    'residual': residual})
    logger.debug("optimize_params: pass %d L=%.8g b=%.4g mix=%.4g "
                 "lambda=%.4g residual=%.3g", k, L, tp.jastrow_b,
                 tp.spinor_mix, tp.lagrange_lambda, residual)
    if best is None or L < best[0]:
      best = (L, tp)
    if prev is not None and abs(L - prev) <= tol*max(abs(prev), 1e-12):
      converged = True
      break
    prev = L
    lam = tp.lagrange_lambda

    def objective(trial):
      e, sz2 = _reweighted(est, trial, alpha, cp, b_field, st.node_tol)
      return e + lam*(sz2 - 1.0)

    b = _coordinate(lambda v: objective(replace(tp, jastrow_b=v)),
                    0.0, jastrow_max, tp.jastrow_b)
    tp = replace(tp, jastrow_b=float(b))
    mix = _coordinate(lambda v: objective(replace(tp, spinor_mix=v)),
                      -0.5, 0.5, tp.spinor_mix)
    tp = replace(tp, spinor_mix=float(mix))
    _, sz2 = _reweighted(est, tp, alpha, cp, b_field, st.node_tol)
    tp = replace(tp, lagrange_lambda=lam + lambda_rate*(sz2 - 1.0))
  if not converged:
    logger.warning("optimize_params: not converged after %d passes",
                   len(history))
  info = OptimizeInfo(converged, len(history), best[0], history)
  if full_output:
    return best[1], info
  return best[1]

################################################################
def pair_distribution(estimate):
  """
Normalized pair density rho(x1, x2) of electrons 1 and 2.

rho = soqdot.pair_distribution(est)

Returns a PairDistribution with density[i, j] the probability of bin
(x[i], x[j]).
  """
  h = numpy.asarray(estimate.pair_histogram, dtype=float)
  if h.sum() <= 0.0:
    raise DomainError("pair_distribution: Error: empty histogram")
  e = estimate.bin_edges
  return PairDistribution(h/h.sum(), 0.5*(e[:-1] + e[1:]))

def localization_fraction(estimate, window):
  """
Pair mass with both electrons within `window` of a well centre.

f = soqdot.localization_fraction(est, window)
  """
  rho = pair_distribution(estimate)
  near = numpy.zeros(rho.x.shape, dtype=bool)
  for c in estimate.centers:
    near |= numpy.abs(rho.x - c) <= window
  return float(rho.density[numpy.ix_(near, near)].sum())

def centroid(estimate):
  """
Mean electron position and its blocking error.

mean, err = soqdot.centroid(est)
  """
  return estimate.centroid_mean, estimate.centroid_err
