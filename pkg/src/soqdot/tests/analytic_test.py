import math

import pytest

import soqdot
from soqdot import ModelParams, REPORT_FIELDS
from utils import *

LN2 = math.log(2.0)

#
# Printed closed forms at alpha = 0.4, beta = 1.
#
PRINTED = {
  'gamma0': 0.023809523809524,
  'gamma1': 0.976190476190476,
  'S_spin_pre': 0.149786613678,
  'S_orb_pre': 0.174806734855,
  'S_spin_post': 0.090026224773,
  'S_orb_post': 0.090026224773,
  'fidelity': 0.962002637918,
  'fidelity_asymptotic': 0.960355339059,
  'concurrence_pre': 0.05,
  'concurrence_post': 0.0,
  'discord_difference': 0.034657359028,
  'witness_prob': 0.976190476190,
  'S_AB_pure': -0.112515934120,
  'S_AB_mixed': 0.078928147838,
  'S_RB': 0.111935156436,
  'S_QB': -0.002216754825,
  'S_rhoA': 0.879549240807,
  'S_rhoA_S': 0.112515934120,
}

#
# Exact values for the normalized state where they differ from the above.
#
EXACT = {
  'S_spin_pre': 0.191444081958,
  'S_orb_pre': 0.191444081958,
  'S_spin_post': 0.114665282203,
  'S_orb_post': 0.114665282203,
  'fidelity': 0.976190476190,
  'fidelity_asymptotic': 0.976190476190,
  'concurrence_pre': 0.047619047619,
  'discord_difference': 0.031371031456,
  'S_QB': 0.690930425735,
  'S_rhoA': 0.818530820189,
}

#
# Fields whose numerics involve matrix square roots or a minimization.
#
LOOSE = ('fidelity', 'fidelity_asymptotic', 'concurrence_pre',
         'concurrence_post', 'discord_difference')

ALPHAS = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.69)

def tolerance(name):
  return 1e-7 if name in LOOSE else 1e-9

#
# Begin ModelParams tests.
#

def test_model_params_defaults():
  p = ModelParams()
  assert (p.alpha, p.beta, p.e_field, p.ell) == (0.4, 1.0, 0.0, 0.8)
  check_value("q", p.q, 0.05, 1e-15)
  check_value("Z", p.Z, 1.05, 1e-15)
  check_value("coupling", p.coupling, 0.2, 1e-15)

def test_model_params_domain():
  with pytest.raises(soqdot.DomainError):
    ModelParams(beta=0.0)
  with pytest.raises(soqdot.DomainError):
    ModelParams(alpha=-0.1)
  with pytest.raises(soqdot.DomainError):
    ModelParams(alpha=1.0, beta=1.0)
  ModelParams(alpha=2.0, beta=10.0)

#
# Begin state construction tests.
#

def test_build_states_shapes_and_norm():
  st = soqdot.build_states(ModelParams())
  assert st.phi_M.dims == (3, 2, 2)
  assert st.rho_S.dims == (2, 2) and st.rho_or.dims == (3,)
  check_value("norm", numpy.vdot(st.phi_M.amplitudes,
                                 st.phi_M.amplitudes).real, 1.0, 1e-14)
  check_value("Z", st.Z, 1.05, 1e-15)

def test_zero_coupling_is_triplet():
  st = soqdot.build_states(ModelParams(alpha=0.0))
  check_values("rho_S", st.rho_S.matrix,
               numpy.outer(soqdot.T_PLUS, soqdot.T_PLUS), 1e-15)
  check_value("entropy", soqdot.von_neumann_entropy(st.rho_S), 0.0, 1e-12)

def test_particle_state_is_antisymmetric():
  psi = soqdot.particle_state(ModelParams(alpha=0.5))
  t = psi.tensor()
  assert t.shape == (4, 2, 4, 2)
  check_values("exchange", t.transpose(2, 3, 0, 1), -t, 1e-15)

def test_measurement_outcomes():
  for a in ALPHAS:
    out = soqdot.measurement_outcomes(ModelParams(alpha=a))
    check_value("gamma sum", out.gamma0 + out.gamma1, 1.0, 1e-15)
    for rho in (out.sigma1, out.sigma2, out.varrho1, out.varrho2):
      check_value("trace", numpy.trace(rho.matrix).real, 1.0, 1e-12)

#
# Begin closed-form report tests.
#

def test_closed_form_values():
  rep = soqdot.closed_form_report(ModelParams(alpha=0.4, beta=1.0))
  for name, value in PRINTED.items():
    check_value(name, rep.value(name), value, 1e-11)
  for name in REPORT_FIELDS:
    check_value(name + " exact", rep.exact[name],
                EXACT.get(name, PRINTED[name]), 1e-11)
  assert len(rep.rows()) == len(REPORT_FIELDS)
  assert set(rep.z_approx) <= set(REPORT_FIELDS)

def test_leading_order_formulas_track_exact_values():
  for a in ALPHAS:
    rep = soqdot.closed_form_report(ModelParams(alpha=a))
    for name in ('gamma0', 'gamma1', 'witness_prob', 'S_AB_pure',
                 'S_AB_mixed', 'S_RB', 'S_rhoA_S', 'concurrence_post'):
      check_value(name, rep.value(name), rep.exact[name], 1e-14)
    check_value("S_QB offset", rep.exact['S_QB'] - rep.S_QB, LN2, 1e-14)

def test_memory_sign_claims():
  for a in ALPHAS + (0.9, 0.99):
    rep = soqdot.closed_form_report(ModelParams(alpha=a))
    assert rep.S_AB_pure < 0.0
    assert rep.S_AB_mixed > 0.0

def test_printed_memory_values():
  rep = soqdot.closed_form_report(ModelParams())
  check_value("S(A|B) pure", rep.S_AB_pure, -0.112516, 1e-6)
  check_value("S(A|B) mixed", rep.S_AB_mixed, 0.078928, 1e-6)

#
# Begin numeric oracle tests.
#

def test_numeric_report_matches_exact_values():
  p = ModelParams(alpha=0.4, beta=1.0)
  rep = soqdot.closed_form_report(p)
  num = soqdot.numeric_report(p)
  for name in REPORT_FIELDS:
    check_value(name, num[name], rep.exact[name], tolerance(name))
  check_value("witness", num['witness'], 0.0, 1e-10)

@pytest.mark.parametrize('alpha,beta', [(0.1, 1.0), (0.3, 0.5), (0.5, 2.0),
                                        (1.2, 4.0), (2.0, 10.0)])
def test_numeric_oracle_over_parameters(alpha, beta):
  p = ModelParams(alpha=alpha, beta=beta)
  rep = soqdot.closed_form_report(p)
  num = soqdot.numeric_report(p)
  for name in REPORT_FIELDS:
    check_value(name, num[name], rep.exact[name], tolerance(name))

def test_discord_difference_values():
  expected = {0.1: 0.002146035, 0.2: 0.008399558, 0.5: 0.046925083,
              0.7: 0.083198984}
  for a, value in expected.items():
    p = ModelParams(alpha=a)
    rep = soqdot.closed_form_report(p)
    check_value("exact %g" % a, rep.exact['discord_difference'], value, 1e-8)
    check_value("numeric %g" % a, soqdot.numeric_report(p)
                ['discord_difference'], value, 1e-7)

def test_witness_is_noninvasive():
  for a in ALPHAS:
    num = soqdot.numeric_report(ModelParams(alpha=a), discord_grid=16)
    check_value("witness %g" % a, num['witness'], 0.0, 1e-10)
    check_value("unmeasured %g" % a, num['witness_unmeasured'],
                num['witness_prob'], 1e-10)

def test_uncertainty_bound_on_model_states():
  for a in ALPHAS:
    st = soqdot.build_states(ModelParams(alpha=a))
    rec = soqdot.berta_uncertainty(st.rho_S, soqdot.Z_BASIS, soqdot.X_BASIS)
    assert rec.slack >= -1e-9
    check_value("c", rec.c, 0.5, 1e-14)

@pytest.mark.slow
def test_numeric_oracle_hundred_pairs():
  rng = make_rng(5)
  for _ in range(100):
    beta = float(rng.uniform(0.5, 10.0))
    alpha = float(rng.uniform(0.01, 0.69))*math.sqrt(beta)
    p = ModelParams(alpha=alpha, beta=beta)
    rep = soqdot.closed_form_report(p)
    num = soqdot.numeric_report(p)
    for name in REPORT_FIELDS:
      check_value(name, num[name], rep.exact[name], tolerance(name))
    check_value("witness", num['witness'], 0.0, 1e-10)
