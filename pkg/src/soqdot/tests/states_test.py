import math

import pytest

import soqdot
from soqdot import (DensityMatrix, StateVector, PI0, PI1, UP, DOWN, SINGLET,
                    Z_BASIS, X_BASIS)
from utils import *

rng = make_rng(23)
LN2 = math.log(2.0)

def singlet():
  return soqdot.pure_density(StateVector(SINGLET, (2, 2)))

def werner(p):
  return DensityMatrix(p*singlet().matrix + (1.0 - p)*numpy.eye(4)/4.0,
                       (2, 2))

#
# Begin state construction tests.
#

def test_state_vector_validation():
  with pytest.raises(soqdot.StateError):
    StateVector([1.0, 1.0])
  with pytest.raises(soqdot.ShapeError):
    StateVector([1.0, 0.0, 0.0, 0.0], (2, 3))
  psi = StateVector.normalized([3.0, 4.0])
  check_values("normalized", psi.amplitudes, [0.6, 0.8], 1e-15)
  with pytest.raises(soqdot.StateError):
    StateVector.normalized([0.0, 0.0])

def test_density_matrix_validation():
  with pytest.raises(soqdot.StateError):
    DensityMatrix(numpy.eye(2))
  with pytest.raises(soqdot.StateError):
    DensityMatrix(numpy.diag([1.5, -0.5]))
  with pytest.raises(soqdot.NotHermitianError):
    DensityMatrix([[0.5, 0.1], [0.0, 0.5]])
  rho = DensityMatrix(random_density(rng, 6), (2, 3))
  assert rho.dims == (2, 3) and rho.dim == 6
  assert not rho.matrix.flags.writeable

def test_pure_density_and_entropies():
  psi = StateVector(random_state(rng, 8), (2, 4))
  rho = soqdot.pure_density(psi)
  check_value("pure entropy", soqdot.von_neumann_entropy(rho), 0.0, 1e-10)
  check_value("pure linear entropy", soqdot.linear_entropy(rho), 0.0, 1e-12)
#
# Schmidt symmetry of a pure bipartite state.
#
  check_value("schmidt", soqdot.von_neumann_entropy(soqdot.reduced(rho, [0])),
              soqdot.von_neumann_entropy(soqdot.reduced(rho, [1])), 1e-10)

def test_shannon_entropy():
  check_value("fair coin", soqdot.shannon_entropy([0.5, 0.5, 0.0]), LN2,
              1e-15)
  check_value("certain", soqdot.shannon_entropy([1.0]), 0.0)
  check_value("maximally mixed", soqdot.von_neumann_entropy(numpy.eye(4)/4),
              math.log(4.0), 1e-12)

def test_spectrum_rejects_negative():
  with pytest.raises(soqdot.DomainError):
    soqdot.spectrum(numpy.diag([1.1, -0.1]))

#
# Begin correlation measure tests.
#

def test_singlet_measures():
  rho = singlet()
  check_value("S(A)", soqdot.von_neumann_entropy(soqdot.reduced(rho, (0,))),
              LN2, 1e-12)
  check_value("S(A|B)", soqdot.conditional_entropy(rho, (0,)), -LN2, 1e-12)
  check_value("I(A:B)", soqdot.mutual_information(rho, (0,)), 2*LN2, 1e-12)
  check_value("concurrence", soqdot.concurrence2q(rho), 1.0, 1e-6)

def test_conditional_entropy_needs_bipartite_shape():
  with pytest.raises(soqdot.ShapeError):
    soqdot.conditional_entropy(DensityMatrix(numpy.eye(4)/4), (0,))
  with pytest.raises(soqdot.ShapeError):
    soqdot.conditional_entropy(werner(0.5), (0, 1))

def test_product_state_has_no_correlations():
  rho = DensityMatrix(numpy.kron(random_density(rng, 2),
                                 random_density(rng, 2)), (2, 2))
  check_value("I product", soqdot.mutual_information(rho), 0.0, 1e-10)
  check_value("C product", soqdot.concurrence2q(rho), 0.0, 1e-7)
  check_value("D product", soqdot.quantum_discord(rho, 'B'), 0.0, 1e-7)

def test_werner_concurrence():
  for p in (0.2, 1.0/3.0, 0.5, 0.8):
    check_value("werner %g" % p, soqdot.concurrence2q(werner(p)),
                max(0.0, 1.5*p - 0.5), 1e-7)

def test_concurrence_is_local_unitary_invariant():
  for r in (1, 2, 4):
    rho = random_density(rng, 4, r)
    U = numpy.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    before = soqdot.concurrence2q(DensityMatrix(rho, (2, 2)))
    after = soqdot.concurrence2q(DensityMatrix(U @ rho @ U.conj().T, (2, 2)))
    check_value("rank %d" % r, after, before, 1e-7)

def test_entropy_is_subadditive():
  for _ in range(20):
    rho = DensityMatrix(random_density(rng, 6), (2, 3))
    S = soqdot.von_neumann_entropy(rho)
    S_A = soqdot.von_neumann_entropy(soqdot.reduced(rho, (0,)))
    S_B = soqdot.von_neumann_entropy(soqdot.reduced(rho, (1,)))
    assert S <= S_A + S_B + 1e-10
    assert soqdot.mutual_information(rho) >= -1e-10

def test_concurrence_rejects_non_qubits():
  with pytest.raises(soqdot.ShapeError):
    soqdot.concurrence2q(DensityMatrix(numpy.eye(6)/6, (2, 3)))

def test_uhlmann_fidelity():
  a, b = random_state(rng, 3), random_state(rng, 3)
  Fa = soqdot.uhlmann_fidelity(soqdot.pure_density(a), soqdot.pure_density(b))
  check_value("pure overlap", Fa, abs(numpy.vdot(a, b))**2, 1e-6)
  rho, sigma = random_density(rng, 4), random_density(rng, 4)
  check_value("self", soqdot.uhlmann_fidelity(rho, rho), 1.0, 1e-9)
  check_value("symmetric", soqdot.uhlmann_fidelity(rho, sigma),
              soqdot.uhlmann_fidelity(sigma, rho), 1e-9)
  with pytest.raises(soqdot.ShapeError):
    soqdot.uhlmann_fidelity(numpy.eye(2)/2, numpy.eye(3)/3)

#
# Begin measurement and channel tests.
#

def test_projective_measure_singlet():
  out = soqdot.projective_measure(singlet(), [PI0, PI1], subsystem=1)
  check_values("probabilities", [r.probability for r in out], [0.5, 0.5],
               1e-14)
  du = numpy.kron(DOWN, UP)
  check_values("post up on B", out[1].post_state.matrix,
               numpy.outer(du, du), 1e-14)

def test_projective_measure_absent_outcome():
  rho = DensityMatrix(numpy.kron(PI1, PI1), (2, 2))
  out = soqdot.projective_measure(rho, [PI0, PI1], subsystem=0)
  assert out[0].absent and out[0].probability == 0.0
  assert not out[1].absent

def test_projector_validation():
  with pytest.raises(soqdot.StateError):
    soqdot.projective_measure(werner(0.5), [PI0], 0)
  with pytest.raises(soqdot.StateError):
    soqdot.projective_measure(werner(0.5), [PI0, PI0, PI1 - PI0], 0)
  with pytest.raises(soqdot.ShapeError):
    soqdot.projective_measure(werner(0.5), [numpy.eye(3)], 0)

def test_dephase_removes_coherence():
  xi = soqdot.dephase(singlet(), [PI0, PI1], 0)
  check_values("dephased", xi.matrix, numpy.diag([0, 0.5, 0.5, 0]), 1e-14)

def test_dephase_is_idempotent():
  rho = DensityMatrix(random_density(rng, 6), (3, 2))
  for projectors, subsystem in (([PI0, PI1], 1),
                                ([numpy.outer(v, v.conj()) for v in X_BASIS],
                                 1),
                                ([numpy.diag(e) for e in numpy.eye(3)], 0)):
    once = soqdot.dephase(rho, projectors, subsystem)
    twice = soqdot.dephase(once, projectors, subsystem)
    check_values("idempotent", twice.matrix, once.matrix, 1e-14)
    check_value("trace", numpy.trace(once.matrix).real, 1.0, 1e-12)

def test_kraus_apply():
  g = 0.3
  damp = [numpy.array([[1, 0], [0, math.sqrt(1 - g)]]),
          numpy.array([[0, math.sqrt(g)], [0, 0]])]
  rho = DensityMatrix(random_density(rng, 4), (2, 2))
  out = soqdot.kraus_apply(rho, damp, subsystem=1)
  check_value("trace", numpy.trace(out.matrix).real, 1.0, 1e-12)
  check_values("A untouched", soqdot.reduced(out, (0,)).matrix,
               soqdot.reduced(rho, (0,)).matrix, 1e-12)
  with pytest.raises(soqdot.StateError):
    soqdot.kraus_apply(rho, [0.5*numpy.eye(2)], subsystem=0)
  with pytest.raises(soqdot.ShapeError):
    soqdot.kraus_apply(rho, [numpy.eye(3)], subsystem=0)

def test_witness_counterexample():
#
# Hadamard channel, z blind measurement and probe on one qubit in |+>.
#
  plus = (UP + DOWN)/math.sqrt(2.0)
  rho = DensityMatrix(numpy.kron(numpy.outer(plus, plus), PI1), (2, 2))
  W = soqdot.quantum_witness(rho, [X_BASIS], [PI0, PI1], PI0,
                             channel_subsystem=0, blind_subsystem=0,
                             probe_subsystem=0)
  check_value("witness", W, 0.5, 1e-12)

def test_witness_vanishes_for_incoherent_state():
  rho = DensityMatrix(numpy.diag([0.1, 0.2, 0.3, 0.4]), (2, 2))
  W = soqdot.quantum_witness(rho, [X_BASIS], [PI0, PI1], PI0, 0, 0, 0)
  check_value("incoherent witness", W, 0.0, 1e-14)

def test_witness_vanishes_across_qubits():
  flip = [numpy.array([[0, 1], [1, 0]], dtype=complex)]
  for r in (1, 2, 4):
    rho = DensityMatrix(random_density(rng, 4, r), (2, 2))
    P, G = soqdot.witness_probabilities(rho, flip, [PI0, PI1], PI1)
    check_value("unmeasured", P, G, 1e-12)
    check_value("witness", soqdot.quantum_witness(rho, flip, [PI0, PI1], PI1),
                0.0, 1e-12)

#
# Begin discord tests.
#

def test_discord_of_pure_states_is_entanglement():
  psi = random_state(rng, 4)
  rho = soqdot.pure_density(StateVector(psi, (2, 2)))
  S = soqdot.von_neumann_entropy(soqdot.reduced(rho, (0,)))
  check_value("pure discord B", soqdot.quantum_discord(rho, 'B'), S, 1e-7)
  check_value("pure discord A", soqdot.quantum_discord(rho, 'A'), S, 1e-7)

def test_discord_classical_state():
  rho = DensityMatrix(0.5*numpy.kron(PI0, PI0) + 0.5*numpy.kron(PI1, PI1),
                      (2, 2))
  res = soqdot.discord_details(rho, 'A')
  check_value("classical discord", res.value, 0.0, 1e-7)
  assert res.measured_side == 'A'

def test_discord_werner_is_positive():
  for p in (0.1, 0.5, 0.9):
    assert soqdot.quantum_discord(werner(p)) > 0.0
  with pytest.raises(soqdot.ShapeError):
    soqdot.quantum_discord(werner(0.5), measured_side='C')

def test_basis_from_bloch():
  check_values("z", soqdot.basis_from_bloch(0.0, 0.0), numpy.eye(2), 1e-15)
  U = soqdot.basis_from_bloch(math.pi/2, 0.0)
  check_values("x up", U[:, 0], X_BASIS[:, 0], 1e-15)
  check_value("x down", abs(numpy.vdot(U[:, 1], X_BASIS[:, 1])), 1.0, 1e-15)

#
# Begin uncertainty relation tests.
#

def test_berta_singlet_is_tight():
  rec = soqdot.berta_uncertainty(singlet(), Z_BASIS, X_BASIS, 0)
  check_value("S(R|B)", rec.S_RB, 0.0, 1e-10)
  check_value("S(Q|B)", rec.S_QB, 0.0, 1e-10)
  check_value("c", rec.c, 0.5, 1e-14)
  check_value("slack", rec.slack, 0.0, 1e-10)

def test_berta_bound_holds_for_random_states():
  for _ in range(20):
    rho = DensityMatrix(random_density(rng, 4), (2, 2))
    U = random_unitary(rng, 2)
    rec = soqdot.berta_uncertainty(rho, Z_BASIS, U, 0)
    assert rec.slack >= -1e-9
    check_value("lhs", rec.lhs, rec.S_RB + rec.S_QB, 1e-14)

def test_berta_rejects_non_orthonormal_basis():
  with pytest.raises(soqdot.StateError):
    soqdot.berta_uncertainty(werner(0.5), Z_BASIS, [[1, 1], [0, 1]], 0)
