import math

import numpy as np
import pytest

import prham


def test_torus_calculus():
    b = prham.torus(8)
    f = prham.random_scalar(b, 4, seed=3)
    ddf = prham.d_oneform(prham.d_scalar(f))
    assert np.max(np.abs(ddf.coeffs)) == 0.0

    assert prham.sobolev_norm(prham.constant(b, 1.0), 3) == pytest.approx(1.0)
    g = prham.random_scalar(b, 8, seed=5)
    assert prham.sobolev_norm(g, 2) >= prham.sobolev_norm(g, 1)


def test_so3_bracket():
    g = prham.LieAlgebra.so3()
    z = g.bracket(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    assert np.allclose(z, [0.0, 0.0, 1.0])
    assert g.jacobi_defect() == 0.0


def test_sphere_momentum_axioms():
    sc = prham.sphere_so3_scenario(8)
    assert prham.generation_defect(sc.pi, sc.map, sc.targets) < 1e-10
    assert prham.hom_defect(sc.pi, sc.map) < 1e-8
    assert prham.chain_defect(sc.map) == 0.0
    assert prham.equivariance_defect(sc.pi, sc.scalar_map) < 1e-12


def test_koszul_exact_forms_identity():
    b = prham.sphere(6)
    pi = prham.PoissonStructure.symplectic(b)
    f = prham.random_scalar(b, 2, seed=11)
    g = prham.random_scalar(b, 2, seed=13)
    lhs = prham.koszul_bracket(pi, prham.d_scalar(f), prham.d_scalar(g))
    rhs = prham.d_scalar(prham.poisson_bracket(pi, f, g))
    assert prham.sobolev_norm(lhs - rhs, 0) < 1e-10


def test_rigidity_run_converges():
    sc = prham.sphere_so3_scenario(6)
    k = prham.perturbation_generator(sc.backend, 7)
    tilde = prham.perturb(sc.pi, sc.map, k, 1e-2)
    cfg = prham.EngineConfig()
    cfg.seed = 7
    out = prham.run_rigidity(sc.pi, sc.map, tilde, cfg)
    assert out["status"] == "Converged"
    assert len(out["steps"]) - 1 <= 6
    assert out["final_residual"] <= 1e-8
    assert out["contraction_slope"] >= 1.8

    op = out["operator"]
    ref = sc.map.forms[0].coeffs
    img = op @ ref
    got = tilde.forms[0].coeffs
    assert np.max(np.abs(img - got)) < 1e-8


def test_gate_rejects_large_perturbations():
    sc = prham.sphere_so3_scenario(6)
    k = prham.perturbation_generator(sc.backend, 7)
    far = prham.perturb(sc.pi, sc.map, k, 0.5)
    with pytest.raises(prham.GateError):
        prham.run_rigidity(sc.pi, sc.map, far, prham.EngineConfig())
