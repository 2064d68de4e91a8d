import numpy as np
import pytest

from cubesos.cube_fourier import (
    CubePolynomial,
    brute_force_min,
    fourier_to_values,
    popcount_table,
    sup_norm,
    value_table,
)
from cubesos.gamma_constants import gamma_d
from cubesos.inner_hierarchy import inner_cube
from cubesos.instances import random_poly
from cubesos.kernel_certifier import (
    CertificationError,
    certified_outer_gap,
    certify,
    choose_kernel,
    error_sweep,
    funk_hecke_apply,
)
from cubesos.krawtchouk import DiscreteMeasure, kraw_hat_table, kraw_int, least_root
from cubesos.outer_hierarchy import outer_cube


def weight_poly(n):
    return CubePolynomial.from_terms(n, [([i + 1], 1.0) for i in range(n)])


# ---------------------------------------------------------------------------
# kernel selection


def test_choose_kernel_degree_zero():
    spec = choose_kernel(8, 0, 2)
    assert spec.lambda_tilde == pytest.approx(0.0, abs=1e-12)
    assert spec.lambda_abs == 0.0
    assert spec.delta == 0.0
    assert spec.lambdas[0] == pytest.approx(1.0, abs=1e-10)


def test_choose_kernel_normalization_and_bounds():
    for (n, d, r) in [(10, 1, 5), (10, 2, 5), (12, 3, 4)]:
        spec = choose_kernel(n, d, r)
        assert spec.lambdas[0] == pytest.approx(1.0, abs=1e-10)
        assert np.all(spec.lambdas <= 1.0 + 1e-10)
        # optimum is dominated by the linear-estimator value
        assert spec.lambda_tilde <= d * (d + 1) * least_root(n, 2, r + 1) / n + 1e-9


def test_choose_kernel_lambda_vs_lambda_tilde():
    spec = choose_kernel(10, 2, 5)
    assert spec.lambda_tilde <= 0.5
    assert spec.lambda_abs <= 2 * spec.lambda_tilde + 1e-9


def test_kernel_objective_vanishes_at_origin():
    # the optimized profile g has g(0) = 0: all normalized values are 1 there
    n, d = 12, 3
    khat = kraw_hat_table(n, d, 2)
    g0 = d - khat[1:d + 1, 0].sum()
    assert g0 == pytest.approx(0.0, abs=1e-14)


def test_lambda_reconstruction():
    # sum_i lam_i K_i(t) = u^2(t) on the grid
    import math

    n, d, r = 12, 2, 5
    spec = choose_kernel(n, d, r)
    K = np.array([[kraw_int(n, 2, k, t) for t in range(n + 1)] for k in range(2 * r + 1)],
                 dtype=float)
    recon = spec.lambdas @ K
    usq = spec.u_values**2
    assert np.max(np.abs(recon - usq)) <= 1e-9 * max(1.0, usq.max())


def test_kernel_exact_at_full_order():
    spec = choose_kernel(6, 2, 6)
    assert spec.lambda_tilde == pytest.approx(0.0, abs=1e-9)
    assert np.all(np.abs(spec.lambdas[:3] - 1.0) <= 1e-8)


def test_linear_estimator_dominates_profile():
    # d - sum Khat_i <= d(d+1) t / n on the grid: exhaustive for n <= 60, d <= 6
    for n in range(1, 61):
        khat = kraw_hat_table(n, min(6, n), 2)
        t = np.arange(n + 1)
        for d in range(1, min(6, n) + 1):
            g = d - khat[1:d + 1].sum(axis=0)
            assert np.all(g <= d * (d + 1) * t / n + 1e-10)


# ---------------------------------------------------------------------------
# the averaging operator


def test_funk_hecke_order_zero_kernel_averages():
    n = 6
    spec = choose_kernel(n, 0, 0)
    p = random_poly(n, 2, seed=3)
    out = funk_hecke_apply(spec, CubePolynomial.constant(n, 1.0))
    assert value_table(out) == pytest.approx(np.ones(1 << n))
    avg = float(value_table(p).mean())
    out = funk_hecke_apply(spec, CubePolynomial(n, {0: p.terms.get(0, 0.0)}))
    assert out.terms.get(0, 0.0) == pytest.approx(p.terms.get(0, 0.0))


def test_funk_hecke_eigenrelation_vs_direct_sum():
    # T chi_z = lam_{|z|} chi_z, checked against the explicit kernel sum
    rng = np.random.default_rng(1)
    for n, d, r in [(6, 2, 3), (7, 1, 2), (8, 2, 4)]:
        spec = choose_kernel(n, d, r)
        pc = popcount_table(n)
        usq = spec.u_values**2
        x_all = np.arange(1 << n)
        lam = np.zeros(n + 1)  # eigenvalue is 0 beyond the kernel degree 2r
        lam[: spec.lambdas.size] = spec.lambdas
        for z in rng.integers(0, 1 << n, size=12):
            chi_z = 1.0 - 2.0 * (pc[np.bitwise_and(x_all, int(z))] % 2)
            direct = np.array([
                np.mean(chi_z * usq[pc[np.bitwise_xor(x_all, x)]]) for x in x_all
            ])
            expected = lam[pc[int(z)]] * chi_z
            assert np.max(np.abs(direct - expected)) <= 1e-9


def test_funk_hecke_invert_roundtrip():
    n = 7
    spec = choose_kernel(n, 3, 4)
    p = random_poly(n, 3, seed=4)
    q = funk_hecke_apply(spec, funk_hecke_apply(spec, p, invert=True))
    assert np.max(np.abs(value_table(q) - value_table(p))) <= 1e-9


def test_operator_norm_surrogate():
    # || T^{-1} p - p ||_inf <= gamma_d * Lambda * ||p||_inf
    n, d, r = 8, 2, 4
    spec = choose_kernel(n, d, r)
    for seed in range(10):
        p = random_poly(n, d, seed=seed)
        inv_p = funk_hecke_apply(spec, p, invert=True)
        dev = np.max(np.abs(value_table(inv_p) - value_table(p)))
        assert dev <= gamma_d(d) * spec.lambda_abs * sup_norm(p) + 1e-9


# ---------------------------------------------------------------------------
# certificates


def test_certify_constant():
    cert = certify(CubePolynomial.constant(6, 2.0), 2)
    assert cert.delta == 0.0
    assert cert.residual <= 1e-12
    assert np.all(cert.weights >= 0.0)


def test_certify_weight_function():
    n, r = 8, 4
    f = weight_poly(n) * (1.0 / n)
    cert = certify(f, r)
    assert cert.residual <= 1e-7
    assert np.all(cert.weights >= 0.0)
    # budget dominated by the closed-form bound for d = 1
    assert cert.delta <= 2 * gamma_d(1) * 2 * least_root(n, 2, r + 1) / n + 1e-9


def test_certify_random_validates_everywhere():
    n, r = 10, 5
    for seed in (0, 1):
        f = random_poly(n, 2, seed=seed)
        cert = certify(f, r)
        check = cert.verify(f)
        assert check["max_residual"] <= 1e-7
        assert check["min_weight"] >= 0.0
        assert cert.weights.size == 1 << n


def test_certify_reports_lambda_tilde_when_infeasible():
    f = random_poly(6, 2, seed=5)
    with pytest.raises(CertificationError, match="lambda_tilde"):
        certify(f, 1)


def test_certificate_json_schema():
    f = random_poly(5, 2, seed=2)
    data = certify(f, 3).to_dict()
    assert set(data) == {"delta", "r", "u_coeffs", "weights", "translate", "scale", "residual"}
    assert len(data["weights"]) == 1 << 5
    assert all(set(w) == {"y", "w"} for w in data["weights"])
    assert len(data["translate"]) == 5


def test_certificate_backs_outer_bound():
    # brute force >= SDP value >= brute force - delta, certified
    n, r = 8, 4
    for seed in (3, 4):
        f = random_poly(n, 2, seed=seed)
        fmin, _ = brute_force_min(f)
        cert = certify(f, r)
        sdp = outer_cube(f, r).value
        assert sdp <= fmin + 1e-7
        assert sdp >= fmin - cert.delta_original - 1e-7


def test_tight_certificate_never_larger():
    n, r = 10, 4
    for seed in range(5):
        f = random_poly(n, 2, seed=seed)
        loose = certify(f, r)
        gap, tight = certified_outer_gap(f, r)
        assert gap <= loose.delta_original + 1e-12
        assert tight.residual <= 1e-7
        assert np.all(tight.weights >= 0.0)


def test_exactness_at_full_order_certificate():
    f = random_poly(6, 2, seed=6)
    gap, cert = certified_outer_gap(f, 6)
    assert gap <= 1e-9


# ---------------------------------------------------------------------------
# sweeps


def test_error_sweep_rows():
    rows = list(error_sweep(2, [8], [0.25, 0.5], samples=3, seed=1))
    assert len(rows) == 2
    for row in rows:
        assert row["max_outer_gap"] <= row["bound_2Cd_xi_over_n"] + 1e-6
        assert row["max_inner_gap"] <= row["bound_2Cd_xi_over_n"] + 1e-6
        assert "errors" not in row


def test_predicted_delta_regimes():
    from cubesos.kernel_certifier import predicted_delta

    # comfortable regime: prediction dominates the realized budget
    spec = choose_kernel(10, 1, 5)
    pred = predicted_delta(10, 1, 5)
    assert spec.delta <= pred + 1e-12
    # the sharper toggle only matters between 1/2 and 1
    base = predicted_delta(10, 2, 3)
    sharp = predicted_delta(10, 2, 3, sharper=True)
    lt = choose_kernel(10, 2, 3).lambda_tilde
    assert lt > 0.5
    assert base == float("inf")
    assert sharp == pytest.approx(gamma_d(2) * lt / (1 - lt))
