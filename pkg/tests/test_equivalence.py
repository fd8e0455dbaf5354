import numpy as np
import pytest

from splitting_equivalence.equivalence import (
    ADMM_DR,
    CP_DR_IDENTITY,
    DR_ADMM,
    THEOREMS,
    EquivalenceReport,
    admm_intermediate_to_pr_start,
    admm_to_dr_start,
    check_dr_admm_one_step,
    check_pr_admm_intermediate_one_step,
    dr_to_admm_start,
    dykstra_map_counterexample,
    verify_admm_dr,
    verify_admm_intermediate_pr,
    verify_cp_dr_identity_case,
    verify_cp_lifted_dr,
    verify_dr_admm,
    verify_dykstra_subspace_closed_form,
    verify_pr_admm_intermediate,
    verify_self_duality,
    verify_solution_start,
)
from splitting_equivalence.errors import InvalidInputError
from splitting_equivalence.linalg import DenseOperator
from splitting_equivalence.problems import (
    COMPOSITE_A,
    COMPOSITE_L,
    ProblemBundle,
    make_counterexample,
    make_random_l1_quadratic,
    make_random_quadratic,
    make_random_subspace_pair,
)
from splitting_equivalence.prox import (
    BoxIndicator,
    HalfspaceIndicator,
    L1Norm,
    SubspaceIndicator,
    half_squared_norm,
    shifted_quadratic,
)

SEEDS = range(20)


def test_theorem_tags_are_unique():
    assert len(THEOREMS) == len(set(THEOREMS)) == 9


def test_start_maps(quad1):
    a0, u0 = dr_to_admm_start([4.0], quad1.prox)
    np.testing.assert_allclose(a0, [2.0])
    np.testing.assert_allclose(u0, [2.0])
    L = DenseOperator([[1.0], [1.0]])
    np.testing.assert_allclose(admm_to_dr_start(L, [2.0], [0.5, -0.5]), [2.5, 1.5])
    np.testing.assert_allclose(admm_intermediate_to_pr_start(L, [1.0], [0.0, 1.0]), [1.0, 2.0])


@pytest.mark.parametrize("seed", SEEDS)
def test_dr_matches_admm(seed):
    problem = make_random_quadratic(seed, 3, 2, COMPOSITE_L)
    report = verify_dr_admm(problem, problem.start["x0"], 100, tol=1e-10, rel_tol=1e-10)
    assert report.passed, report.max_discrepancy
    assert report.iterations_checked == 100


@pytest.mark.parametrize("seed", SEEDS)
def test_admm_matches_dr(seed):
    problem = make_random_quadratic(seed, 3, 3, COMPOSITE_L)
    report = verify_admm_dr(problem, problem.start["a0"], problem.start["u0"], 100, tol=1e-10, rel_tol=1e-10)
    assert report.passed, report.max_discrepancy
    assert report.theorem == ADMM_DR


@pytest.mark.parametrize("seed", SEEDS)
def test_pr_matches_admm_with_intermediate_update(seed):
    problem = make_random_quadratic(seed, 4, 3, COMPOSITE_L)
    report = verify_pr_admm_intermediate(problem, problem.start["x0"], 100, tol=1e-10, rel_tol=1e-10)
    assert report.passed, report.max_discrepancy


@pytest.mark.parametrize("seed", SEEDS)
def test_admm_with_intermediate_update_matches_pr(seed):
    problem = make_random_quadratic(seed, 4, 3, COMPOSITE_L)
    report = verify_admm_intermediate_pr(
        problem, problem.start["a0"], problem.start["u0"], 100, tol=1e-10, rel_tol=1e-10
    )
    assert report.passed, report.max_discrepancy


def test_dr_matches_admm_with_nonsmooth_f():
    f = L1Norm(2, 0.4)
    g = shifted_quadratic([[2.0, 0.0], [0.0, 1.0]], [1.0, -1.0])
    problem = ProblemBundle(COMPOSITE_L, f, g, DenseOperator.identity(2))
    report = verify_dr_admm(problem, [3.0, -2.0], 40, tol=1e-10, rel_tol=1e-10)
    assert report.passed, report.max_discrepancy


def test_one_step_identities(rng):
    problem = make_random_quadratic(0, 3, 2, COMPOSITE_L)
    for _ in range(20):
        b, u = rng.standard_normal(2), rng.standard_normal(3)
        assert check_dr_admm_one_step(problem, b, u) <= 1e-11
        assert check_pr_admm_intermediate_one_step(problem, b, u) <= 1e-11


def test_admm_correspondences_reject_composite_a():
    problem = make_random_quadratic(0, 2, 2, COMPOSITE_A)
    with pytest.raises(InvalidInputError):
        verify_dr_admm(problem, [0.0, 0.0], 5)


@pytest.mark.parametrize("seed", SEEDS)
def test_cp_matches_dr_when_operator_is_identity(seed):
    problem = make_random_l1_quadratic(seed, 3)
    report = verify_cp_dr_identity_case(problem.f, problem.g, problem.start["u0"], problem.start["v0"], 100)
    assert report.passed, report.max_discrepancy
    assert report.theorem == CP_DR_IDENTITY


def test_cp_identity_case_on_quadratics(quad1):
    report = verify_cp_dr_identity_case(quad1, quad1, [4.0], [1.0], 10)
    assert report.passed
    assert len(report.discrepancies) == 10


@pytest.mark.parametrize("seed", SEEDS)
def test_cp_matches_lifted_dr(seed):
    problem = make_random_quadratic(seed, 3, 2, COMPOSITE_A)
    report = verify_cp_lifted_dr(
        problem.f, problem.g, problem.op, problem.start["u0"], problem.start["v0"], 50, tol=1e-9, rel_tol=1e-9
    )
    assert report.passed, report.max_discrepancy


def test_cp_matches_lifted_dr_with_nonsmooth_g():
    A = DenseOperator([[0.6, 0.0], [0.0, 0.5], [0.3, 0.3]])
    f = shifted_quadratic([[1.0, 0.0], [0.0, 2.0]], [1.0, 1.0])
    report = verify_cp_lifted_dr(f, L1Norm(3, 0.5), A, [1.0, -1.0], [0.2, 0.0, -0.3], 50, tol=1e-9, rel_tol=1e-9)
    assert report.passed, report.max_discrepancy


def test_cp_lifted_rejects_expansive_operator():
    with pytest.raises(InvalidInputError):
        verify_cp_lifted_dr(half_squared_norm(1), half_squared_norm(1), DenseOperator([[2.0]]), [0.0], [0.0], 3)


@pytest.mark.parametrize("seed", SEEDS)
def test_dykstra_closed_forms_on_subspaces(seed):
    problem = make_random_subspace_pair(seed, 4, 2, 2)
    report = verify_dykstra_subspace_closed_form(problem.f, problem.g, problem.start["x0"], 50, rel_tol=1e-10)
    assert report.passed, report.max_discrepancy


def test_dykstra_closed_forms_need_subspaces(line, lower_half_plane):
    with pytest.raises(InvalidInputError):
        verify_dykstra_subspace_closed_form(line, lower_half_plane, [1.0, 1.0], 5)


@pytest.mark.parametrize(
    "alpha,beta,map_limit,dykstra_limit",
    [
        (-2.0, 1.0, [-1.0, -1.0], [-0.5, -0.5]),
        (-2.0, 2.0, [-1.0, -1.0], [0.0, 0.0]),
        (-1.0, 1.0, [-0.5, -0.5], [0.0, 0.0]),
    ],
)
def test_counterexample_limits(alpha, beta, map_limit, dykstra_limit):
    result = dykstra_map_counterexample(alpha, beta, 200)
    np.testing.assert_allclose(result.map_limit, map_limit, atol=1e-12)
    np.testing.assert_allclose(result.dykstra_limit, dykstra_limit, atol=1e-6)
    assert result.distinct
    assert np.linalg.norm(result.map_limit - result.dykstra_limit) >= 0.7
    assert len(result.map_iterates) == len(result.dykstra_iterates) == 201
    np.testing.assert_allclose(result.map_iterates[1], map_limit)


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (-1.0, -1.0), (-1.0, 2.0)])
def test_counterexample_rejects_bad_starts(alpha, beta):
    with pytest.raises(InvalidInputError):
        dykstra_map_counterexample(alpha, beta, 10)


def test_self_duality(rng):
    pairs = [
        (L1Norm(2, 0.5), shifted_quadratic([[2.0, 0.0], [0.0, 1.0]], [1.0, 0.0])),
        (BoxIndicator([-1.0, -1.0], [1.0, 1.0]), L1Norm(2)),
        (SubspaceIndicator([[1.0, 1.0]], 2), HalfspaceIndicator([0.0, 1.0], 0.0)),
    ]
    for f, g in pairs:
        report = verify_self_duality(f, g, 3.0 * rng.standard_normal((100, 2)), tol=1e-12, rel_tol=1e-12)
        assert report.passed, (f.kind, g.kind, report.max_discrepancy)
        assert report.iterations_checked == 100


def test_self_duality_needs_a_common_space():
    with pytest.raises(InvalidInputError):
        verify_self_duality(L1Norm(2), L1Norm(3), [[0.0, 0.0]])


def test_solution_start_is_a_fixed_point():
    problem = make_counterexample(-2.0, 1.0)
    report = verify_solution_start(problem.f, problem.g, [-1.0, -1.0], 10, tol=1e-12)
    assert report.passed, report.max_discrepancy


def test_solution_start_needs_a_common_point(line, lower_half_plane):
    with pytest.raises(InvalidInputError):
        verify_solution_start(line, lower_half_plane, [1.0, 1.0], 5)
    with pytest.raises(InvalidInputError):
        verify_solution_start(line, half_squared_norm(2), [0.0, 0.0], 5)


def test_report_invariants():
    report = EquivalenceReport.from_discrepancies(
        DR_ADMM, [1e-12, 3e-11, 0.0], 1e-10, rel_tol=1e-10, scales=[2.0, 2.0, 2.0]
    )
    assert report.iterations_checked == 3
    assert report.max_discrepancy == pytest.approx(3e-11)
    assert report.tolerance == 1e-10
    assert report.scales == [2.0, 2.0, 2.0]
    assert report.passed and report.first_failure is None
    failing = EquivalenceReport.from_discrepancies(DR_ADMM, [1e-3], 1e-10)
    assert not failing.passed
    assert failing.first_failure == 1
    empty = EquivalenceReport.from_discrepancies(DR_ADMM, [], 1e-10)
    assert empty.passed and empty.max_discrepancy == 0.0


def test_relative_tolerance_uses_each_iterates_own_norm():
    # a large early iterate must not loosen the check on a small later one
    report = EquivalenceReport.from_discrepancies(
        DR_ADMM, [1e-4, 1e-4, 1e-4], 0.0, rel_tol=1e-6, scales=[1e3, 1e2, 1.0]
    )
    assert not report.passed
    assert report.first_failure == 3
    assert report.max_discrepancy == pytest.approx(1e-4)


def test_report_rejects_mismatched_scales():
    with pytest.raises(InvalidInputError):
        EquivalenceReport.from_discrepancies(DR_ADMM, [0.0, 0.0], 1e-10, scales=[1.0])


def test_zero_iterations_check_nothing_and_pass(quad1):
    problem = make_random_quadratic(0, 3, 2, COMPOSITE_L)
    subspaces = make_random_subspace_pair(0, 4, 2, 2)
    counter = make_counterexample(-2.0, 1.0)
    reports = [
        verify_dr_admm(problem, problem.start["x0"], 0),
        verify_admm_dr(problem, problem.start["a0"], problem.start["u0"], 0),
        verify_pr_admm_intermediate(problem, problem.start["x0"], 0),
        verify_admm_intermediate_pr(problem, problem.start["a0"], problem.start["u0"], 0),
        verify_cp_dr_identity_case(quad1, quad1, [4.0], [1.0], 0),
        verify_cp_lifted_dr(quad1, quad1, DenseOperator([[0.5]]), [1.0], [0.0], 0),
        verify_dykstra_subspace_closed_form(subspaces.f, subspaces.g, subspaces.start["x0"], 0),
        verify_solution_start(counter.f, counter.g, [-1.0, -1.0], 0),
        verify_self_duality(quad1, quad1, []),
    ]
    for report in reports:
        assert report.passed
        assert report.iterations_checked == 0
        assert report.discrepancies == []
        assert report.first_failure is None


def test_negative_iteration_count_is_rejected():
    problem = make_random_quadratic(0, 3, 2, COMPOSITE_L)
    with pytest.raises(InvalidInputError):
        verify_dr_admm(problem, problem.start["x0"], -1)
