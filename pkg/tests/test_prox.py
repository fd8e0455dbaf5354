import math

import numpy as np
import pytest
from oracles import grid_prox_1d

from splitting_equivalence.errors import InvalidInputError, NotPositiveSemidefiniteError, UnsupportedValueError
from splitting_equivalence.prox import (
    BoxIndicator,
    HalfSquaredDistance,
    HalfspaceIndicator,
    L1Norm,
    PointIndicator,
    QuadraticFunction,
    SubspaceIndicator,
    ZeroFunction,
    create_prox_function,
    grad_half_sq_distance,
    half_squared_norm,
    reflected_resolvent,
    separable_pair,
    shifted_quadratic,
    supported_kinds,
)


def test_value_examples(lower_half_plane):
    assert ZeroFunction(3).value([5.0, -1.0, 2.0]) == 0.0
    assert lower_half_plane.value([-2.0, 1.0]) == math.inf
    assert lower_half_plane.value([-2.0, -1.0]) == 0.0
    assert L1Norm(2).value([2.0, -3.0]) == pytest.approx(5.0)
    assert half_squared_norm(1).value([4.0]) == pytest.approx(8.0)


def test_prox_examples(line, lower_half_plane, quad1):
    np.testing.assert_allclose(quad1.prox([4.0]), [2.0])
    np.testing.assert_allclose(L1Norm(2).prox([3.0, -0.5]), [2.0, 0.0])
    np.testing.assert_allclose(lower_half_plane.prox([-2.0, 1.0]), [-2.0, 0.0])
    np.testing.assert_allclose(line.prox([-2.0, 0.0]), [-1.0, -1.0])
    np.testing.assert_allclose(BoxIndicator([0.0, 0.0], [1.0, 1.0]).prox([2.0, -1.0]), [1.0, 0.0])
    np.testing.assert_allclose(PointIndicator([1.0, 2.0]).prox([7.0, 7.0]), [1.0, 2.0])
    np.testing.assert_allclose(ZeroFunction(2).prox([3.0, 4.0]), [3.0, 4.0])


def test_prox_result_is_read_only(quad1):
    p = quad1.prox([4.0])
    with pytest.raises(ValueError):
        p[0] = 0.0


def test_conjugate_prox_examples(quad1):
    np.testing.assert_allclose(quad1.conjugate().prox([4.0]), [2.0])
    np.testing.assert_allclose(L1Norm(2).conjugate().prox([3.0, -0.5]), [1.0, -0.5])
    np.testing.assert_allclose(ZeroFunction(2).conjugate().prox([3.0, 4.0]), [0.0, 0.0])


def test_conjugate_value_examples():
    l1_conj = L1Norm(2, 1.0).conjugate()
    assert l1_conj.value([0.5, -1.0]) == 0.0
    assert l1_conj.value([2.0, 0.0]) == math.inf
    assert QuadraticFunction([[2.0]]).conjugate().value([4.0]) == pytest.approx(4.0)
    # a shifted quadratic's conjugate picks up the linear term ⟨u, shift⟩
    shifted = half_squared_norm(1).translate([1.0])
    assert shifted.conjugate().value([2.0]) == pytest.approx(2.0 + 2.0)


def test_conjugate_of_conjugate_is_the_original(quad1):
    assert quad1.conjugate().conjugate() is quad1


def test_conjugate_value_without_closed_form_is_unsupported():
    conj = HalfSquaredDistance(BoxIndicator([-1.0], [1.0])).conjugate()
    with pytest.raises(UnsupportedValueError):
        conj.value([0.5])


def test_moreau_identity(catalog_member, rng):
    conj = catalog_member.conjugate()
    for _ in range(100):
        x = 3.0 * rng.standard_normal(catalog_member.dim)
        total = catalog_member.prox(x) + conj.prox(x)
        assert np.linalg.norm(total - x) <= 1e-12 * max(1.0, np.linalg.norm(x))


def test_firm_nonexpansiveness(catalog_member, rng):
    for _ in range(100):
        x, y = 3.0 * rng.standard_normal((2, catalog_member.dim))
        px, py = catalog_member.prox(x), catalog_member.prox(y)
        assert float(np.sum((px - py) ** 2)) <= float((px - py) @ (x - y)) + 1e-12


def test_prox_residual_is_a_subgradient(catalog_member, rng):
    for _ in range(100):
        x = 3.0 * rng.standard_normal(catalog_member.dim)
        p = catalog_member.prox(x)
        assert catalog_member.contains_subgradient(p, x - p, tol=1e-8)


def test_contains_subgradient_rejects_wrong_vectors(lower_half_plane):
    assert L1Norm(1).contains_subgradient([0.0], [0.5])
    assert not L1Norm(1).contains_subgradient([0.0], [1.5])
    assert not L1Norm(1).contains_subgradient([2.0], [-1.0])
    assert lower_half_plane.contains_subgradient([3.0, 0.0], [0.0, 2.0])
    assert not lower_half_plane.contains_subgradient([3.0, 0.0], [1.0, 0.0])
    assert not lower_half_plane.contains_subgradient([3.0, 1.0], [0.0, 0.0])


ONE_D_CASES = [
    ("zero", ZeroFunction(1), lambda t: np.zeros_like(t)),
    ("quadratic", QuadraticFunction([[3.0]], [-1.5]), lambda t: 1.5 * t**2 - 1.5 * t),
    ("l1", L1Norm(1, 0.8), lambda t: 0.8 * np.abs(t)),
    ("halfspace", HalfspaceIndicator([2.0], 1.0), lambda t: np.where(2.0 * t <= 1.0, 0.0, np.inf)),
    ("box", BoxIndicator([-0.5], [1.25]), lambda t: np.where((t >= -0.5) & (t <= 1.25), 0.0, np.inf)),
    (
        "half-squared-distance",
        HalfSquaredDistance(BoxIndicator([-1.0], [1.0])),
        lambda t: 0.5 * (t - np.clip(t, -1.0, 1.0)) ** 2,
    ),
    ("translated-l1", L1Norm(1, 1.0).translate([0.75]), lambda t: np.abs(t - 0.75)),
    ("reflected-quadratic", QuadraticFunction([[1.0]], [1.0]).reflect(), lambda t: 0.5 * t**2 - t),
]


@pytest.mark.parametrize("fn,value", [case[1:] for case in ONE_D_CASES], ids=[case[0] for case in ONE_D_CASES])
def test_prox_matches_brute_force_in_one_dimension(fn, value):
    for x in (-3.7, -1.0, -0.2, 0.0, 0.4, 1.3, 4.2):
        assert fn.prox([x])[0] == pytest.approx(grid_prox_1d(value, x), abs=1e-6)


def test_prox_minimizes_the_prox_objective(catalog_member, rng):
    def objective(y, x, step):
        return step * catalog_member.value(y) + 0.5 * float(np.sum((x - y) ** 2))

    for step in (1.0, 0.3, 2.5):
        for _ in range(5):
            x = 3.0 * rng.standard_normal(catalog_member.dim)
            p = catalog_member.prox_step(x, step)
            best = objective(p, x, step)
            for z in 3.0 * rng.standard_normal((50, catalog_member.dim)):
                assert best <= objective(z, x, step) + 1e-10


def test_projection_is_idempotent(catalog_member, rng):
    if not catalog_member.is_indicator:
        pytest.skip("not an indicator")
    for _ in range(100):
        p = catalog_member.prox(3.0 * rng.standard_normal(catalog_member.dim))
        assert np.linalg.norm(catalog_member.prox(p) - p) <= 1e-12
        assert catalog_member.contains(p)


def test_unit_step_is_the_prox(catalog_member, rng):
    for x in 3.0 * rng.standard_normal((20, catalog_member.dim)):
        np.testing.assert_allclose(catalog_member.prox_step(x, 1.0), catalog_member.prox(x), atol=1e-12)


def test_scaled_moreau_identity(catalog_member, rng):
    # Prox_{t f}(x) + t Prox_{f*/t}(x/t) = x
    conj = catalog_member.conjugate()
    for step in (0.4, 3.0):
        for x in 3.0 * rng.standard_normal((20, catalog_member.dim)):
            total = catalog_member.prox_step(x, step) + step * conj.prox_step(x / step, 1.0 / step)
            assert np.linalg.norm(total - x) <= 1e-11 * max(1.0, np.linalg.norm(x))


@pytest.mark.parametrize("fn,value", [case[1:] for case in ONE_D_CASES], ids=[case[0] for case in ONE_D_CASES])
@pytest.mark.parametrize("step", [0.25, 4.0])
def test_prox_step_matches_brute_force_in_one_dimension(fn, value, step):
    for x in (-3.7, -0.2, 0.4, 4.2):
        expected = grid_prox_1d(lambda t: step * value(t), x)
        assert fn.prox_step([x], step)[0] == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("step", [0.0, -1.0, math.inf, math.nan])
def test_prox_step_rejects_bad_steps(quad1, step):
    with pytest.raises(InvalidInputError):
        quad1.prox_step([1.0], step)


def test_reflect_examples():
    reflected = QuadraticFunction([[1.0]], [1.0]).reflect()
    np.testing.assert_allclose(reflected.prox([3.0]), [2.0])
    assert reflected.value([2.0]) == pytest.approx(0.0)
    l1 = L1Norm(2)
    assert l1.reflect().reflect() is l1
    np.testing.assert_allclose(l1.reflect().prox([3.0, -0.5]), l1.prox([3.0, -0.5]))


def test_translate_examples():
    shifted = half_squared_norm(1).translate([1.0])
    np.testing.assert_allclose(shifted.prox([3.0]), [2.0])
    assert shifted.value([1.0]) == 0.0


def test_reflected_resolvent(quad1, line):
    np.testing.assert_allclose(reflected_resolvent(quad1, [4.0]), [0.0])
    np.testing.assert_allclose(reflected_resolvent(line, [-2.0, 0.0]), [0.0, -2.0])


def test_grad_half_sq_distance(line, quad1):
    np.testing.assert_allclose(grad_half_sq_distance(line, [-2.0, 0.0]), [-1.0, 1.0])
    np.testing.assert_allclose(grad_half_sq_distance(line, [3.0, 3.0]), [0.0, 0.0])
    with pytest.raises(InvalidInputError):
        grad_half_sq_distance(quad1, [1.0])


def test_half_squared_distance_prox_is_midpoint(line):
    fn = HalfSquaredDistance(line)
    np.testing.assert_allclose(fn.prox([-2.0, 0.0]), [-1.5, -0.5])
    np.testing.assert_allclose(fn.gradient([-2.0, 0.0]), [-1.0, 1.0])
    with pytest.raises(InvalidInputError):
        HalfSquaredDistance(L1Norm(2))


def test_subspace_complement(line):
    complement = line.orthogonal_complement()
    assert line.rank == 1 and complement.rank == 1
    x = np.array([3.0, -1.0])
    np.testing.assert_allclose(line.prox(x) + complement.prox(x), x, atol=1e-14)


def test_separable_pair_splits():
    pair = separable_pair(L1Norm(1), half_squared_norm(2))
    assert pair.dim == 3
    np.testing.assert_allclose(pair.prox([3.0, 4.0, -2.0]), [2.0, 2.0, -1.0])
    head, tail = pair.split([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(head, [1.0])
    np.testing.assert_array_equal(tail, [2.0, 3.0])


def test_shifted_quadratic_has_its_minimum_at_the_center():
    fn = shifted_quadratic([[2.0, 0.0], [0.0, 1.0]], [1.0, -1.0])
    assert fn.value([1.0, -1.0]) == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(fn.gradient([1.0, -1.0]), [0.0, 0.0], atol=1e-15)


def test_strong_convexity_moduli():
    q = QuadraticFunction([[2.0, 0.0], [0.0, 3.0]])
    assert q.strongly_convex_modulus == pytest.approx(2.0)
    assert q.conjugate().strongly_convex_modulus == pytest.approx(1.0 / 3.0)
    assert L1Norm(2).strongly_convex_modulus == 0.0
    assert ZeroFunction(2).conjugate().strongly_convex_modulus == 0.0


def test_construction_errors():
    with pytest.raises(NotPositiveSemidefiniteError):
        QuadraticFunction([[-1.0]])
    with pytest.raises(InvalidInputError):
        QuadraticFunction([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(InvalidInputError):
        QuadraticFunction([[1.0]], [1.0, 2.0])
    with pytest.raises(InvalidInputError):
        HalfspaceIndicator([0.0, 0.0])
    with pytest.raises(InvalidInputError):
        BoxIndicator([1.0], [0.0])
    with pytest.raises(InvalidInputError):
        L1Norm(2, -1.0)
    with pytest.raises(InvalidInputError):
        ZeroFunction(0)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(InvalidInputError):
        L1Norm(2).prox([1.0, 2.0, 3.0])
    with pytest.raises(InvalidInputError):
        SubspaceIndicator([[1.0, 0.0]], 2).value([1.0])


def test_create_prox_function_round_trips(catalog_member, rng):
    rebuilt = create_prox_function(catalog_member.to_config())
    assert rebuilt.kind == catalog_member.kind
    for _ in range(10):
        x = rng.standard_normal(catalog_member.dim)
        np.testing.assert_allclose(rebuilt.prox(x), catalog_member.prox(x), atol=1e-14)


def test_create_prox_function_examples():
    fn = create_prox_function({"kind": "conjugate-of", "inner": {"kind": "l1", "dim": 2, "weight": 0.5}})
    np.testing.assert_allclose(fn.prox([3.0, -0.25]), [0.5, -0.25])
    fn = create_prox_function({"kind": "indicator-halfspace", "normal": [0.0, 1.0]})
    np.testing.assert_allclose(fn.prox([-2.0, 1.0]), [-2.0, 0.0])


@pytest.mark.parametrize(
    "params",
    [
        {"kind": "huber", "dim": 1},
        {},
        {"kind": "l1"},
        {"kind": "quadratic", "Q": "not a matrix"},
        {"kind": "conjugate-of", "inner": {"kind": "nope"}},
    ],
)
def test_create_prox_function_errors(params):
    with pytest.raises(InvalidInputError):
        create_prox_function(params)


def test_supported_kinds_are_all_buildable():
    assert "l1" in supported_kinds()
    assert len(supported_kinds()) == len(set(supported_kinds()))
