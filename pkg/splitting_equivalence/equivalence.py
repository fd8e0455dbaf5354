"""Starting-point maps and iterate-by-iterate verifiers for the method correspondences.

Every verifier runs two methods side by side from matched starting points
and records, per iteration, how far the iterates are from the claimed
identity. The identities are exact, so discrepancies should sit at
round-off level.
"""

import logging
from typing import Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .algorithms import (
    ADMMIntermediateState,
    ADMMState,
    CPState,
    DykstraState,
    ProxOracle,
    admm_intermediate_step,
    admm_step,
    cp_step,
    dr_operator,
    dr_step,
    dr_step_via_conjugate,
    dykstra_step,
    map_step,
    pr_operator,
    pr_step,
    warn_if_not_uniformly_convex,
)
from .errors import InvalidInputError
from .lifting import lift
from .linalg import DenseOperator, RealVector, VectorLike, as_vector, freeze
from .problems import COMPOSITE_A, ProblemBundle, make_counterexample
from .prox import ProxFunction, SubspaceIndicator
from .resolvents import GeneralizedResolvent

logger = logging.getLogger(__name__)

DR_ADMM = "dr-admm"
PR_ADMM_INTERMEDIATE = "pr-admm-int"
CP_DR_IDENTITY = "cp-dr-id"
CP_DR_LIFTED = "cp-dr-lift"
DYKSTRA_MAP_SUBSPACE = "dykstra-map-subspace"
ADMM_DR = "admm-dr"
ADMM_INTERMEDIATE_PR = "admm-int-pr"
SELF_DUALITY = "self-duality"
SOLUTION_START = "solution-start"
THEOREMS = (
    DR_ADMM,
    PR_ADMM_INTERMEDIATE,
    CP_DR_IDENTITY,
    CP_DR_LIFTED,
    DYKSTRA_MAP_SUBSPACE,
    ADMM_DR,
    ADMM_INTERMEDIATE_PR,
    SELF_DUALITY,
    SOLUTION_START,
)

DEFAULT_TOL = 1e-10
DISTINCT_GAP = 1e-6


class EquivalenceReport(BaseModel):
    """Outcome of one verification run.

    Iterate k passes when its discrepancy is at most
    ``tolerance + rel_tol * scales[k]``, where ``scales[k]`` is the largest
    norm among the iterates compared at step k.
    """

    theorem: str = Field(..., description="Correspondence that was checked")
    iterations_checked: int = Field(..., ge=0)
    discrepancies: List[float] = Field(default_factory=list, description="Per-iterate discrepancy")
    scales: List[float] = Field(default_factory=list, description="Per-iterate norm used by the relative part")
    max_discrepancy: float = Field(default=0.0, ge=0.0)
    tolerance: float = Field(..., ge=0.0, description="Absolute part of the per-iterate tolerance")
    rel_tol: float = Field(default=0.0, ge=0.0, description="Relative part of the per-iterate tolerance")
    first_failure: Optional[int] = Field(default=None, description="1-based iteration of the first failure")
    passed: bool

    @classmethod
    def from_discrepancies(
        cls,
        theorem: str,
        discrepancies: List[float],
        tol: float,
        rel_tol: float = 0.0,
        scales: Optional[List[float]] = None,
    ) -> "EquivalenceReport":
        """Build a report, checking each discrepancy against its own iterate's scale.

        Raises:
            InvalidInputError: If scales is given with a different length
        """
        values = [float(d) for d in discrepancies]
        norms = [0.0] * len(values) if scales is None else [float(s) for s in scales]
        if len(norms) != len(values):
            raise InvalidInputError(f"{len(norms)} scales for {len(values)} discrepancies")
        first_failure = next(
            (k for k, (d, s) in enumerate(zip(values, norms), start=1) if d > tol + rel_tol * s), None
        )
        worst = max(values, default=0.0)
        report = cls(
            theorem=theorem,
            iterations_checked=len(values),
            discrepancies=values,
            scales=norms,
            max_discrepancy=worst,
            tolerance=tol,
            rel_tol=rel_tol,
            first_failure=first_failure,
            passed=first_failure is None,
        )
        logger.info(
            "%s: %s over %d iterations (max discrepancy %.3e, tolerance %.1e + %.1e·‖iterate‖)",
            theorem,
            "pass" if report.passed else "FAIL",
            report.iterations_checked,
            worst,
            tol,
            rel_tol,
        )
        return report


class CounterexampleResult(NamedTuple):
    map_limit: RealVector
    dykstra_limit: RealVector
    distinct: bool
    map_iterates: List[RealVector]
    dykstra_iterates: List[RealVector]


class _Tally:
    """Collects per-iterate discrepancies and the norms of the compared iterates."""

    def __init__(self):
        self.values: List[float] = []
        self.scales: List[float] = []

    def add(self, discrepancy: float, *iterates: np.ndarray) -> None:
        """Record one discrepancy with the largest norm among the iterates it compares."""
        self.values.append(float(discrepancy))
        self.scales.append(max((float(np.linalg.norm(it)) for it in iterates), default=0.0))

    def report(self, theorem: str, tol: float, rel_tol: float) -> EquivalenceReport:
        return EquivalenceReport.from_discrepancies(theorem, self.values, tol, rel_tol, self.scales)


def _dist(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def _check_count(n: int) -> None:
    if n < 0:
        raise InvalidInputError(f"iteration count must be >= 0, got {n}")


def _composite_parts(problem: ProblemBundle) -> Tuple[ProxFunction, ProxFunction, DenseOperator, GeneralizedResolvent]:
    """(f, g, L, resolvent) for the ADMM correspondences; composite-A problems are rejected."""
    if problem.form == COMPOSITE_A:
        raise InvalidInputError("ADMM correspondences need a composite-L or feasibility problem")
    return problem.f, problem.g, problem.op, GeneralizedResolvent(problem.op, problem.g)


def dr_to_admm_start(x0: VectorLike, proxF: ProxOracle) -> Tuple[RealVector, RealVector]:
    """(a0, u0) = (Prox_f x0, x0 - Prox_f x0)."""
    x = as_vector(x0, "x0")
    a0 = proxF(x)
    return a0, freeze(x - a0)


def admm_to_dr_start(L: DenseOperator, b1: VectorLike, u0: VectorLike) -> RealVector:
    """x0 = L b1 + u0, where b1 is the first ADMM b-iterate."""
    return freeze(L.apply(b1) + as_vector(u0, "u0"))


def admm_intermediate_to_pr_start(L: DenseOperator, b1: VectorLike, w1: VectorLike) -> RealVector:
    """x0 = L b1 + w1."""
    return freeze(L.apply(b1) + as_vector(w1, "w1"))


def verify_dr_admm(
    problem: ProblemBundle, x0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """Dual DR from x0 against ADMM from (Prox_f x0, x0 - Prox_f x0).

    Checks x_k = L b_k + u_{k-1} and y_k = a_k for k = 1..n.
    """
    _check_count(n)
    f, _, L, res = _composite_parts(problem)
    x = as_vector(x0, "x0")
    a0, u0 = dr_to_admm_start(x, f.prox)
    state = ADMMState(a=a0, u=u0)
    tally = _Tally()
    for _ in range(n):
        x, _ = dr_step(f.prox, res.prox_dual_composition, x)
        y = f.prox(x)
        u_prev = state.u
        state = admm_step(res, f.prox, L, state)
        tally.add(_dist(x, L.apply(state.b) + u_prev) + _dist(y, state.a), x, y)
    return tally.report(DR_ADMM, tol, rel_tol)


def verify_admm_dr(
    problem: ProblemBundle, a0: VectorLike, u0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """ADMM from (a0, u0) against dual DR from x0 = L b1 + u0.

    Checks x_k = L b_{k+1} + u_k and y_k = a_{k+1} for k = 1..n.
    """
    _check_count(n)
    f, _, L, res = _composite_parts(problem)
    state = admm_step(res, f.prox, L, ADMMState(a=as_vector(a0, "a0"), u=as_vector(u0, "u0")))
    x = admm_to_dr_start(L, state.b, u0)
    tally = _Tally()
    for _ in range(n):
        x, _ = dr_step(f.prox, res.prox_dual_composition, x)
        y = f.prox(x)
        u_prev = state.u
        state = admm_step(res, f.prox, L, state)
        tally.add(_dist(x, L.apply(state.b) + u_prev) + _dist(y, state.a), x, y)
    return tally.report(ADMM_DR, tol, rel_tol)


def verify_pr_admm_intermediate(
    problem: ProblemBundle, x0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """Dual PR from x0 against ADMM with intermediate update from (Prox_f x0, x0 - Prox_f x0).

    Checks x_k = L b_k + w_k and y_k = a_k for k = 1..n.
    """
    _check_count(n)
    f, g, L, res = _composite_parts(problem)
    warn_if_not_uniformly_convex(g, "Peaceman-Rachford / ADMM with intermediate update")
    x = as_vector(x0, "x0")
    a0, u0 = dr_to_admm_start(x, f.prox)
    state = ADMMIntermediateState(a=a0, u=u0)
    tally = _Tally()
    for _ in range(n):
        x, _ = pr_step(f.prox, res.prox_dual_composition, x)
        y = f.prox(x)
        state = admm_intermediate_step(res, f.prox, L, state)
        tally.add(_dist(x, L.apply(state.b) + state.w) + _dist(y, state.a), x, y)
    return tally.report(PR_ADMM_INTERMEDIATE, tol, rel_tol)


def verify_admm_intermediate_pr(
    problem: ProblemBundle, a0: VectorLike, u0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """ADMM with intermediate update from (a0, u0) against dual PR from x0 = L b1 + w1.

    Checks x_k = L b_{k+1} + w_{k+1} and y_k = a_{k+1} for k = 1..n.
    """
    _check_count(n)
    f, g, L, res = _composite_parts(problem)
    warn_if_not_uniformly_convex(g, "Peaceman-Rachford / ADMM with intermediate update")
    start = ADMMIntermediateState(a=as_vector(a0, "a0"), u=as_vector(u0, "u0"))
    state = admm_intermediate_step(res, f.prox, L, start)
    x = admm_intermediate_to_pr_start(L, state.b, state.w)
    tally = _Tally()
    for _ in range(n):
        x, _ = pr_step(f.prox, res.prox_dual_composition, x)
        y = f.prox(x)
        state = admm_intermediate_step(res, f.prox, L, state)
        tally.add(_dist(x, L.apply(state.b) + state.w) + _dist(y, state.a), x, y)
    return tally.report(ADMM_INTERMEDIATE_PR, tol, rel_tol)


def check_dr_admm_one_step(problem: ProblemBundle, b: VectorLike, u_prev: VectorLike) -> float:
    """Discrepancy of T_DR(L b + u₋) = L b₊ + u and Prox_f T_DR(L b + u₋) = a₊.

    (a, u) are the ADMM iterates produced by b and u₋; (b₊, a₊) come from one more ADMM step.
    """
    f, _, L, res = _composite_parts(problem)
    x = freeze(L.apply(b) + as_vector(u_prev, "u_prev"))
    a = f.prox(x)
    u = freeze(x - a)
    nxt = admm_step(res, f.prox, L, ADMMState(a=a, u=u))
    tx, _ = dr_step(f.prox, res.prox_dual_composition, x)
    return _dist(tx, L.apply(nxt.b) + u) + _dist(f.prox(tx), nxt.a)


def check_pr_admm_intermediate_one_step(problem: ProblemBundle, b: VectorLike, w: VectorLike) -> float:
    """Discrepancy of T_PR(L b + w) = L b₊ + w₊ and Prox_f T_PR(L b + w) = a₊."""
    f, _, L, res = _composite_parts(problem)
    x = freeze(L.apply(b) + as_vector(w, "w"))
    a = f.prox(x)
    u = freeze(x - a)
    nxt = admm_intermediate_step(res, f.prox, L, ADMMIntermediateState(a=a, u=u))
    tx, _ = pr_step(f.prox, res.prox_dual_composition, x)
    return _dist(tx, L.apply(nxt.b) + nxt.w) + _dist(f.prox(tx), nxt.a)


def verify_cp_dr_identity_case(
    f: ProxFunction,
    g: ProxFunction,
    u0: VectorLike,
    v0: VectorLike,
    n: int,
    tol: float = DEFAULT_TOL,
    rel_tol: float = 0.0,
) -> EquivalenceReport:
    """CP with A = Id from (u0, v0) against DR from x0 = u0 - v0.

    Checks x_k = u_k - v_k and y_k = u_{k+1} for k = 1..n; the shadow is
    matched with the next primal iterate since y_0 = Prox_f x0 = u_1.
    """
    _check_count(n)
    if f.dim != g.dim:
        raise InvalidInputError(f"identity case needs f and g on one space, got {f.dim} and {g.dim}")
    identity = DenseOperator.identity(f.dim)
    g_conj = g.conjugate()
    state = CPState(u=f._check(u0, "u0"), v=g._check(v0, "v0"))
    x = freeze(state.u - state.v)
    state = cp_step(f.prox, g_conj.prox, identity, state)
    tally = _Tally()
    for _ in range(n):
        x, _ = dr_step(f.prox, g.prox, x)
        y = f.prox(x)
        u_k, v_k = state.u, state.v
        state = cp_step(f.prox, g_conj.prox, identity, state, check_norm=False)
        tally.add(_dist(x, u_k - v_k) + _dist(y, state.u), x, y)
    return tally.report(CP_DR_IDENTITY, tol, rel_tol)


def verify_cp_lifted_dr(
    f: ProxFunction,
    g: ProxFunction,
    A: DenseOperator,
    u0: VectorLike,
    v0: VectorLike,
    n: int,
    tol: float = DEFAULT_TOL,
    rel_tol: float = 0.0,
) -> EquivalenceReport:
    """CP from (u0, v0) against DR on the lifted pair (f̃, g ∘ B) from (u0, 0) - B* v0.

    Checks x̄_k = (u_k, 0) - B* v_k and ȳ_k = (u_{k+1}, 0) for k = 1..n.
    """
    _check_count(n)
    lp = lift(A, f)
    if g.dim != A.rows:
        raise InvalidInputError(f"g has dimension {g.dim}, A has {A.rows} rows")
    g_conj = g.conjugate()
    zero_z = np.zeros(lp.dim_z)

    def prox_gB_conj(w: VectorLike) -> RealVector:
        return lp.prox_gB_conjugate(g_conj.prox, w)

    state = CPState(u=f._check(u0, "u0"), v=g._check(v0, "v0"))
    x = freeze(lp.join(state.u, zero_z) - lp.B.adjoint_apply(state.v))
    state = cp_step(f.prox, g_conj.prox, A, state)
    tally = _Tally()
    for _ in range(n):
        x, _ = dr_step_via_conjugate(lp.prox_f_tilde_vector, prox_gB_conj, x)
        y = lp.prox_f_tilde_vector(x)
        u_k, v_k = state.u, state.v
        state = cp_step(f.prox, g_conj.prox, A, state, check_norm=False)
        expected_x = lp.join(u_k, zero_z) - lp.B.adjoint_apply(v_k)
        tally.add(_dist(x, expected_x) + _dist(y, lp.join(state.u, zero_z)), x, y)
    return tally.report(CP_DR_LIFTED, tol, rel_tol)


def verify_dykstra_subspace_closed_form(
    U: SubspaceIndicator, V: SubspaceIndicator, x0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """Dykstra on two linear subspaces against its closed forms.

    For k = 0..n-1 checks y_k = P_V x_k, p_{k+1} = P_{V⊥} Σ_{j<=k} x_j,
    x_{k+1} = P_U y_k, q_{k+1} = P_{U⊥} Σ_{j<=k} y_j and x_{k+1} = P_U P_V x_k.
    """
    _check_count(n)
    for name, fn in (("U", U), ("V", V)):
        if not isinstance(fn, SubspaceIndicator):
            raise InvalidInputError(f"{name} must be a linear subspace, got {getattr(fn, 'kind', type(fn).__name__)}")
    if U.dim != V.dim:
        raise InvalidInputError(f"subspaces live in different dimensions: {U.dim} and {V.dim}")
    U_perp, V_perp = U.orthogonal_complement(), V.orthogonal_complement()
    zero = freeze(np.zeros(U.dim))
    state = DykstraState(x=U._check(x0, "x0"), p=zero, q=zero)
    sum_x = np.zeros(U.dim)
    sum_y = np.zeros(U.dim)
    tally = _Tally()
    for _ in range(n):
        x_k = state.x
        state = dykstra_step(U, V, state)
        sum_x += x_k
        sum_y += state.y
        discrepancy = (
            _dist(state.y, V.prox(x_k))
            + _dist(state.p, V_perp.prox(sum_x))
            + _dist(state.x, U.prox(state.y))
            + _dist(state.q, U_perp.prox(sum_y))
            + _dist(state.x, map_step(U, V, x_k))
        )
        tally.add(discrepancy, x_k, state.y, state.p, state.q)
    return tally.report(DYKSTRA_MAP_SUBSPACE, tol, rel_tol)


def dykstra_map_counterexample(alpha: float, beta: float, n: int) -> CounterexampleResult:
    """MAP and Dykstra on the line R·(1,1) and the half-plane R × R₋ from (alpha, beta).

    MAP stops at (alpha/2, alpha/2) after one step while Dykstra tends to the
    nearest point ((alpha+beta)/2, (alpha+beta)/2) of the intersection.

    Raises:
        InvalidInputError: Unless alpha < 0 < beta <= -alpha
    """
    _check_count(n)
    bundle = make_counterexample(alpha, beta)
    U, V = bundle.f, bundle.g
    x0 = bundle.start["x0"]
    map_iterates = [x0]
    dykstra = DykstraState(x=x0, p=freeze(np.zeros(2)), q=freeze(np.zeros(2)))
    dykstra_iterates = [x0]
    for _ in range(n):
        map_iterates.append(map_step(U, V, map_iterates[-1]))
        dykstra = dykstra_step(U, V, dykstra)
        dykstra_iterates.append(dykstra.x)
    map_limit, dykstra_limit = map_iterates[-1], dykstra_iterates[-1]
    distinct = _dist(map_limit, dykstra_limit) > DISTINCT_GAP
    logger.info("counterexample: MAP %s, Dykstra %s, distinct=%s", map_limit, dykstra_limit, distinct)
    return CounterexampleResult(map_limit, dykstra_limit, distinct, map_iterates, dykstra_iterates)


def verify_self_duality(
    f: ProxFunction, g: ProxFunction, points: Iterable[VectorLike], tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """T_DR(f, g) = T_DR(f*, g*∨) and T_PR(f, g) = T_PR(f*, g*∨), one discrepancy per point."""
    if f.dim != g.dim:
        raise InvalidInputError(f"self-duality needs f and g on one space, got {f.dim} and {g.dim}")
    f_dual = f.conjugate()
    g_dual = g.conjugate().reflect()
    dr_primal, dr_dual = dr_operator(f.prox, g.prox), dr_operator(f_dual.prox, g_dual.prox)
    pr_primal, pr_dual = pr_operator(f.prox, g.prox), pr_operator(f_dual.prox, g_dual.prox)
    tally = _Tally()
    for point in points:
        x = f._check(point)
        dr_x = dr_primal(x)
        pr_x = pr_primal(x)
        tally.add(max(_dist(dr_x, dr_dual(x)), _dist(pr_x, pr_dual(x))), x, dr_x, pr_x)
    return tally.report(SELF_DUALITY, tol, rel_tol)


def verify_solution_start(
    PU: ProxFunction, PV: ProxFunction, x0: VectorLike, n: int, tol: float = DEFAULT_TOL, rel_tol: float = 0.0
) -> EquivalenceReport:
    """Started at a point of U ∩ V, DR, ADMM and Dykstra never move.

    The discrepancy at step k is the largest distance of any method's
    primal iterate (DR x and shadow, ADMM a and b, Dykstra x) from x0.

    Raises:
        InvalidInputError: If the sets are not indicators or x0 is not in U ∩ V
    """
    _check_count(n)
    for name, fn in (("PU", PU), ("PV", PV)):
        if not fn.is_indicator:
            raise InvalidInputError(f"{name} must be the projector of a set, got {fn.kind}")
    x0v = PU._check(x0, "x0")
    if not (PU.contains(x0v) and PV.contains(x0v)):
        raise InvalidInputError("solution-start check needs x0 in U ∩ V")

    L = DenseOperator.identity(PU.dim)
    res = GeneralizedResolvent(L, PV)
    x = x0v
    a0, u0 = dr_to_admm_start(x0v, PU.prox)
    admm = ADMMState(a=a0, u=u0)
    zero = freeze(np.zeros(PU.dim))
    dykstra = DykstraState(x=x0v, p=zero, q=zero)
    tally = _Tally()
    for _ in range(n):
        x, _ = dr_step(PU.prox, PV.prox, x)
        admm = admm_step(res, PU.prox, L, admm)
        dykstra = dykstra_step(PU, PV, dykstra)
        moved = max(
            _dist(x, x0v),
            _dist(PU.prox(x), x0v),
            _dist(admm.a, x0v),
            _dist(admm.b, x0v),
            _dist(dykstra.x, x0v),
        )
        tally.add(moved, x0v)
    return tally.report(SOLUTION_START, tol, rel_tol)
