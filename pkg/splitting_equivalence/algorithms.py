"""One-step transition maps and trace-producing runners for the splitting methods.

All methods use unit prox/step parameters. Step functions are pure: they
take prox oracles (callables x ↦ Prox x) and a state, and return the next
state. ``run`` drives a step function over a ``ProblemBundle`` and records
a ``Trace``.
"""

import logging
from dataclasses import dataclass, field, fields
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidInputError, UnsupportedValueError
from .lifting import lift
from .linalg import DenseOperator, RealVector, VectorLike, as_vector, freeze, operator_norm
from .problems import COMPOSITE_A, COMPOSITE_L, FEASIBILITY, ProblemBundle
from .prox import ProxFunction
from .resolvents import GeneralizedResolvent

logger = logging.getLogger(__name__)

ProxOracle = Callable[[VectorLike], RealVector]

DR = "dr"
PR = "pr"
CP = "cp"
ADMM = "admm"
ADMM_INTERMEDIATE = "admm-int"
DYKSTRA = "dykstra"
MAP = "map"
FB = "fb"
METHODS = (DR, PR, CP, ADMM, ADMM_INTERMEDIATE, DYKSTRA, MAP, FB)

START_FIELDS = {
    DR: ("x0",),
    PR: ("x0",),
    MAP: ("x0",),
    DYKSTRA: ("x0",),
    FB: ("x0",),
    ADMM: ("a0", "u0"),
    ADMM_INTERMEDIATE: ("a0", "u0"),
    CP: ("u0", "v0"),
}

NORM_SLACK = 1e-10


class _State:
    """Column view shared by all state snapshots."""

    def columns(self) -> Dict[str, Optional[RealVector]]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class DRState(_State):
    """Douglas-Rachford / Peaceman-Rachford iterate with its shadow y = Prox_f x."""

    x: RealVector
    y: RealVector


@dataclass(frozen=True)
class ADMMState(_State):
    a: RealVector
    u: RealVector
    b: Optional[RealVector] = None


@dataclass(frozen=True)
class ADMMIntermediateState(_State):
    a: RealVector
    u: RealVector
    w: Optional[RealVector] = None
    b: Optional[RealVector] = None


@dataclass(frozen=True)
class CPState(_State):
    u: RealVector
    v: RealVector


@dataclass(frozen=True)
class DykstraState(_State):
    x: RealVector
    p: RealVector
    q: RealVector
    y: Optional[RealVector] = None


@dataclass(frozen=True)
class PointState(_State):
    """Single-vector iterate of MAP and forward-backward."""

    x: RealVector


@dataclass
class Trace:
    """Every state of one run, initial state included."""

    method: str
    states: List[_State] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    requested_iterations: int = 0
    stopped_early: bool = False

    @property
    def iterations_performed(self) -> int:
        return len(self.states) - 1

    @property
    def final(self) -> _State:
        return self.states[-1]

    def sequence(self, name: str) -> List[Optional[RealVector]]:
        """One named component across all snapshots."""
        return [state.columns()[name] for state in self.states]


def _check_norm(A: DenseOperator) -> None:
    """Raise InvalidInputError unless ‖A‖ <= 1 up to NORM_SLACK."""
    norm = operator_norm(A)
    if norm > 1.0 + NORM_SLACK:
        raise InvalidInputError(f"Chambolle-Pock needs ‖A‖ <= 1, got {norm:.6g}; rescale A first")


def warn_if_not_uniformly_convex(g: ProxFunction, method: str) -> None:
    """Log that a method needing uniform convexity got a g with modulus 0.

    Callers warn once per run or verification, not once per step.
    """
    if g.strongly_convex_modulus > 0.0:
        return
    logger.warning(
        "%s expects g to be uniformly convex but its strong convexity modulus is 0; "
        "iterates are well defined but convergence is not guaranteed",
        method,
    )


def _require_projection(fn: ProxFunction, name: str) -> None:
    """Projection methods only accept indicator functions."""
    if not isinstance(fn, ProxFunction) or not fn.is_indicator:
        raise InvalidInputError(f"{name} must be the projector of a set (an indicator function)")


def dr_step(proxF: ProxOracle, proxG: ProxOracle, x: VectorLike) -> Tuple[RealVector, RealVector]:
    """x ↦ x - Prox_f x + Prox_g(2 Prox_f x - x); returns (x_next, y = Prox_f x)."""
    vec = as_vector(x, "x")
    y = proxF(vec)
    return freeze(vec - y + proxG(2.0 * y - vec)), y


def dr_step_via_conjugate(proxF: ProxOracle, proxGconj: ProxOracle, x: VectorLike) -> Tuple[RealVector, RealVector]:
    """The same DR step written with Prox_{g*}: x_next = y - Prox_{g*}(2y - x)."""
    vec = as_vector(x, "x")
    y = proxF(vec)
    return freeze(y - proxGconj(2.0 * y - vec)), y


def pr_step(proxF: ProxOracle, proxG: ProxOracle, x: VectorLike) -> Tuple[RealVector, RealVector]:
    """x ↦ R_g R_f x; returns (x_next, y = Prox_f x)."""
    vec = as_vector(x, "x")
    y = proxF(vec)
    reflected = 2.0 * y - vec
    return freeze(2.0 * proxG(reflected) - reflected), y


def dr_operator(proxF: ProxOracle, proxG: ProxOracle) -> Callable[[VectorLike], RealVector]:
    """T_DR as a callable."""
    return lambda x: dr_step(proxF, proxG, x)[0]


def pr_operator(proxF: ProxOracle, proxG: ProxOracle) -> Callable[[VectorLike], RealVector]:
    """T_PR as a callable."""
    return lambda x: pr_step(proxF, proxG, x)[0]


def admm_step(res: GeneralizedResolvent, proxF: ProxOracle, L: DenseOperator, state: ADMMState) -> ADMMState:
    """b⁺ = (L*L + ∂g)^{-1} L*(a - u); a⁺ = Prox_f(L b⁺ + u); u⁺ = u + L b⁺ - a⁺."""
    b = res.solve(L.adjoint_apply(state.a - state.u))
    Lb = L.apply(b)
    a = proxF(Lb + state.u)
    u = freeze(state.u + Lb - a)
    return ADMMState(a=a, u=u, b=b)


def admm_intermediate_step(
    res: GeneralizedResolvent, proxF: ProxOracle, L: DenseOperator, state: ADMMIntermediateState
) -> ADMMIntermediateState:
    """ADMM with the multiplier also updated between the b- and a-steps."""
    b = res.solve(L.adjoint_apply(state.a - state.u))
    Lb = L.apply(b)
    w = freeze(state.u + Lb - state.a)
    a = proxF(Lb + w)
    u = freeze(w + Lb - a)
    return ADMMIntermediateState(a=a, u=u, w=w, b=b)


def cp_step(
    proxF: ProxOracle, proxGconj: ProxOracle, A: DenseOperator, state: CPState, check_norm: bool = True
) -> CPState:
    """u⁺ = Prox_f(u - A* v); v⁺ = Prox_{g*}(v + A(2u⁺ - u)).

    Pass check_norm=False when ‖A‖ <= 1 was already established for this run.

    Raises:
        InvalidInputError: If check_norm is set and ‖A‖ > 1
    """
    if check_norm:
        _check_norm(A)
    u = proxF(state.u - A.adjoint_apply(state.v))
    v = proxGconj(state.v + A.apply(2.0 * u - state.u))
    return CPState(u=freeze(u), v=freeze(v))


def dykstra_step(PU: ProxFunction, PV: ProxFunction, state: DykstraState) -> DykstraState:
    """y⁺ = P_V(x + p); p⁺ = x + p - y⁺; x⁺ = P_U(y⁺ + q); q⁺ = y⁺ + q - x⁺."""
    _require_projection(PU, "PU")
    _require_projection(PV, "PV")
    y = PV.prox(state.x + state.p)
    p = freeze(state.x + state.p - y)
    x = PU.prox(y + state.q)
    q = freeze(y + state.q - x)
    return DykstraState(x=x, p=p, q=q, y=y)


def map_step(PU: ProxFunction, PV: ProxFunction, x: VectorLike) -> RealVector:
    """One sweep of alternating projections: P_U P_V x."""
    _require_projection(PU, "PU")
    _require_projection(PV, "PV")
    return PU.prox(PV.prox(x))


def fb_feasibility_step(PU: ProxFunction, PV: ProxFunction, x: VectorLike) -> RealVector:
    """Forward-backward on (½d²_U, ι_V) with unit step, i.e. P_V(P_U x).

    The forward step x - ∇½d²_U(x) = x - (x - P_U x) is evaluated as P_U x.
    """
    _require_projection(PU, "PU")
    _require_projection(PV, "PV")
    return PV.prox(PU.prox(x))


def dr_shadow_optimality(f: ProxFunction, g: ProxFunction, y: VectorLike) -> float:
    """‖∇f(y) + ∇g(y)‖ for smooth pairs; zero exactly at minimizers of f + g.

    Raises:
        UnsupportedValueError: If either function has no gradient
    """
    if not (hasattr(f, "gradient") and hasattr(g, "gradient")):
        raise UnsupportedValueError(f"optimality residual needs gradients, got {f.kind} and {g.kind}")
    return float(np.linalg.norm(f.gradient(y) + g.gradient(y)))


def _vector_diff(a: RealVector, b: RealVector) -> float:
    return float(np.linalg.norm(a - b))


def _start_vector(start: Dict[str, VectorLike], key: str, dim: int, method: str) -> RealVector:
    """Fetch one named start vector and check its dimension."""
    if key not in start:
        raise InvalidInputError(f"method '{method}' needs start field '{key}'")
    vec = as_vector(start[key], key)
    if vec.shape[0] != dim:
        raise InvalidInputError(f"start field '{key}' has dimension {vec.shape[0]}, expected {dim}")
    return vec


class _Runner:
    """Binds one method to one problem: initial state, transition and residual."""

    def __init__(self, method: str, problem: ProblemBundle):
        self.method = method
        self.problem = problem
        f, g, op = problem.f, problem.g, problem.op

        if method in (DR, PR):
            if problem.form == COMPOSITE_A:
                lifted = lift(op, f)
                g_conj = g.conjugate()
                self.proxF = lifted.prox_f_tilde_vector
                gB_conj = lambda w: lifted.prox_gB_conjugate(g_conj.prox, w)  # noqa: E731
                self.proxG = lambda v: v - gB_conj(v)  # noqa: E731
                self.dim = lifted.dim
            else:
                self.proxF = f.prox
                self.proxG = self._second_prox(problem)
                self.dim = problem.dim_x
            if method == PR:
                warn_if_not_uniformly_convex(g, "Peaceman-Rachford")
        elif method in (ADMM, ADMM_INTERMEDIATE):
            if problem.form == COMPOSITE_A:
                raise InvalidInputError(f"method '{method}' runs on composite-L or feasibility problems")
            self.res = GeneralizedResolvent(op, g)
            if method == ADMM_INTERMEDIATE:
                warn_if_not_uniformly_convex(g, "ADMM with intermediate multiplier update")
        elif method == CP:
            if problem.form == COMPOSITE_L:
                raise InvalidInputError("method 'cp' runs on composite-A or feasibility problems")
            _check_norm(op)
            self.g_conj = g.conjugate()
        elif method in (DYKSTRA, MAP, FB):
            if problem.form != FEASIBILITY:
                raise InvalidInputError(f"method '{method}' runs on feasibility problems")
        else:
            raise InvalidInputError(f"Unsupported method: {method}. Supported methods: {', '.join(METHODS)}")

    @staticmethod
    def _second_prox(problem: ProblemBundle) -> ProxOracle:
        if problem.form == COMPOSITE_L and not np.array_equal(problem.op.matrix, np.eye(problem.dim_x)):
            return GeneralizedResolvent(problem.op, problem.g).prox_dual_composition
        return problem.g.prox

    def initial(self, start: Dict[str, VectorLike]) -> _State:
        """State 0 built from the named start vectors."""
        p = self.problem
        if self.method in (DR, PR):
            x0 = _start_vector(start, "x0", self.dim, self.method)
            return DRState(x=x0, y=self.proxF(x0))
        if self.method in (ADMM, ADMM_INTERMEDIATE):
            a0 = _start_vector(start, "a0", p.op.rows, self.method)
            u0 = _start_vector(start, "u0", p.op.rows, self.method)
            return ADMMState(a=a0, u=u0) if self.method == ADMM else ADMMIntermediateState(a=a0, u=u0)
        if self.method == CP:
            return CPState(
                u=_start_vector(start, "u0", p.op.cols, self.method),
                v=_start_vector(start, "v0", p.op.rows, self.method),
            )
        x0 = _start_vector(start, "x0", p.dim_x, self.method)
        if self.method == DYKSTRA:
            zero = freeze(np.zeros(p.dim_x))
            return DykstraState(x=x0, p=zero, q=zero)
        return PointState(x=x0)

    def step(self, state: _State) -> _State:
        """One iteration of the bound method."""
        p = self.problem
        if self.method == DR:
            x_next, _ = dr_step(lambda _: state.y, self.proxG, state.x)
            return DRState(x=x_next, y=self.proxF(x_next))
        if self.method == PR:
            x_next, _ = pr_step(lambda _: state.y, self.proxG, state.x)
            return DRState(x=x_next, y=self.proxF(x_next))
        if self.method == ADMM:
            return admm_step(self.res, p.f.prox, p.op, state)
        if self.method == ADMM_INTERMEDIATE:
            return admm_intermediate_step(self.res, p.f.prox, p.op, state)
        if self.method == CP:
            return cp_step(p.f.prox, self.g_conj.prox, p.op, state, check_norm=False)
        if self.method == DYKSTRA:
            return dykstra_step(p.f, p.g, state)
        if self.method == MAP:
            return PointState(x=map_step(p.f, p.g, state.x))
        return PointState(x=fb_feasibility_step(p.f, p.g, state.x))

    def residual(self, old: _State, new: _State) -> float:
        """Sum of the distances moved by the state components the method iterates on."""
        if self.method in (ADMM, ADMM_INTERMEDIATE):
            return _vector_diff(new.a, old.a) + _vector_diff(new.u, old.u)
        if self.method == CP:
            return _vector_diff(new.u, old.u) + _vector_diff(new.v, old.v)
        if self.method == DYKSTRA:
            return _vector_diff(new.x, old.x) + _vector_diff(new.p, old.p) + _vector_diff(new.q, old.q)
        return _vector_diff(new.x, old.x)


def run(
    method: str,
    problem: ProblemBundle,
    start: Dict[str, VectorLike],
    iterations: int,
    stop_tol: float = 0.0,
) -> Trace:
    """Apply a method's step repeatedly and record every state.

    Args:
        method: One of METHODS
        problem: Problem bundle the method is applied to
        start: Named start vectors (x0; a0, u0; or u0, v0 depending on the method)
        iterations: Iteration budget (>= 0)
        stop_tol: Stop early once the method residual is <= stop_tol (0 disables)

    Returns:
        Trace holding iterations_performed + 1 states

    Raises:
        InvalidInputError: For an unknown method, a method/problem mismatch or missing start fields
    """
    if iterations < 0:
        raise InvalidInputError(f"iterations must be >= 0, got {iterations}")
    runner = _Runner(method, problem)
    state = runner.initial(start)
    trace = Trace(method=method, states=[state], requested_iterations=iterations)
    logger.info("running %s on a %s problem for up to %d iterations", method, problem.form, iterations)

    for n in range(iterations):
        new_state = runner.step(state)
        residual = runner.residual(state, new_state)
        trace.states.append(new_state)
        trace.residuals.append(residual)
        logger.debug("%s iteration %d residual %.3e", method, n + 1, residual)
        state = new_state
        if stop_tol > 0.0 and residual <= stop_tol:
            trace.stopped_early = True
            logger.info("%s stopped early after %d iterations (residual %.3e)", method, n + 1, residual)
            break

    return trace
