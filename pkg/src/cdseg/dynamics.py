"""Iterative solvers for quadratic maximization over the standard simplex.

Two dynamics are provided: the classical multiplicative replicator update
and a faster pairwise selection scheme whose per-step cost is linear in the
number of vertices once the payoff vector is cached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BARYCENTER_PERTURBATION = 1e-9


class DegenerateStateError(RuntimeError):
    """The multiplicative update left the simplex (nonpositive mean payoff)."""


@dataclass
class SolverSettings:
    max_iterations: int = 10000
    tolerance: float = 1e-10
    support_epsilon: float = 1e-6  # relative to the largest component
    residual_target: float = 5e-7  # first-order residual required on top of the L1 stop

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.support_epsilon <= 0:
            raise ValueError("support_epsilon must be positive")
        if self.residual_target <= 0:
            raise ValueError("residual_target must be positive")


# stall detection for the replicator: compare L1 progress across this many
# steps; an algebraic (non-geometric) decay keeps the ratio near 1
_STALL_INTERVAL = 256
_STALL_RATIO = 0.5
_PRUNE_KAPPA = 8.0
_PRUNE_MASS_GATE = 0.01  # only prune once the implied dying mass is this small
_SCORE_GUARD = 1e-7  # payoff deficit above which a component is pruned as dominated
_REVIVE_GUARD = 5e-7  # payoff surplus above which a zeroed component is revived;
# kept well above the prune guard so near-ties settle instead of flip-flopping
_ALIVE_FLOOR = 1e-250  # below this a component is dead beyond any doubt
_POLISH_CAP = 200  # diagonal-Newton polish rounds allowed per run
_RESIDUAL_INTERVAL = 64  # steps between first-order residual checks


@dataclass
class SolverOutcome:
    solution: np.ndarray
    objective: float
    iterations_used: int
    converged: bool
    support: tuple[int, ...]
    min_step_gain: float  # most negative per-step objective change observed
    max_simplex_error: float  # worst deviation from the simplex along the run


def barycenter(n: int, perturbation: float = BARYCENTER_PERTURBATION) -> np.ndarray:
    """Default start: barycenter plus a tiny index-proportional tilt.

    The tilt makes runs reproducible on symmetric instances where the exact
    barycenter is a saddle (e.g. two identical disjoint cliques).
    """
    x = np.full(n, 1.0 / n) + perturbation * np.arange(n)
    return x / x.sum()


def support_of(x: np.ndarray, support_epsilon: float) -> tuple[int, ...]:
    threshold = support_epsilon * float(np.max(x))
    return tuple(int(i) for i in np.nonzero(x > threshold)[0])


def replicator_step(M, x) -> np.ndarray:
    """One multiplicative payoff-proportional update, exactly renormalized.

    Payoffs must be nonnegative over the support of x, otherwise the update
    leaves the simplex and a DegenerateStateError is raised; callers shift
    the matrix by a constant when it has negative entries.
    """
    m = np.asarray(M, dtype=float)
    x = np.asarray(x, dtype=float)
    payoff = m @ x
    mean_payoff = float(x @ payoff)
    if mean_payoff <= 0.0:
        raise DegenerateStateError(f"mean payoff {mean_payoff} is not positive")
    y = x * payoff / mean_payoff
    if np.any(y < 0.0):
        raise DegenerateStateError("negative payoff on the support pushed the state off the simplex")
    return y / y.sum()


def _dying_size_bound(l1: float, shifted_obj: float, pen_scale: float) -> float:
    """Size scale of self-limiting components implied by the step distance.

    A component pinned at the payoff boundary decays at a rate proportional
    to its own mass, so at a stall the step distance satisfies
    l1 ~ pen * eps^2 / obj; anything within a few multiples of the implied
    eps is a candidate for pruning, anything far above it is not.
    """
    return np.sqrt(l1 * shifted_obj / pen_scale)


def run_replicator(M, x0=None, settings: SolverSettings | None = None) -> SolverOutcome:
    """Iterate the replicator update until successive iterates are closer
    than the tolerance in L1 distance, or the iteration budget runs out.

    Matrices with negative entries are shifted by a constant before
    iterating; the shift adds a constant to the objective on the simplex,
    so maximizers, supports and the reported objective are unaffected.

    Degenerate maximizers (common on unweighted graphs) leave boundary
    components decaying only algebraically, which no iteration budget can
    resolve.  Such components are recognized by their trajectory: along a
    1/t decay the inverse 1/x_i grows by the same amount over successive
    checkpoint windows, whereas for a component converging to a positive
    limit the increments die off geometrically.  Once L1 progress stalls,
    small algebraically-decaying components are zeroed -- faces are
    invariant under the dynamics -- and iteration continues on the face,
    where convergence is geometric.

    Pruning is a hypothesis, not a verdict: a component converging toward a
    small positive limit follows the same 1/t law until it levels off.  At
    convergence every zeroed component is therefore checked against the
    first-order conditions, and one earning more than the common payoff is
    reinjected at its implied equilibrium mass (the multiplicative update
    can never revive an exact zero by itself) before iteration resumes.
    """
    settings = settings or SolverSettings()
    m = np.asarray(M, dtype=float)
    n = m.shape[0]
    x = barycenter(n) if x0 is None else np.asarray(x0, dtype=float).copy()

    shift = max(0.0, -float(m.min()))
    ms = m + shift if shift > 0.0 else m

    # dying components decay at a rate set by their own diagonal penalty
    # (or, absent one, by the payoff scale); used by the stall pruning
    pen_scale = max(-float(np.diagonal(m).min()), 0.0)

    converged = False
    iterations = 0
    polish_rounds = 0
    events = 0  # prune/boost support-resolution events; capped to prevent livelock
    event_budget = 4 * n
    min_gain = 0.0
    max_simplex_error = abs(float(x.sum()) - 1.0)
    prev_obj = float(x @ (ms @ x))
    checkpoint_l1 = np.inf
    inv_prev = None
    inv_growth_prev = None

    payoff = ms @ x  # carried across iterations: one matvec per step

    def zero_out(mask) -> None:
        nonlocal x, payoff, prev_obj, inv_prev, inv_growth_prev
        x[mask] = 0.0
        x /= x.sum()
        payoff = ms @ x
        prev_obj = float(x @ payoff)
        inv_prev = inv_growth_prev = None

    while iterations < settings.max_iterations:
        mean_payoff = float(x @ payoff)
        if mean_payoff <= 0.0:
            raise DegenerateStateError(f"mean payoff {mean_payoff} is not positive")
        x_next = x * payoff
        if float(x_next.min()) < 0.0:
            raise DegenerateStateError(
                "negative payoff on the support pushed the state off the simplex"
            )
        x_next /= x_next.sum()
        iterations += 1
        payoff = ms @ x_next
        obj = float(x_next @ payoff)
        min_gain = min(min_gain, obj - prev_obj)
        prev_obj = obj
        max_simplex_error = max(max_simplex_error, abs(float(x_next.sum()) - 1.0))
        l1 = float(np.abs(x_next - x).sum())
        x = x_next
        scale = max(pen_scale, obj)
        if l1 >= settings.tolerance and iterations % _RESIDUAL_INTERVAL == 0:
            # the first-order residual certifies a solution long before the
            # step distance shrinks to the tolerance; stop early when every
            # component already satisfies the conditions to target accuracy
            surplus = payoff - obj
            supported = x > settings.support_epsilon * float(x.max())
            residual = float(np.abs(surplus[supported]).max())
            if np.any(~supported):
                residual = max(residual, max(0.0, float(surplus[~supported].max())))
            if residual <= settings.residual_target:
                converged = True
                break
        if l1 < settings.tolerance:
            # small steps alone cannot certify a fixed point: a component at
            # mass h moves only h * gap per step, so microscopic components
            # can hide arbitrary payoff gaps.  Check the first-order
            # conditions directly before declaring victory.
            surplus = payoff - obj
            peak = float(x.max())
            # stragglers provably dying and components dominated by more
            # than the score guard (they would decay forever) resolve to
            # exact zeros; removing a below-average earner raises the
            # objective, so these prunes cannot cycle
            theta = _PRUNE_KAPPA * _dying_size_bound(l1, obj, scale)
            dead = (x > 0.0) & (x < min(theta, 0.1 * peak)) & (surplus < _SCORE_GUARD)
            dead |= (x > 0.0) & (x < 0.1 * peak) & (surplus < -_SCORE_GUARD)
            if np.any(dead) and events < event_budget:
                events += 1
                zero_out(dead)
                continue
            # sleepers: components far below their equilibrium (including
            # exact zeros after a wrong prune) earn more than the common
            # payoff but grow invisibly slowly.  Take the exact line-search
            # step toward the best sleeper's vertex.
            pens = np.maximum(-np.diagonal(m), obj)
            sleepers = (surplus > _REVIVE_GUARD) & (x < 0.5 * surplus / pens)
            if np.any(sleepers) and events < event_budget:
                events += 1
                pick = int(np.argmax(np.where(sleepers, surplus, -np.inf)))
                curvature = float(ms[pick, pick] - 2.0 * payoff[pick] + obj)
                if curvature < 0.0:
                    step = min(0.25, surplus[pick] / -curvature)
                else:
                    step = 0.25
                x *= 1.0 - step
                x[pick] += step
                x /= x.sum()
                payoff = ms @ x
                prev_obj = float(x @ payoff)
                inv_prev = inv_growth_prev = None
                continue
            supported = x > settings.support_epsilon * peak
            residual = float(np.abs(surplus[supported]).max())
            if np.any(~supported):
                residual = max(residual, max(0.0, float(surplus[~supported].max())))
            if residual <= settings.residual_target:
                converged = True
                break
            if polish_rounds < _POLISH_CAP:
                # diagonal Newton polish: each penalized component's payoff
                # balance is dominated by its own diagonal once alpha exceeds
                # the submatrix spectrum, so x_i += surplus_i / pen_i
                # contracts the residual far faster than sub-tolerance steps
                polish_rounds += 1
                adjust = supported & (np.diagonal(m) < 0.0)
                x[adjust] = np.maximum(x[adjust] + surplus[adjust] / pens[adjust], 0.0)
                x /= x.sum()
                payoff = ms @ x
                prev_obj = float(x @ payoff)
                inv_prev = inv_growth_prev = None
            # keep iterating either way: the remaining error shrinks
            # geometrically even though each step is below the tolerance
        elif iterations % _STALL_INTERVAL == 0:
            alive = x > _ALIVE_FLOOR
            hopeless = (x > 0.0) & ~alive
            if np.any(hopeless):
                zero_out(hopeless)
                checkpoint_l1 = l1
                continue
            inv = np.where(alive, 1.0 / np.where(alive, x, 1.0), 0.0)
            stalled = l1 > _STALL_RATIO * checkpoint_l1
            if (
                stalled
                and inv_prev is not None
                and inv_growth_prev is not None
                and _dying_size_bound(l1, obj, scale) <= _PRUNE_MASS_GATE
            ):
                growth = inv - inv_prev
                dying = (
                    alive
                    & (x < 0.1 * float(x.max()))
                    & (growth > 0.0)
                    & (growth >= 0.8 * inv_growth_prev)
                    & (inv_growth_prev > 0.0)
                )
                if np.any(dying):
                    zero_out(dying)
                    checkpoint_l1 = l1
                    continue
            inv_growth_prev = None if inv_prev is None else inv - inv_prev
            inv_prev = inv
            checkpoint_l1 = l1

    objective = float(x @ (m @ x))
    return SolverOutcome(
        solution=x,
        objective=objective,
        iterations_used=iterations,
        converged=converged,
        support=support_of(x, settings.support_epsilon),
        min_step_gain=min_gain,
        max_simplex_error=max_simplex_error,
    )


def run_pairwise_dynamics(M, x0=None, settings: SolverSettings | None = None) -> SolverOutcome:
    """Pairwise selection dynamics: move along the segment toward the most
    over- or under-performing strategy, with the exact line-search step.

    Same contract as run_replicator.  Each step costs O(n) given the cached
    payoff vector; negative matrix entries need no special handling.  Ties
    in the selection are broken toward the lowest index.
    """
    settings = settings or SolverSettings()
    m = np.asarray(M, dtype=float)
    n = m.shape[0]
    x = barycenter(n) if x0 is None else np.asarray(x0, dtype=float).copy()

    payoff = m @ x
    obj = float(x @ payoff)
    converged = False
    iterations = 0
    min_gain = 0.0
    max_simplex_error = abs(float(x.sum()) - 1.0)
    # relative score below which a strategy is considered non-infective;
    # keeps the selection from chasing rounding noise forever
    score_floor = 1e-14 * max(1.0, float(np.abs(m).max()))

    for step in range(settings.max_iterations):
        scores = payoff - obj
        can_raise = scores > score_floor
        can_drop = (scores < -score_floor) & (x > 0.0)
        magnitude = np.where(can_raise | can_drop, np.abs(scores), -1.0)
        pick = int(np.argmax(magnitude))  # argmax takes the first max: lowest index wins ties
        if magnitude[pick] <= 0.0:
            converged = True
            break

        if scores[pick] > 0.0:
            # infection by the pure strategy `pick`
            direction = -x.copy()
            direction[pick] += 1.0
            dir_payoff = m[:, pick] - payoff
            max_step = 1.0
        else:
            # immunization: retract mass from `pick` toward its co-strategy
            # y = (x - x_pick * e_pick) / (1 - x_pick); the full step zeroes x_pick
            scale = x[pick] / (1.0 - x[pick])
            y = x.copy()
            y[pick] = 0.0
            y = y / y.sum()
            direction = y - x
            dir_payoff = scale * (payoff - m[:, pick])
            max_step = 1.0

        gain_rate = float(direction @ payoff)  # d'Mx > 0 for an infective direction
        curvature = float(direction @ dir_payoff)
        if curvature >= 0.0:
            delta = max_step
        else:
            delta = min(max_step, -gain_rate / curvature)

        x_next = x + delta * direction
        if scores[pick] < 0.0 and delta >= max_step:
            x_next[pick] = 0.0  # exact support shrink at the full step
        np.clip(x_next, 0.0, None, out=x_next)
        x_next /= x_next.sum()

        iterations += 1
        payoff = payoff + delta * dir_payoff
        if (step + 1) % 64 == 0:
            payoff = m @ x_next  # periodic refresh against drift
        new_obj = float(x_next @ payoff)
        min_gain = min(min_gain, new_obj - obj)
        obj = new_obj
        max_simplex_error = max(
            max_simplex_error,
            abs(float(x_next.sum()) - 1.0),
            max(0.0, -float(x_next.min())),
        )
        l1 = float(np.abs(x_next - x).sum())
        x = x_next
        if l1 < settings.tolerance:
            converged = True
            break

    payoff = m @ x
    objective = float(x @ payoff)
    return SolverOutcome(
        solution=x,
        objective=objective,
        iterations_used=iterations,
        converged=converged,
        support=support_of(x, settings.support_epsilon),
        min_step_gain=min_gain,
        max_simplex_error=max_simplex_error,
    )


def kkt_residual(A, x, S, alpha: float, support_epsilon: float = 1e-6) -> float:
    """Largest violation of the first-order conditions of the constrained
    program at x, with the support read off at `support_epsilon`.

    Supported vertices outside S must earn the common payoff after the
    diagonal penalty, supported vertices of S must earn it exactly, and
    unsupported vertices must not earn more.
    """
    a = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    n = a.shape[0]
    in_s = np.zeros(n, dtype=bool)
    in_s[list(S)] = True
    payoff = a @ x
    lam = float(x @ payoff) - alpha * float(x[~in_s] @ x[~in_s])
    supported = x > support_epsilon * float(np.max(x))

    residual = 0.0
    sel = supported & ~in_s
    if np.any(sel):
        residual = max(residual, float(np.abs(payoff[sel] - alpha * x[sel] - lam).max()))
    sel = supported & in_s
    if np.any(sel):
        residual = max(residual, float(np.abs(payoff[sel] - lam).max()))
    sel = ~supported
    if np.any(sel):
        residual = max(residual, max(0.0, float((payoff[sel] - lam).max())))
    return residual
