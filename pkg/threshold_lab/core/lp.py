"""
The fractional cover LP

    minimise   sum_T w(T) g(T)
    subject to sum_{T covering S} g(T) >= 1   for every member S
               g >= 0

solved with pyomo and HiGHS, with an exact rational simplex on the dual
as fallback and as an alternative backend. "T covers S" means S ⊆ T for
down-sets and T ⊆ S for up-sets.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from pyomo.contrib.solver.solvers.highs import Highs
from pyomo.environ import (
    ConcreteModel,
    Constraint,
    NonNegativeReals,
    Objective,
    Param,
    Set,
    Var,
    minimize,
    value,
)

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import GroundSetTooLarge, LPNumericalFailure
from threshold_lab.model.certificate import FractionalCertificate
from threshold_lab.model.family import Direction, MonotoneFamily

logger = logging.getLogger(__name__)

# 2^N variables
LP_LIMIT = 5


def lexicographic_rank(bits: int, size: int) -> str:
    """Sort key ordering masks like their bit-strings (character i is element i)."""
    return "".join("1" if bits >> i & 1 else "0" for i in range(size))


def covered_by(candidate: int, member: int, direction: Direction) -> bool:
    if direction is Direction.DOWN:
        return member & ~candidate == 0
    return candidate & ~member == 0


class CoverLP:
    """
    The LP of one family, built once; only the weights change between solves.
    """

    def __init__(self, family: MonotoneFamily):
        size = family.ground.size
        if size > LP_LIMIT:
            raise GroundSetTooLarge(size, LP_LIMIT)
        self.family = family
        self.ground = family.ground
        self.candidates: List[int] = sorted(
            range(1 << size), key=lambda bits: lexicographic_rank(bits, size)
        )
        self.members: List[int] = list(family.member_list)
        self.covering: Dict[int, List[int]] = {
            s: [t for t in self.candidates if covered_by(t, s, family.direction)]
            for s in self.members
        }
        self._model: Optional[ConcreteModel] = None
        self._solver = None

    # -- pyomo / HiGHS ------------------------------------------------

    def _build(self) -> ConcreteModel:
        model = ConcreteModel()
        model.T = Set(initialize=self.candidates, ordered=True, doc="candidate sets")
        model.S = Set(initialize=self.members, ordered=True, doc="family members")
        model.w = Param(model.T, mutable=True, initialize=0.0)
        model.rank = Param(
            model.T, initialize={t: i for i, t in enumerate(self.candidates)}, mutable=False
        )
        model.g = Var(model.T, within=NonNegativeReals)

        def cover_rule(m, s):
            return sum(m.g[t] for t in self.covering[s]) >= 1

        model.cover = Constraint(model.S, rule=cover_rule)
        model.cost = Objective(expr=sum(model.w[t] * model.g[t] for t in model.T), sense=minimize)
        return model

    def _solve_highs(self, weights: Mapping[int, float], canonical: bool) -> Tuple[float, Dict[int, float]]:
        if self._model is None:
            self._model = self._build()
            self._solver = Highs()
        model = self._model
        for t in self.candidates:
            model.w[t] = float(weights[t])
        options = {
            "primal_feasibility_tolerance": 1e-10,
            "dual_feasibility_tolerance": 1e-10,
        }
        self._solver.solve(
            model, tee=False, time_limit=settings.HIGHS_TIME_LIMIT, solver_options=options
        )
        optimum = value(model.cost)
        if canonical:
            # among optimal g, prefer mass on lexicographically small sets
            model.cost.deactivate()
            model.budget = Constraint(
                expr=sum(model.w[t] * model.g[t] for t in model.T) <= optimum + settings.LP_VALIDATION_TOL / 10
            )
            model.tie_break = Objective(
                expr=sum(model.rank[t] * model.g[t] for t in model.T), sense=minimize
            )
            try:
                self._solver.solve(
                    model, tee=False, time_limit=settings.HIGHS_TIME_LIMIT, solver_options=options
                )
            finally:
                model.del_component(model.tie_break)
                model.del_component(model.budget)
                model.cost.activate()
        g = {t: max(0.0, float(value(model.g[t]))) for t in self.candidates}
        return float(optimum), g

    # -- exact rational simplex ---------------------------------------

    def _solve_rational(self, weights: Mapping[int, float]) -> Tuple[float, Dict[int, float]]:
        """
        Bland-rule simplex on the dual: maximise sum_S y(S) subject to
        sum_{S covered by T} y(S) <= w(T), y >= 0. The origin is feasible; the
        optimal g(T) is the final reduced cost of the slack of row T.
        """
        rows = len(self.candidates)
        cols = len(self.members)
        width = cols + rows
        tableau: List[List[Fraction]] = []
        for i, t in enumerate(self.candidates):
            row = [Fraction(1) if covered_by(t, s, self.family.direction) else Fraction(0) for s in self.members]
            row += [Fraction(1) if j == i else Fraction(0) for j in range(rows)]
            row.append(Fraction(weights[t]))
            tableau.append(row)
        objective = [Fraction(-1)] * cols + [Fraction(0)] * rows + [Fraction(0)]
        basis = [cols + i for i in range(rows)]

        while True:
            entering = next((j for j in range(width) if objective[j] < 0), None)
            if entering is None:
                break
            leaving = None
            best = None
            for i in range(rows):
                a = tableau[i][entering]
                if a > 0:
                    ratio = tableau[i][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                        best, leaving = ratio, i
            if leaving is None:
                raise LPNumericalFailure("dual LP unbounded: some member cannot be covered")
            pivot_row = tableau[leaving]
            pivot = pivot_row[entering]
            tableau[leaving] = pivot_row = [x / pivot for x in pivot_row]
            for i in range(rows):
                factor = tableau[i][entering]
                if i != leaving and factor != 0:
                    tableau[i] = [x - factor * y for x, y in zip(tableau[i], pivot_row)]
            factor = objective[entering]
            objective = [x - factor * y for x, y in zip(objective, pivot_row)]
            basis[leaving] = entering

        g = {t: float(objective[cols + i]) for i, t in enumerate(self.candidates)}
        return float(objective[-1]), g

    # -- validated entry point ----------------------------------------

    def validate(self, weights: Mapping[int, float], optimum: float, g: Mapping[int, float]) -> None:
        tol = settings.LP_VALIDATION_TOL
        for s in self.members:
            coverage = sum(g[t] for t in self.covering[s])
            if coverage < 1 - tol:
                raise LPNumericalFailure(f"member {s:#x} covered only {coverage!r}")
        if any(x < -tol for x in g.values()):
            raise LPNumericalFailure("negative weight in solution")
        achieved = sum(float(weights[t]) * g[t] for t in self.candidates)
        if abs(achieved - optimum) > tol * max(1.0, abs(optimum)):
            raise LPNumericalFailure(f"objective {achieved!r} does not match reported {optimum!r}")

    def solve(
        self,
        weights: Mapping[int, float],
        solver: Optional[str] = None,
        canonical: bool = False,
    ) -> Tuple[float, FractionalCertificate]:
        solver = solver or settings.LP_SOLVER
        if any(weights[t] < 0 for t in self.candidates):
            raise ValueError("weights must be nonnegative")
        if not self.members:
            return 0.0, FractionalCertificate(self.ground)
        if solver == "highs":
            try:
                optimum, g = self._solve_highs(weights, canonical)
                self.validate(weights, optimum, g)
                return optimum, self._certificate(g)
            except Exception as e:
                logger.warning(f"HiGHS solution rejected, switching to the rational simplex: {e}")
        if canonical:
            logger.warning(
                "The rational simplex has no lexicographic tie-break; the certificate is "
                "an optimal g but not necessarily the canonical one"
            )
        optimum, g = self._solve_rational(weights)
        self.validate(weights, optimum, g)
        return optimum, self._certificate(g)

    def _certificate(self, g: Mapping[int, float]) -> FractionalCertificate:
        return FractionalCertificate(self.ground, tuple((t, x) for t, x in g.items() if x > 0))


def lp_min_cover(
    family: MonotoneFamily,
    weight: Mapping[int, float],
    solver: Optional[str] = None,
    canonical: bool = True,
) -> Tuple[float, FractionalCertificate]:
    """
    Minimum weighted fractional cover of ``family``.

    Parameters:
    - family: monotone family with N <= 5.
    - weight: nonnegative weight per subset mask of X, all 2^N masks present.
    Returns:
    - The optimal value and an optimal g, validated at LP_VALIDATION_TOL.
    """
    return CoverLP(family).solve(weight, solver=solver, canonical=canonical)


def direction_weights(size: int, p: float, direction: Direction) -> Dict[int, float]:
    """p^|T| for up-sets, (1-p)^(N-|T|) for down-sets."""
    if Direction(direction) is Direction.UP:
        return {t: p ** t.bit_count() for t in range(1 << size)}
    return {t: (1.0 - p) ** (size - t.bit_count()) for t in range(1 << size)}

