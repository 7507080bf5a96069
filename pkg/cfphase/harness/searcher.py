from dataclasses import dataclass

from scipy.optimize import bisect

from ..cf_executor import CFExecutor, LeaderProfile, Scenario
from ..cf_state import VehicleState, StepSize, as_eps
from ..models.model_types import ModelId
from ..phase.labels import PhaseLabel
from ..settings import Settings
from ..utility.exceptions import DomainError, SearchError
from ..utility.log_util import log_debug

RECOVERED = (PhaseLabel.EquilibriumCruising, PhaseLabel.EquilibriumDeceleration)


@dataclass(frozen=True)
class BetaSearchResult:
    beta: float
    closed_form: float
    iterations: int
    bracket_width: float
    converged: bool

    @property
    def relative_error(self):
        if self.closed_form == 0:
            return abs(self.beta)
        return abs(self.beta - self.closed_form) / self.closed_form

    def as_dict(self):
        return {
            "beta": self.beta,
            "closed_form": self.closed_form,
            "relative_error": self.relative_error,
            "iterations": self.iterations,
            "bracket_width": self.bracket_width,
            "converged": self.converged,
        }


class BrakingProbe(object):
    # runs the BDA-Newell stationary-leader problem for one beta,
    # stopping as soon as the outcome is known
    def __init__(self, params, v0, eps, t_end):
        self.params = params
        self.v0 = v0
        self.eps = eps
        self.t_end = t_end
        self.tol = Settings().get_double("cfphase.tolerance.length")
        self.runs = 0

    def __str__(self):
        return "<BrakingProbe v0: %g, eps: %g, %d runs>" % (self.v0, self.eps, self.runs)

    def __repr__(self):
        return self.__str__()

    def _step_callback(self, executor):
        pair = executor.last_pairs[0]
        out = executor.last_outputs[0]
        if pair.spacing < self.params.zeta - self.tol:
            return False
        if pair.follower.v <= 0:
            return False
        if executor.index > 1 and out.phase in RECOVERED:
            return False
        return True

    def min_spacing(self, beta):
        params = self.params.with_values(beta=beta)
        z0 = params.tau * self.v0 + params.zeta
        sc = Scenario(ModelId.BDANewell, params, StepSize(self.eps), self.t_end,
                      VehicleState(0.0, self.v0), LeaderProfile.stationary(z0))
        traj = CFExecutor(sc).run(self._step_callback)[0]
        self.runs += 1
        return float(traj.z.min())

    def margin(self, beta):
        res = self.min_spacing(beta) - (self.params.zeta - self.tol)
        log_debug("beta=%.6f: spacing margin %g", beta, res)
        return res


def min_beta_for_compliance(params, v0, eps, t_end=60.0, bracket=None):
    eps = as_eps(eps)
    if v0 == 0:
        return BetaSearchResult(0.0, 0.0, 0, 0.0, True)
    if not (0 < v0 <= params.mu):
        raise DomainError("initial speed %g outside (0, %g]" % (v0, params.mu))

    closed_form = v0 / (2 * params.tau)
    lo, hi = bracket if bracket is not None else (1e-3, 2 * v0 / params.tau)
    xtol = Settings().get_double("cfphase.harness.beta_xtol")
    maxiter = Settings().get_integer("cfphase.harness.beta_maxiter")

    probe = BrakingProbe(params, v0, eps, t_end)
    if probe.margin(lo) >= 0:
        raise SearchError("lower bracket %g already compliant" % lo)
    if probe.margin(hi) < 0:
        raise SearchError("upper bracket %g not compliant" % hi)

    try:
        beta, info = bisect(probe.margin, lo, hi, xtol=xtol, maxiter=maxiter, full_output=True)
    except RuntimeError as e:
        raise SearchError("bisection did not converge: %s" % e)
    width = (hi - lo) / 2 ** info.iterations
    return BetaSearchResult(float(beta), closed_form, info.iterations, width, info.converged)
