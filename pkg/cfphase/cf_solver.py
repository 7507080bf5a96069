from dataclasses import dataclass, field
from fractions import Fraction

import z3

from .cf_state import as_eps
from .models.model_types import ModelId
from .utility.exceptions import UnsupportedModel, DomainError
from .utility.log_util import log_info

TIMEOUT_MS = 30000


def real(value):
    f = Fraction(repr(float(value)))
    return z3.RealVal("%d/%d" % (f.numerator, f.denominator))


def z3_min(a, b):
    return z3.If(a <= b, a, b)


def z3_max(a, b):
    return z3.If(a >= b, a, b)


def to_float(val):
    if z3.is_rational_value(val):
        return float(val.as_fraction())
    if z3.is_algebraic_value(val):
        return float(val.approx(20).as_fraction())
    return float(val.as_decimal(20).rstrip("?"))


class Solver(object):
    def __init__(self):
        self.assertions = []
        self._solver = z3.Solver()
        self._solver.set("timeout", TIMEOUT_MS)

    def __str__(self):
        return "<Solver id: 0x%x, %d assertions>" % \
            (id(self), len(self.assertions))

    def __repr__(self):
        return self.__str__()

    def add_constraints(self, *constraints):
        for c in constraints:
            c = z3.simplify(c)
            if z3.is_true(c):
                continue
            self._solver.add(c)
            self.assertions.append(c)

    def _check(self):
        res = self._solver.check()
        if res == z3.unknown:
            raise DomainError("solver gave up: %s" % self._solver.reason_unknown())
        return res == z3.sat

    def satisfiable(self, extra_constraints: list = None):
        if extra_constraints:
            self._solver.push()
            for c in extra_constraints:
                self._solver.add(c)
        res = self._check()
        if extra_constraints:
            self._solver.pop()
        return res

    def model(self, extra_constraints: list = None):
        if extra_constraints:
            self._solver.push()
            for c in extra_constraints:
                self._solver.add(c)
        assert self._check()
        res = self._solver.model()
        if extra_constraints:
            self._solver.pop()
        return res

    def evaluate(self, var, extra_constraints: list = None) -> float:
        m = self.model(extra_constraints)
        return to_float(m.evaluate(var, model_completion=True))


@dataclass
class ProofResult:
    model: ModelId
    holds: bool
    counterexample: dict = field(default_factory=dict)
    hypotheses: list = field(default_factory=list)

    def as_dict(self):
        return {
            "model": self.model.key,
            "holds": self.holds,
            "counterexample": dict(self.counterexample),
            "hypotheses": list(self.hypotheses),
        }


def _equilibrium_speed(z, params):
    return z3_min(real(params.mu), (z - real(params.zeta)) / real(params.tau))


def _newell_speed(z, v, v_l, params, eps, extra):
    return _equilibrium_speed(z, params)


def _ba_newell_speed(z, v, v_l, params, eps, extra):
    bound = real(params.alpha) * (1 - v / real(params.mu))
    a = z3_min(bound, (_equilibrium_speed(z, params) - v) / eps)
    return v + eps * a


def _bda_newell_speed(z, v, v_l, params, eps, extra):
    bound = real(params.alpha) * (1 - v / real(params.mu))
    a = z3_max(-real(params.beta), z3_min(bound, (_equilibrium_speed(z, params) - v) / eps))
    return v + eps * a


def _gipps_simplified_speed(z, v, v_l, params, eps, extra):
    b = real(params.beta)
    tb = real(params.tau_brake)
    s = z3.Real("S")
    extra.append(s >= 0)
    extra.append(s * s == b * b * tb * tb + 2 * b * (z - real(params.zeta)) + v_l * v_l)
    acc = v + eps * real(params.alpha) * (1 - v / real(params.mu))
    return z3_min(acc, -b * tb + s)


symbolic_models = {
    ModelId.Newell: _newell_speed,
    ModelId.BANewell: _ba_newell_speed,
    ModelId.BDANewell: _bda_newell_speed,
    ModelId.GippsSimplified: _gipps_simplified_speed,
}


def prove_step_safety(model_id, params, eps):
    if model_id not in symbolic_models:
        raise UnsupportedModel(model_id, "symbolic proof")
    eps = real(as_eps(eps))

    z = z3.Real("z")
    v = z3.Real("v")
    v_l = z3.Real("v_l")
    v_l_next = z3.Real("v_l_next")

    extra = []
    v_next = symbolic_models[model_id](z, v, v_l, params, eps, extra)
    z_next = z + eps * (v_l_next - v_next)

    hypotheses = [z >= real(params.zeta), v >= 0, v_l >= 0, v_l_next >= 0]
    goal = z3.And(z_next >= real(params.zeta), v_next >= 0)

    solver = Solver()
    solver.add_constraints(*hypotheses)
    solver.add_constraints(*extra)
    if not solver.satisfiable([z3.Not(goal)]):
        log_info("%s: one-step safety proved", model_id)
        return ProofResult(model_id, True, hypotheses=[str(h) for h in hypotheses])

    m = solver.model([z3.Not(goal)])
    cex = {
        "z": to_float(m.evaluate(z, model_completion=True)),
        "v": to_float(m.evaluate(v, model_completion=True)),
        "v_l": to_float(m.evaluate(v_l, model_completion=True)),
        "v_l_next": to_float(m.evaluate(v_l_next, model_completion=True)),
        "v_next": to_float(m.evaluate(v_next, model_completion=True)),
        "z_next": to_float(m.evaluate(z_next, model_completion=True)),
    }
    log_info("%s: counterexample %s", model_id, cex)
    return ProofResult(model_id, False, cex, [str(h) for h in hypotheses])


def prove_bda_threshold(params, v0):
    # constant braking at beta from (v0, tau v0 + zeta) stops at or beyond zeta
    # exactly when beta >= v0 / (2 tau)
    if v0 < 0:
        raise DomainError("initial speed must be non-negative, got %g" % v0)
    beta = z3.Real("beta")
    v0r = real(v0)
    z0 = real(params.tau) * v0r + real(params.zeta)
    threshold = v0r / (2 * real(params.tau))
    # stop spacing z0 - v0^2/(2 beta) >= zeta, multiplied through by 2 beta > 0
    stops_safely = 2 * beta * (z0 - real(params.zeta)) >= v0r * v0r

    solver = Solver()
    solver.add_constraints(beta > 0)
    hypotheses = ["beta > 0", "stop spacing >= zeta <=> beta >= v0 / (2 tau)"]
    too_weak = solver.satisfiable([beta >= threshold, z3.Not(stops_safely)])
    too_strong = solver.satisfiable([beta < threshold, stops_safely, v0r > 0])
    if not too_weak and not too_strong:
        return ProofResult(ModelId.BDANewell, True, hypotheses=hypotheses)

    extra = [beta >= threshold, z3.Not(stops_safely)] if too_weak else \
        [beta < threshold, stops_safely]
    return ProofResult(ModelId.BDANewell, False,
                       {"beta": solver.evaluate(beta, extra)}, hypotheses)
