# ERRORS
class CFPhaseError(Exception):
    def __init__(self, msg):
        self.message = msg
        super().__init__(msg)

    def is_fatal(self):
        raise NotImplementedError  # override


class InvalidState(CFPhaseError):
    def __init__(self, what, value):
        self.what = what
        self.value = value
        self.message = "non-finite %s: %r" % (what, value)
        super().__init__(self.message)

    def is_fatal(self):
        return True


class ConfigError(CFPhaseError):
    def __init__(self, msg, key=None):
        self.key = key
        if key is not None:
            msg = "%s: %s" % (key, msg)
        super().__init__(msg)

    def is_fatal(self):
        return True


class PreconditionError(CFPhaseError):
    def __init__(self, eps, tau):
        self.eps = eps
        self.tau = tau
        self.message = "step size %g exceeds minimum time gap %g" % (eps, tau)
        super().__init__(self.message)

    def is_fatal(self):
        return True


class DomainError(CFPhaseError):
    def __init__(self, msg):
        super().__init__(msg)

    def is_fatal(self):
        return True


class UndefinedGap(DomainError):
    def __init__(self, clearance):
        self.clearance = clearance
        super().__init__(
            "time gap undefined for zero speed and clearance %g" % clearance)


class UnsupportedModel(CFPhaseError):
    def __init__(self, model, what="operation"):
        self.model = model
        self.message = "%s not supported for model %s" % (what, model)
        super().__init__(self.message)

    def is_fatal(self):
        return True


class UnknownExperiment(CFPhaseError):
    def __init__(self, name):
        self.name = name
        self.message = "unknown experiment %s" % name
        super().__init__(self.message)

    def is_fatal(self):
        return True


class SearchError(CFPhaseError):
    def __init__(self, msg):
        super().__init__(msg)

    def is_fatal(self):
        return True


class ModelDomainError(CFPhaseError):
    # the model cannot be evaluated at this state; trajectories truncate
    def is_fatal(self):
        return False


class SingularInput(ModelDomainError):
    def __init__(self, spacing, zeta_min):
        self.spacing = spacing
        self.zeta_min = zeta_min
        self.message = "singular input: spacing %g <= minimum jam spacing %g" % (
            spacing, zeta_min)
        super().__init__(self.message)


class IllDefinedModel(ModelDomainError):
    def __init__(self, discriminant, spacing):
        self.discriminant = discriminant
        self.spacing = spacing
        self.message = "ill-defined model: negative discriminant %g at spacing %g" % (
            discriminant, spacing)
        super().__init__(self.message)


class NoSteadyState(CFPhaseError):
    def __init__(self, density, spread):
        self.density = density
        self.spread = spread
        self.message = "no steady state at density %g (speed spread %g)" % (
            density, spread)
        super().__init__(self.message)

    def is_fatal(self):
        return False
