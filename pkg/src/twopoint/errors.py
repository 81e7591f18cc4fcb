"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An input violates a documented precondition."""


class OutcomeImpossibleError(ValueError):
    """Conditioning on a measurement outcome that has zero probability."""


class SingularSupportError(ValueError):
    """A conditional probability is positive where the marginal is zero."""


class UndefinedFreeEnergyError(ValueError):
    """Free energy requested at zero inverse temperature."""


class InvalidCountsError(ValueError):
    """A counts table cannot support a plug-in estimate."""
