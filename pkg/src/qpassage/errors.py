"""Exception hierarchy shared by all qpassage modules."""


class PassageError(ValueError):
    """Base class for invalid inputs to the toolkit."""


class EmptyState(PassageError):
    pass


class ZeroNorm(PassageError):
    pass


class NotTwoLevelEqual(PassageError):
    """No exact two-level formula applies; use the numerical solver."""


class EvenK(PassageError):
    pass


class EigenstateInput(PassageError):
    """The state occupies a single level, so a(t) never vanishes."""


class InvalidWindow(PassageError):
    pass


class ZeroVector(PassageError):
    pass


class IncommensurateEnsemble(PassageError):
    pass


class DimensionMismatch(PassageError):
    pass
