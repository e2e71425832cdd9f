"""Exception hierarchy shared by all modules."""


class HassettError(ValueError):
    """Base class for every domain error raised by the package."""


# weight data
class WeightOutOfRange(HassettError):
    pass


class TotalTooSmall(HassettError):
    pass


class TooFewPoints(HassettError):
    pass


class BlockTooHeavy(HassettError):
    pass


class UnstableVertex(HassettError):
    pass


class ParseError(HassettError):
    pass


# trees
class InvalidTree(HassettError):
    pass


class NotAnEdge(HassettError):
    pass


class NotAtVertex(HassettError):
    pass


class InvalidResidualDatum(HassettError):
    pass


class NotSingleton(HassettError):
    pass


# strata / relations / oracles
class UnknownStratum(HassettError):
    pass


class BadPartition(HassettError):
    pass


class TooFewMarks(HassettError):
    pass


class MarksNotDistinct(HassettError):
    pass


class NegativeCoefficient(HassettError):
    pass
