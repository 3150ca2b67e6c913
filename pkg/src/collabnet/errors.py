"""Exception hierarchy.

``InputError`` covers bad or insufficient data (CLI exit code 1);
``ConfigError`` covers invalid parameters (CLI exit code 2).
"""


class CollabError(Exception):
    pass


class InputError(CollabError):
    pass


class ConfigError(CollabError, ValueError):
    pass


class ParseError(InputError):
    """Edge-list parse failure; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MissingHeader(ParseError):
    pass


class MalformedRow(ParseError):
    pass


class NonPositiveWeight(ParseError):
    pass


class EmptyCountryLabel(ParseError):
    pass


class EmptyGraph(InputError):
    pass


class EmptyFeatureList(InputError):
    pass


class EmptyPointList(InputError):
    pass


class TooFewDistinctPoints(InputError):
    pass


class NoCentroids(InputError):
    pass


class EmptyTrajectory(InputError):
    pass


class TooFewCountries(ConfigError):
    pass


class InvalidK(ConfigError):
    pass


class NonPositiveStep(ConfigError):
    pass


class NonPositiveHorizon(ConfigError):
    pass


class DegenerateRates(ConfigError):
    pass


class InvalidParameter(ConfigError):
    pass
