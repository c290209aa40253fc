"""Exception hierarchy shared by every module.

Domain errors map to CLI exit status 1; anything else is a usage or parse
problem (exit 2).
"""


class AccessNetError(Exception):
    """Base class for domain errors."""

    def to_dict(self):
        return {"type": type(self).__name__, "message": str(self)}


class Infeasible(AccessNetError):
    pass


class BudgetExceeded(AccessNetError):
    """Search limits hit before optimality was proven.

    ``solution`` holds the best incumbent found (``proven_optimal`` is False),
    or None when no feasible design was reached in time.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution

    def to_dict(self):
        d = super().to_dict()
        d["incumbent"] = None if self.solution is None else self.solution.to_dict()
        return d


class InstanceTooLarge(AccessNetError):
    pass


class CapacityExhausted(AccessNetError):
    pass


class NoDistributionSwitch(AccessNetError):
    pass


class HeuristicFailed(AccessNetError):
    """One or more buildings could not be designed."""

    def __init__(self, failures):
        self.failures = dict(failures)
        lines = [f"{b}: {e}" for b, e in sorted(self.failures.items())]
        super().__init__("; ".join(lines))

    def to_dict(self):
        d = super().to_dict()
        d["buildings"] = {
            b: {"type": type(e).__name__, "message": str(e)}
            for b, e in sorted(self.failures.items())
        }
        return d


class InvalidInstance(AccessNetError):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(v.message for v in report.violations))

    def to_dict(self):
        d = super().to_dict()
        d["violations"] = [v.to_dict() for v in self.report.violations]
        return d


class UnknownId(AccessNetError):
    pass


class NoSwitchMeetsTemperature(AccessNetError):
    pass


class NoPayback(AccessNetError):
    pass


class MalformedHeader(AccessNetError):
    pass


class MalformedLog(AccessNetError):
    def __init__(self, message, bad_lines=()):
        super().__init__(message)
        self.bad_lines = list(bad_lines)

    def to_dict(self):
        d = super().to_dict()
        d["bad_lines"] = self.bad_lines
        return d


class EmptyLog(AccessNetError):
    pass
