"""Exception hierarchy shared by all fairline modules."""


class FairlineError(Exception):
    """Base class for every error raised by this package."""


# --- input validation -------------------------------------------------------

class EmptyInput(FairlineError):
    """Destination or capacity list was empty."""


class NonPositiveDestination(FairlineError):
    """Destinations must be strictly positive."""


class NonPositiveCapacity(FairlineError):
    """Capacities must be strictly positive integers."""


class NonPositivePoint(FairlineError):
    """Cost functions are only defined at strictly positive points."""


class NotAPartition(FairlineError):
    """Coalitions overlap, miss agents, or mention unknown agents."""


class GroupsNotAPartition(FairlineError):
    """The group structure for restricted envy checks is not a partition."""


class TaxiIndexOutOfRange(FairlineError):
    """Taxi index outside 1..k."""


class MuTooSmall(FairlineError):
    """Prefix cost needs a coalition size at least as large as the prefix."""


class CoalitionTooLargeForOracle(FairlineError):
    """Factorial enumeration is capped at 8 agents."""


# --- solvers ----------------------------------------------------------------

class NoFeasibleAllocation(FairlineError):
    """Total capacity is smaller than the number of agents."""


# The social-optimality checker needs at least one feasible allocation.
Infeasible = NoFeasibleAllocation


class BudgetExceeded(FairlineError):
    """An enumeration hit its configured cap."""


class CapacityTooLarge(FairlineError):
    """The small-capacity solver requires every quota to be at most 4."""


class ConfigurationInvalid(FairlineError):
    """A per-taxi configuration vector violates one of its four conditions."""


class ConditionsViolated(FairlineError):
    """A (star-forest, size-vector) pair fails a realizability condition."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class BlocksNotAdjacent(FairlineError):
    """Boundary envy checks need two adjacent index blocks."""


# --- CLI / file formats -----------------------------------------------------

class ParseError(FairlineError):
    """An instance, allocation, or result file could not be parsed."""


class StrategyInapplicable(FairlineError):
    """The requested solver does not apply to this instance."""


class UnknownFamily(FairlineError):
    """Unknown generator family name."""
