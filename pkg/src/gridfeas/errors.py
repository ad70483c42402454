"""Exception hierarchy for gridfeas.

Every error raised by the library derives from ``GridfeasError`` so callers
can catch the whole family with one clause. CLI exit-code mapping lives in
``gridfeas.cli``.
"""

from __future__ import annotations


class GridfeasError(Exception):
    """Base class for all gridfeas errors."""


# --- grid model construction -------------------------------------------------

class InvalidSpec(GridfeasError):
    """Structurally invalid grid description (ids, kinds, conductances, ...)."""


class DisconnectedGraph(InvalidSpec):
    """The node/line graph of the grid is not connected."""


class LoadSubgraphReducible(InvalidSpec):
    """The load-only subgraph is disconnected, so the load block of the
    Kirchhoff matrix is reducible.

    The analysis applies per connected block; splitting changes the problem
    identity and is left to the caller. ``components`` carries the load index
    sets (indices into the load ordering) and ``component_ids`` the node ids,
    so the caller can split with :func:`gridfeas.grid.split_load_components`.
    """

    def __init__(self, message: str, components, component_ids):
        super().__init__(message)
        self.components = components
        self.component_ids = component_ids


# --- structural matrix analysis ----------------------------------------------

class NotZMatrix(GridfeasError):
    """Matrix has a positive off-diagonal entry."""


class NotIrreducible(GridfeasError):
    """Directed graph of the off-diagonal pattern is not strongly connected."""


class NotSymmetric(GridfeasError):
    """Matrix is not symmetric within tolerance."""


class NoConvergence(GridfeasError):
    """Iterative eigensolve hit its iteration cap."""


# --- power flow ---------------------------------------------------------------

class NonPositiveVoltage(GridfeasError):
    """A load voltage vector has an entry <= 0 where positivity is required."""


class NotSingleLoad(GridfeasError):
    """Operation requires a grid with exactly one load."""


class OracleScaleExceeded(GridfeasError):
    """Brute-force solution enumeration requested beyond its documented limit."""


# --- stability / feasibility ---------------------------------------------------

class LambdaNotInLambda(GridfeasError):
    """Direction vector for which the scaled conductance form is not
    positive definite."""


class LambdaNotInLambda1(LambdaNotInLambda):
    """Normalized direction vector outside the admissible interior set."""


class NotSemiStable(GridfeasError):
    """Operating point is not long-term voltage semi-stable; the voltage
    parametrization does not apply."""


class StepSizeUnderflow(GridfeasError):
    """Continuation stalled before the verdict could be classified."""


class NoCrossingFound(GridfeasError):
    """Ray stayed inside the feasible set up to the scan cap."""


class NotTwoLoads(GridfeasError):
    """Boundary scan requires a grid with exactly two loads."""


class NonPositiveNu(GridfeasError):
    """Certificate weight vector must be strictly positive."""
