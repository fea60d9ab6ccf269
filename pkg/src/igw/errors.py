"""Exception hierarchy shared across the library.

Every error raised by igw derives from IgwError, so callers (and the CLI)
can distinguish validation failures from genuine bugs.
"""


class IgwError(Exception):
    """Base class for all igw errors."""


# -- graph construction and diffusion ------------------------------------

class IndexOutOfRange(IgwError):
    """Edge endpoint outside [0, n_nodes)."""


class NonPositiveWeight(IgwError):
    """Edge weight must be strictly positive."""


class SelfLoopEdge(IgwError):
    """Self-loops are not representable (the diagonal stays empty)."""


class InconsistentEdge(IgwError):
    """The same undirected edge was given twice with different weights."""


class IsolatedNode(IgwError):
    """A node with degree zero; the walk matrix would be undefined."""


class DegenerateDegree(IgwError):
    """Zero degree encountered while building the diffusion operator."""


class DimensionMismatch(IgwError):
    """Operand shapes do not line up."""


# the LEGS selector uses this name for its shape checks
DimensionError = DimensionMismatch


class InvalidScale(IgwError):
    """A diffusion scale outside the valid range."""


class ScaleExceedsStack(IgwError):
    """A requested scale is larger than the diffusion stack holds."""


class UnknownActivation(IgwError):
    """Activation name not in the registry."""


# -- information-gain scale selection -------------------------------------

class ConstantVector(IgwError):
    """Min-max normalization is undefined on a constant vector."""


class ShapeMismatch(IgwError):
    """Divergence tables with differing (t, channel) shapes."""


class MissingLabels(IgwError):
    """Class balancing requested but the dataset has no labels."""


class DegenerateRange(IgwError):
    """A cumulative information curve with zero spread."""


class UninformativeChannel(IgwError):
    """Scale selection requested on a channel flagged uninformative."""


class AllChannelsUninformative(IgwError):
    """No channel produced a usable information curve."""


class EmptyDataset(IgwError):
    """Dataset with no graphs."""


# -- dataset ingestion and serialization ----------------------------------

class MissingFile(IgwError):
    """A required dataset file is absent."""


class MalformedLine(IgwError):
    """Unparseable dataset line; carries file and 1-based line number."""

    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason


class DanglingEdge(IgwError):
    """An edge whose endpoints belong to different graphs."""


class EmptyGraph(IgwError):
    """A graph id with no nodes assigned to it."""


class SchemaError(IgwError):
    """JSON dataset schema violation; carries a JSON-pointer path."""

    def __init__(self, pointer, reason):
        super().__init__(f"{pointer}: {reason}")
        self.pointer = pointer
        self.reason = reason


class IoError(IgwError):
    """Filesystem failure during import/export."""


# -- classifier ------------------------------------------------------------

class NonFinite(IgwError):
    """Training loss diverged to a non-finite value."""
