"""Exception hierarchy shared by all simspace modules.

Two branches matter for the CLI exit codes: ``ValidationError`` (bad
input data or arguments, exit code 1) and ``ExecutionError`` (failures
while doing otherwise-valid work, exit code 2).
"""


class SimspaceError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SimspaceError):
    """Input data or arguments violate a documented precondition."""


class ExecutionError(SimspaceError):
    """Valid inputs, but the operation could not be carried out."""


# --- data-model ---

class MalformedCsv(ValidationError):
    """CSV cell is non-numeric, rows are ragged, or a header is wrong."""


class AsymmetricMatrix(ValidationError):
    """Dissimilarity matrix asymmetry exceeds the 1e-9 tolerance."""


class NonzeroDiagonal(ValidationError):
    """Dissimilarity matrix has a nonzero self-dissimilarity."""


class NegativeEntry(ValidationError):
    """Dissimilarity matrix contains a negative value."""


class DegenerateConfiguration(ValidationError):
    """All points coincide, so scale (or stress) is undefined."""


class LabelMismatch(ValidationError):
    """Two label sets that must agree do not."""


class IoError(ExecutionError):
    """File could not be read or written."""


# --- monotone regression ---

class EmptyInput(ValidationError):
    """An operation received an empty vector."""


class NonpositiveWeight(ValidationError):
    """Weights for a weighted fit must all be positive."""


# --- distances / correlation ---

class DimensionMismatch(ValidationError):
    """Vector or matrix dimensions are inconsistent."""


class ConstantInput(ValidationError):
    """Correlation of a zero-variance vector is undefined."""


class FoldTooSmall(ValidationError):
    """Cross-validation would produce an empty fold."""


class DegenerateWeights(UserWarning):
    """NNLS hit the boundary: all weights zero (warning, not an error)."""


# --- images ---

class UnsupportedFormat(ValidationError):
    """Image file is not PNG or JPEG."""


class DecodeError(ValidationError):
    """Image file exists but cannot be decoded."""


class InvalidBlockSize(ValidationError):
    """Block size for downscaling is out of range."""


# --- regression harness ---

class EmptyTrainingSet(ValidationError):
    """A regressor was fit on zero rows."""


class ShapeMismatch(ValidationError):
    """Predictions and targets have incompatible shapes."""


class IndivisibleGroups(ValidationError):
    """Groups cannot be split into equal folds."""
