"""Exception hierarchy shared by every mlcore module."""


class MlcoreError(Exception):
    """Base class for all mlcore errors."""


class InvalidData(MlcoreError):
    """Input array failed validation (non-finite entries, empty, wrong ndim)."""


class ShapeMismatch(MlcoreError):
    """Operands have incompatible shapes or dimensions."""


class InvalidLabels(MlcoreError):
    """Label vector unusable for the requested task."""


class InvalidFoldCount(MlcoreError):
    """Fold count outside 2 <= k <= n."""


class InvalidSplit(MlcoreError):
    """Train/test split would leave one side empty."""


class InvalidParameter(MlcoreError):
    """Hyperparameter outside its admissible range."""


class NotConverged(MlcoreError):
    """Iterative solver hit its iteration cap before meeting tolerance.

    The exception carries the last iterate so callers can inspect or
    salvage it.
    """

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model


class SingularCovariance(MlcoreError):
    """Covariance or scatter matrix not invertible at the given regularization."""


class UnsupportedKernel(MlcoreError):
    """Operation requires a kernel kind the model was not trained with."""


class InvalidLists(MlcoreError):
    """Ranked lists do not share length or universe."""


class InvalidLength(MlcoreError):
    """Signal length incompatible with the requested transform."""


class InvalidCoefficients(MlcoreError):
    """Wavelet coefficient structure inconsistent."""


class InvalidWindow(MlcoreError):
    """Band constraint makes the warping endpoint unreachable."""


class ParseError(MlcoreError):
    """Malformed CSV input; message names the offending row/column."""


class FormatError(MlcoreError):
    """Serialized model stream corrupt, truncated or of unknown version/kind."""


class TrainerError(MlcoreError):
    """A wrapped trainer failed during feature elimination.

    ``features`` records the feature subset active when the failure occurred.
    """

    def __init__(self, message, features=None):
        super().__init__(message)
        self.features = None if features is None else tuple(features)
