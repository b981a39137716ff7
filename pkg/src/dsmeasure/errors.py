"""Exception types raised across the package.

Every error is a subclass of DsmeasureError so callers can catch the whole
family; parsing/validation errors additionally subclass ValueError.
"""


class DsmeasureError(Exception):
    """Base class for all dsmeasure errors."""


class InputError(DsmeasureError, ValueError):
    """Base class for invalid-input errors."""


# --- numeric kernels -------------------------------------------------------

class EmptyInput(InputError):
    pass


class CropOutOfRange(InputError):
    pass


class InsufficientData(InputError):
    pass


class DegenerateStatistics(InputError):
    pass


class ConstantSeries(InputError):
    pass


class LengthMismatch(InputError):
    pass


class ZeroSupport(InputError):
    pass


class NotAPeak(InputError):
    pass


class NonFiniteInput(InputError):
    pass


# --- windowing / autoencoder ----------------------------------------------

class SeriesTooShort(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DivergedTraining(DsmeasureError):
    pass


# --- multi-scale measure ---------------------------------------------------

class EmptyGrid(InputError):
    pass


class WindowOutOfRange(InputError):
    pass


class CurveShorterThanScale(InputError):
    pass


class InsufficientScales(InputError):
    pass


class NoUsableScales(InputError):
    pass


class ConstantInput(InputError):
    pass


# --- synthetic generators --------------------------------------------------

class InvalidParameter(InputError):
    pass


# --- ingestion ---------------------------------------------------------------

class MalformedCsv(InputError):
    pass


class EmptyTable(InputError):
    pass


class UnknownLabel(InputError):
    pass


class DuplicateSubject(InputError):
    pass


class MissingFile(InputError):
    pass


class BadMagic(InputError):
    pass


class UnsupportedDatatype(InputError):
    pass


class TruncatedData(InputError):
    pass


class DimMismatch(InputError):
    pass


class EmptyMask(InputError):
    pass


# --- classification harness -------------------------------------------------

class InconsistentRoiSets(InputError):
    pass


class MissingDs(InputError):
    pass


class MissingValue(InputError):
    pass


class SingleClassTraining(InputError):
    pass


class NonFiniteLoss(DsmeasureError):
    pass


class TooFewPerClass(InputError):
    pass


class EmptyEvaluation(InputError):
    pass


# --- projections -------------------------------------------------------------

class DegenerateCovariance(InputError):
    pass


class PerplexityTooLarge(InputError):
    pass


class WrongColumnCount(InputError):
    pass


# --- reporting ----------------------------------------------------------------

class MissingPairing(InputError):
    pass
