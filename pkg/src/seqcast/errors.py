"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes: usage problems exit 1, data and model
file problems exit 2, numeric failures exit 3.
"""


class SeqcastError(Exception):
    """Base class for every error raised by this library."""


class DimensionError(SeqcastError):
    """Operand shapes are incompatible; message carries both shapes."""


class DataError(SeqcastError):
    """A dataset violates the input contract (CSV or record level)."""


class MissingColumnError(DataError):
    """The CSV header lacks a required column."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing required column: {column}")


class BadCellError(DataError):
    """A CSV cell failed numeric parsing; reports row and column."""

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a number")


class ModelFileError(SeqcastError):
    """Base class for model file problems."""


class MalformedModelError(ModelFileError):
    """The file is not a complete, well-formed model container."""


class ModelVersionError(ModelFileError):
    """The container declares a format version this build cannot read."""


class ModelShapeError(ModelFileError):
    """Declared dimensions and stored arrays disagree."""


class DivergedError(SeqcastError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, sample_index: int):
        self.epoch = epoch
        self.sample_index = sample_index
        super().__init__(
            f"training diverged: non-finite loss at epoch {epoch}, sample {sample_index}"
        )
