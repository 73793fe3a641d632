"""Exception types shared across the package."""


class TransdimError(Exception):
    """Base class for all package errors."""


class DimensionBoundsError(TransdimError):
    """Current dimension lies outside [1, k_max]."""


class MoveUnavailableError(TransdimError):
    """A birth/death move was requested at a dimension where it cannot apply."""


class JumpSizeError(TransdimError):
    """Jump size m is structurally impossible for the current state."""


class BlockMismatchError(TransdimError):
    """Related parameter blocks do not share a common dimension."""


class InvalidStateError(TransdimError):
    """The chain's current state has a non-finite log density."""


class GridMismatchError(TransdimError):
    """Two density samples were evaluated on different grids."""


class DatasetError(TransdimError):
    """A data source could not be read or parsed."""


class ConfigError(TransdimError):
    """A run configuration failed validation."""
