"""Exception types shared across the package."""


class DwsetError(Exception):
    """Base class for all library errors."""


class IndeterminateValue(DwsetError):
    """A 0/0 evaluation that reduction could not resolve (degenerate map)."""


class DegreeOverflow(DwsetError):
    """Composition would exceed the degree cap; iterate pointwise instead."""


class RootFindingDivergence(DwsetError):
    """The simultaneous root iteration failed to meet its residual target."""


class NotDiskAutomorphism(DwsetError):
    """The supplied conjugating map does not restrict to an automorphism of the unit disk."""


class PoleInClosedDisk(DwsetError):
    """The map has a pole inside the closed unit disk, so it cannot map the disk into itself."""


class NoRepellingFixedPoint(DwsetError):
    """Neither the map nor its second iterate has a repelling periodic point to seed inverse iteration."""


class DegenerateBounds(DwsetError):
    """A raster rectangle with non-positive width or height."""


class SpecFileError(DwsetError):
    """A generator spec file failed to parse or validate; message carries the location."""
