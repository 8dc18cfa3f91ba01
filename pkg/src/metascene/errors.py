"""Exception hierarchy for the metascene pipeline."""


class MetasceneError(Exception):
    """Base class for all metascene errors."""


class MetadataSyntaxError(MetasceneError):
    """The raw document is not valid UTF-8 JSON."""


class SchemaError(MetasceneError):
    """A document violates the schema: missing field, wrong type, unknown key
    or enum value, or an out-of-range value."""


class DanglingReferenceError(MetasceneError):
    """A record references a room, floor or device that is not declared."""


class DuplicateIdError(MetasceneError):
    """An identifier (or unordered pair) appears more than once."""


class UnknownMaterialError(MetasceneError):
    """A link crosses a wall material that is not in the material table."""


class ArgumentError(MetasceneError):
    """A generator or CLI argument is out of its allowed range."""


class EmptyRoomError(MetasceneError):
    """A room box was requested for a room with no device positions."""


class EmptyBuildingError(MetasceneError):
    """A building envelope was requested with no room boxes."""


class NonFiniteStateError(MetasceneError):
    """A simulation coordinate became NaN or infinite.

    Almost always means force constants are misconfigured (too stiff for
    the timestep)."""


class SceneFormatError(MetasceneError):
    """A scene document is malformed or violates its schema."""
