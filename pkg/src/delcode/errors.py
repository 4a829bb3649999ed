"""Exception types shared across the package.

Decoding failures are not exceptions: decoders return ``None`` ("Fail") for
any anomaly in otherwise legal input. Exceptions are reserved for caller
contract violations (bad arguments, unsatisfiable parameters, capacity caps).
"""


class DelcodeError(ValueError):
    """Base class for all delcode contract errors."""


class ParameterError(DelcodeError):
    """A derived or supplied parameter set violates a required inequality."""


class CapacityError(DelcodeError):
    """A size cap was exceeded (table length, field capacity, enumeration cap)."""


class MixednessError(DelcodeError):
    """A string expected to be mixed has an oversize pattern-free stretch."""


class FormatError(DelcodeError):
    """A serialized artifact (digest, table file, parameter file) is malformed."""
