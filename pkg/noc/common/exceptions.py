class NocError(Exception):
    """Base class for every error raised by the toolkit."""


class ParameterError(NocError, ValueError):
    """A value object or model function received arguments outside its domain."""


class DesignValidationError(NocError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            "Design failed validation: "
            + "; ".join(str(violation) for violation in report.violations)
        )


class InfeasibleSpecError(NocError):
    """The requested instance cannot be built under its constraints."""


class InstanceTooLargeError(InfeasibleSpecError):
    pass


class NoFeasibleNeighbor(NocError):
    """Every perturbation draw within the retry budget produced an invalid design."""


class TrafficFileError(NocError):
    code = "traffic_file"

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class TrafficHeaderError(TrafficFileError):
    code = "header"


class MalformedRowError(TrafficFileError):
    code = "malformed_row"


class IndexOutOfRangeError(TrafficFileError):
    code = "index_out_of_range"


class DuplicatePairError(TrafficFileError):
    code = "duplicate_pair"


class NegativeWeightError(TrafficFileError):
    code = "negative_weight"


class SelfTrafficError(TrafficFileError):
    code = "self_traffic"
