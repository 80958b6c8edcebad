class FileExtensionError(Exception):
    pass


class FolderNotFoundError(Exception):
    pass


class InvalidGeometryError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


class InvalidMaskError(ValueError):
    pass


class DepthInitializationError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


class HistoryNotReadyError(RuntimeError):
    pass


class IngestionError(Exception):
    pass


class FrameReadError(OSError):
    pass


class EvaluationError(ValueError):
    pass


class SyntheticSpecError(ValueError):
    pass


class TrackingError(RuntimeError):
    pass
