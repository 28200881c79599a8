"""Exception hierarchy.

Every error carries a short machine-readable ``category`` that the CLI
reports alongside a nonzero exit code.
"""


class PurifierError(Exception):
    category = "error"
    exit_code = 1


class ConfigError(PurifierError, ValueError):
    category = "config"
    exit_code = 2


class InvalidPartition(PurifierError, ValueError):
    category = "invalid_partition"
    exit_code = 3


class InvalidQuantile(PurifierError, ValueError):
    category = "invalid_quantile"
    exit_code = 3


class EmptyInput(PurifierError, ValueError):
    category = "empty_input"
    exit_code = 3


class AlignmentError(PurifierError, ValueError):
    category = "alignment"
    exit_code = 3


class DimensionError(PurifierError, ValueError):
    category = "dimension"
    exit_code = 3


class FitError(PurifierError, RuntimeError):
    category = "fit"
    exit_code = 4


class DivergenceUndefined(PurifierError, ValueError):
    category = "divergence_undefined"
    exit_code = 3


class UndefinedMetric(PurifierError, ValueError):
    category = "undefined_metric"
    exit_code = 5
