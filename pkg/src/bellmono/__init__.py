"""Bell nonlocality of reduced and locally filtered multi-qubit states."""

from .bell import CoefficientTensor, MeasurementSettings, bell_value, catalog, get_inequality, optimize_bell
from .criteria import correlation_matrix, horodecki_m, max_chsh_value, ppt_min_eigenvalue
from .errors import (
    ArgumentError,
    BellmonoError,
    CapacityError,
    ContractError,
    DegenerateFilterError,
    ShapeError,
)
from .filters import FilterMode, LocalFilter, apply_filter, chsh_filter_threshold
from .library import SymmetricStateParams, ghz_state, reduced_w, symmetric_reduced, symmetric_state, w_state
from .monogamy import MonogamyMode, MonogamyReport, chsh_monogamy, multipartite_monogamy

__version__ = "0.1.0"
