"""Continual multi-view clustering with a category memory library."""

from ._kernels import BACKEND
from .core import (
    AbsorbResult,
    CacConfig,
    CacState,
    CacWorkspace,
    ContinualClusterer,
    absorb_view,
    cac_init,
    final_labels,
    objective,
    update_alignment,
    update_assignment,
    update_memory,
)
from .errors import (
    CacError,
    DegenerateData,
    GenerationFailure,
    InvalidInput,
    NumericalFailure,
    ParseError,
)
from .kernels import KernelSpec, ViewData, build_kernel, combine_kernels
from .metrics import accuracy, evaluate, nmi, purity
from .partition import kernel_kmeans_partition, linear_partition, view_partition
from .synth import SynthSpec, generate

__version__ = "0.1.0"
