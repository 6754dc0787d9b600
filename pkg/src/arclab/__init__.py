"""arclab: exact finite-field experiments around major arcs, exponential sums
and the first page of the configuration-space spectral sequence."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
