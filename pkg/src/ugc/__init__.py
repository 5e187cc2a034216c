"""Universal graph compressor for stochastic block models.

Typical use::

    from ugc import load_edgelist, compress, decompress
    g = load_edgelist("graph.txt")
    blob = compress(g, k=2)
    assert decompress(blob) == g
"""

__version__ = "0.1.0"

from .container import compress, compressed_bits, decompress, default_k
from .errors import (
    ContainerFormatError,
    CorruptDataError,
    EdgeListError,
    TruncatedStreamError,
    UgcError,
)
from .graph import LabeledGraph, load_edgelist, read_edgelist, write_edgelist
from .probmodel import Mode
from .sbm import SbmParams, erdos_renyi, sample_sbm, scaled_params, symmetric_sbm

__all__ = [
    "__version__",
    "compress",
    "compressed_bits",
    "decompress",
    "default_k",
    "ContainerFormatError",
    "CorruptDataError",
    "EdgeListError",
    "TruncatedStreamError",
    "UgcError",
    "LabeledGraph",
    "load_edgelist",
    "read_edgelist",
    "write_edgelist",
    "Mode",
    "SbmParams",
    "erdos_renyi",
    "sample_sbm",
    "scaled_params",
    "symmetric_sbm",
]
