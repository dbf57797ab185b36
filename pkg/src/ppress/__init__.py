"""ppress: prediction-driven lossless text compression toolkit.

An integer arithmetic coder is fed next-token distributions by a pluggable
predictor (flat, adaptive order-k byte context model, or an external
language model served over a local socket protocol), wrapped in a
self-describing container format, alongside corpus-analysis and
benchmarking machinery for studying what makes text compressible.
"""

from .container import Container, PredictorRegistry, compress, decompress
from .model import Alphabet, PredictorModel, QUANT_TOTAL, QuantizedDistribution, \
    TokenSequence, quantize
from .predictors import OrderKPredictor, RemotePredictor, UniformPredictor

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Container",
    "OrderKPredictor",
    "PredictorModel",
    "PredictorRegistry",
    "QUANT_TOTAL",
    "QuantizedDistribution",
    "RemotePredictor",
    "TokenSequence",
    "UniformPredictor",
    "compress",
    "decompress",
    "quantize",
    "__version__",
]
