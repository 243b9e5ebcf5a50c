"""fraudbench: desk-scale benchmarking of binary classifiers on massively
imbalanced, PCA-obfuscated transaction data.

Subpackages map to the pipeline stages: matrixcore (SVD + seeded randomness),
datasets (loading/synthesis/rebalancing), pca (obfuscation), resampling,
classifiers (the 14-model zoo), metricsplits (imbalance-aware scoring and
stratified splits), noisecompound (annotation-noise error decomposition),
and harness (experiment grids, report emission, CLI).
"""

from fraudbench._kernels import BACKEND as KERNEL_BACKEND
from fraudbench.errors import CapabilityError, ContractError, FraudBenchError, NumericalError

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "FraudBenchError",
    "ContractError",
    "CapabilityError",
    "NumericalError",
    "__version__",
]
