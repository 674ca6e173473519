"""Wavelet denoising and hierarchical clustering of paired environmental time series."""

from .cluster import (ClusterResult, Dendrogram, DistanceMatrix, Merge, cluster_run,
                      correlation_distance, cut, distance_matrix, pairing_purity, ward_linkage)
from .prep import (DataError, RawSample, TimeSeries, impute, normalize_pmmov,
                   prepare_for_clustering, read_samples, regularize)
from .progressive import SmoothingResult, component, smooth, zero_details
from .synthetic import SyntheticConfig, generate_synthetic, shipped_config
from .wavelets import (CoefficientSet, WaveletFilter, dwt_single, get_wavelet, idwt_single,
                       make_daubechies, max_level, wavedec, waverec)

__version__ = "0.1.0"
