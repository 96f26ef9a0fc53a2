"""Catalytic ground-state tomography on dense simulators."""
from .filters import Bump, Gaussian, StepFreq
from .linalg import EigenSystem, hermitian_eig, trace_distance, unitary_exp
from .models import build_random_gapped, build_single_qubit, build_tfim, spectral_data
from .protocol import (ProtocolParams, QPEConfig, TomographyResult, catalytic_tomography,
                       local_catalytic_tomography)

__version__ = "0.1.0"
