"""Linear-chain QAOA for MaxCut: graphs, circuits, simulation and the variational loop."""

from ._kernels import BACKEND, available_backends, set_backend
from .circuit import (Circuit, CouplingMap, DurationModel, Gate, build_lc_ansatz, build_original_ansatz,
                      heavy_hex_like, linear_map, metrics, route_greedy)
from .errors import LCQAOAError
from .graph import Chain, Cut, Graph, chain_prefix, cut_value, exact_maxcut, find_chain, generate_random_regular
from .ising import CostDiagonal, IsingModel, build_diagonal, build_ising, energy
from .optimize import OptRun, minimize_cobyla_like
from .simulator import NoiseSpec, SampleSet, StateVector, noisy_run, run_circuit, sample
from .vqa import AnsatzSpec, Mode, ParamSchedule, fourier_ladder, optimize_qaoa

__version__ = "0.1.0"
