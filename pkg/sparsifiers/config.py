"""sparsifiers.config

Resolved run configuration: the SPARSIFY settings block overlaid with the
options given on the command line.
"""
import math
from dataclasses import asdict, dataclass

from django.conf import settings

from hypergraphs.exceptions import InvalidInstanceError
from hypergraphs.seeding import validate_seed

RANDOMIZED_COMMANDS = ('sparsify_cut', 'sparsify_spectral', 'sparsify_hyper', 'calibrate')

# command-line option -> SPARSIFY key
CONSTANT_OPTIONS = {
    'c_iter': 'C_ITER',
    'c_t': 'C_T',
    'c_l': 'C_L',
    'eta_constant': 'ETA_CONSTANT',
    'threshold_constant': 'THRESHOLD_CONSTANT',
    'resample_cap_factor': 'RESAMPLE_CAP_FACTOR',
    'resample_retries': 'RESAMPLE_RETRIES',
    'slack': 'CERTIFICATE_SLACK',
    'trials': 'RANDOM_TRIALS',
}


def validate_epsilon(epsilon):
    epsilon = float(epsilon)
    if not (0 < epsilon <= 1) or math.isnan(epsilon):
        raise InvalidInstanceError(f"epsilon must lie in (0, 1], got {epsilon}")
    return epsilon


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilon: float
    seed: int
    c_iter: float
    c_t: float
    c_l: float
    eta_constant: float
    threshold_constant: float
    resample_cap_factor: float
    resample_retries: int
    slack: float
    trials: int
    max_dense_vertices: int
    max_det_vertices: int
    max_brute_force_vertices: int
    max_exhaustive_multiplicative_vertices: int
    input_path: str = None
    output_path: str = None
    report_path: str = None

    def __post_init__(self):
        object.__setattr__(self, 'epsilon', validate_epsilon(self.epsilon))
        if self.command in RANDOMIZED_COMMANDS:
            object.__setattr__(self, 'seed', validate_seed(self.seed))
        elif self.seed is not None:
            object.__setattr__(self, 'seed', validate_seed(self.seed))

    @classmethod
    def resolve(cls, command, epsilon, seed=None, input_path=None, output_path=None, report_path=None, **options):
        """Settings values, replaced by every option that is not None."""
        block = settings.SPARSIFY
        values = {}
        for option, key in CONSTANT_OPTIONS.items():
            given = options.get(option)
            values[option] = block[key] if given is None else type(block[key])(given)
        return cls(
            command=command,
            epsilon=epsilon,
            seed=seed,
            max_dense_vertices=block['MAX_DENSE_VERTICES'],
            max_det_vertices=block['MAX_DET_VERTICES'],
            max_brute_force_vertices=block['MAX_BRUTE_FORCE_VERTICES'],
            max_exhaustive_multiplicative_vertices=block['MAX_EXHAUSTIVE_MULTIPLICATIVE_VERTICES'],
            input_path=None if input_path is None else str(input_path),
            output_path=None if output_path is None else str(output_path),
            report_path=None if report_path is None else str(report_path),
            **values,
        )

    def as_dict(self):
        return asdict(self)
