"""H-type groups with an indefinite horizontal metric: generators, spectra and geodesics."""
from .algebra import (CausalType, GroupElement, HTypeAlgebra, Signature, Velocity, bracket,
                      causal_type, group_multiply, inner_v, make_algebra)
from .clifford import (GeneratorSet, build_generators, heisenberg_generators, hurwitz_radon,
                       octonion_generators, validate_generators)
from .errors import HTypeError
from .geodesic import (GeodesicSolution, Trajectory, evaluate, momentum, projection_residuals,
                       sample, solve_geodesic, speed_squared)
from .spectral import SpectralData, char_poly, char_poly_oracle, classify_spectrum

__version__ = "0.1.0"
