"""Quantum passage times: when does a state first evolve into an orthogonal one?"""
from .bounds import (BoundsReport, bounds_report, fleming_bound, margolus_levitin_bound,
                     passage_time_family, two_level_passage)
from .ensemble import (DensityMatrix, Ensemble, EnsemblePassage, density_matrix,
                       ensemble_passage, ensemble_passage_time, evolve_density,
                       make_ensemble, two_level_member, verify_member_orthogonality)
from .errors import (DimensionMismatch, EigenstateInput, EmptyState, EvenK,
                     IncommensurateEnsemble, InvalidWindow, NotTwoLevelEqual, PassageError,
                     ZeroNorm, ZeroVector)
from .geometry import (ProjectivePoint, aa_speed, equator_phase, evolve, fs_distance,
                       geodesic_check, path_length)
from .rational import RationalStructure, analyze, approximate_rational, odd_odd_ratio
from .solver import (Attainment, Method, PassageResult, classify_attainment, find_passage,
                     survival_scan)
from .state import (EnergyState, SurvivalSample, energy_dispersion, energy_mean, make_state,
                    survival_amplitude)

__version__ = "0.1.0"
