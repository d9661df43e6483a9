"""Core entropy, kneading polynomials and Master Teapots for principal veins."""

from .angles import Angle, angle_to_itineraries, classify, orbit, rotation_cycle
from .polyalg import IntPolynomial, charpoly, root_set_distance, roots, tip_growth_rate
from .wedge import (
    build_wedge,
    finite_model,
    growth_rate_from_wedge,
    quotient_charpoly_ratio,
    thurston_polynomial,
    truncated_spectral_determinant,
)
from .words import (
    BinaryWord,
    FullWord,
    InfiniteWord,
    SimplifiedWord,
    enumerate_vein_itineraries,
    is_admissible,
    is_minimal,
    is_realizable,
    q_recode,
    recode,
    recode_inverse,
    substitution_D,
    twisted_lex_compare,
)
from .kneading import (
    affine_model,
    finite_word_kneading_polynomial,
    kneading_determinant,
    kneading_polynomial,
    mt_kneading_polynomial,
    parry_polynomial,
    tune,
    tuned_entropy,
)
from .markov import markov_matrix, markov_polynomial, star_tree_model
from .teapot import PointCloud, TeapotPoint, generate, persistence_probe, z_of_lambda

__version__ = "0.1.0"
