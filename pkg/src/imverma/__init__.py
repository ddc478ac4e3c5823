"""Exact symbolic engine for untwisted simply-laced affine Kac-Moody algebras.

Builds the algebras with exact rational structure constants, quasi partitions
and natural parabolic subalgebras, Heisenberg Fock spaces, truncated
generalized imaginary Verma modules with singular-vector and cyclicity
certificates, free-field (Wakimoto) realizations verified against the
commutation relations, and the twisting-functor intertwiner.
"""

from .core_algebra import (
    AffineAlgebra, CENTRAL, DERIVATION, CartanType, El, Mode, Root,
    build_affine, cartan_mode, parse_cartan_type, real_mode,
)
from .partitions import (
    ParabolicSubalgebra, QuasiPartition, ValidationReport, levi_nat_borel,
    levi_orthogonal, levi_zero_borel, natural_borel, natural_parabolic,
    natural_partition, omega_height, phi_partition, standard_partition,
    validate_quase_partition, extensional_partition,
)
from .heisenberg_fock import (
    DiagonalTensor, FockModule, HeisenbergBasis, ModuleDomainError,
    PerOscillatorSpec, PhiSpec, StandardSpec, TensorModule, TrivialModule,
    TwoSumsReport, WeightModule, ZeroActionModule, check_admissible,
    diagonal_tensor, fock_module, heis_two_sums, heisenberg_basis,
    oscillator_element, tensor_module,
)
from .induced import (
    BoxSpec, Certificate, InducedModule, cyclicity_certificate, induce,
    only_generator_singular, singular_vectors,
)
from .wakimoto import (
    WakimotoMap, WakimotoModule, WeylPoly, build_realization, character_match,
    imaginary_wakimoto_functor, match_to_verma, seed_keys, verify_homomorphism,
    wakimoto_module, weyl_product,
)
from .twisting import (
    IntertwineReport, TwistSlice, UbarWords, eta_backward, eta_forward,
    twist_vector, verify_intertwining,
)

__version__ = "0.1.0"
