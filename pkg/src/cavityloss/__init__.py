"""Cavity-enhanced collective emission and radiative-escape trap loss.

Simulates how a resonant optical cavity speeds up spontaneous emission of a
singly-excited, entangled ensemble of cold-atom quasimolecules, and what that
does to radiative-escape loss from a shallow optical trap.
"""
from .units import RB85, AtomSpecies, convert, quasimolecule_linewidth
from .kinematics import (
    PairPotential,
    CollisionGeometry,
    collision_times,
    condon_point,
    excitation_shell_width,
    excited_pair_count,
    inner_resonant_radius,
    traversal_time,
)
from .cavity import (
    CavityGeometry,
    ResonatorMode,
    build_modes,
    clip_loss,
    enhancement_factor,
    line_shape,
    mode_profile,
    mode_solid_angle,
    transverse_overlap,
)
from .ensemble import (
    CloudGeometry,
    EntangledEnsemble,
    QuasimoleculePair,
    build_entangled_state,
    coupling,
    ensemble_from_pairs,
    sample_dipoles,
    sample_positions,
)
from .emission import (
    EmissionResult,
    collective_rate,
    effective_solid_angle,
    emission_rate_general,
    monte_carlo_emission,
)
from .loss import LossResult, loss_probability, loss_series, suppression_pipeline
from .scenario import Scenario, load_scenario, save_scenario, scenario_hash
from .errors import ConfigError, DegenerateStateError, NumericalError, SimulationError

__version__ = "0.1.0"
