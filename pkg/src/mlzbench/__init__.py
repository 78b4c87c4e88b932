"""Workbench for integrable multistate Landau-Zener models of the t/tau family."""

from .integrability import scan_parameter, solve_partner, verify_flow, verify_pair, zero_area_check
from .linalg import commutator, frobenius_norm, solve_linear, sym_eigen
from .models import (
    DiabaticModel,
    TtauPartner,
    assemble_H,
    assemble_Hprime,
    build_bowtie,
    build_demkov_osherov,
    build_fermion,
    build_h5,
    build_h6,
    build_lz2,
    build_tavis_cummings,
    spin_identity_report,
)
from .propagator import propagate, tau_sweep, transition_matrix
from .semiclassical import build_diagram, compare_with_numerics, predict_probabilities
from .spectrum import crossing_count_check, diabatic_crossings, eigenflow, find_exact_crossings

__version__ = "0.1.0"
