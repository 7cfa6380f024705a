"""
Top-level package initialization. Exposes main utilities for easy import.
"""
from .cluster import Cluster
from .complex import PlanarVortex, build_vortex, check_cw_conditions, vortex_to_space
from .conjugacy import (
    ConjugacyCertificate,
    ConjugacyMode,
    extend_certificate,
    search_conjugacy,
    transfer_fixed_subsets,
    transfer_iterates,
    verify_conjugacy,
)
from .dynamics import (
    FixedClass,
    FixedTag,
    OrbitRecord,
    classify_fixed,
    iterate,
    orbit,
    power_semigroup,
    scan_fixed_subsets,
    sink_contraction,
    vortex_fixed_point_check,
)
from .freegroup import GeneratorBasis, GroupWord, is_amenable_witness, vortex_group
from .maps import (
    ContinuityMode,
    PointMap,
    check_descriptive_continuity,
    check_isomorphism,
    check_proximal_continuity,
    invariance_closure_properties,
    is_desc_invariant,
)
from .reports import Check, Report, Verdict
from .settings import Limits
from .space import ProbeMap, ProximitySpace, check_cech_axioms
from .workspace import Workspace, load_workspace, parse_workspace, serialize_workspace

__version__ = "0.1.0"

__all__ = [
    "Check",
    "Cluster",
    "ConjugacyCertificate",
    "ConjugacyMode",
    "ContinuityMode",
    "FixedClass",
    "FixedTag",
    "GeneratorBasis",
    "GroupWord",
    "Limits",
    "OrbitRecord",
    "PlanarVortex",
    "PointMap",
    "ProbeMap",
    "ProximitySpace",
    "Report",
    "Verdict",
    "Workspace",
    "build_vortex",
    "check_cech_axioms",
    "check_cw_conditions",
    "check_descriptive_continuity",
    "check_isomorphism",
    "check_proximal_continuity",
    "classify_fixed",
    "extend_certificate",
    "invariance_closure_properties",
    "is_amenable_witness",
    "is_desc_invariant",
    "iterate",
    "load_workspace",
    "orbit",
    "parse_workspace",
    "power_semigroup",
    "scan_fixed_subsets",
    "search_conjugacy",
    "serialize_workspace",
    "sink_contraction",
    "transfer_fixed_subsets",
    "transfer_iterates",
    "verify_conjugacy",
    "vortex_fixed_point_check",
    "vortex_group",
    "vortex_to_space",
]
