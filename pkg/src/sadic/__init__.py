"""Exact certificates and invariants for substitution-generated subshifts."""

from .balance import (
    BalanceReport,
    ClassifierConfig,
    DiscrepancyProfile,
    balance_dashboard,
    factor_discrepancy,
    frequency_rank,
    letter_discrepancy,
)
from .dimgroup import (
    DimensionGroupDescriptor,
    ExactMeasure,
    ImageSubgroupGenerators,
    InfinitesimalLattice,
    MeasureEnclosure,
    SoeResult,
    cone_membership,
    descriptor,
    descriptor_from_measures,
    image_subgroup_generators,
    infinitesimal_lattice,
    integer_kernel,
    lll_reduce,
    matrix_inverse_unimodular,
    soe_test,
)
from .directive import (
    DirectiveSequence,
    SequenceCertificate,
    aperiodicity_witness,
    certify,
    properize,
    telescope,
    telescope_matrix,
)
from .errors import Inconclusive
from .language import (
    BasisVerdict,
    DendricVerdict,
    ExtensionGraph,
    LanguageTable,
    build_language,
    complexity,
    derived_step,
    extension_graph,
    fixed_point_prefix,
    free_basis_check,
    is_dendric,
    return_words,
    table_from_text,
)
from .measures import (
    MeasureCone,
    ProbeNotUnique,
    ProbeReport,
    cone_at,
    cone_sweep,
    ergodicity_probe,
    letter_measure_enclosure,
    nesting_coefficients,
)
from . import families
from .quadratic import Quad, sqrt5
from .words import (
    Alphabet,
    IntMatrix,
    Morphism,
    Properness,
    abelianization,
    count_occurrences,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BalanceReport",
    "BasisVerdict",
    "ClassifierConfig",
    "DendricVerdict",
    "DimensionGroupDescriptor",
    "DirectiveSequence",
    "DiscrepancyProfile",
    "ExactMeasure",
    "ExtensionGraph",
    "ImageSubgroupGenerators",
    "Inconclusive",
    "InfinitesimalLattice",
    "IntMatrix",
    "LanguageTable",
    "MeasureCone",
    "MeasureEnclosure",
    "Morphism",
    "ProbeNotUnique",
    "ProbeReport",
    "Properness",
    "Quad",
    "SequenceCertificate",
    "SoeResult",
    "abelianization",
    "aperiodicity_witness",
    "balance_dashboard",
    "build_language",
    "certify",
    "complexity",
    "cone_at",
    "cone_membership",
    "cone_sweep",
    "count_occurrences",
    "derived_step",
    "descriptor",
    "descriptor_from_measures",
    "ergodicity_probe",
    "extension_graph",
    "factor_discrepancy",
    "families",
    "fixed_point_prefix",
    "free_basis_check",
    "frequency_rank",
    "image_subgroup_generators",
    "infinitesimal_lattice",
    "integer_kernel",
    "is_dendric",
    "letter_discrepancy",
    "letter_measure_enclosure",
    "lll_reduce",
    "matrix_inverse_unimodular",
    "nesting_coefficients",
    "properize",
    "return_words",
    "soe_test",
    "sqrt5",
    "table_from_text",
    "telescope",
    "telescope_matrix",
]
