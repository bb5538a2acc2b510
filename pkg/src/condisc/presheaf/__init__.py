"""Presheaves on towers, the adjunction with finite sets, and the
discreteness oracles."""

from .adjunction import (
    check_counit_natural_in_S,
    check_counit_natural_in_X,
    check_first_triangle,
    check_second_triangle,
    check_triangles,
    counit_component,
    equalizer_check,
    finite_level_comparison,
    finite_level_natural,
    transpose_to_presheaf,
    transpose_to_set,
    unit_component,
)
from .base import (
    DEFAULT_BUDGET,
    PresheafMorphism,
    TowerPresheaf,
    check_product_preservation,
    identity_morphism,
    underlying,
    validate_morphism,
)
from .builtin import (
    ConstantPresheafNaive,
    LocConstPresheaf,
    TowerHomPresheaf,
    parse_presheaf,
    presheaf_corpus,
    target_map_morphism,
)
from .reports import DiscretenessReport, colimit_condition_report, counit_iso_report
from .kan import KanReport, kan_comparison, surjection_inclusion_initial
