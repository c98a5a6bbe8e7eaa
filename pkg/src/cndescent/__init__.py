"""2-isogeny descent on the congruent-number curves y^2 = x(x^2 - k^2).

The package computes Selmer groups by checking local solvability of the
descent torsors, certifies elements of the Tate-Shafarevich group through
residue-symbol criteria, and turns the two into rank bounds: when the
upper bound is zero, k is certified non-congruent. Everything decidable
by symbols alone lives in `criteria`; `classfield` provides independent
class-group oracles for the same predicates; `survey` scales the
classification over families and carries the frozen reference data.
"""

from .arith import half_symbols, jacobi, octic_minus4, primes_in, quartic_symbol
from .classfield import (
    form_class_group,
    fourth_power_class_test,
    fundamental_unit,
    pell_solvable,
    scholz_case,
    strict_two_principal,
)
from .criteria import (
    ALL_PROFILES,
    Classification,
    ResidueProfile,
    check_witness,
    classify_2p,
    classify_11_minus,
    classify_11_plus,
    classify_auto,
    classify_profile,
    classify_small_residues,
    decompose_psi_point,
    residue_profile,
)
from .descent import (
    PHI,
    PSI,
    DescentReport,
    Torsor,
    TorsorPoint,
    descend,
    enumerate_torsors,
    locally_solvable,
    search_points,
    selmer_group,
)
from .errors import DescentError
from .quadring import (
    GAUSS,
    SQRT2,
    SQRTM2,
    primary_associate,
    ring_symbol,
    split_prime,
    symbol_capital,
)
from .sqclass import SquareClassGroup
from .survey import (
    REFERENCE_GRID,
    FamilySpec,
    run_survey,
    smallest_example,
    verify_reference,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_PROFILES",
    "Classification",
    "DescentError",
    "DescentReport",
    "FamilySpec",
    "GAUSS",
    "PHI",
    "PSI",
    "REFERENCE_GRID",
    "ResidueProfile",
    "SQRT2",
    "SQRTM2",
    "SquareClassGroup",
    "Torsor",
    "TorsorPoint",
    "check_witness",
    "classify_2p",
    "classify_11_minus",
    "classify_11_plus",
    "classify_auto",
    "classify_profile",
    "classify_small_residues",
    "decompose_psi_point",
    "descend",
    "enumerate_torsors",
    "form_class_group",
    "fourth_power_class_test",
    "fundamental_unit",
    "half_symbols",
    "jacobi",
    "locally_solvable",
    "octic_minus4",
    "pell_solvable",
    "primary_associate",
    "primes_in",
    "quartic_symbol",
    "residue_profile",
    "ring_symbol",
    "run_survey",
    "scholz_case",
    "search_points",
    "selmer_group",
    "smallest_example",
    "split_prime",
    "strict_two_principal",
    "symbol_capital",
    "verify_reference",
]
