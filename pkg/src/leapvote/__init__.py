"""Two-party spatial elections on a finite policy line with abstention.

The library models an ordinal election game: two parties announce
platforms on a line of m policies, voters with attraction intervals
turn out only when a platform is acceptable to them, and parties rank
profiles lexicographically (electoral outcome first, own-platform
ideology second).  On top of that it provides exhaustive pure-strategy
equilibrium enumeration with order-reversal / mutual-leapfrog
classification, structural axiom checks, and seeded falsification
campaigns that hunt for counterexamples to the no-leapfrogging
conjectures.
"""

from .election import Tally, active_voters, deviation_table, outcome, tally
from .equilibrium import (
    EquilibriumRecord,
    best_responses,
    classify,
    enumerate_equilibria,
    is_nash,
)
from .fileio import (
    PAPER_EXAMPLE,
    ParseError,
    builtin_document,
    builtin_instance,
    builtin_names,
    instance_to_document,
    paper_example,
    parse_instance,
    serialize_instance,
)
from .kernels import BACKEND
from .model import (
    Instance,
    Outcome,
    Party,
    PartySpec,
    PolicySpace,
    Profile,
    ValidationError,
    VoterSpec,
    WeakOrder,
    is_single_peaked,
    mirror_instance,
    validate_instance,
)
from .preferences import (
    Comparison,
    CrossSideWitness,
    Displacement,
    Side,
    check_cross_side_agreement,
    compare_for_party,
    displace,
    from_common_shape,
    from_symmetric_utility,
    outcome_class,
)
from .search import (
    AttractionMode,
    CampaignReport,
    Conjecture,
    GenConfig,
    PartyMode,
    Violation,
    conclusion_violations,
    falsify,
    gen_instance,
    has_fixed_participation,
    precondition_holds,
    random_single_peaked_ranking,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # model
    "Instance",
    "Outcome",
    "Party",
    "PartySpec",
    "PolicySpace",
    "Profile",
    "ValidationError",
    "VoterSpec",
    "WeakOrder",
    "is_single_peaked",
    "mirror_instance",
    "validate_instance",
    # election
    "Tally",
    "active_voters",
    "deviation_table",
    "outcome",
    "tally",
    # preferences
    "Comparison",
    "CrossSideWitness",
    "Displacement",
    "Side",
    "check_cross_side_agreement",
    "compare_for_party",
    "displace",
    "from_common_shape",
    "from_symmetric_utility",
    "outcome_class",
    # equilibrium
    "EquilibriumRecord",
    "best_responses",
    "classify",
    "enumerate_equilibria",
    "is_nash",
    # search
    "AttractionMode",
    "CampaignReport",
    "Conjecture",
    "GenConfig",
    "PartyMode",
    "Violation",
    "conclusion_violations",
    "falsify",
    "gen_instance",
    "has_fixed_participation",
    "precondition_holds",
    "random_single_peaked_ranking",
    # fileio
    "PAPER_EXAMPLE",
    "ParseError",
    "builtin_document",
    "builtin_instance",
    "builtin_names",
    "instance_to_document",
    "paper_example",
    "parse_instance",
    "serialize_instance",
]
