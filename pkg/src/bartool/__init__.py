"""Fan and bar calculus on Baire space with exact rational arithmetic.

Trees are decidable predicates, paths are sampling oracles, bars come in
decidable / countable-intersection / c-set flavours, and uniformity
bounds, binary-fan embeddings and uniform-continuity moduli near fans
and compact metric subsets are all computed with explicit budgets and
certified results.
"""

from .bars import (
    EXHAUSTED,
    HOLDS,
    REFUTED,
    BarRep,
    BoundSearch,
    CSet,
    DecBar,
    PathModulus,
    Pi01Bar,
    UniformityVerdict,
    cbar_to_pi01,
    find_uniform_bound,
    holds_at,
    is_uniform_at,
    monotonize,
    pi01_to_cbar,
    pullback_bar,
    restrict_to,
)
from .continuity import (
    ApproxPointOracle,
    NbhdFn,
    UniformityCertificate,
    bar_from_fn,
    constant_fn,
    coordinate_fn,
    eval_at,
    exact_rational_oracle,
    fn_from_cbar,
    proximity_bit,
    uniform_modulus_near_fan,
    uniform_modulus_near_fan_metric,
    uniform_modulus_via_embedding,
)
from .fan_embed import (
    BinaryImage,
    agreement_modulus,
    bar_through_image,
    embed_node,
    image_closure,
    transfer_bound,
    unembed_node,
)
from .instances import (
    Instance,
    eval_predicate,
    load_instance,
    parse_predicate,
    pretty_predicate,
)
from .metric import (
    CompactModulus,
    CompactNetSystem,
    MetricPresentation,
    PointMap,
    build_spreads,
    point_to_path,
    path_to_point,
    uniform_modulus_near_compact,
)
from .seqcode import FinSeq, concat, decode, encode, prefix
from .trees import (
    FanSpec,
    Path,
    SpreadSpec,
    binary_fan,
    in_spread,
    kary_fan,
    level,
    repair_node,
    repair_path,
    universal_spread,
)

__version__ = "0.1.0"
