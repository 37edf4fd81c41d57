"""Decision procedures for derived quotients F/N' and free solvable groups.

The word, power, and conjugacy problems are decided through the Magnus
pair of a word: its image in the base group F/N together with its integer
flow on the Cayley graph of F/N. Oracles stack, so iterating the
construction covers F/N'', F/N''', and free solvable groups of any degree.
"""

from .errors import (
    CapExceededError,
    ContextMismatchError,
    InputValidationError,
    SolvGroupError,
    UnsupportedOracleError,
    WordSyntaxError,
)
from .words import (
    Alphabet,
    Word,
    commutator,
    conjugate,
    free_reduce,
    invert,
    parse_word,
    power,
    word_to_str,
)
from .oracles import (
    GroupOracle,
    MulTable,
    S3_TABLE,
    make_finite_group,
    make_free_abelian,
    make_free_group,
)
from .flows import (
    CayleyContext,
    FlowMap,
    GroupRingElement,
    augment,
    flow_of,
    is_circulation,
    net_flow,
    norm,
    repair_circulation,
    shift,
    telescope,
)
from .digraph import build_support_graph, girth, graph_rank
from .magnus import (
    GroupSpec,
    MagnusElement,
    cp_derived,
    is_magnus_image,
    magnus_image,
    make_derived_oracle,
    make_free_solvable,
    make_oracle,
    make_schreier,
    pp_derived,
    wp_derived,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CapExceededError",
    "CayleyContext",
    "ContextMismatchError",
    "FlowMap",
    "GroupOracle",
    "GroupRingElement",
    "GroupSpec",
    "InputValidationError",
    "MagnusElement",
    "MulTable",
    "S3_TABLE",
    "SolvGroupError",
    "UnsupportedOracleError",
    "Word",
    "WordSyntaxError",
    "augment",
    "build_support_graph",
    "commutator",
    "conjugate",
    "cp_derived",
    "flow_of",
    "free_reduce",
    "girth",
    "graph_rank",
    "invert",
    "is_circulation",
    "is_magnus_image",
    "magnus_image",
    "make_derived_oracle",
    "make_finite_group",
    "make_free_abelian",
    "make_free_group",
    "make_free_solvable",
    "make_oracle",
    "make_schreier",
    "net_flow",
    "norm",
    "parse_word",
    "power",
    "pp_derived",
    "repair_circulation",
    "shift",
    "telescope",
    "word_to_str",
    "wp_derived",
    "__version__",
]
