"""Tools for hypergraph quasirandomness: statistics, constructions, and
decision procedures with exact-arithmetic oracles."""

__version__ = "0.1.0"

from .core import (
    BudgetError,
    Hypergraph,
    ParseError,
    PartiteHypergraph,
    QuasihyperError,
    SetSystem,
    density,
    edge_indicator,
    parse_hypergraph,
)
from .setsystem import antichain, degree, precedes
from .doubling import build_mq, double, exponent_identity, mq_size, verify_doubling_commutes
from .simplicity import SimplicityCertificate, is_q_simple, verify_certificate
from .counting import cl_check, hom_count, induced_wrt_count, labeled_copies
from .statistics import (
    DirectedFamily,
    WeightEnsemble,
    dev_value,
    dev_value_factorized,
    disc_value,
    disc_witness_search,
    implication_constants,
    min_check,
    round_weights_to_family,
    supported_tuples,
    wdisc_value,
)
from .constructions import (
    ISetSystem,
    failing_witness_family,
    parity_hypergraph,
    random_hypergraph,
    random_iset_system,
    verify_separation,
)

__all__ = [
    "BudgetError",
    "DirectedFamily",
    "Hypergraph",
    "ISetSystem",
    "ParseError",
    "PartiteHypergraph",
    "QuasihyperError",
    "SetSystem",
    "SimplicityCertificate",
    "WeightEnsemble",
    "antichain",
    "build_mq",
    "cl_check",
    "degree",
    "density",
    "dev_value",
    "dev_value_factorized",
    "disc_value",
    "disc_witness_search",
    "double",
    "edge_indicator",
    "exponent_identity",
    "failing_witness_family",
    "hom_count",
    "implication_constants",
    "induced_wrt_count",
    "is_q_simple",
    "labeled_copies",
    "min_check",
    "mq_size",
    "parity_hypergraph",
    "parse_hypergraph",
    "precedes",
    "random_hypergraph",
    "random_iset_system",
    "round_weights_to_family",
    "supported_tuples",
    "verify_certificate",
    "verify_doubling_commutes",
    "verify_separation",
    "wdisc_value",
]
