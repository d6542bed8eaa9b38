"""Finite witnesses, checkers and constructions for colored-order tree properties."""

from .errors import Case2Required, ConstructionError, InputError, OracleError, TreepropError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    IndexTree,
    QfType,
    chain_colors,
    chain_type,
    meet,
    parse_qtype,
    plain_order,
    qftp_array,
    qftp_order,
    qftp_tree,
    realizations,
    render_qtype,
    standard_c,
)
from .logic_core import (
    FinStructure,
    FormulaTemplate,
    InstantiatedFormula,
    brute_force_consistent,
    equality_structure,
    fin_structure,
    instantiate_template,
    k_inconsistent,
    oracle_consistent,
    random_graph_structure,
    set_structure,
)
from .indiscernibility import (
    IndexedFamily,
    Report,
    check_indiscernible,
    check_locally_based,
    check_strong_array,
)
from .properties import (
    ChainStep,
    DividingChain,
    WitnessFamily,
    check_c_tp1,
    check_generalized_dividing,
    check_generalized_tp,
    check_generalized_tp2,
    check_ip,
    verify_dividing_chain,
)
from .constructions import (
    BlockParams,
    IpExtraction,
    array_rows_as_sibling_tree,
    block_transform_case2,
    canonical_block_params,
    case2_path_preimage,
    conjunction_template,
    duplicate_colors,
    extract_ip_case1,
    gen_random_graph_witness,
    gen_set_ctp1_witness,
    gen_triviality_chain,
    q_minimality,
    run_ip_extraction,
    transform_ctp1_to_tp1,
    trivial_coloring,
)

__version__ = "0.1.0"
