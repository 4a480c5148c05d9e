"""
Coexistence toolkit for effect algebras.

Exact-arithmetic verification of compatibility support mappings, the limit
observable they induce on 2^(2^S), the reverse construction from an
observable, witness mappings on interval effect algebras and a finite-model
search over small explicit algebras.

Main Components:
- Effect algebras (tables, rational tuples, products of MV chains)
- Powerset Boolean algebras, embeddings and their direct limit
- Compatibility support mappings and their verifier
- Observables and coexistence certificates
- Witness mappings
- Backtracking search

Usage:
    from src import MVChainProduct, csm_joinmeet, verify_csm

    algebra = MVChainProduct([2, 2])
    report = verify_csm(csm_joinmeet(algebra, [algebra.element('1/2', 0)]))
"""

from .boolean_algebra import GroundSet, LimitAlgebra, PowersetAlgebra, SubsetFamily, equiv, g_embed
from .coexistence_orchestrator import CoexistenceOrchestrator
from .config import CoexistenceConfig
from .csm import (
    CSM,
    CSMDomain,
    D,
    csm_from_observable,
    csm_joinmeet,
    csm_product,
    reconstruct_from_D,
    verify_csm,
    verify_strong,
)
from .effect_algebra import (
    MVChainProduct,
    TableEffectAlgebra,
    TupleEffectAlgebra,
    horizontal_sum,
    is_mv_effect_algebra,
    validate_effect_algebra,
)
from .errors import (
    AxiomBreachError,
    CoexistenceError,
    ConstructionError,
    ContractError,
    DecompositionBreachError,
    InputError,
)
from .models import AxiomReport, SearchBudget, SearchOutcome, SearchResult
from .observable import CoexistenceCertificate, Observable, alpha_A, build_alpha_S, verify_observable
from .search import csm_extending_witness, search_csm, search_witness
from .witness import D_beta, WitnessMapping, check_D_equality, verify_witness, witness_from_csm

__version__ = "1.0.0"
__license__ = "MIT"

__all__ = [
    'AxiomBreachError',
    'AxiomReport',
    'CSM',
    'CSMDomain',
    'CoexistenceCertificate',
    'CoexistenceConfig',
    'CoexistenceError',
    'CoexistenceOrchestrator',
    'ConstructionError',
    'ContractError',
    'D',
    'D_beta',
    'DecompositionBreachError',
    'GroundSet',
    'InputError',
    'LimitAlgebra',
    'MVChainProduct',
    'Observable',
    'PowersetAlgebra',
    'SearchBudget',
    'SearchOutcome',
    'SearchResult',
    'SubsetFamily',
    'TableEffectAlgebra',
    'TupleEffectAlgebra',
    'WitnessMapping',
    'alpha_A',
    'build_alpha_S',
    'check_D_equality',
    'csm_extending_witness',
    'csm_from_observable',
    'csm_joinmeet',
    'csm_product',
    'equiv',
    'g_embed',
    'horizontal_sum',
    'is_mv_effect_algebra',
    'reconstruct_from_D',
    'search_csm',
    'search_witness',
    'validate_effect_algebra',
    'verify_csm',
    'verify_observable',
    'verify_strong',
    'verify_witness',
    'witness_from_csm',
    '__version__',
    '__license__',
]
