"""Exact p-adic power series, Frobenius antecedents, and congruence certificates."""

from .catalog import (
    CatalogEntry,
    CongruenceReport,
    SeriesKind,
    SeriesSpec,
    build,
    dwork_congruence_check,
    p_lucas_check,
)
from .dependence import (
    DependenceReport,
    Finding,
    analytic_element_certificate,
    kolchin_scan,
    product_power,
)
from .diffops import DiffOp, SeriesMatrix, monicize, raw_terms_from_json, uniform_part
from .errors import (
    BadContext,
    BadParameters,
    CartierError,
    IntegralityFailure,
    LeadingNotUnit,
    NegativeValuation,
    NotAUnit,
    NotInK0,
    NotMOM,
    NotNilpotent,
    OrderExhausted,
    ReconstructionFailed,
    VerificationFailed,
)
from .frobenius import (
    AntecedentLevel,
    Certificate,
    IntegralityReport,
    antecedent_chain,
    antecedent_step,
    frobenius_ratio_certificate,
    integrality_check,
    logderiv_certificate,
    logderiv_from_frobenius,
    period_ratio_certificate,
    ratio_certificate,
    successive_frobenius_quotient,
)
from .rational import Polynomial, RationalFunction, canonical_lift
from .rings import INF, Coefficient, PadicContext, Ramification, parse_coefficient
from .series import TruncSeries

__version__ = "0.1.0"

__all__ = [
    "AntecedentLevel",
    "BadContext",
    "BadParameters",
    "CartierError",
    "CatalogEntry",
    "Certificate",
    "Coefficient",
    "CongruenceReport",
    "DependenceReport",
    "DiffOp",
    "Finding",
    "INF",
    "IntegralityFailure",
    "IntegralityReport",
    "LeadingNotUnit",
    "NegativeValuation",
    "NotAUnit",
    "NotInK0",
    "NotMOM",
    "NotNilpotent",
    "OrderExhausted",
    "PadicContext",
    "Polynomial",
    "Ramification",
    "RationalFunction",
    "ReconstructionFailed",
    "SeriesKind",
    "SeriesMatrix",
    "SeriesSpec",
    "TruncSeries",
    "VerificationFailed",
    "analytic_element_certificate",
    "antecedent_chain",
    "antecedent_step",
    "build",
    "canonical_lift",
    "dwork_congruence_check",
    "frobenius_ratio_certificate",
    "integrality_check",
    "kolchin_scan",
    "logderiv_certificate",
    "logderiv_from_frobenius",
    "monicize",
    "p_lucas_check",
    "parse_coefficient",
    "period_ratio_certificate",
    "product_power",
    "raw_terms_from_json",
    "ratio_certificate",
    "successive_frobenius_quotient",
    "uniform_part",
    "__version__",
]
