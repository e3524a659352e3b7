"""Grassmann complements, Hodge duality and their uses in electrodynamics and topology.

Modules
-------
exterior_algebra     exact multivectors, wedge, complement, regressive and interior products
metric_hodge         diagonal metrics of any signature, Hodge star, Minkowski and Pauli duals
poly_forms           polynomial differential forms: d, codifferential, Hodge Laplacian
electrodynamics      Maxwell's equations in classical, Minkowski, premetric and metric form
combinatorial_hodge  simplicial complexes, discrete Hodge Laplacians, Betti numbers
cli                  the ``grassmann-hodge`` command
"""

from ._parsing import ParseError
from .exterior_algebra import (
    Blade,
    Multivector,
    complement,
    cross_product,
    interior_product,
    regressive_product,
    wedge,
)
from .metric_hodge import Metric, double_star_sign, epsilon, hodge_star, minkowski_dual, pairing
from .poly_forms import PolyForm, Polynomial

__all__ = [
    "ParseError",
    "Blade",
    "Multivector",
    "wedge",
    "complement",
    "regressive_product",
    "interior_product",
    "cross_product",
    "Metric",
    "epsilon",
    "hodge_star",
    "double_star_sign",
    "pairing",
    "minkowski_dual",
    "PolyForm",
    "Polynomial",
]

__version__ = "0.1.0"
