"""Exact-arithmetic workbench for Lie algebras of vector fields on
affine varieties and their gauge and induced modules."""

from varfields.catalog import base_point, named_variety
from varfields.gauge import (
    GaugeElement,
    GaugeField,
    GaugeModule,
    density_operator,
    density_sweep,
    function_act,
    gauge_act,
    sphere_family,
    tensor_module,
)
from varfields.groebner import Ideal, QuotientElement, buchberger, ideal_contains, normal_form
from varfields.jets import JetField, JetSeries, embed_field, series_invert, taylor_expand
from varfields.pairing import OperatorWord, PairingContext, fiber, pair, well_definedness_check
from varfields.poly import MonomialOrder, Polynomial, PolyRing, Rational
from varfields.repn import DualModule, FiniteModule, check_homomorphism, dualize, gl_family
from varfields.rudakov import RudContext, RudElement, reduction_extract, rud_act_field, rud_act_function
from varfields.variety import Chart, LocalElement, Point, Variety, build_variety, chart_derivative, local_parameter_check
from varfields.vfields import (
    VectorField,
    chart_basic_field,
    delta_field,
    filtration_level,
    is_vector_field,
    truncated_lift,
)

__version__ = "0.1.0"
