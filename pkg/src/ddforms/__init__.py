"""Exact Fourier expansions of dd-modular Siegel forms.

The forms are built twice, as additive lifts of eta-theta Jacobi forms and
as Borcherds products of weight-0 Jacobi forms on Gamma_0(N), and the two
constructions are compared coefficient by coefficient.
"""

__version__ = "0.1.0"

from .series_core import TriSeries, TruncationPolicy  # noqa: E402
from .theta_jacobi import JacobiForm, get as jacobi_form  # noqa: E402
from .hecke_lift import SiegelForm, arithmetic_lift, hecke_tminus  # noqa: E402
from .borcherds import borcherds_expand, traced_expand, weyl_data  # noqa: E402
from .classification import enumerate_dd_candidates  # noqa: E402

__all__ = ["TriSeries", "TruncationPolicy", "JacobiForm", "jacobi_form", "SiegelForm",
           "arithmetic_lift", "hecke_tminus", "borcherds_expand", "traced_expand",
           "weyl_data", "enumerate_dd_candidates", "__version__"]
