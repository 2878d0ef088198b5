"""Exact computations for positively elliptic (F0) rational homotopy data."""

from .model import (DegreeTuple, PureModel, Presentation, cohomology, euler_characteristic,
                    intersection_form, is_finite_dimensional, poincare_duality_check,
                    poincare_series)

__version__ = "0.1.0"

__all__ = ["DegreeTuple", "PureModel", "Presentation", "cohomology", "euler_characteristic",
           "intersection_form", "is_finite_dimensional", "poincare_duality_check",
           "poincare_series"]
