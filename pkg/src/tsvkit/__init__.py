"""Exact symbolic toolkit for the twisted Schrödinger-Virasoro algebra and its rank-one modules."""
from .algebra import Generator, LieElement, bracket, jacobi_check
from .carrier import CarrierPoly, S, T, V
from .classify import iso_check, recognize
from .formats import parse_poly
from .phi import (
    ActionWindow,
    PhiParams,
    act_generic,
    act_L,
    act_M,
    act_Y,
    act_quotient,
    closing_gamma_series,
    filtration_check,
    submodule_check,
    verify_module,
    window_from_params,
)
from .scalars import A, B, LAM, ParamScalar
from .straighten import straighten, straighten_oracle

__all__ = [
    "A",
    "B",
    "LAM",
    "S",
    "T",
    "V",
    "ActionWindow",
    "CarrierPoly",
    "Generator",
    "LieElement",
    "ParamScalar",
    "PhiParams",
    "act_L",
    "act_M",
    "act_Y",
    "act_generic",
    "act_quotient",
    "bracket",
    "closing_gamma_series",
    "filtration_check",
    "iso_check",
    "jacobi_check",
    "parse_poly",
    "recognize",
    "straighten",
    "straighten_oracle",
    "submodule_check",
    "verify_module",
    "window_from_params",
]
