from typing import List, Optional

from pydantic import BaseModel


class GoldenEntry(BaseModel):
    k: int
    quadrature_re: float
    quadrature_im: float
    closed_form_re: float
    closed_form_im: float
    rel_deviation: float
    passed: bool
    note: Optional[str] = None


class GoldenReport(BaseModel):
    family: str
    quartic: float
    linear_re: float
    linear_im: float
    invsq_re: float
    invsq_im: float
    hbar: float
    entries: List[GoldenEntry]
    max_deviation: float
    tolerance: float
    passed: bool


class CoefficientRow(BaseModel):
    k: int
    b_re: float
    b_im: float
    beta_re: float
    beta_im: float
    deviation: float


class CoefficientReport(BaseModel):
    g: float
    a: float
    a_offset: float
    hbar: float
    K: int
    rows: List[CoefficientRow]
    max_deviation: float
    tolerance: float
    passed: bool


class IsospectralityRow(BaseModel):
    n: int
    E_H_re: float
    E_H_im: float
    E_h_re: float
    E_h_im: float
    abs_difference: float
    rel_difference: float


class IsospectralityReport(BaseModel):
    g: float
    a: float
    b_re: float
    b_im: float
    hbar: float
    regime: str
    rows: List[IsospectralityRow]
    max_rel_difference: float
    tolerance: float
    passed: bool
    warnings: List[str] = []


class SusyReport(BaseModel):
    residual_phi1: float
    residual_phi2: float
    log_derivative_phi1: float
    log_derivative_phi2: float
    ground_energy_H1_re: float
    ground_energy_H1_im: float
    ground_energy_H2_re: float
    ground_energy_H2_im: float
    residual_tolerance: float
    energy_tolerance: float
    passed: bool


class SuperpotentialReport(BaseModel):
    closed_form_H1: float
    closed_form_H2: float
    antisymmetry: float
    partner_minus_H1: float
    partner_plus_H1: float
    partner_minus_H2: float
    partner_plus_H2: float
    tolerance: float
    passed: bool


class SweepSummary(BaseModel):
    g: float
    hbar: float
    a_min: float
    a_max: float
    steps: int
    coalescence_a: Optional[float]
    coalescence_error: Optional[float]
    zero_crossing_a: Optional[float]
    max_imag_in_real_window: Optional[float]
    min_real_in_positive_window: Optional[float]
    consistency_max_deviation: Optional[float]
    conjugate_pair_deviation: Optional[float]
    lost_at: Optional[float]
    notes: List[str] = []


class LinearIsospectralityRow(BaseModel):
    n: int
    E_linear_re: float
    E_linear_im: float
    E_H_re: float
    E_H_im: float
    E_h_re: float
    E_h_im: float
    rel_spread: float


class LinearIsospectralityReport(BaseModel):
    g: float
    hbar: float
    b: float
    rows: List[LinearIsospectralityRow]
    max_rel_spread: float
    tolerance: float
    passed: bool
    warnings: List[str] = []
