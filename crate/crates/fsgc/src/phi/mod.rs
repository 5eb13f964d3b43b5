//! Arithmetic with the algebraic series `Phi = z (Phi^(p-1) - 1)^N`.

pub mod algebra;
pub mod matrix;

pub use algebra::{phi_power_coefficient, phi_power_coefficient_mod, PhiAlgebra, PhiElement};
pub use matrix::{build_matrix_m, det_m_closed_form, matrix_m_by_cases, solve_linearizer, PolyMatrix};
