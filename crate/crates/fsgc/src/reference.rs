//! Bundled reference groups with their known representations and equations.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{compute_type, GroupType, OrderGraph};
use crate::io::parse_order_graph;
use crate::lift::LiftedRep;
use crate::ode::{derive_f_equation, parse_equation, reduce_equation, unit_multiple, NonlinearODE};
use crate::oracle::theta_coeffs;
use crate::phi::{PhiAlgebra, PhiElement};
use crate::ring::{LaurentPoly, PrimePower, YFraction};

pub const GAMMA1_GRAPH: &str = include_str!("../fixtures/gamma1.json");
pub const GAMMA2_GRAPH: &str = include_str!("../fixtures/gamma2.json");
pub const HECKE7_GRAPH: &str = include_str!("../fixtures/hecke7.json");
pub const ORDER_TREE_P5: &str = include_str!("../fixtures/order_tree_p5.json");
pub const DIVISOR_TREE_P5: &str = include_str!("../fixtures/divisor_tree_p5.json");

const GAMMA1_EQUATION: &str = include_str!("../fixtures/equation_gamma1_mod81.txt");
const GAMMA2_EQUATION: &str = include_str!("../fixtures/equation_gamma2_mod16.txt");
const HECKE7_EQUATION: &str = include_str!("../fixtures/equation_hecke7.txt");

/// Phi-coefficients `(c_0, c_1)` meaning `c_0 + c_1 z`.
const GAMMA1_REP: [(i64, i64); 12] =
    [(0, 15), (1, 27), (0, 69), (0, 9), (0, 42), (0, 27), (0, 39), (0, 27), (0, 66), (0, 72), (0, 12), (0, 0)];
const GAMMA2_REP: [(i64, i64); 19] = [
    (0, 4),
    (5, 0),
    (2, 12),
    (8, 0),
    (12, 0),
    (8, 0),
    (0, 0),
    (0, 0),
    (0, 8),
    (0, 0),
    (0, 8),
    (0, 0),
    (0, 0),
    (0, 0),
    (0, 0),
    (0, 0),
    (0, 4),
    (0, 0),
    (0, 12),
];
/// `a_i = 7 P_i(z) / (1 - 2 z^6)^3`, plus 1 on `Phi^1`; `P_i` as `(exponent, coefficient)`.
const HECKE7_REP: [&[(i64, i64)]; 6] = [
    &[(18, 8), (17, 12), (15, 7), (13, 7), (12, 48), (11, 16), (10, 7), (9, 35), (7, 42), (6, 23), (5, 24), (4, 21), (3, 42), (1, 14)],
    &[(18, 35), (17, 11), (16, 30), (14, 14), (12, 14), (11, 17), (10, 47), (9, 14), (8, 42), (6, 21), (5, 1), (4, 32), (3, 42)],
    &[(17, 28), (16, 36), (15, 31), (14, 14), (13, 7), (11, 21), (10, 20), (9, 18), (8, 35), (7, 28), (5, 7), (4, 30), (3, 41), (2, 28), (1, 21)],
    &[(16, 42), (15, 29), (14, 22), (13, 7), (12, 7), (10, 7), (9, 27), (8, 48), (7, 35), (6, 21), (4, 35), (3, 16), (2, 2), (1, 42)],
    &[(17, 42), (15, 14), (14, 41), (13, 19), (12, 7), (11, 42), (9, 35), (8, 1), (7, 23), (6, 21), (5, 42), (3, 28), (2, 26), (1, 31)],
    &[(18, 22), (17, 21), (16, 21), (14, 21), (12, 34), (11, 7), (10, 7), (8, 28), (6, 9), (5, 28), (4, 28), (2, 42)],
];

/// One of the three worked groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Gamma1,
    Gamma2,
    Hecke7,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::Gamma1, Example::Gamma2, Example::Hecke7];

    pub fn number(self) -> usize {
        match self {
            Example::Gamma1 => 1,
            Example::Gamma2 => 2,
            Example::Hecke7 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Example::Gamma1 => "Gamma_1",
            Example::Gamma2 => "Gamma_2",
            Example::Hecke7 => "H(7)",
        }
    }

    pub fn graph_text(self) -> &'static str {
        match self {
            Example::Gamma1 => GAMMA1_GRAPH,
            Example::Gamma2 => GAMMA2_GRAPH,
            Example::Hecke7 => HECKE7_GRAPH,
        }
    }

    pub fn graph(self) -> OrderGraph {
        parse_order_graph(self.graph_text()).expect("bundled graph parses")
    }

    pub fn group_type(self) -> GroupType {
        compute_type(&self.graph())
    }

    /// `(p, alpha)`.
    pub fn modulus(self) -> (u64, u32) {
        match self {
            Example::Gamma1 => (3, 4),
            Example::Gamma2 => (2, 4),
            Example::Hecke7 => (7, 3),
        }
    }

    pub fn ring(self) -> PrimePower {
        let (p, a) = self.modulus();
        PrimePower::new(p, a).expect("valid prime power")
    }

    /// The displayed functional equation; reduced mod `p^alpha` except for H(7), which is exact.
    pub fn displayed_equation(self) -> NonlinearODE {
        let text = match self {
            Example::Gamma1 => GAMMA1_EQUATION,
            Example::Gamma2 => GAMMA2_EQUATION,
            Example::Hecke7 => HECKE7_EQUATION,
        };
        parse_equation(text).expect("bundled equation parses")
    }

    /// Whether our derived equation matches the displayed one up to a unit.
    pub fn equation_matches(self) -> Result<bool> {
        let derived = derive_f_equation(&theta_coeffs(&self.group_type())?);
        let shown = self.displayed_equation();
        Ok(match self {
            Example::Hecke7 => derived == shown || derived == shown.scale(&BigInt::from(-1)),
            _ => {
                let ring = self.ring();
                unit_multiple(&reduce_equation(&derived, &ring), &shown, &ring).is_some()
            }
        })
    }

    /// The reference Phi-polynomial, canonicalized.
    pub fn displayed_representation(self, alg: &PhiAlgebra) -> Result<PhiElement> {
        let ring = alg.ring();
        if ring != self.ring() {
            return Err(Error::InvalidInput(format!("{} is displayed modulo {}", self.name(), self.ring())));
        }
        let coeffs: Vec<YFraction> = match self {
            Example::Gamma1 => GAMMA1_REP.iter().map(|&(a, b)| linear(ring, a, b)).collect(),
            Example::Gamma2 => GAMMA2_REP.iter().map(|&(a, b)| linear(ring, a, b)).collect(),
            Example::Hecke7 => {
                // (1 - 2 z^6)^3 = (-2)^3 Y^3 with Y = z^6 - 1/2.
                let scale = ring.mul(7, ring.inv(ring.reduce_i64(-8)).expect("-8 is a unit mod 7^3"));
                HECKE7_REP
                    .iter()
                    .enumerate()
                    .map(|(i, terms)| {
                        let num = LaurentPoly::from_terms(ring, terms).scale(scale);
                        let frac = YFraction::canonicalize(num, 3, alg.y());
                        if i == 1 {
                            frac.add(&YFraction::constant(ring, 1), alg.y())
                        } else {
                            frac
                        }
                    })
                    .collect()
            }
        };
        alg.element(coeffs)
    }

    /// Compares a lifted representation with the displayed one.
    pub fn representation_matches(self, rep: &LiftedRep) -> Result<bool> {
        Ok(self.displayed_representation(&rep.algebra)? == rep.f)
    }
}

fn linear(ring: PrimePower, c0: i64, c1: i64) -> YFraction {
    YFraction::from_laurent(LaurentPoly::from_terms(ring, &[(0, c0), (1, c1)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::lift_group;

    #[test]
    fn lifts_reproduce_displays() {
        for ex in Example::ALL {
            let (p, a) = ex.modulus();
            let rep = lift_group(&ex.group_type(), p, a).unwrap();
            assert!(ex.representation_matches(&rep).unwrap(), "{}", ex.name());
            assert!(ex.equation_matches().unwrap(), "{}", ex.name());
        }
    }
}
