//! The series Phi(z) = z (Phi^(p-1) - 1)^N and its quotient algebra.

use fsgc::phi::{phi_power_coefficient, PhiAlgebra};
use fsgc::ring::PrimePower;

fn main() {
    let ring = PrimePower::new(7, 3).unwrap();
    let alg = PhiAlgebra::new(ring, 1).unwrap();
    println!("p = 7, N = 1, Y = {}", alg.y().as_laurent());
    let exact: Vec<String> = (0..20).map(|n| phi_power_coefficient(1, n, 7, 1).to_string()).collect();
    println!("Phi = {} + ...", exact.join(", "));
    println!("Phi mod 343: {:?}", alg.to_series(&alg.phi_power(1), 20).unwrap());

    let top = alg.mul(&alg.phi_power(alg.mu() - 1), &alg.phi_power(1));
    println!("Phi^6 reduced: {top}");
    println!("Phi' = {}", alg.phi_derivative());
    let lin = alg.linearizer();
    println!("linearizer = {lin}");
    println!("linearizer * inverse = 1: {}", alg.mul(&lin, alg.linearizer_inverse()) == alg.one());

    let sq = alg.mul(&alg.phi_power(4), &alg.phi_power(5));
    let direct: Vec<u64> = {
        let a = alg.to_series(&alg.phi_power(4), 30).unwrap();
        let b = alg.to_series(&alg.phi_power(5), 30).unwrap();
        (0..30).map(|n| (0..=n).fold(0, |acc, i| ring.add(acc, ring.mul(a[i], b[n - i])))).collect()
    };
    println!("Phi^4 Phi^5 via the algebra equals the series product: {}", alg.to_series(&sq, 30).unwrap() == direct);
}
