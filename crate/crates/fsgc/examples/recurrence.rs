//! Constant-coefficient recurrence for H(7) on lambda = 0 mod 6, run far past direct reach.

use std::time::Instant;

use fsgc::extract::{closed_form, coefficients, derive_recurrence, recurrence_coefficients};
use fsgc::lift::lift_group;
use fsgc::reference::Example;

fn main() {
    let ex = Example::Hecke7;
    let rep = lift_group(&ex.group_type(), 7, 3).unwrap();
    let spec = derive_recurrence(&closed_form(&rep, 0).unwrap()).unwrap();
    println!("weights {:?}, M = {}, {} boundary parts", spec.weights_i64(), spec.m_base, spec.inhomogeneity.len());
    for l in 0..4 {
        println!("  inhomogeneity at L = {l}: {}", spec.inhomogeneity_exact(l));
    }

    let t0 = Instant::now();
    let vals = recurrence_coefficients(&spec, 10_000);
    println!("f_(6L) mod 343 for L <= 10000 in {:.2}s", t0.elapsed().as_secs_f64());
    println!("  last five: {:?}", &vals[vals.len() - 5..]);

    let check = coefficients(&rep, 1, 120).unwrap();
    assert!((1..=20).all(|l| vals[l] == check[6 * l - 1]));
    println!("  agrees with coefficient extraction for L <= 20");
}
