//! Derives the nonlinear equation for F(z) and reduces it modulo p^alpha.

use fsgc::ode::{derive_f_equation, reduce_equation};
use fsgc::oracle::{f_direct, theta_coeffs};
use fsgc::reference::Example;
use fsgc::ring::{ModScalar, TruncatedSeries};

fn main() {
    for ex in Example::ALL {
        let t = ex.group_type();
        let ring = ex.ring();
        let eq = derive_f_equation(&theta_coeffs(&t).unwrap());
        let reduced = reduce_equation(&eq, &ring);
        println!("{} modulo {ring}, order {}, {} terms:", ex.name(), reduced.order(), reduced.len());
        println!("  {reduced}");
        println!("  matches the reference equation up to a unit: {}", ex.equation_matches().unwrap());

        let order = 40;
        let f = f_direct(&t, order).unwrap();
        let sample = ring.scalar(0);
        let coeffs = f.f.iter().map(|c| ModScalar::new(ring.reduce_big(c), &ring)).collect();
        let series = TruncatedSeries::from_coeffs(coeffs, order + 1, &sample);
        let res = reduced.residual(&series, |c| ModScalar::new(ring.reduce_big(c), &ring)).unwrap();
        println!("  residual vanishes to order {}: {}", res.coeffs().len(), res.coeffs().iter().all(|c| c.value == 0));
    }
}
