//! Closed forms of f_lambda mod p^alpha on each residue class of lambda mod p - 1.

use fsgc::extract::{closed_form, coefficient_at, evaluate_closed_form};
use fsgc::lift::lift_group;
use fsgc::reference::Example;

fn main() {
    for ex in Example::ALL {
        let (p, alpha) = ex.modulus();
        let rep = lift_group(&ex.group_type(), p, alpha).unwrap();
        let r = if ex == Example::Gamma1 { 1 } else { 0 };
        let form = closed_form(&rep, r).unwrap();
        println!("== {} ==\n{form}", ex.name());
        for l in 1..=6 {
            let lambda = form.lambda_of(l);
            let v = evaluate_closed_form(&form, lambda).unwrap();
            assert_eq!(v, coefficient_at(&rep, lambda as u64).unwrap());
            println!("  f_{lambda} = {v}");
        }
        if let Some((poly, den)) = form.aggregate() {
            println!("  aggregated numerator P(L) = {poly}, {} linear factors in the denominator", den.len());
        }
    }
}
