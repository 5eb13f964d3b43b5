//! Lifts F(z) to a polynomial in Phi(z) mod p^alpha, then saves and reloads it.

use fsgc::extract::coefficients;
use fsgc::io::{parse_rep, serialize_rep};
use fsgc::lift::lift_group;
use fsgc::reference::Example;

fn main() {
    for ex in Example::ALL {
        let (p, alpha) = ex.modulus();
        let rep = lift_group(&ex.group_type(), p, alpha).unwrap();
        println!("{} modulo {}:", ex.name(), rep.ring());
        println!("  F = {}", rep.f);
        println!("  equals the reference representation: {}", ex.representation_matches(&rep).unwrap());

        let text = serialize_rep(&rep);
        let back = parse_rep(&text).unwrap();
        assert_eq!(back.f, rep.f);
        println!("  round trip through {} bytes of JSON ok", text.len());
        println!("  f_1..f_12 = {:?}", coefficients(&back, 1, 12).unwrap());
    }
}
