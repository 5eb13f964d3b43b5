//! Exact free subgroup numbers from the hypergeometric recursion, and the mod-p law.

use fsgc::oracle::{f_direct, mod_p_prediction};
use fsgc::reference::Example;
use num_bigint::BigInt;
use num_integer::Integer;

fn main() {
    for ex in Example::ALL {
        let t = ex.group_type();
        let (p, _) = ex.modulus();
        let seq = f_direct(&t, 12).unwrap();
        println!("{} (mu = {}):", ex.name(), t.free_rank());
        for l in 1..=12u64 {
            let f = &seq.f[l as usize];
            let pred = mod_p_prediction(t.free_rank() as u64, p, l).mod_floor(&BigInt::from(p));
            println!("  f_{l:<2} = {f}  (mod {p}: {}, predicted {pred})", f.mod_floor(&BigInt::from(p)));
        }
    }
}
