//! Type invariants of the bundled order graphs and of a few Hecke groups.

use fsgc::group::{compute_type, hecke_graph, normalise};
use fsgc::reference::Example;

fn main() {
    for ex in Example::ALL {
        let g = ex.graph();
        let t = compute_type(&g);
        let (p, _) = ex.modulus();
        println!("{}: {} vertices, {} edges", ex.name(), g.vertices().len(), g.edges().len());
        println!("  m = {}, mu = {}, mu_{p} = {}", t.m(), t.free_rank(), t.p_rank(p));
        let zeta: Vec<String> = t.zeta().iter().map(|(k, z)| format!("zeta_{k} = {z}")).collect();
        println!("  {}", zeta.join(", "));
        assert_eq!(compute_type(&normalise(&g)), t);
    }
    for q in [3, 4, 5, 7] {
        let t = compute_type(&hecke_graph(q).unwrap());
        println!("H({q}): m = {}, mu = {}", t.m(), t.free_rank());
    }
}
