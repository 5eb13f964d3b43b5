//! Order trees with mu_p = 0 built from a divisor tree, and peeled back again.

use fsgc::group::{check_mup_zero_structure, compute_type, generate_order_tree, CheckOutcome};
use fsgc::io::{parse_divisor_tree, parse_order_graph, serialize_divisor_tree};
use fsgc::reference::{Example, DIVISOR_TREE_P5, ORDER_TREE_P5};

fn main() {
    let d = parse_divisor_tree(DIVISOR_TREE_P5).unwrap();
    let g = generate_order_tree(&d, 5).unwrap();
    let t = compute_type(&g);
    println!("labels {:?}, root order {}", d.labels(), d.root_order);
    println!("order tree: {} vertices, m = {}, mu = {}, mu_5 = {}", g.vertices().len(), t.m(), t.free_rank(), t.p_rank(5));
    let fixture = parse_order_graph(ORDER_TREE_P5).unwrap();
    println!("equals the stored order tree: {}", g.tree_canonical_form() == fixture.tree_canonical_form());

    match check_mup_zero_structure(&g, 5).unwrap() {
        CheckOutcome::Accepted(back) => println!("recovered:\n{}", serialize_divisor_tree(&back)),
        CheckOutcome::Rejected(r) => println!("rejected: {r}"),
    }

    for (ex, p) in [(Example::Gamma1, 3), (Example::Gamma1, 2), (Example::Hecke7, 7)] {
        match check_mup_zero_structure(&ex.graph(), p).unwrap() {
            CheckOutcome::Accepted(d) => println!("{} at p = {p}: accepted, labels {:?}", ex.name(), d.labels()),
            CheckOutcome::Rejected(r) => println!("{} at p = {p}: rejected, {r}", ex.name()),
        }
    }
}
