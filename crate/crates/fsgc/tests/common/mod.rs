#![allow(dead_code)]

use fsgc::group::{compute_type, normalise, DivisorNode, DivisorTree, Edge, OrderGraph, RootedTree, Vertex};
use fsgc::ring::modular::{divisors, gcd};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random rooted tree with `size` vertices.
pub fn random_shape(rng: &mut StdRng, size: usize) -> RootedTree {
    let mut parents = vec![usize::MAX];
    for v in 1..size {
        parents.push(rng.gen_range(0..v));
    }
    fn build(v: usize, parents: &[usize]) -> RootedTree {
        let children = (0..parents.len()).filter(|&w| parents[w] == v).map(|w| build(w, parents)).collect();
        RootedTree { children }
    }
    build(0, &parents)
}

fn leaf_rooted(rng: &mut StdRng, size: usize) -> RootedTree {
    RootedTree { children: vec![random_shape(rng, size - 1)] }
}

fn node(rng: &mut StdRng, label: u64, depth: usize, is_root: bool) -> DivisorNode {
    let size = if is_root { rng.gen_range(1..=3) } else { rng.gen_range(2..=3) };
    let shape = if is_root { random_shape(rng, size) } else { leaf_rooted(rng, size) };
    let size = shape.size();
    let smaller: Vec<u64> = divisors(label).into_iter().filter(|&d| d < label).collect();
    let mut children = Vec::new();
    if depth > 0 && !smaller.is_empty() {
        for _ in 0..rng.gen_range(0..=2) {
            let c = *smaller.choose(rng).unwrap();
            let mut child = node(rng, c, depth - 1, false);
            child.glue = if is_root { rng.gen_range(0..size) } else { rng.gen_range(1..size) };
            children.push(child);
        }
    }
    DivisorNode { label, shape, glue: 0, children }
}

/// A random valid divisor tree for `p`; its order tree has free rank at least 2.
pub fn random_divisor_tree(rng: &mut StdRng, p: u64) -> DivisorTree {
    let labels: Vec<u64> = [1u64, 2, 3, 4, 5, 6, 7, 8, 10, 12].into_iter().filter(|l| l % p != 0).collect();
    loop {
        let label = *labels.choose(rng).unwrap();
        let root = node(rng, label, 2, true);
        let base = if root.shape.is_trivial() { label } else { p * label };
        let root_order = base * [1, 1, p][rng.gen_range(0..3)];
        let d = DivisorTree { root, root_order };
        if d.validate(p).is_err() {
            continue;
        }
        let g = fsgc::group::generate_order_tree(&d, p).unwrap();
        if compute_type(&g).free_rank() >= 2 {
            return d;
        }
    }
}

/// A random connected order graph; `cycles` extra edges (loops allowed) beyond a spanning tree.
pub fn random_graph(rng: &mut StdRng, cycles: usize) -> OrderGraph {
    let m = *[6u64, 12, 20, 30, 36].choose(rng).unwrap();
    let divs = divisors(m);
    let n = rng.gen_range(1..=5);
    let vertices: Vec<Vertex> =
        (0..n).map(|i| Vertex { id: format!("v{i}"), order: *divs[1..].choose(rng).unwrap() }).collect();
    let mut edges = Vec::new();
    let add = |rng: &mut StdRng, a: usize, b: usize, edges: &mut Vec<Edge>| {
        let g = gcd(vertices[a].order, vertices[b].order);
        let order = *divisors(g).choose(rng).unwrap();
        let id = format!("e{}", edges.len());
        edges.push(Edge { id, from: vertices[a].id.clone(), to: vertices[b].id.clone(), order });
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        add(rng, u, v, &mut edges);
    }
    for _ in 0..cycles {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        add(rng, a, b, &mut edges);
    }
    OrderGraph::new(vertices, edges).unwrap()
}

/// A random normalised order tree with `p | m`, free rank at least 2 and non-zero p-rank.
pub fn random_non_instance(rng: &mut StdRng, p: u64) -> OrderGraph {
    loop {
        let g = normalise(&random_graph(rng, 0));
        let t = compute_type(&g);
        if g.is_tree() && t.m().is_multiple_of(p) && t.free_rank() >= 2 && t.p_rank(p) != 0 {
            return g;
        }
    }
}
