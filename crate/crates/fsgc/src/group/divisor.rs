use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::graph::{Edge, OrderGraph, Vertex};
use super::gtype::compute_type;
use crate::error::{internal, invalid, Result};
use crate::ring::modular::lcm;

/// Finite rooted unlabelled tree; vertices are enumerated in preorder with children
/// visited in stored order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootedTree {
    pub children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn single() -> Self {
        RootedTree { children: Vec::new() }
    }

    /// A path with `edges` edges, rooted at one end.
    pub fn path(edges: usize) -> Self {
        let mut t = Self::single();
        for _ in 0..edges {
            t = RootedTree { children: vec![t] };
        }
        t
    }

    /// The star with `leaves` edges, rooted at one of its leaves.
    pub fn star_at_leaf(leaves: usize) -> Self {
        let centre = RootedTree { children: vec![Self::single(); leaves.saturating_sub(1)] };
        RootedTree { children: vec![centre] }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_trivial(&self) -> bool {
        self.children.is_empty()
    }

    pub fn root_is_leaf(&self) -> bool {
        self.children.len() == 1
    }

    /// Parent of each vertex in preorder (`None` for the root).
    pub fn preorder_parents(&self) -> Vec<Option<usize>> {
        fn walk(t: &RootedTree, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
            let me = out.len();
            out.push(parent);
            for c in &t.children {
                walk(c, Some(me), out);
            }
        }
        let mut out = Vec::new();
        walk(self, None, &mut out);
        out
    }
}

/// Vertex of a divisor tree together with its image tree under the assignment.
///
/// `glue` is the preorder index, within the parent's image tree, of the vertex onto
/// which this node's image root is glued (unused for the root of the divisor tree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorNode {
    pub label: u64,
    pub shape: RootedTree,
    pub glue: usize,
    pub children: Vec<DivisorNode>,
}

/// A divisor tree with its tree assignment and the order given to the global root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorTree {
    pub root: DivisorNode,
    pub root_order: u64,
}

impl DivisorTree {
    pub fn labels(&self) -> Vec<u64> {
        fn walk(n: &DivisorNode, out: &mut Vec<u64>) {
            out.push(n.label);
            n.children.iter().for_each(|c| walk(c, out));
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        self.labels().len()
    }

    /// Checks the divisor-tree and assignment invariants for the prime `p`.
    ///
    /// Image roots may be glued to any non-root vertex of the parent image (any vertex
    /// for the global root); the global root order must be a multiple of every label, and
    /// of `p * label(root)` when the root image is non-trivial.
    pub fn validate(&self, p: u64) -> Result<()> {
        fn walk(n: &DivisorNode, is_root: bool, p: u64) -> Result<()> {
            if n.label == 0 || n.label.is_multiple_of(p) {
                return invalid(format!("label {} must be positive and coprime to p = {p}", n.label));
            }
            if !is_root && (n.shape.is_trivial() || !n.shape.root_is_leaf()) {
                return invalid(format!("image of non-root vertex labelled {} must be non-trivial and rooted at a leaf", n.label));
            }
            let size = n.shape.size();
            for c in &n.children {
                if !n.label.is_multiple_of(c.label) || c.label >= n.label {
                    return invalid(format!("child label {} must properly divide parent label {}", c.label, n.label));
                }
                if c.glue >= size || (!is_root && c.glue == 0) {
                    return invalid(format!("invalid gluing index {} into image of vertex labelled {}", c.glue, n.label));
                }
                walk(c, false, p)?;
            }
            Ok(())
        }
        walk(&self.root, true, p)?;
        if self.root.children.is_empty() && self.root.shape.is_trivial() {
            return invalid("a divisor tree consisting of its root needs a non-trivial image");
        }
        let l = self.labels().into_iter().fold(1, lcm);
        if self.root_order == 0 || !self.root_order.is_multiple_of(l) {
            return invalid(format!("root order {} is not a multiple of lcm of labels {l}", self.root_order));
        }
        if !self.root.shape.is_trivial() && !self.root_order.is_multiple_of(p * self.root.label) {
            return invalid(format!(
                "root order {} is not a multiple of p * label(root) = {}",
                self.root_order,
                p * self.root.label
            ));
        }
        Ok(())
    }
}

/// Builds the order tree from a divisor tree: edges of `f(v)` get order `l(v)`,
/// non-root vertices of `f(v)` get `p * l(v)`, the global root gets `root_order`.
pub fn generate_order_tree(d: &DivisorTree, p: u64) -> Result<OrderGraph> {
    d.validate(p)?;
    let mut vertices = vec![Vertex { id: vid(0), order: d.root_order }];
    let mut edges = Vec::new();
    fn place(node: &DivisorNode, root_id: String, p: u64, vs: &mut Vec<Vertex>, es: &mut Vec<Edge>) {
        let parents = node.shape.preorder_parents();
        let mut ids = vec![root_id];
        for par in parents.iter().skip(1) {
            let id = vid(vs.len());
            vs.push(Vertex { id: id.clone(), order: p * node.label });
            let eid = format!("e{:04}", es.len());
            es.push(Edge { id: eid, from: ids[par.unwrap()].clone(), to: id.clone(), order: node.label });
            ids.push(id);
        }
        for c in &node.children {
            place(c, ids[c.glue].clone(), p, vs, es);
        }
    }
    place(&d.root, vid(0), p, &mut vertices, &mut edges);
    OrderGraph::new(vertices, edges)
}

fn vid(i: usize) -> String {
    format!("v{i:04}")
}

/// Why a graph does not have the divisor-tree structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub reason: String,
    pub witness: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.reason, self.witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Accepted(DivisorTree),
    Rejected(Rejection),
}

fn reject(reason: &str, witness: impl Into<String>) -> Result<CheckOutcome> {
    Ok(CheckOutcome::Rejected(Rejection { reason: reason.into(), witness: witness.into() }))
}

fn p_free(mut n: u64, p: u64) -> u64 {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// A peeled piece: its label, image tree rooted at `root`, and preorder index per vertex id.
struct Piece {
    label: u64,
    root: String,
    shape: RootedTree,
    index: BTreeMap<String, usize>,
}

/// Rooted tree spanned by `edges` from `root`, children in vertex-id order.
fn build_shape(root: &str, edges: &[&Edge]) -> (RootedTree, BTreeMap<String, usize>) {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.from.as_str()).or_default().push(e.to.as_str());
        adj.entry(e.to.as_str()).or_default().push(e.from.as_str());
    }
    for v in adj.values_mut() {
        v.sort();
    }
    fn walk<'a>(
        v: &'a str,
        parent: Option<&'a str>,
        adj: &BTreeMap<&'a str, Vec<&'a str>>,
        index: &mut BTreeMap<String, usize>,
    ) -> RootedTree {
        index.insert(v.to_string(), index.len());
        let mut children = Vec::new();
        for &w in adj.get(v).map(|x| x.as_slice()).unwrap_or(&[]) {
            if Some(w) != parent {
                children.push(walk(w, Some(v), adj, index));
            }
        }
        RootedTree { children }
    }
    let mut index = BTreeMap::new();
    let t = walk(root, None, &adj, &mut index);
    (t, index)
}

/// Peels a normalised order tree into a divisor tree with assignment, or names the
/// first structural obstruction.
pub fn check_mup_zero_structure(g: &OrderGraph, p: u64) -> Result<CheckOutcome> {
    if !crate::ring::is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if !g.is_tree() {
        return reject("not a tree", format!("{} vertices, {} edges", g.vertices().len(), g.edges().len()));
    }
    if let Some(e) = g.trivial_amalgamation() {
        return reject("not normalised", format!("edge {} has the order of an endpoint", e.id));
    }
    let t = compute_type(g);
    if !t.m().is_multiple_of(p) {
        return reject("p does not divide m", format!("p = {p}, m = {}", t.m()));
    }
    if t.free_rank() < 2 {
        return reject("free rank below 2", format!("mu = {}", t.free_rank()));
    }
    let mut alive_v: BTreeMap<String, u64> = g.vertices().iter().map(|v| (v.id.clone(), v.order)).collect();
    let mut alive_e: Vec<&Edge> = g.edges().iter().collect();
    let mut pieces: Vec<Piece> = Vec::new();
    let root_order;
    let root_piece: Piece;
    loop {
        if alive_e.is_empty() {
            // A single vertex remains; pieces of the same label merge into its image.
            let (v0, &n0) = alive_v.iter().next().unwrap();
            let label = p_free(n0, p);
            let merged: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].root == *v0 && pieces[i].label == label).collect();
            let mut edges: Vec<&Edge> = Vec::new();
            for &i in &merged {
                let ids: BTreeSet<&String> = pieces[i].index.keys().collect();
                edges.extend(g.edges().iter().filter(|e| ids.contains(&e.from) && ids.contains(&e.to)));
            }
            let (shape, index) = build_shape(v0, &edges);
            for &i in merged.iter().rev() {
                pieces.remove(i);
            }
            root_order = n0;
            root_piece = Piece { label, root: v0.clone(), shape, index };
            break;
        }
        let m = alive_e.iter().map(|e| e.order).chain(alive_v.values().copied()).min().unwrap();
        if !alive_e.iter().any(|e| e.order == m) {
            let v = alive_v.iter().find(|(_, &o)| o == m).unwrap().0;
            return reject("minimal order not attained by an edge", format!("vertex {v} of order {m}"));
        }
        if m % p == 0 {
            let e = alive_e.iter().find(|e| e.order == m).unwrap();
            return reject("minimal order divisible by p", format!("edge {} of order {m}", e.id));
        }
        let pm = p * m;
        let sv: BTreeSet<String> = alive_v.iter().filter(|(_, &o)| pm.is_multiple_of(o)).map(|(k, _)| k.clone()).collect();
        let se: Vec<&Edge> = alive_e.iter().copied().filter(|e| pm.is_multiple_of(e.order)).collect();
        if let Some(v) = sv.iter().find(|v| alive_v[*v] != pm) {
            return reject("vertex order divides p*m but differs from it", format!("vertex {v} of order {}", alive_v[v]));
        }
        if let Some(e) = se.iter().find(|e| e.order != m) {
            return reject("edge order divides p*m but differs from m", format!("edge {} of order {}", e.id, e.order));
        }
        // Components of S_{pm}: union-find over S-vertices, joined by S-edges.
        let mut comp: BTreeMap<String, String> = sv.iter().map(|v| (v.clone(), v.clone())).collect();
        fn find(c: &mut BTreeMap<String, String>, v: &str) -> String {
            let p = c[v].clone();
            if p == v {
                return p;
            }
            let r = find(c, &p);
            c.insert(v.to_string(), r.clone());
            r
        }
        for e in &se {
            if sv.contains(&e.from) && sv.contains(&e.to) {
                let (a, b) = (find(&mut comp, &e.from), find(&mut comp, &e.to));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    comp.insert(hi, lo);
                }
            }
        }
        let mut groups: BTreeMap<String, (Vec<String>, Vec<&Edge>)> = BTreeMap::new();
        for v in &sv {
            let r = find(&mut comp, v);
            groups.entry(r).or_default().0.push(v.clone());
        }
        for e in &se {
            let anchor = if sv.contains(&e.from) {
                &e.from
            } else if sv.contains(&e.to) {
                &e.to
            } else {
                return reject("edge component without vertices", format!("edge {}", e.id));
            };
            let r = find(&mut comp, anchor);
            groups.get_mut(&r).unwrap().1.push(e);
        }
        if sv.len() == alive_v.len() && se.len() == alive_e.len() && groups.len() == 1 {
            // The remainder is one complete piece; its smallest vertex becomes the root.
            let v0 = alive_v.keys().next().unwrap().clone();
            let (shape, index) = build_shape(&v0, &se);
            root_order = pm;
            root_piece = Piece { label: m, root: v0, shape, index };
            break;
        }
        for (_, (vs, es)) in groups {
            let missing: Vec<&String> = es
                .iter()
                .flat_map(|e| [&e.from, &e.to])
                .filter(|v| !sv.contains(*v))
                .collect();
            if es.len() != vs.len() || missing.len() != 1 {
                return reject(
                    "component of S_pm is not balanced with exactly one missing vertex",
                    format!("component at vertex {} ({} edges, {} vertices, {} missing)", vs[0], es.len(), vs.len(), missing.len()),
                );
            }
            let root = missing[0].clone();
            let (shape, index) = build_shape(&root, &es);
            if !shape.root_is_leaf() || shape.size() != vs.len() + 1 {
                return internal(format!("component at vertex {} does not hang from a leaf", vs[0]));
            }
            for v in &vs {
                alive_v.remove(v);
            }
            let ids: BTreeSet<&str> = es.iter().map(|e| e.id.as_str()).collect();
            alive_e.retain(|e| !ids.contains(e.id.as_str()));
            pieces.push(Piece { label: m, root, shape, index });
        }
    }
    // Attach every piece to the piece holding its root vertex as a non-root vertex.
    let holder = |v: &str, pieces: &[Piece], skip: usize| -> Option<(usize, usize)> {
        pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .find_map(|(i, pc)| pc.index.get(v).filter(|&&ix| ix != 0).map(|&ix| (i, ix)))
    };
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    for (i, pc) in pieces.iter().enumerate() {
        let h = holder(&pc.root, &pieces, i);
        let h = match h {
            Some(x) => Some(x),
            None => match root_piece.index.get(&pc.root) {
                Some(&ix) => Some((usize::MAX, ix)),
                None => return internal(format!("attachment vertex {} not found", pc.root)),
            },
        };
        parent.push(h);
    }
    fn assemble(idx: usize, pieces: &[Piece], parent: &[Option<(usize, usize)>], glue: usize) -> DivisorNode {
        let children = (0..pieces.len())
            .filter_map(|j| match parent[j] {
                Some((q, ix)) if q == idx => Some(assemble(j, pieces, parent, ix)),
                _ => None,
            })
            .collect();
        DivisorNode { label: pieces[idx].label, shape: pieces[idx].shape.clone(), glue, children }
    }
    let children = (0..pieces.len())
        .filter_map(|j| match parent[j] {
            Some((usize::MAX, ix)) => Some(assemble(j, &pieces, &parent, ix)),
            _ => None,
        })
        .collect();
    let d = DivisorTree {
        root: DivisorNode { label: root_piece.label, shape: root_piece.shape, glue: 0, children },
        root_order,
    };
    if d.validate(p).is_err() || d.node_count() != pieces.len() + 1 {
        return internal(format!("peeling produced an inconsistent divisor tree: {:?}", d.validate(p).err()));
    }
    let regenerated = generate_order_tree(&d, p)?;
    if regenerated.tree_canonical_form() != g.tree_canonical_form() {
        return internal("peeled divisor tree does not regenerate the input");
    }
    Ok(CheckOutcome::Accepted(d))
}
