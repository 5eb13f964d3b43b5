use std::collections::{BTreeMap, BTreeSet};

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub order: u64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    /// The endpoint opposite to `v` (itself for a loop).
    pub fn other(&self, v: &str) -> &str {
        if self.from == v {
            &self.to
        } else {
            &self.from
        }
    }
}

/// Finite connected multigraph with positive orders on vertices and edges,
/// each edge order dividing the orders of its endpoints.
///
/// Vertices and edges are kept sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl OrderGraph {
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Self> {
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if vertices.is_empty() {
            return invalid("order graph has no vertices");
        }
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return invalid(format!("duplicate vertex id {:?}", w[0].id));
            }
        }
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return invalid(format!("duplicate edge id {:?}", w[0].id));
            }
        }
        let orders: BTreeMap<&str, u64> = vertices.iter().map(|v| (v.id.as_str(), v.order)).collect();
        for v in &vertices {
            if v.order == 0 {
                return invalid(format!("vertex {:?} has order 0", v.id));
            }
        }
        for e in &edges {
            if e.order == 0 {
                return invalid(format!("edge {:?} has order 0", e.id));
            }
            for end in [&e.from, &e.to] {
                match orders.get(end.as_str()) {
                    None => return invalid(format!("edge {:?} references unknown vertex {:?}", e.id, end)),
                    Some(&n) if n % e.order != 0 => {
                        return invalid(format!(
                            "order of edge must divide order of endpoint: edge {:?} (order {}) at vertex {:?} (order {})",
                            e.id, e.order, end, n
                        ))
                    }
                    _ => {}
                }
            }
        }
        let g = OrderGraph { vertices, edges };
        if !g.is_connected() {
            return invalid("order graph is disconnected");
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok().map(|i| &self.vertices[i])
    }

    pub fn order_of(&self, id: &str) -> u64 {
        self.vertex(id).map(|v| v.order).unwrap_or(0)
    }

    /// Edge indices incident to each vertex id (a loop appears once).
    pub fn incidence(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut inc: BTreeMap<&str, Vec<usize>> = self.vertices.iter().map(|v| (v.id.as_str(), Vec::new())).collect();
        for (i, e) in self.edges.iter().enumerate() {
            inc.get_mut(e.from.as_str()).unwrap().push(i);
            if !e.is_loop() {
                inc.get_mut(e.to.as_str()).unwrap().push(i);
            }
        }
        inc
    }

    fn is_connected(&self) -> bool {
        let inc = self.incidence();
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.vertices[0].id.as_str()];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for &i in &inc[v] {
                stack.push(self.edges[i].other(v));
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len() && self.edges.iter().all(|e| !e.is_loop())
    }

    /// An edge whose order equals the order of one of its endpoints.
    pub fn trivial_amalgamation(&self) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| !e.is_loop() && (self.order_of(&e.from) == e.order || self.order_of(&e.to) == e.order))
    }

    /// Isomorphism-invariant string for trees (labelled AHU encoding over the centre);
    /// `None` for graphs that are not trees.
    pub fn tree_canonical_form(&self) -> Option<String> {
        if !self.is_tree() {
            return None;
        }
        let inc = self.incidence();
        let n = self.vertices.len();
        let idx: BTreeMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (id, es) in &inc {
            for &e in es {
                let ed = &self.edges[e];
                adj[idx[id]].push((idx[ed.other(id)], ed.order));
            }
        }
        // Peel leaves to find the centre.
        let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&i| deg[i] <= 1).collect();
        let mut removed = vec![false; n];
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            for &v in &layer {
                removed[v] = true;
            }
            let mut next = Vec::new();
            for &v in &layer {
                for &(w, _) in &adj[v] {
                    if removed[w] {
                        continue;
                    }
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        fn enc(v: usize, parent: usize, adj: &[Vec<(usize, u64)>], orders: &[u64]) -> String {
            let mut kids: Vec<String> = adj[v]
                .iter()
                .filter(|&&(w, _)| w != parent)
                .map(|&(w, eo)| format!("{eo}:{}", enc(w, v, adj, orders)))
                .collect();
            kids.sort();
            format!("({}{})", orders[v], kids.concat())
        }
        let orders: Vec<u64> = self.vertices.iter().map(|v| v.order).collect();
        layer.iter().map(|&c| enc(c, usize::MAX, &adj, &orders)).min()
    }
}

/// Order graph of the Hecke group `C_2 * C_q`: vertices of orders q and 2 joined by an edge of order 1.
pub fn hecke_graph(q: u64) -> Result<OrderGraph> {
    if q < 3 {
        return invalid(format!("Hecke group needs q >= 3, got {q}"));
    }
    OrderGraph::new(
        vec![Vertex { id: "a".into(), order: q }, Vertex { id: "b".into(), order: 2 }],
        vec![Edge { id: "e".into(), from: "a".into(), to: "b".into(), order: 1 }],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: &str, order: u64) -> Vertex {
        Vertex { id: id.into(), order }
    }

    fn e(id: &str, from: &str, to: &str, order: u64) -> Edge {
        Edge { id: id.into(), from: from.into(), to: to.into(), order }
    }

    #[test]
    fn validation_errors() {
        let err = OrderGraph::new(vec![v("a", 6), v("b", 4)], vec![e("x", "a", "b", 4)]).unwrap_err();
        assert!(err.to_string().contains("order of edge must divide order of endpoint"));
        assert!(OrderGraph::new(vec![v("a", 6), v("b", 4)], vec![]).is_err());
        assert!(OrderGraph::new(vec![v("a", 2)], vec![]).is_ok());
    }

    #[test]
    fn canonical_form_ignores_ids() {
        let g1 = OrderGraph::new(vec![v("a", 6), v("b", 2), v("c", 3)], vec![e("x", "a", "b", 1), e("y", "a", "c", 1)]).unwrap();
        let g2 = OrderGraph::new(vec![v("q", 3), v("r", 6), v("s", 2)], vec![e("u", "s", "r", 1), e("w", "r", "q", 1)]).unwrap();
        assert_eq!(g1.tree_canonical_form(), g2.tree_canonical_form());
        let g3 = OrderGraph::new(vec![v("q", 3), v("r", 6), v("s", 2)], vec![e("u", "s", "q", 1), e("w", "r", "q", 1)]).unwrap();
        assert_ne!(g1.tree_canonical_form(), g3.tree_canonical_form());
    }
}
