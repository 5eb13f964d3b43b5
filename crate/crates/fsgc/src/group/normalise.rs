use super::graph::{Edge, OrderGraph};

/// Contracts non-loop edges whose order equals an endpoint order until none remain.
///
/// Edges are scanned in id order; the endpoint of equal order is removed (the larger id
/// when both qualify) and its incidences move to the surviving endpoint.
pub fn normalise(g: &OrderGraph) -> OrderGraph {
    let mut vertices = g.vertices().to_vec();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    loop {
        let order = |id: &str, vs: &[crate::group::Vertex]| vs.iter().find(|v| v.id == id).map(|v| v.order).unwrap();
        let hit = edges.iter().position(|e| {
            !e.is_loop() && (order(&e.from, &vertices) == e.order || order(&e.to, &vertices) == e.order)
        });
        let Some(i) = hit else { break };
        let e = edges.remove(i);
        let from_eq = order(&e.from, &vertices) == e.order;
        let to_eq = order(&e.to, &vertices) == e.order;
        let (gone, keep) = match (from_eq, to_eq) {
            (true, true) if e.from < e.to => (e.to, e.from),
            (true, _) => (e.from, e.to),
            _ => (e.to, e.from),
        };
        vertices.retain(|v| v.id != gone);
        for f in edges.iter_mut() {
            if f.from == gone {
                f.from = keep.clone();
            }
            if f.to == gone {
                f.to = keep.clone();
            }
        }
    }
    OrderGraph::new(vertices, edges).expect("contraction keeps the graph valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::graph::Vertex;
    use crate::group::gtype::compute_type;

    #[test]
    fn single_contraction() {
        let g = OrderGraph::new(
            vec![Vertex { id: "a".into(), order: 2 }, Vertex { id: "b".into(), order: 4 }],
            vec![Edge { id: "e".into(), from: "a".into(), to: "b".into(), order: 2 }],
        )
        .unwrap();
        let n = normalise(&g);
        assert_eq!(n.vertices(), &[Vertex { id: "b".into(), order: 4 }]);
        assert!(n.edges().is_empty());
        assert_eq!(compute_type(&g), compute_type(&n));
    }
}
