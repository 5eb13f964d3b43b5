//! JSON file formats for order graphs, divisor trees and lifted representations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{DivisorNode, DivisorTree, Edge, OrderGraph, RootedTree, Vertex};
use crate::lift::LiftedRep;
use crate::phi::PhiAlgebra;
use crate::ring::{LaurentPoly, PrimePower, YFraction};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub order: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub from: String,
    pub to: String,
    pub order: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

pub fn parse_order_graph(text: &str) -> Result<OrderGraph> {
    let f: GraphFile = serde_json::from_str(text).map_err(json_error)?;
    OrderGraph::new(
        f.vertices.into_iter().map(|v| Vertex { id: v.id, order: v.order }).collect(),
        f.edges
            .into_iter()
            .map(|e| Edge { id: e.id, from: e.from, to: e.to, order: e.order })
            .collect(),
    )
}

pub fn graph_to_file(g: &OrderGraph) -> GraphFile {
    GraphFile {
        vertices: g.vertices().iter().map(|v| VertexRecord { id: v.id.clone(), order: v.order }).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeRecord { id: e.id.clone(), from: e.from.clone(), to: e.to.clone(), order: e.order })
            .collect(),
    }
}

pub fn serialize_order_graph(g: &OrderGraph) -> String {
    serde_json::to_string_pretty(&graph_to_file(g)).expect("graph serializes")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ShapeRecord {
    pub root_is_leaf: bool,
    pub children: Vec<ShapeRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub label: u64,
    pub shape: ShapeRecord,
    /// Preorder index of the parent-image vertex this image is glued to.
    #[serde(default)]
    pub glue: usize,
    #[serde(default)]
    pub children: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DivisorTreeFile {
    pub root: NodeRecord,
    pub root_order: u64,
}

fn shape_to_record(t: &RootedTree) -> ShapeRecord {
    ShapeRecord { root_is_leaf: t.root_is_leaf(), children: t.children.iter().map(shape_to_record).collect() }
}

fn shape_from_record(r: &ShapeRecord) -> Result<RootedTree> {
    let t = RootedTree { children: r.children.iter().map(shape_from_record).collect::<Result<_>>()? };
    if t.root_is_leaf() != r.root_is_leaf {
        return invalid("shape root_is_leaf marker disagrees with its children");
    }
    Ok(t)
}

fn node_to_record(n: &DivisorNode) -> NodeRecord {
    NodeRecord {
        label: n.label,
        shape: shape_to_record(&n.shape),
        glue: n.glue,
        children: n.children.iter().map(node_to_record).collect(),
    }
}

fn node_from_record(r: &NodeRecord) -> Result<DivisorNode> {
    Ok(DivisorNode {
        label: r.label,
        shape: shape_from_record(&r.shape)?,
        glue: r.glue,
        children: r.children.iter().map(node_from_record).collect::<Result<_>>()?,
    })
}

/// Parses a divisor tree; invariants for a particular prime are checked by `DivisorTree::validate`.
pub fn parse_divisor_tree(text: &str) -> Result<DivisorTree> {
    let f: DivisorTreeFile = serde_json::from_str(text).map_err(json_error)?;
    Ok(DivisorTree { root: node_from_record(&f.root)?, root_order: f.root_order })
}

pub fn divisor_tree_to_file(d: &DivisorTree) -> DivisorTreeFile {
    DivisorTreeFile { root: node_to_record(&d.root), root_order: d.root_order }
}

pub fn serialize_divisor_tree(d: &DivisorTree) -> String {
    serde_json::to_string_pretty(&divisor_tree_to_file(d)).expect("divisor tree serializes")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    pub phi_power: usize,
    pub y_exponent: u32,
    pub laurent: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub p: u64,
    pub alpha: u32,
    pub mu: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub m: u64,
    pub coefficients: Vec<CoefficientRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation_hash: Option<String>,
}

/// Non-zero coefficients only, ascending Phi-power.
pub fn rep_to_file(rep: &LiftedRep) -> RepFile {
    let coefficients = rep
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| CoefficientRecord {
            phi_power: i,
            y_exponent: c.y_exponent(),
            laurent: c.numerator().terms().filter(|(_, v)| *v != 0).map(|(e, v)| (e.to_string(), v)).collect(),
        })
        .collect();
    RepFile {
        p: rep.p(),
        alpha: rep.ring().alpha(),
        mu: rep.mu(),
        n: rep.n(),
        m: rep.m,
        coefficients,
        equation_hash: rep.equation_hash.clone(),
    }
}

pub fn serialize_rep(rep: &LiftedRep) -> String {
    serde_json::to_string_pretty(&rep_to_file(rep)).expect("representation serializes")
}

pub fn rep_from_file(f: &RepFile) -> Result<LiftedRep> {
    let ring = PrimePower::new(f.p, f.alpha)?;
    if f.n as usize * (f.p as usize - 1) != f.mu {
        return invalid(format!("mu = {} is not N (p-1) = {}", f.mu, f.n * (f.p - 1)));
    }
    let algebra = PhiAlgebra::new(ring, f.n)?;
    let mut coeffs = vec![YFraction::zero(ring); f.mu];
    let mut seen = vec![false; f.mu];
    for c in &f.coefficients {
        if c.phi_power >= f.mu {
            return invalid(format!("phi_power {} is not below mu = {}", c.phi_power, f.mu));
        }
        if std::mem::replace(&mut seen[c.phi_power], true) {
            return invalid(format!("phi_power {} appears twice", c.phi_power));
        }
        if c.y_exponent > 0 && algebra.y().is_trivial() {
            return invalid("y_exponent must be 0 when Y = 1");
        }
        let mut terms = Vec::new();
        for (k, &v) in &c.laurent {
            let e: i64 = k.parse().map_err(|_| Error::InvalidInput(format!("exponent key {k:?} is not an integer")))?;
            if v >= ring.modulus() {
                return invalid(format!("coefficient {v} is not reduced mod {}", ring.modulus()));
            }
            terms.push((e, v as i64));
        }
        let num = LaurentPoly::from_terms(ring, &terms);
        let frac = YFraction::canonicalize(num, c.y_exponent, algebra.y());
        if frac.y_exponent() != c.y_exponent || frac.numerator() != &LaurentPoly::from_terms(ring, &terms) {
            return invalid(format!("coefficient of Phi^{} is not in canonical form", c.phi_power));
        }
        coeffs[c.phi_power] = frac;
    }
    let f_elem = algebra.element(coeffs)?;
    Ok(LiftedRep { m: f.m, algebra, f: f_elem, equation_hash: f.equation_hash.clone(), truncation: None })
}

pub fn parse_rep(text: &str) -> Result<LiftedRep> {
    let f: RepFile = serde_json::from_str(text).map_err(json_error)?;
    rep_from_file(&f)
}
