use std::collections::BTreeMap;

use super::graph::OrderGraph;
use crate::error::{invalid, Result};
use crate::ring::modular::{divisors, lcm, totient};

/// The type `(m; zeta_kappa for kappa | m)`, which determines the free subgroup counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupType {
    m: u64,
    zeta: BTreeMap<u64, i64>,
}

impl GroupType {
    /// Builds a type from explicit data; missing divisors default to zero.
    pub fn new(m: u64, zeta: BTreeMap<u64, i64>) -> Result<Self> {
        if m == 0 {
            return invalid("m must be positive");
        }
        let divs = divisors(m);
        for k in zeta.keys() {
            if !m.is_multiple_of(*k) || *k == 0 {
                return invalid(format!("zeta index {k} does not divide m = {m}"));
            }
        }
        let zeta: BTreeMap<u64, i64> = divs.iter().map(|&k| (k, zeta.get(&k).copied().unwrap_or(0))).collect();
        for (&k, &z) in &zeta {
            if k < m && z < 0 {
                return invalid(format!("zeta_{k} = {z} is negative"));
            }
        }
        if zeta[&m] < -1 {
            return invalid(format!("zeta_m = {} is below -1", zeta[&m]));
        }
        Ok(GroupType { m, zeta })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn zeta(&self) -> &BTreeMap<u64, i64> {
        &self.zeta
    }

    pub fn zeta_at(&self, kappa: u64) -> i64 {
        self.zeta.get(&kappa).copied().unwrap_or(0)
    }

    /// Free rank `mu = 1 + sum phi(m/kappa) zeta_kappa`.
    pub fn free_rank(&self) -> i64 {
        1 + self.zeta.iter().map(|(&k, &z)| totient(self.m / k) as i64 * z).sum::<i64>()
    }

    /// p-rank: the same sum restricted to `p | kappa`.
    pub fn p_rank(&self, p: u64) -> i64 {
        let r = 1 + self
            .zeta
            .iter()
            .filter(|(&k, _)| k % p == 0)
            .map(|(&k, &z)| totient(self.m / k) as i64 * z)
            .sum::<i64>();
        if r == 0 {
            debug_assert_eq!(self.zeta[&self.m], -1);
            debug_assert!(self.zeta.iter().all(|(&k, &z)| k % p != 0 || k == self.m || z == 0));
        }
        r
    }
}

/// `m` is the lcm of vertex orders, `zeta_kappa = #{e : n(e) | kappa} - #{v : n(v) | kappa}`.
pub fn compute_type(g: &OrderGraph) -> GroupType {
    let m = g.vertices().iter().fold(1, |a, v| lcm(a, v.order));
    let zeta = divisors(m)
        .into_iter()
        .map(|k| {
            let e = g.edges().iter().filter(|e| k % e.order == 0).count() as i64;
            let v = g.vertices().iter().filter(|v| k % v.order == 0).count() as i64;
            (k, e - v)
        })
        .collect();
    GroupType { m, zeta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::graph::hecke_graph;

    #[test]
    fn hecke_types() {
        let t3 = compute_type(&hecke_graph(3).unwrap());
        assert_eq!((t3.m(), t3.free_rank()), (6, 2));
        let t4 = compute_type(&hecke_graph(4).unwrap());
        // lcm(4, 2) = 4, and the Euler characteristic -1/4 gives mu = 1 + 4/4.
        assert_eq!(t4.m(), 4);
        assert_eq!(t4.zeta().values().copied().collect::<Vec<_>>(), vec![1, 0, -1]);
        assert_eq!(t4.free_rank(), 2);
        let t7 = compute_type(&hecke_graph(7).unwrap());
        assert_eq!((t7.m(), t7.free_rank(), t7.p_rank(7)), (14, 6, 0));
        assert_eq!(t7.p_rank(5), 1);
    }
}
