//! The linear system for the inverse of the linearizer, over `Z[w]` with `w = 1/z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ring::modular::binomial;
use crate::ring::IntPoly;

/// Square matrix of integer polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        PolyMatrix { n, entries: vec![IntPoly::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: IntPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &IntPoly) {
        let k = i * self.n + j;
        self.entries[k] = self.entries[k].add(v);
    }

    /// The matrix with column `j` replaced by `col`.
    pub fn with_column(&self, j: usize, col: &[IntPoly]) -> Self {
        let mut m = self.clone();
        for (i, c) in col.iter().enumerate() {
            m.set(i, j, c.clone());
        }
        m
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> IntPoly {
        let n = self.n;
        if n == 0 {
            return IntPoly::constant(1);
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = IntPoly::constant(1);
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return IntPoly::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, r * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i * n + j].mul(&a[k * n + k]).sub(&a[i * n + k].mul(&a[k * n + j]));
                    a[i * n + j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i * n + k] = IntPoly::zero();
            }
            prev = a[k * n + k].clone();
        }
        a[n * n - 1].scale(&sign)
    }
}

/// Rewrites `c * Phi^e` (as a polynomial in w per power) below `Phi^mu` with
/// `Phi^mu = w Phi - sum_(k<N) C(N,k) (-1)^(N-k) Phi^((p-1)k)`.
pub fn reduce_phi_powers(p: u64, n: u64, mut v: Vec<IntPoly>) -> Vec<IntPoly> {
    let mu = ((p - 1) * n) as usize;
    let w = IntPoly::monomial(1, 1);
    while v.len() > mu {
        let e = v.len() - 1;
        let c = v.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let t = e - mu;
        v[t + 1] = v[t + 1].add(&c.mul(&w));
        for k in 0..n {
            let sign = if (n - k).is_multiple_of(2) { -1 } else { 1 };
            let b = binomial(n as i64, k as i64) * sign;
            let idx = (p - 1) as usize * k as usize + t;
            v[idx] = v[idx].add(&c.scale(&b));
        }
    }
    v.resize(mu, IntPoly::zero());
    v
}

/// `X = 1 - (p-1) N`.
pub fn x_value(p: u64, n: u64) -> i64 {
    1 - ((p - 1) * n) as i64
}

/// Matrix of multiplication by `X Phi^(p-1) - 1` on the basis `1, Phi, ..., Phi^(mu-1)`,
/// entries in `w = 1/z`. Requires `mu >= 2`.
pub fn build_matrix_m(p: u64, n: u64) -> PolyMatrix {
    let mu = ((p - 1) * n) as usize;
    assert!(mu >= 2, "the structure relation reduces only for mu >= 2");
    let x = IntPoly::constant(x_value(p, n));
    let mut m = PolyMatrix::zeros(mu);
    for j in 0..mu {
        let mut v = vec![IntPoly::zero(); j + p as usize];
        v[j] = IntPoly::constant(-1);
        v[j + p as usize - 1] = v[j + p as usize - 1].add(&x);
        for (i, c) in reduce_phi_powers(p, n, v).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// The same matrix from its entry-wise description: `-1` along the whole diagonal,
/// `X` on the `(p-1)`-th subdiagonal and the once-reduced wrap-around columns.
/// For `N = 1` the top power needs a second reduction and the two differ.
pub fn matrix_m_by_cases(p: u64, n: u64) -> PolyMatrix {
    let mu = ((p - 1) * n) as i64;
    let (pm1, x) = ((p - 1) as i64, x_value(p, n));
    let mut m = PolyMatrix::zeros(mu as usize);
    for i in 0..mu {
        for j in 0..mu {
            let mut v = IntPoly::zero();
            if i == j {
                v = v.add(&IntPoly::constant(-1));
            }
            if i == j + pm1 {
                v = v.add(&IntPoly::constant(x));
            }
            if i == j - pm1 * (n as i64 - 1) + 1 && (1..=pm1).contains(&i) {
                v = v.add(&IntPoly::monomial(x, 1));
            }
            for k in 0..n as i64 {
                let d = j - pm1 * (n as i64 - 1);
                if i - pm1 * k == d && (0..=pm1 - 1).contains(&d) {
                    let s = if (n as i64 - k - 1) % 2 == 0 { 1 } else { -1 };
                    v = v.add(&IntPoly::constant(binomial(n as i64, k) * s * x));
                }
            }
            m.set(i as usize, j as usize, v);
        }
    }
    m
}

/// The `N x N` block `A`.
pub fn build_matrix_a(p: u64, n: u64) -> PolyMatrix {
    let nn = n as usize;
    let x = x_value(p, n);
    let mut a = PolyMatrix::zeros(nn);
    for i in 0..nn {
        a.set(i, i, IntPoly::constant(-1));
        if i > 0 {
            a.set(i, i - 1, IntPoly::constant(x));
        }
        let s = if (nn - i - 1).is_multiple_of(2) { 1 } else { -1 };
        let corner = IntPoly::constant(binomial(n as i64, i as i64) * s * x);
        a.add_at(i, nn - 1, &corner);
    }
    a
}

/// `(-1)^mu mu^mu + (mu-1)^(mu-1) w^(p-1)`.
pub fn det_m_closed_form(p: u64, n: u64) -> IntPoly {
    let mu = (p - 1) * n;
    let a = BigInt::from(mu).pow(mu as u32) * if mu.is_multiple_of(2) { 1 } else { -1 };
    let b = BigInt::from(mu - 1).pow(mu as u32 - 1);
    IntPoly::constant(a).add(&IntPoly::monomial(b, (p - 1) as usize))
}

/// `(-1)^N ((p-1)N)^N`.
pub fn det_a_closed_form(p: u64, n: u64) -> BigInt {
    let v = BigInt::from((p - 1) * n).pow(n as u32);
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Exact solution of `M b = c` (`c_0 = -1`, `c_(p-1) = 1`) as numerators over `det M`.
pub fn solve_linearizer(p: u64, n: u64) -> (Vec<IntPoly>, IntPoly) {
    let m = build_matrix_m(p, n);
    let mu = m.dim();
    let c = rhs(p, n);
    let det = m.det();
    let nums = (0..mu).map(|j| m.with_column(j, &c).det()).collect();
    (nums, det)
}

/// `Phi^(p-1) - 1` on the basis `1, ..., Phi^(mu-1)`.
fn rhs(p: u64, n: u64) -> Vec<IntPoly> {
    let mut v = vec![IntPoly::zero(); p as usize];
    v[0] = IntPoly::constant(-1);
    v[p as usize - 1] = IntPoly::constant(1);
    reduce_phi_powers(p, n, v)
}

/// Checks `M b = det(M) c` for the Cramer numerators.
pub fn check_solution(p: u64, n: u64, nums: &[IntPoly], det: &IntPoly) -> bool {
    let m = build_matrix_m(p, n);
    let mu = m.dim();
    let c = rhs(p, n);
    (0..mu).all(|i| {
        let lhs = (0..mu).fold(IntPoly::zero(), |acc, j| acc.add(&m.get(i, j).mul(&nums[j])));
        lhs == det.mul(&c[i])
    })
}

/// Constant coefficient (zero for the zero polynomial).
pub fn constant_term(p: &IntPoly) -> BigInt {
    p.coeffs().first().cloned().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        // p = 2, N = 2: 4 + w.
        assert_eq!(build_matrix_m(2, 2).det(), det_m_closed_form(2, 2));
        assert_eq!(det_m_closed_form(2, 2), IntPoly::from_coeffs(vec![4.into(), 1.into()]));
        assert_eq!(det_m_closed_form(3, 6).coeff(0), BigInt::from(12).pow(12));
        assert_eq!(det_m_closed_form(3, 6).coeff(2), BigInt::from(11).pow(11));
        assert_eq!(constant_term(&build_matrix_a(7, 1).det()), BigInt::from(-6));
    }

    #[test]
    fn mechanical_matches_cases_for_n_at_least_two() {
        for (p, n) in [(2, 2), (2, 3), (3, 2), (3, 4), (5, 2), (7, 2)] {
            assert_eq!(build_matrix_m(p, n), matrix_m_by_cases(p, n), "p={p} N={n}");
        }
    }

    #[test]
    fn cramer_solution() {
        for (p, n) in [(3, 6), (7, 1), (2, 4)] {
            let (nums, det) = solve_linearizer(p, n);
            assert_eq!(det, det_m_closed_form(p, n));
            assert!(check_solution(p, n, &nums, &det));
        }
    }
}
