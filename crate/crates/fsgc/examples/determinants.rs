//! The matrices M and A of the linearizer system and their determinants.

use fsgc::phi::matrix::{build_matrix_a, constant_term, det_a_closed_form, det_m_closed_form, solve_linearizer, check_solution};
use fsgc::phi::build_matrix_m;

fn main() {
    println!("det M as a polynomial in w = 1/z");
    println!("{:>2} {:>2} {:>3}  det M", "p", "N", "mu");
    for p in [2u64, 3, 5, 7] {
        for n in 1..=12 / (p - 1) {
            let mu = (p - 1) * n;
            let det_a = constant_term(&build_matrix_a(p, n).det());
            assert_eq!(det_a, det_a_closed_form(p, n));
            if mu < 2 {
                println!("{p:>2} {n:>2} {mu:>3}  (no reduction for mu = 1), det A = {det_a}");
                continue;
            }
            let det_m = build_matrix_m(p, n).det();
            assert_eq!(det_m, det_m_closed_form(p, n));
            println!("{p:>2} {n:>2} {mu:>3}  {}   det A = {det_a}", det_m.to_string().replace('z', "w"));
        }
    }
    let (nums, det) = solve_linearizer(7, 1);
    println!("Cramer solution for p = 7, N = 1 checks: {}", check_solution(7, 1, &nums, &det));
}
