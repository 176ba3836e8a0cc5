//! Named forms: highest weight generators of the lattice members and the
//! families `a_k`, `p_{j,m}`, `q_m` used when building vectors in `B_3`.

use super::{omega_form, PolyForm};
use crate::error::{input, Result};
use crate::scalar::Rational;

fn sign(neg: bool) -> Rational {
    Rational::from_int(if neg { -1 } else { 1 })
}

/// `a_k = dx_1 ∧ … ∧ dx_k` (the first `k` coordinates).
pub fn a_form(n: usize, k: usize) -> PolyForm {
    if k > 2 * n {
        return PolyForm::zero(2 * n);
    }
    PolyForm::dx_product(2 * n, &(0..k).collect::<Vec<_>>())
}

/// `p_{j,m} = (-1)^j dx_1 ∧ … ∧ \hat{dx_j} ∧ … ∧ dx_m`, with `j` 1-based;
/// zero when `m < j` or `m > 2n + 1`.
pub fn p_form(n: usize, j: usize, m: usize) -> PolyForm {
    if j == 0 || m < j || m > 2 * n + 1 || (m == 2 * n + 1 && j != m) {
        return PolyForm::zero(2 * n);
    }
    let idx: Vec<usize> = (0..m).filter(|i| *i != j - 1).collect();
    PolyForm::dx_product(2 * n, &idx).scale(&sign(j % 2 == 1))
}

/// `q_m = Σ_{j=1}^m x_j p_{j,m}`.
pub fn q_form(n: usize, m: usize) -> PolyForm {
    (1..=m.min(2 * n)).fold(PolyForm::zero(2 * n), |acc, j| acc.add(&p_form(n, j, m).times_var(j - 1)))
}

/// The Liouville form `½ Σ_i (x_i dx_{i+n} - x_{i+n} dx_i)`, with `dy = ω`.
pub fn liouville(n: usize) -> PolyForm {
    let m = 2 * n;
    let half = Rational::new(1, 2);
    (0..n).fold(PolyForm::zero(m), |acc, i| {
        acc.add(&PolyForm::dvar(m, i + n).times_var(i).scale(&half))
            .sub(&PolyForm::dvar(m, i).times_var(i + n).scale(&half))
    })
}

/// Generator of the closed primitive forms: `dx_1 ∧ … ∧ dx_k`.
pub fn x_vec(n: usize, k: usize) -> PolyForm {
    a_form(n, k)
}

/// `Σ_{i=1}^{k+1} (-1)^i x_i dx_1 ∧ … \hat{dx_i} … ∧ dx_{k+1}`; zero for
/// negative `k`.
pub fn y_vec(n: usize, k: isize) -> PolyForm {
    if k < 0 {
        return PolyForm::zero(2 * n);
    }
    q_form(n, k as usize + 1)
}

/// `ω ∧ y_{k-2} - 2(n-k+2) y ∧ x_{k-1}`, with `y` the Liouville form.
pub fn z_vec(n: usize, k: usize) -> PolyForm {
    let c = Rational::from_int(2 * (n as i64 - k as i64 + 2));
    omega_form(n)
        .wedge(&y_vec(n, k as isize - 2))
        .sub(&liouville(n).wedge(&x_vec(n, k - 1)).scale(&c))
}

/// The triple `(x_k, y_k, z_k)` for `1 ≤ k ≤ n`.
pub fn distinguished(n: usize, k: usize) -> Result<(PolyForm, PolyForm, PolyForm)> {
    if k < 1 || k > n {
        return input(format!("distinguished vectors need 1 <= k <= n (k = {k}, n = {n})"));
    }
    Ok((x_vec(n, k), y_vec(n, k as isize), z_vec(n, k)))
}
