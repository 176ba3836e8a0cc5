//! Predicted graded dimensions from lists of composition factors.

use std::fmt;

use serde::Serialize;

use super::{gl_dim, sp_dim, Partition};
use crate::error::{input, Result};
use crate::forms::{factor_dim, Factor, Submodule};
use crate::par;

/// Number of monomials of degree `d` in `m` variables.
pub fn monomial_count(m: usize, d: usize) -> u64 {
    if m == 0 {
        return u64::from(d == 0);
    }
    // C(d + m - 1, m - 1), built up exactly
    (1..m as u64).fold(1u64, |acc, i| acc * (d as u64 + i) / i)
}

/// One composition factor with the degree at which its constant part sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FactorDescriptor {
    /// `F_λ ≅ C[x] ⊗ λ` with `λ` not a column.
    Tensor { lambda: Partition, offset: usize },
    /// A subquotient of `F_(1^k)`; constant `k`-forms sit in degree `offset`.
    Lattice { factor: Factor, offset: usize },
}

impl FactorDescriptor {
    pub fn tensor(lambda: Partition, offset: usize) -> Self {
        FactorDescriptor::Tensor { lambda, offset }
    }

    pub fn lattice(factor: Factor, offset: usize) -> Self {
        FactorDescriptor::Lattice { factor, offset }
    }

    /// Rejects anything outside the admissible list: `F_λ` with `λ` not a
    /// column, `X_k`, `Y_k/X_k`, `Z_k/X_k`, `F_(1^k)/T_k` for `k < n`, and
    /// `F_(1^k)/X_k` for `k ∈ {0, n}`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            FactorDescriptor::Tensor { lambda, .. } => {
                if lambda.is_column() {
                    return input(format!("F{lambda} is a column shape; use a lattice subquotient"));
                }
                if lambda.len() > n {
                    return input(format!("F{lambda} needs at most {n} rows"));
                }
            }
            FactorDescriptor::Lattice { factor, .. } => {
                let k = factor.k;
                let ok = match (factor.top, factor.bottom) {
                    (Submodule::X, None) => k <= n,
                    (Submodule::Y, Some(Submodule::X)) | (Submodule::Z, Some(Submodule::X)) => k >= 1 && k < n,
                    (Submodule::F, Some(Submodule::T)) => k >= 1 && k < n,
                    (Submodule::F, Some(Submodule::X)) => k == 0 || k == n,
                    _ => false,
                };
                if !ok {
                    return input(format!("{factor} is not an admissible composition factor for n = {n}"));
                }
            }
        }
        Ok(())
    }

    /// Dimension in degree `d`.
    pub fn dim(&self, n: usize, d: usize) -> Result<u64> {
        self.validate(n)?;
        match self {
            FactorDescriptor::Tensor { lambda, offset } => {
                if d < *offset {
                    return Ok(0);
                }
                Ok(sp_dim(lambda, n) * monomial_count(2 * n, d - offset))
            }
            FactorDescriptor::Lattice { factor, offset } => {
                if d + factor.k < *offset {
                    return Ok(0);
                }
                Ok(factor_dim(n, *factor, d + factor.k - offset)? as u64)
            }
        }
    }
}

impl fmt::Display for FactorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorDescriptor::Tensor { lambda, offset } => write!(f, "F{lambda}@{offset}"),
            FactorDescriptor::Lattice { factor, offset } => write!(f, "{factor}@{offset}"),
        }
    }
}

/// The factor lists of the composition series computed for `A'_2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decomposition {
    /// `A'/M_3`.
    QuotientM3,
    /// `A'/(M_3 + L_2)`.
    B1Bar,
    B2,
    /// The conjectured list for `B_3`.
    B3,
}

impl Decomposition {
    pub fn factors(&self, n: usize) -> Vec<FactorDescriptor> {
        use Submodule::*;
        let lat = |k, top, bottom: Option<Submodule>, offset| {
            let factor = match bottom {
                None => Factor::sub(k, top),
                Some(b) => Factor::quot(k, top, b),
            };
            FactorDescriptor::lattice(factor, offset)
        };
        let mut out = Vec::new();
        if *self == Decomposition::B3 {
            for k in (1..n).step_by(2) {
                out.push(FactorDescriptor::tensor(Partition::hook(2, k), k + 2));
                out.push(lat(k, F, Some(T), k + 2));
                out.push(lat(k, Z, Some(X), k + 2));
            }
            return out;
        }
        for k in (2..n).step_by(2) {
            match self {
                Decomposition::QuotientM3 => {
                    out.extend([lat(k, F, Some(T), k), lat(k, Y, Some(X), k), lat(k, Z, Some(X), k), lat(k, X, None, k)])
                }
                Decomposition::B1Bar => out.extend([lat(k, F, Some(T), k), lat(k, Y, Some(X), k)]),
                Decomposition::B2 => out.extend([lat(k, Z, Some(X), k), lat(k, X, None, k)]),
                Decomposition::B3 => unreachable!(),
            }
        }
        if n % 2 == 0 {
            match self {
                Decomposition::QuotientM3 => out.extend([lat(n, F, Some(X), n), lat(n, X, None, n)]),
                Decomposition::B1Bar => out.push(lat(n, F, Some(X), n)),
                Decomposition::B2 => out.push(lat(n, X, None, n)),
                Decomposition::B3 => unreachable!(),
            }
        }
        if matches!(self, Decomposition::QuotientM3 | Decomposition::B1Bar) {
            out.extend([lat(0, F, Some(X), 0), lat(0, X, None, 0)]);
        }
        out
    }
}

/// One row of a prediction table: per-factor dimensions and their sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedRow {
    pub degree: usize,
    pub parts: Vec<u64>,
    pub total: u64,
}

/// Per-degree sums of factor dimensions.
pub fn predicted_dims(n: usize, factors: &[FactorDescriptor], degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<PredictedRow>> {
    for f in factors {
        f.validate(n)?;
    }
    let ds: Vec<usize> = degrees.collect();
    par::map(&ds, |&d| {
        let parts = factors.iter().map(|f| f.dim(n, d)).collect::<Result<Vec<_>>>()?;
        Ok(PredictedRow { degree: d, total: parts.iter().sum(), parts })
    })
    .into_iter()
    .collect()
}

/// `dim G_μ` in degree `d` for the coinduced `W_2n` module generated in
/// degree `offset`.
pub fn coinduced_dim(mu: &Partition, n: usize, offset: usize, d: usize) -> u64 {
    if d < offset {
        return 0;
    }
    gl_dim(mu, 2 * n) * monomial_count(2 * n, d - offset)
}

/// The summands `G_(2,1^{2i-1})`, `1 ≤ i ≤ n`, of `B_3(A_2n)` with the
/// degree of their generators.
pub fn free_b3_components(n: usize) -> Vec<(Partition, usize)> {
    (1..=n).map(|i| (Partition::hook(2, 2 * i - 1), 2 * i + 1)).collect()
}
