//! Slice-wise linear algebra on forms: the submodules `X_k ⊆ Y_k, Z_k ⊆ T_k ⊆ F_(1^k)`
//! of primitive `k`-forms and the dimensions of their quotients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::{iota_pi, lefschetz_primitive, omega_form, FormMonomial, PolyForm};
use crate::error::{input, Error, Result};
use crate::linalg::{intersection_basis, kernel, reduce, SliceBasis, SparseVec};
use crate::par;

/// `k`-forms on `C^{2n}` with fixed polynomial degree and weight.
#[derive(Clone, Debug)]
pub struct FormSlice {
    pub n: usize,
    pub k: usize,
    pub poly_degree: usize,
    pub weight: Vec<i32>,
    pub monomials: Vec<FormMonomial>,
    index: HashMap<FormMonomial, usize>,
}

impl FormSlice {
    fn from_monomials(n: usize, k: usize, p: usize, weight: Vec<i32>, monomials: Vec<FormMonomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        FormSlice { n, k, poly_degree: p, weight, monomials, index }
    }

    /// Every nonempty weight slice of `k`-forms with polynomial degree `p`,
    /// ordered by weight.
    pub fn all(n: usize, k: usize, p: usize) -> Vec<FormSlice> {
        let m = 2 * n;
        let mut groups: BTreeMap<Vec<i32>, Vec<FormMonomial>> = BTreeMap::new();
        if k > m {
            return Vec::new();
        }
        let mut exps = Vec::new();
        compositions(m, p, &mut vec![0u8; m], 0, &mut exps);
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() as usize != k {
                continue;
            }
            for e in &exps {
                let mono = FormMonomial { exps: e.iter().copied().collect(), dx: mask };
                groups.entry(mono.weight(n)).or_default().push(mono);
            }
        }
        groups
            .into_iter()
            .map(|(w, mut monos)| {
                monos.sort();
                FormSlice::from_monomials(n, k, p, w, monos)
            })
            .collect()
    }

    /// The single slice with the given weight (possibly empty).
    pub fn with_weight(n: usize, k: usize, p: usize, weight: &[i32]) -> FormSlice {
        FormSlice::all(n, k, p)
            .into_iter()
            .find(|s| s.weight == weight)
            .unwrap_or_else(|| FormSlice::from_monomials(n, k, p, weight.to_vec(), Vec::new()))
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn vector(&self, f: &PolyForm) -> Result<SparseVec> {
        let mut items = Vec::with_capacity(f.len());
        for (mono, c) in f.terms() {
            match self.index.get(mono) {
                Some(i) => items.push((*i, c.clone())),
                None => return input(format!("term {mono:?} is outside the form slice")),
            }
        }
        Ok(SparseVec::new(items))
    }

    pub fn form(&self, v: &SparseVec) -> PolyForm {
        let mut f = PolyForm::zero(2 * self.n);
        for (i, c) in v.iter() {
            f.add_term(self.monomials[i].clone(), c.clone());
        }
        f
    }

    fn basis_form(&self, i: usize) -> PolyForm {
        PolyForm::monomial(2 * self.n, self.monomials[i].clone(), crate::scalar::Rational::ONE)
    }

    /// Kernel of the direct sum of the given linear maps, as domain vectors.
    fn joint_kernel(&self, maps: &[&(dyn Fn(&PolyForm) -> Result<PolyForm> + Sync)]) -> Result<Vec<SparseVec>> {
        let mut codomains: Vec<HashMap<FormMonomial, usize>> = vec![HashMap::new(); maps.len()];
        let mut raw: Vec<Vec<PolyForm>> = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let b = self.basis_form(i);
            raw.push(maps.iter().map(|f| f(&b)).collect::<Result<_>>()?);
        }
        for imgs in &raw {
            for (c, img) in codomains.iter_mut().zip(imgs) {
                for (mono, _) in img.terms() {
                    let next = c.len();
                    c.entry(mono.clone()).or_insert(next);
                }
            }
        }
        let offsets: Vec<usize> = codomains
            .iter()
            .scan(0usize, |acc, c| {
                let o = *acc;
                *acc += c.len();
                Some(o)
            })
            .collect();
        let out_dim: usize = codomains.iter().map(HashMap::len).sum();
        let images: Vec<SparseVec> = raw
            .iter()
            .map(|imgs| {
                SparseVec::new(imgs.iter().enumerate().flat_map(|(j, img)| {
                    let (c, o) = (&codomains[j], offsets[j]);
                    img.terms().map(move |(mono, q)| (o + c[mono], q.clone()))
                }))
            })
            .collect();
        kernel(&images, out_dim)
    }

    /// Basis of a submodule's intersection with this slice.
    pub fn submodule_basis(&self, which: Submodule) -> Result<SliceBasis> {
        let n = self.n;
        let k = self.k;
        let pi = |a: &PolyForm| Ok(iota_pi(a));
        let vecs = match which {
            Submodule::F => self.joint_kernel(&[&pi])?,
            Submodule::X => self.joint_kernel(&[&pi, &|a: &PolyForm| Ok(a.d())])?,
            Submodule::Y => {
                need_below_n(k, n)?;
                self.joint_kernel(&[&pi, &|a: &PolyForm| Ok(iota_pi(&a.d()))])?
            }
            Submodule::Z => {
                need_below_n(k, n)?;
                self.joint_kernel(&[&pi, &|a: &PolyForm| lefschetz_primitive(&a.d(), n)])?
            }
            Submodule::T => {
                let y = self.submodule_basis(Submodule::Y)?;
                let z = self.submodule_basis(Submodule::Z)?;
                return crate::linalg::sum_basis(&y, &z);
            }
        };
        reduce(&vecs, self.dim())
    }
}

fn need_below_n(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return input(format!("Y_k and Z_k are defined for k < n (k = {k}, n = {n})"));
    }
    Ok(())
}

fn compositions(m: usize, p: usize, cur: &mut Vec<u8>, pos: usize, out: &mut Vec<Vec<u8>>) {
    if pos == m - 1 {
        cur[pos] = p as u8;
        out.push(cur.clone());
        return;
    }
    for v in (0..=p).rev() {
        cur[pos] = v as u8;
        compositions(m, p - v, cur, pos + 1, out);
    }
}

/// Submodules of `F_(1^k)`, the primitive `k`-forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Submodule {
    /// All primitive forms.
    F,
    /// Closed primitive forms.
    X,
    /// `dα` primitive.
    Y,
    /// `dα` divisible by `ω`.
    Z,
    /// `Y + Z`.
    T,
}

/// A subquotient `top / bottom` of `F_(1^k)` (or `top` alone).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factor {
    pub k: usize,
    pub top: Submodule,
    pub bottom: Option<Submodule>,
}

impl Factor {
    pub fn sub(k: usize, top: Submodule) -> Self {
        Factor { k, top, bottom: None }
    }

    pub fn quot(k: usize, top: Submodule, bottom: Submodule) -> Self {
        Factor { k, top, bottom: Some(bottom) }
    }

    pub fn dim(&self, l: &LatticeDims) -> Result<usize> {
        let get = |s: Submodule| -> Result<usize> {
            match s {
                Submodule::F => Ok(l.f),
                Submodule::X => Ok(l.x),
                Submodule::Y => l.y.ok_or_else(|| Error::Input("Y_k needs k < n".into())),
                Submodule::Z => l.z.ok_or_else(|| Error::Input("Z_k needs k < n".into())),
                Submodule::T => l.t.ok_or_else(|| Error::Input("T_k needs k < n".into())),
            }
        };
        let top = get(self.top)?;
        Ok(match self.bottom {
            None => top,
            Some(b) => top - get(b)?,
        })
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: Submodule| match s {
            Submodule::F => format!("F(1^{})", self.k),
            Submodule::X => format!("X{}", self.k),
            Submodule::Y => format!("Y{}", self.k),
            Submodule::Z => format!("Z{}", self.k),
            Submodule::T => format!("T{}", self.k),
        };
        write!(f, "{}", name(self.top))?;
        if let Some(b) = self.bottom {
            write!(f, "/{}", name(b))?;
        }
        Ok(())
    }
}

/// Dimensions of the lattice members in one total degree. `y`, `z`, `t`
/// are only defined for `k < n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LatticeDims {
    pub f: usize,
    pub x: usize,
    pub y: Option<usize>,
    pub z: Option<usize>,
    pub t: Option<usize>,
}

impl LatticeDims {
    /// `dim(Y ∩ Z) = dim Y + dim Z - dim(Y + Z)`.
    pub fn y_meet_z(&self) -> Option<usize> {
        Some(self.y? + self.z? - self.t?)
    }
}

/// Lattice dimensions for `k`-forms of total degree `d` on `C^{2n}`.
pub fn lattice_dims(n: usize, k: usize, d: usize) -> Result<LatticeDims> {
    if k > n {
        return input(format!("F_(1^k) needs k <= n (k = {k}, n = {n})"));
    }
    if d < k {
        return Ok(LatticeDims { y: (k < n).then_some(0), z: (k < n).then_some(0), t: (k < n).then_some(0), ..Default::default() });
    }
    let slices = FormSlice::all(n, k, d - k);
    let per: Vec<Result<LatticeDims>> = par::map(&slices, |s| {
        let f = s.submodule_basis(Submodule::F)?.rank();
        let x = s.submodule_basis(Submodule::X)?.rank();
        if k < n {
            let y = s.submodule_basis(Submodule::Y)?;
            let z = s.submodule_basis(Submodule::Z)?;
            let t = crate::linalg::sum_basis(&y, &z)?.rank();
            Ok(LatticeDims { f, x, y: Some(y.rank()), z: Some(z.rank()), t: Some(t) })
        } else {
            Ok(LatticeDims { f, x, ..Default::default() })
        }
    });
    let mut acc = LatticeDims { y: (k < n).then_some(0), z: (k < n).then_some(0), t: (k < n).then_some(0), ..Default::default() };
    for p in per {
        let p = p?;
        acc.f += p.f;
        acc.x += p.x;
        if k < n {
            *acc.y.as_mut().unwrap() += p.y.unwrap();
            *acc.z.as_mut().unwrap() += p.z.unwrap();
            *acc.t.as_mut().unwrap() += p.t.unwrap();
        }
    }
    Ok(acc)
}

/// Dimension of a lattice subquotient in total degree `d`.
pub fn factor_dim(n: usize, factor: Factor, d: usize) -> Result<usize> {
    factor.dim(&lattice_dims(n, factor.k, d)?)
}

/// Membership of a primitive `k`-form in a lattice member.
pub fn submodule_member(alpha: &PolyForm, which: Submodule, n: usize) -> Result<bool> {
    if alpha.vars() != 2 * n {
        return input("form does not live on C^2n");
    }
    if alpha.is_zero() {
        return Ok(true);
    }
    let Some(k) = alpha.form_degree() else {
        return Err(Error::Precondition("form degree is not homogeneous".into()));
    };
    if !iota_pi(alpha).is_zero() {
        return Err(Error::Precondition("form is not primitive".into()));
    }
    match which {
        Submodule::F => Ok(true),
        Submodule::X => Ok(alpha.d().is_zero()),
        Submodule::Y => {
            need_below_n(k, n)?;
            Ok(iota_pi(&alpha.d()).is_zero())
        }
        Submodule::Z => {
            need_below_n(k, n)?;
            Ok(lefschetz_primitive(&alpha.d(), n)?.is_zero())
        }
        Submodule::T => {
            need_below_n(k, n)?;
            // T is graded, so test each (degree, weight) component separately
            let mut parts: BTreeMap<(usize, Vec<i32>), PolyForm> = BTreeMap::new();
            for (mono, c) in alpha.terms() {
                parts
                    .entry((mono.poly_degree(), mono.weight(n)))
                    .or_insert_with(|| PolyForm::zero(2 * n))
                    .add_term(mono.clone(), c.clone());
            }
            for ((p, w), part) in parts {
                let s = FormSlice::with_weight(n, k, p, &w);
                if !s.submodule_basis(Submodule::T)?.contains(&s.vector(&part)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Dimensions of closed forms of even positive form degree in total degree
/// `d`, optionally modulo the forms divisible by `ω`.
pub fn closed_even_dims(n: usize, d: usize, modulo_omega: bool) -> Result<usize> {
    let mut total = 0;
    for k in (2..=(2 * n).min(d)).step_by(2) {
        let p = d - k;
        let slices = FormSlice::all(n, k, p);
        let lower: BTreeMap<Vec<i32>, FormSlice> = if modulo_omega {
            FormSlice::all(n, k - 2, p).into_iter().map(|s| (s.weight.clone(), s)).collect()
        } else {
            BTreeMap::new()
        };
        let omega = omega_form(n);
        let dims: Vec<Result<usize>> = par::map(&slices, |s| {
            let closed = reduce(&s.joint_kernel(&[&|a: &PolyForm| Ok(a.d())])?, s.dim())?;
            if !modulo_omega {
                return Ok(closed.rank());
            }
            let div = match lower.get(&s.weight) {
                Some(low) => {
                    let imgs: Vec<SparseVec> = (0..low.dim())
                        .map(|i| s.vector(&omega.wedge(&low.basis_form(i))))
                        .collect::<Result<_>>()?;
                    reduce(&imgs, s.dim())?
                }
                None => SliceBasis::empty(s.dim()),
            };
            Ok(closed.rank() - intersection_basis(&closed, &div)?.rank())
        });
        for r in dims {
            total += r?;
        }
    }
    Ok(total)
}

/// Dimensions `(dF, dF ∩ P, dF ∩ ωΩ, (dF ∩ P) + (dF ∩ ωΩ))` inside the
/// `(k+1)`-forms of total degree `d`, where `F` is the primitive `k`-forms
/// and `P` the primitive `(k+1)`-forms.
pub fn differential_split_dims(n: usize, k: usize, d: usize) -> Result<[usize; 4]> {
    need_below_n(k, n)?;
    let mut acc = [0usize; 4];
    if d < k + 1 {
        return Ok(acc);
    }
    let p = d - k;
    let omega = omega_form(n);
    let targets: BTreeMap<Vec<i32>, FormSlice> =
        FormSlice::all(n, k + 1, p - 1).into_iter().map(|s| (s.weight.clone(), s)).collect();
    let lowers: BTreeMap<Vec<i32>, FormSlice> = if k >= 1 {
        FormSlice::all(n, k - 1, p - 1).into_iter().map(|s| (s.weight.clone(), s)).collect()
    } else {
        BTreeMap::new()
    };
    for src in FormSlice::all(n, k, p) {
        let Some(tgt) = targets.get(&src.weight) else { continue };
        let f = src.submodule_basis(Submodule::F)?;
        let df: Vec<SparseVec> = f.rows().iter().map(|r| tgt.vector(&src.form(r).d())).collect::<Result<_>>()?;
        let df = reduce(&df, tgt.dim())?;
        let prim = reduce(&tgt.joint_kernel(&[&|a: &PolyForm| Ok(iota_pi(a))])?, tgt.dim())?;
        let div = match lowers.get(&src.weight) {
            Some(low) => {
                let imgs: Vec<SparseVec> =
                    (0..low.dim()).map(|i| tgt.vector(&omega.wedge(&low.basis_form(i)))).collect::<Result<_>>()?;
                reduce(&imgs, tgt.dim())?
            }
            None => SliceBasis::empty(tgt.dim()),
        };
        let a = intersection_basis(&df, &prim)?;
        let b = intersection_basis(&df, &div)?;
        let s = crate::linalg::sum_basis(&a, &b)?;
        acc[0] += df.rank();
        acc[1] += a.rank();
        acc[2] += b.rank();
        acc[3] += s.rank();
    }
    Ok(acc)
}
