//! `sp_2n` acting on polynomial forms and on `A_2n` through linear
//! substitutions. Indices are 1-based, as in the matrix names.

use std::fmt;
use std::str::FromStr;

use super::SpWeight;
use crate::algebra::{apply_derivation, FreeElement, GeneratorMap, Signature};
use crate::error::{input, Error, Result};
use crate::forms::PolyForm;
use crate::scalar::Rational;

/// Named elements of `sp_2n`. `XT`, `YT`, `UT` are the transposes, i.e. the
/// lowering operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootVector {
    /// `E_ii - E_{i+n,i+n}`.
    H(usize),
    /// `E_ij - E_{j+n,i+n}`.
    X(usize, usize),
    /// `E_{i,j+n} + E_{j,i+n}`; `Y(i,i)` means `U(i)`.
    Y(usize, usize),
    /// `E_{i,i+n}`.
    U(usize),
    /// `E_ji - E_{i+n,j+n}`. The second index may run up to `2n`, in which
    /// case only the `gl` part `E_ji` is kept.
    XT(usize, usize),
    /// `E_{j+n,i} + E_{i+n,j}`; `YT(i,i)` means `UT(i)`.
    YT(usize, usize),
    /// `E_{i+n,i}`.
    UT(usize),
}

impl RootVector {
    /// The matrix as `(row, column, coefficient)` triples, 1-based.
    pub fn entries(&self, n: usize) -> Result<Vec<(usize, usize, i64)>> {
        let ok = |i: usize| (1..=n).contains(&i);
        let bad = || Error::Input(format!("{self} is not an element of sp_{}", 2 * n));
        let e = match *self {
            RootVector::H(i) if ok(i) => vec![(i, i, 1), (i + n, i + n, -1)],
            RootVector::X(i, j) if ok(i) && ok(j) => {
                if i == j {
                    return RootVector::H(i).entries(n);
                }
                vec![(i, j, 1), (j + n, i + n, -1)]
            }
            RootVector::Y(i, j) if ok(i) && ok(j) => {
                if i == j {
                    return RootVector::U(i).entries(n);
                }
                vec![(i, j + n, 1), (j, i + n, 1)]
            }
            RootVector::U(i) if ok(i) => vec![(i, i + n, 1)],
            RootVector::XT(i, j) if ok(i) && (1..=2 * n).contains(&j) => {
                if i == j {
                    return RootVector::H(i).entries(n);
                }
                let mut v = vec![(j, i, 1)];
                if j <= n {
                    v.push((i + n, j + n, -1));
                }
                v
            }
            RootVector::YT(i, j) if ok(i) && ok(j) => {
                if i == j {
                    return RootVector::UT(i).entries(n);
                }
                vec![(j + n, i, 1), (i + n, j, 1)]
            }
            RootVector::UT(i) if ok(i) => vec![(i + n, i, 1)],
            _ => return Err(bad()),
        };
        Ok(e)
    }

    /// The root, for the raising and Cartan elements.
    pub fn root(&self, n: usize) -> SpWeight {
        let mut w = vec![0i32; n];
        let mut bump = |i: usize, s: i32| {
            if (1..=n).contains(&i) {
                w[i - 1] += s;
            }
        };
        match *self {
            RootVector::H(_) => {}
            RootVector::X(i, j) => {
                bump(i, 1);
                bump(j, -1);
            }
            RootVector::Y(i, j) => {
                bump(i, 1);
                bump(j, 1);
            }
            RootVector::U(i) => bump(i, 2),
            RootVector::XT(i, j) => {
                bump(i, -1);
                bump(j, 1);
            }
            RootVector::YT(i, j) => {
                bump(i, -1);
                bump(j, -1);
            }
            RootVector::UT(i) => bump(i, -2),
        }
        w
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootVector::H(i) => write!(f, "H{i}"),
            RootVector::X(i, j) => write!(f, "X{i},{j}"),
            RootVector::Y(i, j) => write!(f, "Y{i},{j}"),
            RootVector::U(i) => write!(f, "U{i}"),
            RootVector::XT(i, j) => write!(f, "XT{i},{j}"),
            RootVector::YT(i, j) => write!(f, "YT{i},{j}"),
            RootVector::UT(i) => write!(f, "UT{i}"),
        }
    }
}

impl FromStr for RootVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("bad root vector {s:?}")))?;
        let (name, idx) = s.split_at(split);
        let idx: Vec<usize> = idx
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad root vector {s:?}"))))
            .collect::<Result<_>>()?;
        match (name, idx.as_slice()) {
            ("H", [i]) => Ok(RootVector::H(*i)),
            ("U", [i]) => Ok(RootVector::U(*i)),
            ("UT", [i]) => Ok(RootVector::UT(*i)),
            ("X", [i, j]) => Ok(RootVector::X(*i, *j)),
            ("Y", [i, j]) => Ok(RootVector::Y(*i, *j)),
            ("XT", [i, j]) => Ok(RootVector::XT(*i, *j)),
            ("YT", [i, j]) => Ok(RootVector::YT(*i, *j)),
            _ => Err(Error::Parse(format!("bad root vector {s:?}"))),
        }
    }
}

/// The positive root vectors `X_ij`, `Y_ij` (`i < j`) and `U_i`.
pub fn positive_roots(n: usize) -> Vec<RootVector> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(RootVector::X(i, j));
            out.push(RootVector::Y(i, j));
        }
        out.push(RootVector::U(i));
    }
    out
}

/// Anything `sp_2n` acts on by derivations induced from `E_ab: x_b ↦ x_a`.
pub trait SpTarget: Sized + Clone {
    /// `2n`, or an error if the object is not on an even number of variables.
    fn rank(&self) -> Result<usize>;
    fn act_elementary(&self, a: usize, b: usize, c: &Rational) -> Result<Self>;
    fn plus(&self, other: &Self) -> Result<Self>;
    fn zero_like(&self) -> Self;
    fn is_null(&self) -> bool;
    fn times(&self, c: &Rational) -> Self;
    /// Weight of one term under the `H_i`, used to guess an eigenvalue.
    fn leading_weight(&self) -> Option<SpWeight>;
}

impl SpTarget for PolyForm {
    fn rank(&self) -> Result<usize> {
        if self.vars() % 2 == 1 {
            return input("forms must live on an even number of variables");
        }
        Ok(self.vars() / 2)
    }
    fn act_elementary(&self, a: usize, b: usize, c: &Rational) -> Result<Self> {
        Ok(self.lie_linear(a - 1, b - 1).scale(c))
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        Ok(self.add(other))
    }
    fn zero_like(&self) -> Self {
        PolyForm::zero(self.vars())
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn leading_weight(&self) -> Option<SpWeight> {
        self.terms().next().map(|(m, _)| m.weight(self.vars() / 2))
    }
}

impl SpTarget for FreeElement {
    fn rank(&self) -> Result<usize> {
        let sig = self.signature();
        if sig.odd != 0 || sig.even % 2 == 1 {
            return input("sp_2n acts on A_2n only");
        }
        Ok(sig.even / 2)
    }
    fn act_elementary(&self, a: usize, b: usize, c: &Rational) -> Result<Self> {
        let sig: Signature = self.signature();
        let map = GeneratorMap::linear(sig, &[(b - 1, a - 1, c.clone())]);
        apply_derivation(&map, self)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn zero_like(&self) -> Self {
        FreeElement::zero(self.signature())
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn leading_weight(&self) -> Option<SpWeight> {
        let n = self.signature().even / 2;
        self.terms().next().map(|(w, _)| {
            let mut out = vec![0i32; n];
            for l in &w.letters {
                let l = *l as usize;
                if l < n {
                    out[l] += 1;
                } else {
                    out[l - n] -= 1;
                }
            }
            out
        })
    }
}

/// Action of a root vector as a derivation.
pub fn apply_root_vector<T: SpTarget>(r: &RootVector, target: &T) -> Result<T> {
    let n = target.rank()?;
    let mut out = target.zero_like();
    for (a, b, c) in r.entries(n)? {
        out = out.plus(&target.act_elementary(a, b, &Rational::from_int(c))?)?;
    }
    Ok(out)
}

/// The `H`-weight of `v` if it is a weight vector.
pub fn weight_of<T: SpTarget>(v: &T) -> Result<Option<SpWeight>> {
    let n = v.rank()?;
    let Some(w) = v.leading_weight() else { return Ok(None) };
    for i in 1..=n {
        let hv = apply_root_vector(&RootVector::H(i), v)?;
        let expect = v.times(&Rational::from_int(w[i - 1] as i64));
        if !hv.plus(&expect.times(&Rational::from_int(-1)))?.is_null() {
            return Ok(None);
        }
    }
    Ok(Some(w))
}

/// The weight of `v` if it is a nonzero highest weight vector.
pub fn highest_weight<T: SpTarget>(v: &T) -> Result<Option<SpWeight>> {
    if v.is_null() {
        return Ok(None);
    }
    let Some(w) = weight_of(v)? else { return Ok(None) };
    for r in positive_roots(v.rank()?) {
        if !apply_root_vector(&r, v)?.is_null() {
            return Ok(None);
        }
    }
    Ok(Some(w))
}

/// The weight of a form that is highest weight and killed by every `∂_i`.
pub fn distinguished_weight(v: &PolyForm) -> Result<Option<SpWeight>> {
    let Some(w) = highest_weight(v)? else { return Ok(None) };
    if (0..v.vars()).all(|l| v.partial(l).is_zero()) {
        Ok(Some(w))
    } else {
        Ok(None)
    }
}
