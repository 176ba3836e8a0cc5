use super::{Check, Outcome, VerifyOptions};
use crate::error::Result;
use crate::forms::{
    a_form, differential_split_dims, iota_pi, lattice_dims, liouville, omega_form, p_form, q_form, submodule_member,
    x_vec, y_vec, z_vec, PolyForm, Submodule,
};
use crate::rep::{
    apply_root_vector, distinguished_weight, gl_dim, highest_weight, partitions, restriction, restriction_by_peeling, sp_dim, RootVector, SpWeight,
};
use crate::scalar::Rational;

fn rho(n: usize, k: usize) -> SpWeight {
    (0..n).map(|i| i32::from(i < k)).collect()
}

fn sign(even: bool) -> Rational {
    Rational::from_int(if even { 1 } else { -1 })
}

pub(super) fn thm_2_2(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2, 3], &[]) {
        for size in 0..=o.cap(6) {
            for mu in partitions(size, 2 * n) {
                let res = restriction(&mu, n)?;
                let total: u64 = res.iter().map(|(lambda, m)| m * sp_dim(lambda, n)).sum();
                out.push(Check::equal(format!("n={n} mu={mu} dimension"), gl_dim(&mu, 2 * n), total));
                let peeled = restriction_by_peeling(&mu, n)?;
                let show = |m: &std::collections::BTreeMap<crate::rep::Partition, u64>| {
                    m.iter().map(|(l, c)| format!("{c}x{l}")).collect::<Vec<_>>().join(" + ")
                };
                out.push(Check::equal(format!("n={n} mu={mu} multiplicities"), show(&peeled), show(&res)));
            }
        }
    }
    Ok(out)
}

pub(super) fn prop_2_11(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2, 3], &[]) {
        let w = omega_form(n);
        let y = liouville(n);
        for k in 1..=n.min(4) {
            let (x, yk, zk) = (x_vec(n, k), y_vec(n, k as isize), z_vec(n, k));
            out.push(Check::holds(format!("n={n} k={k} x in X"), submodule_member(&x, Submodule::X, n)?));
            out.push(Check::equal(format!("n={n} k={k} x distinguished weight"), Some(rho(n, k)), distinguished_weight(&x)?));
            if k < n {
                out.push(Check::holds(format!("n={n} k={k} y in Y"), submodule_member(&yk, Submodule::Y, n)?));
                out.push(Check::holds(format!("n={n} k={k} z in Z"), submodule_member(&zk, Submodule::Z, n)?));
                out.push(Check::equal(format!("n={n} k={k} y highest weight"), Some(rho(n, k + 1)), highest_weight(&yk)?));
                out.push(Check::equal(format!("n={n} k={k} z highest weight"), Some(rho(n, k - 1)), highest_weight(&zk)?));
            }
            if k >= 2 {
                let ykm2 = y_vec(n, k as isize - 2);
                let c = Rational::from_int(n as i64 - k as i64 + 2);
                out.push(Check::equal(format!("n={n} k={k} iota(omega y_(k-2))"), ykm2.scale(&c).to_string(), iota_pi(&w.wedge(&ykm2)).to_string()));
                out.push(Check::equal(
                    format!("n={n} k={k} iota(y x_(k-1))"),
                    ykm2.scale(&Rational::new(1, 2)).to_string(),
                    iota_pi(&y.wedge(&x_vec(n, k - 1))).to_string(),
                ));
                let coeff = (n as i64 - k as i64 + 1) * (k as i64 - 3 - 2 * n as i64);
                out.push(Check::equal(
                    format!("n={n} k={k} iota(d z_k)"),
                    x_vec(n, k - 1).scale(&Rational::from_int(coeff)).to_string(),
                    iota_pi(&zk.d()).to_string(),
                ));
            }
        }
    }
    Ok(out)
}

fn rv(r: RootVector, f: &PolyForm) -> Result<PolyForm> {
    apply_root_vector(&r, f)
}

pub(super) fn prop_2_12(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2, 3], &[]) {
        let m = 2 * n;
        for k in 1..=n.min(4) {
            let x = x_vec(n, k);
            let y = y_vec(n, k as isize);
            let z = z_vec(n, k);
            let sk = sign(k % 2 == 0);
            let (mut y_ok, mut z_ok) = (true, true);
            for l in 1..=m {
                let dy = y.partial(l - 1);
                let want_y = if l <= k {
                    rv(RootVector::XT(l, k + 1), &x)?.scale(&sk)
                } else if l == k + 1 {
                    x.scale(&-sk.clone())
                } else {
                    PolyForm::zero(m)
                };
                y_ok &= dy == want_y;
                let c = Rational::from_int(n as i64 - k as i64 + 2);
                let want_z = if l < k {
                    let mut acc = PolyForm::zero(m);
                    for j in k..=n {
                        acc = acc.add(&rv(RootVector::YT(l, j), &rv(RootVector::XT(k, j), &x)?)?);
                    }
                    acc.scale(&sk)
                } else if l <= n {
                    rv(RootVector::YT(k, l), &x)?.scale(&(&sk * &c))
                } else if l - n < k {
                    PolyForm::zero(m)
                } else {
                    rv(RootVector::XT(k, l - n), &x)?.scale(&(&-sk.clone() * &c))
                };
                let dz = z.partial(l - 1);
                z_ok &= dz == want_z;
            }
            out.push(Check::holds(format!("n={n} k={k} d_l x = 0"), (0..m).all(|l| x.partial(l).is_zero())));
            out.push(Check::holds(format!("n={n} k={k} d_l y table"), y_ok));
            out.push(Check::holds(format!("n={n} k={k} d_l z table"), z_ok));
        }
    }
    Ok(out)
}

pub(super) fn thm_2_8(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2, 3], &[]) {
        let top = o.cap(8);
        for k in 1..n {
            let mut dims = Vec::new();
            for d in 0..=top {
                dims.push(lattice_dims(n, k, d)?);
            }
            let meet = dims.iter().all(|l| l.y_meet_z() == Some(l.x));
            let chain = dims.iter().all(|l| l.x <= l.y.unwrap() && l.x <= l.z.unwrap() && l.y.unwrap().max(l.z.unwrap()) <= l.t.unwrap() && l.t.unwrap() <= l.f);
            let strict = |f: &dyn Fn(&crate::forms::LatticeDims) -> bool| dims.iter().position(f);
            out.push(Check::holds(format!("n={n} k={k} Y cap Z = X in degrees <= {top}"), meet));
            out.push(Check::holds(format!("n={n} k={k} X <= Y, Z <= T <= F in degrees <= {top}"), chain));
            out.push(Check::holds(format!("n={n} k={k} X < Y in some degree"), strict(&|l| l.x < l.y.unwrap()).is_some()));
            out.push(Check::holds(format!("n={n} k={k} X < Z in some degree"), strict(&|l| l.x < l.z.unwrap()).is_some()));
            out.push(Check::holds(format!("n={n} k={k} T < F in some degree"), strict(&|l| l.t.unwrap() < l.f).is_some()));
            // d(F) is not the sum of its primitive and omega-divisible parts
            let mut witness = None;
            for d in k + 1..=top.min(k + 4) {
                let s = differential_split_dims(n, k, d)?;
                if s[3] < s[0] {
                    witness = Some(d);
                    break;
                }
            }
            if let Some(d) = witness {
                out.note(format!("n={n} k={k}: d(F) exceeds its primitive plus omega-divisible parts in degree {d}"));
            }
            out.push(Check::holds(format!("n={n} k={k} splitting of d(F) fails somewhere"), witness.is_some()));
        }
    }
    Ok(out)
}

pub(super) fn prop_5_6(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2, 3], &[]) {
        let m = 2 * n;
        for j in 1..=m {
            let q = q_form(n, j);
            if j <= n {
                out.push(Check::equal(format!("n={n} q_{j} highest weight"), Some(rho(n, j)), highest_weight(&q)?));
            }
            out.push(Check::equal(format!("n={n} p_({j},{j})"), a_form(n, j - 1).scale(&sign(j % 2 == 0)).to_string(), p_form(n, j, j).to_string()));
            let partials = (1..=m).all(|l| q.partial(l - 1) == if l <= j { p_form(n, l, j) } else { PolyForm::zero(m) });
            out.push(Check::holds(format!("n={n} d_l q_{j}"), partials));
            let literal = a_form(n, j).scale(&Rational::from_int(j as i64));
            let dq = q.d();
            out.push(Check::equal(format!("n={n} d q_{j} = {j} a_{j}"), literal.to_string(), dq.to_string()));
            if dq == literal.scale(&Rational::from_int(-1)) {
                out.note(format!("n={n}: d q_{j} = -{j} a_{j}"));
            }
        }
    }
    Ok(out)
}
