//! Named, checkable statements. Each claim runs a batch of exact checks and
//! returns a report whose payload is deterministic for fixed options.

mod b3_claims;
mod form_claims;
mod lcs_claims;

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::DiskCache;
use crate::error::{Error, Result};
use crate::lcs::Engine;

pub use lcs_claims::prediction;

/// One comparison inside a claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

impl Check {
    pub fn equal<T: Serialize + PartialEq>(name: impl Into<String>, expected: T, got: T) -> Check {
        let pass = expected == got;
        Check { name: name.into(), expected: json!(expected), got: json!(got), pass }
    }

    /// A check whose expected value is `true`.
    pub fn holds(name: impl Into<String>, got: bool) -> Check {
        Check::equal(name, true, got)
    }
}

/// Options shared by every claim.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Restrict to one `n`; otherwise each claim uses its default list.
    pub n: Option<usize>,
    pub max_degree: Option<usize>,
    /// Include the `2n = 6` cases.
    pub big: bool,
    pub cache: Option<DiskCache>,
}

impl VerifyOptions {
    fn engine(&self, n: usize) -> Engine {
        let e = Engine::symplectic(n);
        match &self.cache {
            Some(c) => e.with_disk_cache(c.clone()),
            None => e,
        }
    }

    fn ns(&self, default: &[usize], big: &[usize]) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None if self.big => default.iter().chain(big).copied().collect(),
            None => default.to_vec(),
        }
    }

    fn cap(&self, default: usize) -> usize {
        self.max_degree.unwrap_or(default)
    }
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Outcome {
    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub n: Option<usize>,
    pub max_degree: Option<usize>,
    pub big: bool,
}

/// Result of running one claim.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claim: String,
    pub params: Params,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub wall_ms: u64,
}

impl Report {
    /// Everything except the wall time; identical across runs.
    pub fn payload(&self) -> Value {
        json!({
            "claim": self.claim,
            "params": self.params,
            "checks": self.checks,
            "notes": self.notes,
            "pass": self.pass,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.claim, if self.pass { "PASS" } else { "FAIL" });
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            s.push_str(&format!("  {mark} {}: expected {}, got {}\n", c.name, c.expected, c.got));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s.push_str(&format!("  ({} checks, {} ms)\n", self.checks.len(), self.wall_ms));
        s
    }
}

type Runner = fn(&VerifyOptions) -> Result<Outcome>;

/// A registered claim.
pub struct Claim {
    pub id: &'static str,
    pub summary: &'static str,
    run: Runner,
}

static REGISTRY: &[Claim] = &[
    Claim { id: "thm-1.2", summary: "composition factors of A'/M3 match computed dimensions", run: lcs_claims::thm_1_2 },
    Claim { id: "thm-1.3", summary: "composition factors of the reduced first quotient", run: lcs_claims::thm_1_3 },
    Claim { id: "thm-1.4", summary: "composition factors of B2 of the symplectic quotient", run: lcs_claims::thm_1_4 },
    Claim { id: "thm-2.2", summary: "gl to sp restriction multiplicities", run: form_claims::thm_2_2 },
    Claim { id: "prop-2.11", summary: "generators of X_k, Y_k, Z_k and their contraction identities", run: form_claims::prop_2_11 },
    Claim { id: "prop-2.12", summary: "constant vector fields on the generators of X_k, Y_k, Z_k", run: form_claims::prop_2_12 },
    Claim { id: "thm-2.8-lattice", summary: "submodule lattice of F(1^k) on degree slices", run: form_claims::thm_2_8 },
    Claim { id: "lemma-3.1-consistency", summary: "quotient by an ideal via sums agrees with intersections", run: lcs_claims::lemma_3_1 },
    Claim { id: "cor-3.4", summary: "B2 against closed even forms, with and without omega", run: lcs_claims::cor_3_4 },
    Claim { id: "b3-free", summary: "B3 of the free algebra against its gl decomposition", run: lcs_claims::b3_free },
    Claim { id: "lemma-5.2", summary: "v_{k,s} are nonzero distinguished vectors of B3", run: b3_claims::lemma_5_2 },
    Claim { id: "cor-5.3", summary: "v_{k,s} lies in the omega ideal exactly when s > 0", run: b3_claims::cor_5_3 },
    Claim { id: "prop-5.6", summary: "identities for a_k, p_{j,m}, q_m", run: form_claims::prop_5_6 },
    Claim { id: "thm-5.7", summary: "xbar, ybar, zbar: weights, derivative table, uniqueness", run: b3_claims::thm_5_7 },
    Claim { id: "xbar-nonzero", summary: "xbar_{k,s} is nonzero in B3", run: b3_claims::xbar_nonzero },
    Claim { id: "lemma-5.8", summary: "alpha_{k,s,m} lies in L4", run: b3_claims::lemma_5_8 },
    Claim { id: "lemma-5.9", summary: "switching powers of omega inside a bracket", run: b3_claims::lemma_5_9 },
    Claim { id: "lemma-5.10", summary: "psi_s(p) = (2s+1) phi_s(1 (x) p) modulo L4", run: b3_claims::lemma_5_10 },
    Claim { id: "b3-upper-bound", summary: "B3 of the symplectic quotient is bounded by the surjection", run: b3_claims::upper_bound },
    Claim { id: "conj-5.12", summary: "v_{k,0} and zbar_{k,0} survive in B3 of the symplectic quotient", run: b3_claims::conj_5_12 },
    Claim { id: "invariants", summary: "filtration nesting, [M3,A] in L4, L2 cap M3 = L3, sp-stability", run: lcs_claims::invariants },
];

pub fn registry() -> &'static [Claim] {
    REGISTRY
}

pub fn find(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Runs a claim by id.
pub fn run_claim(id: &str, opts: &VerifyOptions) -> Result<Report> {
    let claim = find(id).ok_or_else(|| Error::Input(format!("unknown claim '{id}'")))?;
    let start = Instant::now();
    let out = (claim.run)(opts)?;
    let pass = !out.checks.is_empty() && out.checks.iter().all(|c| c.pass);
    Ok(Report {
        claim: id.to_string(),
        params: Params { n: opts.n, max_degree: opts.max_degree, big: opts.big },
        checks: out.checks,
        notes: out.notes,
        pass,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|c| c.id).collect();
        ids.sort();
        let len = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), len);
        assert!(find("conj-5.12").is_some());
        assert!(matches!(run_claim("nope", &VerifyOptions::default()), Err(Error::Input(_))));
    }

    #[test]
    fn payload_is_deterministic() {
        let opts = VerifyOptions { n: Some(2), ..Default::default() };
        let a = run_claim("prop-5.6", &opts).unwrap();
        let b = run_claim("prop-5.6", &opts).unwrap();
        assert_eq!(a.payload().to_string(), b.payload().to_string());
        assert!(a.to_text().starts_with("prop-5.6 "));
    }

    #[test]
    fn small_claims_pass() {
        for id in ["thm-1.2", "cor-3.4", "lemma-3.1-consistency"] {
            let r = run_claim(id, &VerifyOptions { n: Some(1), max_degree: Some(4), ..Default::default() }).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
        let r = run_claim("prop-2.12", &VerifyOptions { n: Some(2), ..Default::default() }).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }
}
