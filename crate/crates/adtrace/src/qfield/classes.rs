//! Enumeration of elliptic class representatives (t : n) over Q.
//!
//! Classes (t, n) ~ (ct, c^2 n) are canonicalized to n = ±prod_{p in S} p^nu
//! with min(2 ord_p t, nu_p) in {0, 1}, and t >= 0 (c = -1 identifies the two
//! signs of t). Over Q the class number is 1 and the S-unit group is
//! {±p^k}, so this hits every class exactly once.

use super::{fundamental_data_of_disc, is_square_i64, local_delta_decomposition, EpsClass};
use crate::qfield::padic;
use crate::{Error, Result, TruncationPolicy};

/// Canonical representative of an irreducible elliptic class, with its
/// global discriminant data precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticClassRep {
    pub t: i64,
    pub n: i64,
    pub delta: i64,
    /// fundamental discriminant of Q(sqrt(Delta))
    pub d_delta: i64,
    /// positive generator of the conductor-type ideal: Delta = d_delta * f^2
    pub f_delta: u64,
}

impl EllipticClassRep {
    pub fn new(t: i64, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be nonzero".into()));
        }
        let delta = t * t - 4 * n;
        let (d_delta, f_delta) = fundamental_data_of_disc(delta)?;
        Ok(EllipticClassRep { t, n, delta, d_delta, f_delta })
    }

    /// ord_p(n f_Delta^{-2})
    pub fn ord_n_f2(&self, p: u64) -> i32 {
        padic::ord_int(self.n as i128, p) - 2 * padic::ord_int(self.f_delta as i128, p)
    }

    /// Finite places where the product B picks up a factor different from 1:
    /// primes dividing n, f_Delta or d_Delta (everything else has unit
    /// argument and split-or-inert O_0 = 1).
    pub fn support_primes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut add = |mut m: i128| {
            m = m.abs();
            let mut p = 2i128;
            while p * p <= m {
                if m % p == 0 {
                    if !out.contains(&(p as u64)) {
                        out.push(p as u64);
                    }
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += 1;
            }
            if m > 1 && !out.contains(&(m as u64)) {
                out.push(m as u64);
            }
        };
        add(self.n as i128);
        add(self.f_delta as i128);
        add(self.d_delta as i128);
        out.sort_unstable();
        out
    }
}

/// Stream the canonical class representatives for the configuration
/// (S, level N), in the deterministic order sorted by (|n|, t).
///
/// Skipped classes: reducible ones (Delta square or zero), representatives
/// violating min(2 ord_p t, nu_p) in {0,1} at p in S, and classes failing the
/// level gate "ord_p(n f^{-2}) < 0 at p | N with eps_Delta unramified
/// nontrivial".
pub fn enumerate_elliptic_classes(
    s_primes: &[u64],
    level: u64,
    policy: &TruncationPolicy,
) -> Result<Vec<EllipticClassRep>> {
    validate_config(s_primes, level)?;
    let mut ns: Vec<i64> = Vec::new();
    // n = ±prod p^nu over S, bounded by the policy
    let mut exps = vec![0u32; s_primes.len()];
    loop {
        let mut n: i64 = 1;
        let mut overflow = false;
        for (i, &p) in s_primes.iter().enumerate() {
            for _ in 0..exps[i] {
                n = match n.checked_mul(p as i64) {
                    Some(v) => v,
                    None => {
                        overflow = true;
                        break;
                    }
                };
            }
        }
        if !overflow {
            ns.push(n);
            ns.push(-n);
        }
        // odometer over exponent vectors
        let mut i = 0;
        loop {
            if i == exps.len() {
                break;
            }
            exps[i] += 1;
            if exps[i] > policy.max_nu {
                exps[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        if i == exps.len() {
            break;
        }
    }
    ns.sort_unstable_by_key(|n| (n.abs(), n.signum()));

    let level_primes = prime_factors(level);
    let mut out = Vec::new();
    for &n in &ns {
        let t_max = (policy.height * (n.abs() as f64).sqrt()).floor() as i64;
        for t in 0..=t_max {
            let delta = t * t - 4 * n;
            if delta == 0 || is_square_i64(delta) {
                continue;
            }
            // canonical-representative constraint at p in S
            let mut ok = true;
            for &p in s_primes {
                let nu = padic::ord_int(n as i128, p) as u32;
                let two_ord_t =
                    if t == 0 { u32::MAX } else { 2 * padic::ord_int(t as i128, p) as u32 };
                if two_ord_t.min(nu) > 1 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let rep = EllipticClassRep::new(t, n)?;
            // level gate at p | N with unramified nontrivial character
            let gate = level_primes.iter().all(|&p| {
                let form = local_delta_decomposition(t, n, p).expect("delta nonzero");
                form.eps_class() != EpsClass::Inert || rep.ord_n_f2(p) < 0
            });
            if gate {
                out.push(rep);
            }
        }
    }
    Ok(out)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn validate_config(s_primes: &[u64], level: u64) -> Result<()> {
    for &p in s_primes {
        if p < 3 || !is_prime(p) {
            return Err(Error::UnsatisfiableConfig(format!("S must consist of odd primes, got {p}")));
        }
        if level % p == 0 {
            return Err(Error::UnsatisfiableConfig(format!("S and level share the prime {p}")));
        }
    }
    if level == 0 || level % 2 == 0 || !is_squarefree(level) {
        return Err(Error::UnsatisfiableConfig(format!(
            "level must be an odd squarefree positive integer, got {level}"
        )));
    }
    // pairwise distinct S
    let mut s = s_primes.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != s_primes.len() {
        return Err(Error::UnsatisfiableConfig("repeated prime in S".into()));
    }
    Ok(())
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}
