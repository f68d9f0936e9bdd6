//! Level-one eigenform q-expansions, generated internally: the weight-12
//! cusp form via the 24th power of the pentagonal-number eta series, the
//! Eisenstein series E4/E6 via divisor sums, and the one-dimensional spaces
//! of weights 16, 18, 20, 22 as products. All coefficients exact in i128.

use crate::{Error, Result};

/// prod_{n >= 1} (1 - q^n) up to q^m, by Euler's pentagonal number theorem
/// (sparse, exact).
fn eta_quotient(m: usize) -> Vec<i128> {
    let mut out = vec![0i128; m + 1];
    out[0] = 1;
    let mut k = 1i64;
    loop {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 > m && g2 > m {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if g1 <= m {
            out[g1] += sign;
        }
        if g2 <= m {
            out[g2] += sign;
        }
        k += 1;
    }
    out
}

fn mul_series(a: &[i128], b: &[i128], m: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; m + 1];
    for (i, &ai) in a.iter().enumerate().take(m + 1) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(m + 1 - i) {
            if bj == 0 {
                continue;
            }
            let prod = ai.checked_mul(bj).ok_or_else(overflow)?;
            out[i + j] = out[i + j].checked_add(prod).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

fn overflow() -> Error {
    Error::InvalidInput("q-expansion coefficient overflow; reduce the bound".into())
}

fn sigma_pow(n: u64, k: u32) -> i128 {
    let mut s = 0i128;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += (d as i128).pow(k);
            let e = n / d;
            if e != d {
                s += (e as i128).pow(k);
            }
        }
        d += 1;
    }
    s
}

fn eisenstein(weight: u32, m: usize) -> Vec<i128> {
    let (cst, k) = match weight {
        4 => (240i128, 3u32),
        6 => (-504, 5),
        _ => unreachable!(),
    };
    let mut out = vec![0i128; m + 1];
    out[0] = 1;
    for n in 1..=m {
        out[n] = cst * sigma_pow(n as u64, k);
    }
    out
}

/// q-expansion of the normalized cuspidal eigenform of level 1 and the given
/// weight (one-dimensional spaces only: k = 12, 16, 18, 20, 22), up to q^m.
pub fn level1_eigenform(weight: u32, m: usize) -> Result<Vec<i128>> {
    if m > 420 {
        return Err(Error::InvalidInput(
            "coefficient bound too large for exact i128 q-expansions (max 420)".into(),
        ));
    }
    let eta = eta_quotient(m);
    // eta^24 via repeated squaring
    let e2 = mul_series(&eta, &eta, m)?;
    let e4 = mul_series(&e2, &e2, m)?;
    let e8 = mul_series(&e4, &e4, m)?;
    let e16 = mul_series(&e8, &e8, m)?;
    let e24 = mul_series(&e16, &e8, m)?;
    // Delta = q * eta(q)^24
    let mut delta = vec![0i128; m + 1];
    for i in 0..m {
        delta[i + 1] = e24[i];
    }
    match weight {
        12 => Ok(delta),
        16 => mul_series(&delta, &eisenstein(4, m), m),
        18 => mul_series(&delta, &eisenstein(6, m), m),
        20 => {
            let e4sq = mul_series(&eisenstein(4, m), &eisenstein(4, m), m)?;
            mul_series(&delta, &e4sq, m)
        }
        22 => {
            let e4e6 = mul_series(&eisenstein(4, m), &eisenstein(6, m), m)?;
            mul_series(&delta, &e4e6, m)
        }
        _ => Err(Error::InvalidInput(format!(
            "level-one space of weight {weight} is not one-dimensional"
        ))),
    }
}

pub fn primes_up_to(m: u64) -> Vec<u64> {
    let mut sieve = vec![true; (m + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=m {
        if sieve[p as usize] {
            out.push(p);
            let mut j = p * p;
            while j <= m {
                sieve[j as usize] = false;
                j += p;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values_pinned() {
        let d = level1_eigenform(12, 12).unwrap();
        assert_eq!(d[1], 1);
        assert_eq!(d[2], -24);
        assert_eq!(d[3], 252);
        assert_eq!(d[4], -1472);
        assert_eq!(d[5], 4830);
        assert_eq!(d[6], -6048);
        assert_eq!(d[7], -16744);
        assert_eq!(d[11], 534612);
    }

    #[test]
    fn normalized_leading_coefficients() {
        for k in [12u32, 16, 18, 20, 22] {
            let f = level1_eigenform(k, 3).unwrap();
            assert_eq!(f[0], 0, "k = {k}");
            assert_eq!(f[1], 1, "k = {k}");
        }
    }

    #[test]
    fn hecke_multiplicativity() {
        // eigenform coefficients satisfy a(mn) = a(m)a(n) for coprime m, n
        // and a(p^2) = a(p)^2 - p^{k-1}
        for k in [12u32, 16, 18, 20, 22] {
            let f = level1_eigenform(k, 100).unwrap();
            for &(m, n) in &[(2u64, 3u64), (2, 5), (3, 5), (4, 9), (2, 7), (5, 7), (3, 25)] {
                assert_eq!(
                    f[(m * n) as usize],
                    f[m as usize] * f[n as usize],
                    "k={k} (m,n)=({m},{n})"
                );
            }
            for p in [2u64, 3, 5, 7] {
                let pk1 = (p as i128).pow(k - 1);
                assert_eq!(
                    f[(p * p) as usize],
                    f[p as usize] * f[p as usize] - pk1,
                    "k={k} p={p}"
                );
            }
        }
    }

    #[test]
    fn ramanujan_bound_holds() {
        for k in [12u32, 16, 18, 20, 22] {
            let f = level1_eigenform(k, 200).unwrap();
            for p in primes_up_to(200) {
                let bound = 2.0 * (p as f64).powf((k as f64 - 1.0) / 2.0);
                assert!(
                    (f[p as usize] as f64).abs() <= bound,
                    "k={k} p={p}: {} vs {bound}",
                    f[p as usize]
                );
            }
        }
    }
}
