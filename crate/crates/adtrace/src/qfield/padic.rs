//! Small exact p-adic helpers: valuations of rationals, modular inverses and
//! Hensel-lifted square roots. Everything works in i128 so p^k up to ~2^120
//! is exact.

/// ord_p of a nonzero integer.
pub fn ord_int(mut n: i128, p: u64) -> i32 {
    assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// ord_p of num/den (both nonzero).
pub fn ord_rat(num: i128, den: i128, p: u64) -> i32 {
    ord_int(num, p) - ord_int(den, p)
}

/// a^{-1} mod m for gcd(a, m) = 1, via extended Euclid.
pub fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        let tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    assert!(old_r == 1 || old_r == -1, "not invertible");
    let inv = if old_r == 1 { old_s } else { -old_s };
    inv.rem_euclid(m)
}

/// Square root of a unit u modulo p^k, when it exists. For odd p the
/// criterion is (u/p) = 1; for p = 2 (k >= 3) it is u = 1 mod 8.
pub fn sqrt_mod_pk(u: i128, p: u64, k: u32) -> Option<i128> {
    let pk = (p as i128).pow(k);
    let u = u.rem_euclid(pk);
    if p == 2 {
        if k == 0 {
            return Some(0);
        }
        if u % 2 == 0 {
            return None;
        }
        if k == 1 {
            return Some(1);
        }
        if k == 2 {
            return if u % 4 == 1 { Some(1) } else { None };
        }
        if u % 8 != 1 {
            return None;
        }
        // lift from r = 1 mod 8 one bit at a time: if r^2 != u mod 2^{j+1},
        // adjust r += 2^{j-1}.
        let mut r: i128 = 1;
        for j in 3..k {
            let m = 1i128 << (j + 1);
            if (r * r - u).rem_euclid(m) != 0 {
                r += 1i128 << (j - 1);
            }
        }
        debug_assert_eq!((r * r - u).rem_euclid(pk), 0);
        Some(r.rem_euclid(pk))
    } else {
        let pi = p as i128;
        // find base root mod p by scan (p is small in every call site)
        let up = u.rem_euclid(pi);
        if up == 0 {
            return None;
        }
        let mut r0 = None;
        for r in 1..pi {
            if (r * r - up).rem_euclid(pi) == 0 {
                r0 = Some(r);
                break;
            }
        }
        let mut r = r0?;
        // Newton lifting doubles the precision each step
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let m = pi.pow(prec);
            let two_r_inv = inv_mod((2 * r).rem_euclid(m), m);
            r = (r - (r * r - u).rem_euclid(m) * two_r_inv).rem_euclid(m);
        }
        debug_assert_eq!((r * r - u).rem_euclid(pk), 0);
        Some(r.rem_euclid(pk))
    }
}
