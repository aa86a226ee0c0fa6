//! Elementary integer arithmetic: primality, factorization, modular helpers.
//!
//! Everything here is deterministic desk-scale number theory; factorization
//! is trial division backed by Pollard rho with a bounded iteration budget.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// x^e mod m for nonnegative e.
pub fn pow_mod(x: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    assert!(!e.is_negative());
    x.modpow(e, m)
}

/// Deterministic Miller-Rabin for 64-bit, probabilistic witnesses beyond.
pub fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    let small: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &small {
        let p = big(p as i64);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &small {
        let mut x = pow_mod(&big(a as i64), &d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt, seed: u64) -> Option<BigInt> {
    // Brent's cycle variant.
    let one = BigInt::one();
    let c = big((seed % 1000 + 1) as i64);
    let mut x = big((seed % 7919 + 2) as i64);
    let mut y = x.clone();
    let mut d = one.clone();
    let mut count: u64 = 0;
    while d.is_one() {
        count += 1;
        if count > 2_000_000 {
            return None;
        }
        x = (&x * &x + &c) % n;
        y = (&y * &y + &c) % n;
        y = (&y * &y + &c) % n;
        let diff = (&x - &y).abs();
        if diff.is_zero() {
            return None;
        }
        d = diff.gcd(n);
    }
    if &d == n {
        None
    } else {
        Some(d)
    }
}

/// Factor |n| into primes with multiplicity, smallest prime first.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, k: u32, out: &mut Vec<(BigInt, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += k;
        } else {
            out.push((p, k));
        }
    };
    let mut p = 2u64;
    while p < 100_000 && big(p as i64).pow(2) <= n {
        let bp = big(p as i64);
        let mut k = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            push(bp, k, &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Recursive rho on the cofactor.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, 1, &mut out);
            continue;
        }
        let mut found = None;
        for seed in 0..40u64 {
            if let Some(d) = pollard_rho(&m, seed.wrapping_mul(0x9e3779b9) + 3) {
                found = Some(d);
                break;
            }
        }
        match found {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => return Err(Error::FactorizationStalled(m.to_string())),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Distinct prime divisors of |n|.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

/// Euler phi for small k.
pub fn euler_phi(k: u64) -> u64 {
    let mut result = k;
    let mut n = k;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Modular inverse of a mod m, if gcd(a, m) = 1.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// All primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_prime(&big(2)));
        assert!(is_prime(&big(97)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(91)));
        assert!(is_prime(&"1000000007".parse().unwrap()));
    }

    #[test]
    fn factor_roundtrip() {
        let n = big(2 * 2 * 3 * 5 * 5 * 7 * 11 * 13);
        let f = factor(&n).unwrap();
        let mut prod = BigInt::one();
        for (p, k) in &f {
            prod *= p.pow(*k);
        }
        assert_eq!(prod, n);
    }

    #[test]
    fn factor_semiprime() {
        let n: BigInt = "10000000000000061".parse::<BigInt>().unwrap() * big(1000003);
        let f = factor(&n).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
    }
}
