//! Deterministic primality for 64-bit integers.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin with the first twelve prime bases, exact below 3.3e24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_i128(n: i128) -> bool {
    u64::try_from(n).map(is_prime).unwrap_or(false)
}

/// Primes below `n` by the sieve of Eratosthenes.
pub fn sieve(n: usize) -> Vec<bool> {
    let mut is = vec![true; n.max(2)];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i < n {
        if is[i] {
            let mut j = i * i;
            while j < n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.truncate(n);
    is
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_sieve() {
        let s = sieve(20_000);
        for (n, &p) in s.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
