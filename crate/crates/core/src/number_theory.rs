//! Exact integer helpers: factorization, Euler's totient and divisor lists.
//!
//! Everything here works on `usize` and uses trial division, which is plenty
//! for signal lengths.

use crate::error::{Error, Result};

/// Prime factorization `n = p_1^r_1 * ... * p_m^r_m` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: usize,
    factors: Vec<(usize, u32)>,
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `(prime, exponent)` pairs, primes ascending. Empty for `n = 1`.
    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> usize {
        self.factors.iter().map(|&(p, r)| p.pow(r)).product()
    }

    /// Euler's totient computed from the factors.
    pub fn totient(&self) -> usize {
        self.factors
            .iter()
            .map(|&(p, r)| p.pow(r - 1) * (p - 1))
            .product()
    }
}

pub fn factorize(n: usize) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero { what: "n" });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut r = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                r += 1;
            }
            factors.push((p, r));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn totient(n: usize) -> Result<usize> {
    Ok(factorize(n)?.totient())
}

/// All divisors of `n`, ascending.
pub fn divisors(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::Zero { what: "n" });
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Möbius function. `mobius(1) = 1`.
pub fn mobius(n: usize) -> Result<i64> {
    let f = factorize(n)?;
    if f.factors().iter().any(|&(_, r)| r > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_totient(n: usize) -> usize {
        (1..=n).filter(|&k| gcd(k, n) == 1).count()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(360).unwrap().factors(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
        assert_eq!(factorize(0), Err(Error::Zero { what: "n" }));
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(12).unwrap(), 4);
        assert_eq!(totient(9).unwrap(), 6);
        assert!(totient(0).is_err());
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(9).unwrap(), vec![1, 3, 9]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn factorization_recombines() {
        for n in 1..=5000 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n);
            assert!(f.primes().all(is_prime));
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors().iter().all(|&(_, r)| r >= 1));
        }
    }

    #[test]
    fn totient_matches_gcd_count() {
        for n in 1..=2000 {
            assert_eq!(totient(n).unwrap(), brute_totient(n), "n = {n}");
        }
    }

    #[test]
    fn totients_of_divisors_sum_to_n() {
        for n in 1..=10_000 {
            let s: usize = divisors(n)
                .unwrap()
                .into_iter()
                .map(|d| totient(d).unwrap())
                .sum();
            assert_eq!(s, n);
        }
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        for n in 1..=500 {
            let brute: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n).unwrap(), brute);
        }
    }

    #[test]
    fn mobius_small_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i + 1).unwrap(), m);
        }
    }
}
