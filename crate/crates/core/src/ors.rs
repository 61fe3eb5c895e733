//! Ramanujan sums and orthogonal Ramanujan sequences (ORS).
//!
//! For a prime `q` the sequence `c_q^k` has `k` leading zeros, then `q - 1 - k`,
//! then `-1` for the remaining entries. Prime powers `q^l` use the same
//! sequence zero-interpolated by `q^(l-1)` and circularly shifted by `j`
//! samples. A general divisor `d` multiplies one such factor per prime.
//!
//! Interpolation is amplitude-1: the matrices this builds have entries like
//! `[1, 0, -1, 0]` for `d = 4`, and scaling lives in the per-column norm.
//! All samples are exact integers.

use std::fmt;

use crate::error::{check_divides, Error, Result};
use crate::number_theory::{factorize, gcd, is_prime, mobius, totient, Factorization};

/// Which member of the divisor-`d` family a sequence is.
///
/// `shifts[i]` and `phases[i]` belong to the `i`-th prime factor of `divisor`
/// (ascending). Both are empty for `divisor = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrsLabel {
    pub divisor: usize,
    pub shifts: Vec<usize>,
    pub phases: Vec<usize>,
}

impl OrsLabel {
    /// Label of the all-ones sequence.
    pub fn dc() -> Self {
        OrsLabel {
            divisor: 1,
            shifts: Vec::new(),
            phases: Vec::new(),
        }
    }
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for OrsLabel {
    /// `d;j_1,..,j_m;k_1,..,k_m`, the subscript order of the coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisor == 1 {
            return write!(f, "1;0;0");
        }
        write!(
            f,
            "{};{};{}",
            self.divisor,
            join(&self.shifts),
            join(&self.phases)
        )
    }
}

/// One integer ORS over `Z_N`, periodic with period `label.divisor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrsVector {
    label: OrsLabel,
    samples: Vec<i64>,
    sq_norm: i64,
}

impl OrsVector {
    fn new(label: OrsLabel, samples: Vec<i64>) -> Self {
        let sq_norm = samples.iter().map(|s| s * s).sum();
        OrsVector {
            label,
            samples,
            sq_norm,
        }
    }

    /// The all-ones sequence of length `len` (divisor 1).
    pub fn ones(len: usize) -> Self {
        OrsVector::new(OrsLabel::dc(), vec![1; len])
    }

    pub fn label(&self) -> &OrsLabel {
        &self.label
    }

    pub fn period(&self) -> usize {
        self.label.divisor
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[i64] {
        &self.samples
    }

    /// Sum of squared samples, computed from the samples themselves.
    pub fn sq_norm(&self) -> i64 {
        self.sq_norm
    }

    pub fn dot(&self, other: &OrsVector) -> i64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn into_samples(self) -> Vec<i64> {
        self.samples
    }
}

/// Classical Ramanujan sum `c_q(n)` for `n = 0..len`, where `q | len`.
///
/// Evaluated with the gcd form `mu(q/g) phi(q) / phi(q/g)`, `g = gcd(n, q)`.
pub fn ramanujan_sum(q: usize, len: usize) -> Result<Vec<i64>> {
    if q == 0 {
        return Err(Error::Zero { what: "q" });
    }
    check_divides(q, len)?;
    let phi_q = totient(q)? as i64;
    let period = (0..q)
        .map(|n| {
            let g = gcd(n, q);
            let m = q / g;
            Ok(mobius(m)? * phi_q / totient(m)? as i64)
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(tile(&period, len))
}

/// The length-`q` ORS `c_q^k` for a prime `q` and `0 <= k <= q - 2`.
pub fn ors_prime(q: usize, k: usize) -> Result<Vec<i64>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if k > q - 2 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: q - 2,
        });
    }
    let mut out = vec![0i64; q];
    out[k] = (q - 1 - k) as i64;
    for v in &mut out[k + 1..] {
        *v = -1;
    }
    Ok(out)
}

/// ORS of period `q^l`: `c_q^k` zero-interpolated by `q^(l-1)`, then
/// circularly shifted right by `j` samples.
pub fn ors_prime_power(q: usize, l: u32, k: usize, j: usize) -> Result<OrsVector> {
    if l == 0 {
        return Err(Error::Zero { what: "l" });
    }
    let base = ors_prime(q, k)?;
    let stride = q.pow(l - 1);
    if j >= stride {
        return Err(Error::OutOfRange {
            what: "j",
            value: j,
            min: 0,
            max: stride - 1,
        });
    }
    let period = stride * q;
    let mut samples = vec![0i64; period];
    for (m, &v) in base.iter().enumerate() {
        samples[(m * stride + j) % period] = v;
    }
    let label = OrsLabel {
        divisor: period,
        shifts: vec![j],
        phases: vec![k],
    };
    Ok(OrsVector::new(label, samples))
}

/// ORS of period `d` over `Z_len`: the pointwise product of one prime-power
/// factor per prime of `d`. `phases[i]` and `shifts[i]` select the factor for
/// the `i`-th prime. `d = 1` (with empty tuples) gives the all-ones sequence.
pub fn ors_divisor(d: usize, phases: &[usize], shifts: &[usize], len: usize) -> Result<OrsVector> {
    if d == 0 {
        return Err(Error::Zero { what: "d" });
    }
    check_divides(d, len)?;
    let fac = factorize(d)?;
    for found in [phases.len(), shifts.len()] {
        if found != fac.len() {
            return Err(Error::Arity {
                expected: fac.len(),
                found,
            });
        }
    }
    let mut samples = vec![1i64; len];
    for (i, &(p, r)) in fac.factors().iter().enumerate() {
        let factor = ors_prime_power(p, r, phases[i], shifts[i])?;
        let period = factor.len();
        for (n, s) in samples.iter_mut().enumerate() {
            *s *= factor.samples[n % period];
        }
    }
    let label = OrsLabel {
        divisor: d,
        shifts: shifts.to_vec(),
        phases: phases.to_vec(),
    };
    Ok(OrsVector::new(label, samples))
}

/// All labels for divisor `d`, in basis order: phase tuples lexicographic
/// (first prime slowest), and for each phase tuple the shift tuples
/// lexicographic. There are exactly `phi(d)` of them.
pub fn labels_for_divisor(d: usize) -> Result<Vec<OrsLabel>> {
    let fac = factorize(d)?;
    if fac.is_empty() {
        return Ok(vec![OrsLabel::dc()]);
    }
    let phase_ranges: Vec<usize> = fac.primes().map(|p| p - 1).collect();
    let shift_ranges: Vec<usize> = fac.factors().iter().map(|&(p, r)| p.pow(r - 1)).collect();
    let shift_tuples = mixed_radix(&shift_ranges);
    let mut out = Vec::with_capacity(fac.totient());
    for phases in mixed_radix(&phase_ranges) {
        for shifts in &shift_tuples {
            out.push(OrsLabel {
                divisor: d,
                shifts: shifts.clone(),
                phases: phases.clone(),
            });
        }
    }
    Ok(out)
}

/// Closed-form squared norm over `Z_len` of the sequence with this label:
/// `(len/d) * prod (p_i - k_i)(p_i - k_i - 1)`, or `len` for `d = 1`.
pub fn expected_sq_norm(label: &OrsLabel, fac: &Factorization, len: usize) -> i64 {
    let per_period: usize = fac
        .primes()
        .zip(&label.phases)
        .map(|(p, &k)| (p - k) * (p - k - 1))
        .product();
    if label.divisor == 1 {
        len as i64
    } else {
        (len / label.divisor * per_period) as i64
    }
}

/// Every tuple `t` with `0 <= t[i] < ranges[i]`, first position slowest.
fn mixed_radix(ranges: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(ranges.len())];
    for &r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn tile(period: &[i64], len: usize) -> Vec<i64> {
    period.iter().copied().cycle().take(len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const PRIMES_TO_50: [usize; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

    /// Direct evaluation of the exponential sum over k coprime to q.
    fn exp_sum_oracle(q: usize, n: usize) -> i64 {
        let re: f64 = (1..=q)
            .filter(|&k| gcd(k, q) == 1)
            .map(|k| (2.0 * PI * (k * n) as f64 / q as f64).cos())
            .sum();
        let rounded = re.round();
        assert!((re - rounded).abs() < 1e-6);
        rounded as i64
    }

    /// `u(n mod q - k) c_q(n - k) - k delta(n mod q - k)` evaluated pointwise.
    fn definition_oracle(q: usize, k: usize) -> Vec<i64> {
        (0..q)
            .map(|n| {
                let step = if n >= k { exp_sum_oracle(q, n - k) } else { 0 };
                let delta = if n == k { k as i64 } else { 0 };
                step - delta
            })
            .collect()
    }

    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn ramanujan_sum_examples() {
        assert_eq!(ramanujan_sum(3, 3).unwrap(), vec![2, -1, -1]);
        assert_eq!(ramanujan_sum(1, 4).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(ramanujan_sum(4, 4).unwrap(), vec![2, 0, -2, 0]);
        assert!(matches!(
            ramanujan_sum(4, 6),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn ramanujan_sum_matches_exponential_sum() {
        for q in 1..=60 {
            let got = ramanujan_sum(q, 2 * q).unwrap();
            for (n, &v) in got.iter().enumerate() {
                assert_eq!(v, exp_sum_oracle(q, n), "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn prime_tables() {
        assert_eq!(ors_prime(3, 0).unwrap(), vec![2, -1, -1]);
        assert_eq!(ors_prime(3, 1).unwrap(), vec![0, 1, -1]);
        assert_eq!(ors_prime(5, 0).unwrap(), vec![4, -1, -1, -1, -1]);
        assert_eq!(ors_prime(5, 1).unwrap(), vec![0, 3, -1, -1, -1]);
        assert_eq!(ors_prime(5, 2).unwrap(), vec![0, 0, 2, -1, -1]);
        assert_eq!(ors_prime(5, 3).unwrap(), vec![0, 0, 0, 1, -1]);
        assert_eq!(ors_prime(2, 0).unwrap(), vec![1, -1]);
    }

    #[test]
    fn prime_rejects_bad_arguments() {
        assert!(matches!(ors_prime(5, 4), Err(Error::OutOfRange { .. })));
        assert!(matches!(ors_prime(3, 2), Err(Error::OutOfRange { .. })));
        assert_eq!(ors_prime(6, 0), Err(Error::NotPrime(6)));
        assert_eq!(ors_prime(1, 0), Err(Error::NotPrime(1)));
    }

    #[test]
    fn closed_form_matches_definition() {
        for q in PRIMES_TO_50 {
            for k in 0..q - 1 {
                assert_eq!(
                    ors_prime(q, k).unwrap(),
                    definition_oracle(q, k),
                    "q={q} k={k}"
                );
            }
        }
    }

    #[test]
    fn zero_sum_and_energy_for_primes() {
        for q in PRIMES_TO_50 {
            for k in 0..q - 1 {
                let s = ors_prime(q, k).unwrap();
                assert_eq!(s.iter().sum::<i64>(), 0);
                assert_eq!(dot(&s, &s), ((q - k) * (q - k - 1)) as i64);
            }
        }
    }

    #[test]
    fn same_prime_orthogonality() {
        for q in PRIMES_TO_50 {
            for k1 in 0..q - 1 {
                for k2 in 0..k1 {
                    assert_eq!(
                        dot(&ors_prime(q, k1).unwrap(), &ors_prime(q, k2).unwrap()),
                        0
                    );
                }
            }
        }
    }

    #[test]
    fn cross_prime_orthogonality() {
        let primes = [2, 3, 5, 7, 11, 13];
        for &q1 in &primes {
            for &q2 in primes.iter().filter(|&&p| p != q1) {
                let len = q1 * q2;
                for k1 in 0..q1 - 1 {
                    for k2 in 0..q2 - 1 {
                        let a = tile(&ors_prime(q1, k1).unwrap(), len);
                        let b = tile(&ors_prime(q2, k2).unwrap(), len);
                        let prod: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                        assert_eq!(dot(&a, &b), 0);
                        assert_eq!(dot(&prod, &a), 0);
                        assert_eq!(dot(&prod, &b), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(
            ors_prime_power(2, 2, 0, 0).unwrap().samples(),
            &[1, 0, -1, 0]
        );
        assert_eq!(
            ors_prime_power(2, 2, 0, 1).unwrap().samples(),
            &[0, 1, 0, -1]
        );
        assert_eq!(ors_prime_power(3, 1, 0, 0).unwrap().samples(), &[2, -1, -1]);
        assert!(matches!(
            ors_prime_power(2, 2, 0, 2),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            ors_prime_power(3, 2, 2, 0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn interpolation_identity_for_classical_sums() {
        for q in [2usize, 3, 5] {
            for l in 1..=3u32 {
                let big = q.pow(l);
                let stride = q.pow(l - 1);
                let small = ramanujan_sum(q, q).unwrap();
                for n in 0..big {
                    let rhs = if n % stride == 0 {
                        stride as i64 * small[(n / stride) % q]
                    } else {
                        0
                    };
                    assert_eq!(exp_sum_oracle(big, n), rhs, "q={q} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(
            ors_divisor(6, &[0, 0], &[0, 0], 6).unwrap().samples(),
            &[2, 1, -1, -2, -1, 1]
        );
        assert_eq!(
            ors_divisor(6, &[0, 1], &[0, 0], 6).unwrap().samples(),
            &[0, -1, -1, 0, 1, 1]
        );
        assert_eq!(
            ors_divisor(2, &[0], &[0], 6).unwrap().samples(),
            &[1, -1, 1, -1, 1, -1]
        );
        assert_eq!(ors_divisor(1, &[], &[], 3).unwrap().samples(), &[1, 1, 1]);
    }

    #[test]
    fn divisor_rejects_bad_arguments() {
        assert!(matches!(
            ors_divisor(6, &[0], &[0, 0], 6),
            Err(Error::Arity {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            ors_divisor(6, &[0, 0], &[0, 0], 8),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            ors_divisor(6, &[1, 0], &[0, 0], 6),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            ors_divisor(12, &[0, 0], &[2, 0], 12),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn divisor_sequences_have_stated_norm_and_period() {
        for d in 2..=60 {
            let len = 2 * d;
            let fac = factorize(d).unwrap();
            for label in labels_for_divisor(d).unwrap() {
                let v = ors_divisor(d, &label.phases, &label.shifts, len).unwrap();
                assert_eq!(v.sq_norm(), expected_sq_norm(&label, &fac, len));
                assert_eq!(v.samples().iter().sum::<i64>(), 0);
                for n in 0..len - d {
                    assert_eq!(v.samples()[n], v.samples()[n + d]);
                }
            }
        }
    }

    #[test]
    fn label_count_is_totient() {
        for d in 1..=100 {
            assert_eq!(
                labels_for_divisor(d).unwrap().len(),
                totient(d).unwrap(),
                "d = {d}"
            );
        }
    }

    #[test]
    fn label_order_for_twelve() {
        let labels: Vec<String> = labels_for_divisor(12)
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(
            labels,
            ["12;0,0;0,0", "12;1,0;0,0", "12;0,0;0,1", "12;1,0;0,1"]
        );
    }
}
