//! Exact `q`-series for the two indefinite theta identities: divisor-sum right
//! sides, weighted lattice counts on the left, and their comparison.

use std::time::Instant;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::report::{ReportStatus, VerificationReport};
use crate::ring::{rat, rat_frac, Rational};

/// Coefficients at `q^1 .. q^nmax`; there is never a constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(nmax: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); nmax],
        }
    }

    pub fn from_fn(nmax: usize, f: impl Fn(usize) -> Rational) -> Self {
        QSeries {
            coeffs: (1..=nmax).map(f).collect(),
        }
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^n`, `1 ≤ n ≤ nmax`.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n - 1]
    }

    pub fn set(&mut self, n: usize, v: Rational) {
        self.coeffs[n - 1] = v;
    }

    pub fn add(&mut self, n: usize, v: &Rational) {
        self.coeffs[n - 1] += v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (i + 1, c))
    }
}

/// Sieved arithmetic functions on `1..=nmax` (index 0 unused).
#[derive(Clone, Debug)]
pub struct DivisorTables {
    pub sigma1: Vec<u64>,
    pub tau: Vec<u64>,
    /// Number of even divisors.
    pub tau_ev: Vec<u64>,
    /// `Σ_{n=ad} min(a, d)` over ordered factorizations.
    pub sigma_min: Vec<u64>,
    /// `Σ_{n=ad, 2|(d-a)} min(a, d)` over ordered factorizations.
    pub sigma_min_ev: Vec<u64>,
    pub is_square: Vec<bool>,
}

impl DivisorTables {
    pub fn new(nmax: usize) -> Self {
        let mut t = DivisorTables {
            sigma1: vec![0; nmax + 1],
            tau: vec![0; nmax + 1],
            tau_ev: vec![0; nmax + 1],
            sigma_min: vec![0; nmax + 1],
            sigma_min_ev: vec![0; nmax + 1],
            is_square: vec![false; nmax + 1],
        };
        for a in 1..=nmax {
            for d in 1..=nmax / a {
                let n = a * d;
                let m = a.min(d) as u64;
                t.sigma1[n] += a as u64;
                t.tau[n] += 1;
                if a % 2 == 0 {
                    t.tau_ev[n] += 1;
                }
                t.sigma_min[n] += m;
                if (a + d) % 2 == 0 {
                    t.sigma_min_ev[n] += m;
                }
            }
            if a * a <= nmax {
                t.is_square[a * a] = true;
            }
        }
        t
    }

    pub fn nmax(&self) -> usize {
        self.sigma1.len() - 1
    }

    /// `σ_1(x)` with `σ_1` of a non-integer taken as zero.
    pub fn sigma1_frac(&self, n: usize, k: usize) -> u64 {
        if n.is_multiple_of(k) { self.sigma1[n / k] } else { 0 }
    }

    pub fn square(&self, n: usize) -> u64 {
        u64::from(self.is_square[n])
    }
}

fn check_nmax(nmax: usize) -> Result<()> {
    if nmax == 0 {
        return Err(Error::InvalidArgument("nmax must be at least 1".into()));
    }
    Ok(())
}

/// `3Ẽ_2(q) - 2Σ σ_min(n) q^n + Σ q^{n^2}`.
pub fn rhs_identity1(nmax: usize) -> Result<QSeries> {
    check_nmax(nmax)?;
    let t = DivisorTables::new(nmax);
    Ok(QSeries::from_fn(nmax, |n| {
        rat(3 * t.sigma1[n] as i64 - 2 * t.sigma_min[n] as i64 + t.square(n) as i64)
    }))
}

/// `Ẽ_2(q) - 2Ẽ_2(q^2) + 4Ẽ_2(q^4) - 2Σ σ_min^ev(n) q^n + Σ q^{n^2}`.
pub fn rhs_identity2(nmax: usize) -> Result<QSeries> {
    check_nmax(nmax)?;
    let t = DivisorTables::new(nmax);
    Ok(QSeries::from_fn(nmax, |n| {
        rat(t.sigma1[n] as i64 - 2 * t.sigma1_frac(n, 2) as i64 + 4 * t.sigma1_frac(n, 4) as i64
            - 2 * t.sigma_min_ev[n] as i64
            + t.square(n) as i64)
    }))
}

/// Twice the weighted count, accumulated as integers.
fn halve(doubled: Vec<i64>) -> QSeries {
    QSeries {
        coeffs: doubled.into_iter().map(|v| rat_frac(v, 2)).collect(),
    }
}

/// `Σ' q^{ad+bc}` over `a,b,c,d ≥ 0`, `a+b > |d-c|`, `c+d > |a-b|`, with weight
/// `1/2` when `abcd = 0`.
pub fn lhs_identity1(nmax: usize) -> Result<QSeries> {
    check_nmax(nmax)?;
    let big = nmax as i64;
    let mut doubled = vec![0i64; nmax];
    // Every entry of a solution is at most 2n.
    for b in 0..=2 * big {
        for c in 0..=2 * big {
            let bc = b * c;
            if bc > big {
                if b > 0 {
                    break;
                }
                continue;
            }
            for a in 0..=2 * big {
                let ds: Box<dyn Iterator<Item = i64>> = if a == 0 {
                    if bc == 0 {
                        continue;
                    }
                    Box::new((c - b + 1).max(0)..c + b)
                } else {
                    Box::new(0..=(big - bc) / a)
                };
                for d in ds {
                    let n = a * d + bc;
                    if n < 1 || n > big || a + b <= (d - c).abs() || c + d <= (a - b).abs() {
                        continue;
                    }
                    doubled[(n - 1) as usize] += if a * b * c * d == 0 { 1 } else { 2 };
                }
            }
        }
    }
    Ok(halve(doubled))
}

/// Ordered factorizations `u = f·g` with `f ≡ g (mod 2)`, as `(x, t)` with
/// `x = (f+g)/2`, `t = (g-f)/2`, i.e. `u = x^2 - t^2`, `x > |t|`.
fn hyperbola_points(u: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut f = 1;
    while f * f <= u {
        if u % f == 0 {
            let g = u / f;
            if (f + g) % 2 == 0 {
                out.push(((f + g) / 2, (g - f) / 2));
                if f != g {
                    out.push(((f + g) / 2, (f - g) / 2));
                }
            }
        }
        f += 1;
    }
    out
}

/// `Σ' q^{x^2+z^2-y^2-t^2}` over `x ≥ |y|`, `z ≥ |t|`, `x > |t|`, `z > |y|`, with
/// weight `1/2` when `x = |y|` or `z = |t|`.
pub fn lhs_identity2(nmax: usize) -> Result<QSeries> {
    check_nmax(nmax)?;
    let points: Vec<Vec<(i64, i64)>> = (0..=nmax as i64).map(hyperbola_points).collect();
    let mut doubled = vec![0i64; nmax];
    for n in 2..=nmax {
        for u in 1..n {
            let v = n - u;
            for &(x, t) in &points[u] {
                for &(z, y) in &points[v] {
                    if x < y.abs() || z < t.abs() {
                        continue;
                    }
                    let boundary = x == y.abs() || z == t.abs();
                    doubled[n - 1] += if boundary { 1 } else { 2 };
                }
            }
        }
    }
    Ok(halve(doubled))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Number of integer `(x, y, z, t)` with `x^2 + z^2 - y^2 - t^2 = p` and
/// `x, z > |y|, |t|`.
pub fn prime_solution_count(p: u64) -> Result<u64> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let p = i64::try_from(p).map_err(|_| Error::InvalidArgument("p too large".into()))?;
    let points: Vec<Vec<(i64, i64)>> = (0..=p).map(hyperbola_points).collect();
    let mut count = 0;
    for u in 1..p {
        for &(x, t) in &points[u as usize] {
            for &(z, y) in &points[(p - u) as usize] {
                if x > y.abs() && z > t.abs() {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Index of the first coefficient where the two series differ.
pub fn first_discrepancy(lhs: &QSeries, rhs: &QSeries) -> Option<usize> {
    lhs.iter()
        .zip(rhs.iter())
        .find(|((_, a), (_, b))| a != b)
        .map(|((n, _), _)| n)
}

/// Builds `(lhs, rhs)` for identity 1 or 2.
pub fn identity_series(id: u8, nmax: usize) -> Result<(QSeries, QSeries)> {
    match id {
        1 => Ok((lhs_identity1(nmax)?, rhs_identity1(nmax)?)),
        2 => Ok((lhs_identity2(nmax)?, rhs_identity2(nmax)?)),
        _ => Err(Error::InvalidArgument(format!("identity must be 1 or 2, got {id}"))),
    }
}

/// Report comparing two already-built series.
pub fn compare_series(claim: &str, lhs: &QSeries, rhs: &QSeries) -> VerificationReport {
    let nmax = lhs.nmax().min(rhs.nmax()) as u64;
    match first_discrepancy(lhs, rhs) {
        None => VerificationReport::new(claim, ReportStatus::Verified).over(1, nmax),
        Some(n) => VerificationReport::new(claim, ReportStatus::Failed)
            .over(1, nmax)
            .with_detail(format!(
                "first discrepancy at n = {n}: lhs {} vs rhs {}",
                lhs.coeff(n),
                rhs.coeff(n)
            )),
    }
}

pub fn check_identity(id: u8, nmax: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let (lhs, rhs) = identity_series(id, nmax)?;
    let mut report = compare_series(&format!("theta{id}"), &lhs, &rhs);
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_table_values() {
        let t = DivisorTables::new(12);
        assert_eq!(t.sigma1[12], 28);
        assert_eq!(t.tau[12], 6);
        assert_eq!(t.tau_ev[12], 4);
        assert_eq!(t.sigma_min[4], 4);
        assert_eq!(t.sigma_min_ev[4], 2);
        assert_eq!(t.sigma_min_ev[1], 1);
        assert!(t.is_square[9] && !t.is_square[8]);
    }

    #[test]
    fn rhs_examples() {
        let r1 = rhs_identity1(4).unwrap();
        assert_eq!((r1.coeff(1), r1.coeff(2), r1.coeff(4)), (&rat(2), &rat(5), &rat(14)));
        let r2 = rhs_identity2(13).unwrap();
        assert_eq!(r2.coeff(1), &rat(0));
        assert_eq!(r2.coeff(4), &rat(2));
        assert_eq!(r2.coeff(13), &rat(10));
    }

    #[test]
    fn lhs_examples() {
        let l1 = lhs_identity1(2).unwrap();
        assert_eq!((l1.coeff(1), l1.coeff(2)), (&rat(2), &rat(5)));
        let l2 = lhs_identity2(4).unwrap();
        assert_eq!((l2.coeff(1), l2.coeff(4)), (&rat(0), &rat(2)));
    }

    #[test]
    fn prime_counts() {
        assert_eq!(prime_solution_count(3).unwrap(), 0);
        assert_eq!(prime_solution_count(5).unwrap(), 2);
        assert_eq!(prime_solution_count(13).unwrap(), 10);
        assert!(prime_solution_count(9).is_err());
        assert!(prime_solution_count(2).is_err());
    }

    #[test]
    fn perturbed_rhs_is_caught() {
        let (lhs, mut rhs) = identity_series(1, 20).unwrap();
        assert!(first_discrepancy(&lhs, &rhs).is_none());
        rhs.add(7, &rat(1));
        let report = compare_series("theta1", &lhs, &rhs);
        assert_eq!(report.status, ReportStatus::Failed);
        assert!(report.detail.unwrap().contains("n = 7"));
    }

    #[test]
    fn bad_arguments() {
        assert!(rhs_identity1(0).is_err());
        assert!(identity_series(3, 5).is_err());
    }
}
