//! Expected and worst-case query counts, in exact arithmetic.
//!
//! `T_Q(m)` is the expected number of circuit runs the quantum procedure
//! needs for a mask of weight `m`; `T_CB(n, m)` and `T_CS(n, m)` are the
//! query counts of the adapted classical binary and sequential searches.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    /// `num/den`, or just `num` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::OutOfRange(format!("not a rational: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Self::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Rows `0..=max_n` of Pascal's triangle in big integers.
#[derive(Clone, Debug)]
pub struct Binomials {
    rows: Vec<Vec<BigInt>>,
}

impl Binomials {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        Self { rows }
    }

    /// `C(n, k)`, zero outside `0 <= k <= n`. Negative `n` also gives zero,
    /// which is what the sums in [`t_cs`] need. Panics if `n` exceeds the
    /// table.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }
}

/// Smallest `j` with `2^j >= x`.
pub fn ceil_log2(x: u64) -> Result<u32> {
    match x {
        0 => Err(Error::OutOfRange("ceil_log2 of 0".into())),
        1 => Ok(0),
        _ => Ok(u64::BITS - (x - 1).leading_zeros()),
    }
}

/// `T_Q(0..=max_m)`, solved bottom-up from
/// `T_Q(m) = 2^-m * sum_{h=0..m} C(m,h) (1 + T_Q(h))`, `T_Q(0) = 0`.
/// Moving the `h = m` term left gives
/// `T_Q(m) = (2^m + sum_{h<m} C(m,h) T_Q(h)) / (2^m - 1)`.
///
/// Reduced denominators reach tens of thousands of bits by `m = 500`, so
/// values are held as integer numerators over one shared denominator
/// `D`, seeded with `prod_{d <= max_m} Phi_d(2)` (cyclotomic values, a
/// multiple of every `2^j - 1` with `j <= max_m`). Step `m` computes
/// `Y = (2^m - 1) T_Q(m) D` in integers; if `2^m - 1` does not divide
/// `Y`, `D` and every stored numerator are scaled so the division is
/// exact. The binomial sums come from a running difference table, so
/// each step costs only additions. Canonical fractions are only formed
/// on request.
#[derive(Clone, Debug)]
pub struct TqTable {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl TqTable {
    pub fn up_to(max_m: u32) -> Self {
        let max_m = max_m as usize;
        let mut denominator: BigInt = cyclotomic_values_at_two(max_m).iter().product();
        let mut numerators = Vec::with_capacity(max_m + 1);
        numerators.push(BigInt::zero());
        // diagonal[i] = sum_h C(i, h) A_{m-1-i+h}; the last entry is
        // sum_h C(m-1, h) A_h.
        let mut diagonal = vec![BigInt::zero()];
        for m in 1..=max_m {
            let mut acc = BigInt::zero();
            for entry in diagonal.iter_mut() {
                *entry += &acc;
                std::mem::swap(entry, &mut acc);
            }
            diagonal.push(acc);
            let r = (BigInt::one() << m) - 1u32;
            let mut y = (&denominator << m) + &diagonal[m];
            let rem = &y % &r;
            if !rem.is_zero() {
                let scale = &r / num_integer::Integer::gcd(&rem, &r);
                denominator *= &scale;
                y *= &scale;
                for a in numerators.iter_mut().chain(diagonal.iter_mut()) {
                    *a *= &scale;
                }
            }
            let a_m = y / &r;
            for entry in diagonal.iter_mut() {
                *entry += &a_m;
            }
            numerators.push(a_m);
        }
        Self {
            numerators,
            denominator,
        }
    }

    pub fn max_m(&self) -> u32 {
        (self.numerators.len() - 1) as u32
    }

    /// Exact `T_Q(m)` in lowest terms. Reduction cost grows quickly with
    /// `m`. Panics if `m` is beyond the table.
    pub fn get(&self, m: u32) -> Rational {
        Rational::new(
            self.numerators[m as usize].clone(),
            self.denominator.clone(),
        )
    }

    /// `T_Q(m)` rounded to `f64` from the exact value.
    pub fn to_f64(&self, m: u32) -> f64 {
        ratio_to_f64(&self.numerators[m as usize], &self.denominator)
    }

    /// Exact comparison of `T_Q(m)` with `other`.
    pub fn cmp_exact(&self, m: u32, other: &Rational) -> std::cmp::Ordering {
        (&self.numerators[m as usize] * other.denom()).cmp(&(other.numer() * &self.denominator))
    }
}

/// `Phi_d(2)` for `1 <= d <= max_d`, using `2^k - 1 = prod_{d | k} Phi_d(2)`.
fn cyclotomic_values_at_two(max_d: usize) -> Vec<BigInt> {
    let mut values: Vec<BigInt> = (0..=max_d).map(|k| (BigInt::one() << k) - 1u32).collect();
    for d in 1..=max_d {
        for k in (2 * d..=max_d).step_by(d) {
            values[k] = &values[k] / &values[d];
        }
    }
    values.split_off(1)
}

/// `num / den` for non-negative `num` and positive `den`, via a 64-bit
/// quotient so huge operands never overflow `f64`.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    quotient.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// Exact `T_Q(m)`.
pub fn t_q(m: u32) -> Rational {
    TqTable::up_to(m).get(m)
}

/// `T_Q(m)` as the expected number of rounds until each of `m`
/// independent fair coins has come up heads at least once:
/// `sum_{t>=0} [1 - (1 - 2^-t)^m]`. Term `t` is at most `m 2^-t`, so the
/// tail after term `t` is at most `m 2^-t`; summation stops once that
/// bound is below `tolerance / 2`.
pub fn t_q_series(m: u32, tolerance: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange("t_q_series needs m >= 1".into()));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance {tolerance}")));
    }
    let m_f = f64::from(m);
    let mut sum = 0.0;
    for t in 0..i32::MAX {
        let p = 0.5f64.powi(t);
        // 1 - (1 - p)^m without cancellation
        sum += -(m_f * (-p).ln_1p()).exp_m1();
        if m_f * p < tolerance / 2.0 {
            break;
        }
    }
    Ok(sum)
}

/// `2 + log2(m)`.
pub fn t_q_approx(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange("t_q_approx needs m >= 1".into()));
    }
    Ok(2.0 + f64::from(m).log2())
}

fn check_pair(n: u32, m: u32) -> Result<()> {
    if n >= 2 && (1..n).contains(&m) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "need 1 <= m <= n-1, got n={n}, m={m}"
        )))
    }
}

/// `T_CB(n, m) = 1 + sum_{h=1..m} ceil(log2(n - h + 1))`.
pub fn t_cb(n: u32, m: u32) -> Result<u64> {
    check_pair(n, m)?;
    (1..=m).try_fold(1u64, |acc, h| {
        Ok(acc + u64::from(ceil_log2(u64::from(n - h + 1))?))
    })
}

/// Expected sequential-search queries over a uniformly random mask of
/// weight `m`:
/// `[sum_{h=m+1..n} h C(h-2, m-1) + sum_{h=0..m-1} (n-h) C(n-2-h, m-1-h)] / C(n, m)`.
pub fn t_cs(n: u32, m: u32) -> Result<Rational> {
    check_pair(n, m)?;
    let binomials = Binomials::new(n as usize);
    t_cs_with(&binomials, n, m)
}

/// [`t_cs`] against a caller-supplied table covering rows up to `n`.
pub fn t_cs_with(binomials: &Binomials, n: u32, m: u32) -> Result<Rational> {
    check_pair(n, m)?;
    let (n, m) = (i64::from(n), i64::from(m));
    let by_ones: BigInt = (m + 1..=n)
        .map(|h| BigInt::from(h) * binomials.get(h - 2, m - 1))
        .sum();
    let by_zeros: BigInt = (0..m)
        .map(|h| BigInt::from(n - h) * binomials.get(n - 2 - h, m - 1 - h))
        .sum();
    Ok(Rational::new(by_ones + by_zeros, binomials.get(n, m)))
}

/// Fewest queries any classical procedure needs for `wt(s) = 1`:
/// `ceil(S / A) = 1 + ceil(log2 n)` with one bit gained per query.
pub fn classical_lower_bound_m1(n: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    Ok(1 + u64::from(ceil_log2(u64::from(n))?))
}

/// Information content of a `wt(s) = 1` instance, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyBudget {
    /// `log2(2n)`: uniform over `n` masks times two output labelings.
    pub total: f64,
    /// `log2 n`, the mask itself.
    pub global: f64,
    /// One bit: which of the two classes gets which label.
    pub local: f64,
}

pub fn entropy_budget_m1(n: u32) -> Result<EntropyBudget> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    let global = f64::from(n).log2();
    Ok(EntropyBudget {
        total: 1.0 + global,
        global,
        local: 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn t_q_first_values() {
        assert_eq!(t_q(0), Rational::zero());
        assert_eq!(t_q(1), r(2, 1));
        assert_eq!(t_q(2), r(8, 3));
        assert_eq!(t_q(3), r(22, 7));
    }

    /// Expected maximum of `m` geometric(1/2) variables by the direct
    /// distribution sum `sum_t t * [F(t)^m - F(t-1)^m]` with `F(t) = 1 - 2^-t`,
    /// in exact rationals, truncated far into the tail.
    fn t_q_by_distribution(m: u32, terms: u32) -> Rational {
        let cdf = |t: u32| {
            let p = Rational::new(BigInt::one(), BigInt::one() << t);
            let q = &Rational::from_integer(1) - &p;
            (0..m).fold(Rational::from_integer(1), |acc, _| &acc * &q)
        };
        (1..=terms)
            .map(|t| &Rational::from_integer(t) * &(&cdf(t) - &cdf(t - 1)))
            .sum()
    }

    #[test]
    fn t_q_matches_distribution_sum() {
        for m in 1..=6 {
            let approx = t_q_by_distribution(m, 80).to_f64();
            assert!((approx - t_q(m).to_f64()).abs() < 1e-15, "m={m}");
        }
    }

    #[test]
    fn series_examples() {
        assert!((t_q_series(1, 1e-15).unwrap() - 2.0).abs() < 1e-14);
        assert!((t_q_series(2, 1e-13).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        let table = TqTable::up_to(500);
        assert!((t_q_series(500, 1e-12).unwrap() - table.to_f64(500)).abs() < 1e-9);
        assert!(t_q_series(0, 1e-9).is_err());
        assert!(t_q_series(3, 0.0).is_err());
    }

    #[test]
    fn t_q_shape() {
        let table = TqTable::up_to(500);
        for m in 1..=500 {
            let exact = table.to_f64(m);
            assert!(exact > table.to_f64(m - 1));
            let approx = t_q_approx(m).unwrap();
            assert!(exact < approx + 1.0);
            if m >= 2 {
                assert!((exact - approx).abs() <= 1.0);
            }
        }
        for m in 1..=40 {
            assert!(table.get(m) > table.get(m - 1));
            assert_eq!(table.get(m).to_f64(), table.to_f64(m));
            assert_eq!(table.get(m), t_q(m));
        }
        assert_eq!(t_q_approx(1).unwrap(), 2.0);
        assert_eq!(t_q_approx(4).unwrap(), 4.0);
        assert_eq!(table.max_m(), 500);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1).unwrap(), 0);
        assert_eq!(ceil_log2(2).unwrap(), 1);
        assert_eq!(ceil_log2(8).unwrap(), 3);
        assert_eq!(ceil_log2(9).unwrap(), 4);
        assert_eq!(ceil_log2(u64::MAX).unwrap(), 64);
        assert!(ceil_log2(0).is_err());
        for x in 1..5000u64 {
            let j = ceil_log2(x).unwrap();
            assert!(1u128 << j >= u128::from(x));
            assert!(j == 0 || 1u128 << (j - 1) < u128::from(x));
        }
    }

    #[test]
    fn t_cb_values() {
        for n in 2..=64 {
            assert_eq!(
                t_cb(n, 1).unwrap(),
                1 + u64::from(ceil_log2(u64::from(n)).unwrap())
            );
            assert_eq!(t_cb(n, 1).unwrap(), classical_lower_bound_m1(n).unwrap());
        }
        assert_eq!(t_cb(8, 2).unwrap(), 7);
        assert_eq!(t_cb(6, 2).unwrap(), 7);
        assert_eq!(t_cb(200, 1).unwrap(), 9);
        assert!(t_cb(5, 5).is_err());
        assert!(t_cb(5, 0).is_err());
    }

    #[test]
    fn t_cs_values() {
        for n in 2..=30u32 {
            let expected = r(-1, i64::from(n)) + r(3, 2) + r(i64::from(n), 2);
            assert_eq!(t_cs(n, n - 1).unwrap(), expected, "n={n}");
            for m in 1..n {
                let v = t_cs(n, m).unwrap();
                assert_eq!(v, t_cs(n, n - m).unwrap());
                assert!(v <= Rational::from_integer(n));
            }
        }
        // the m = 2 closed form
        for n in 3..=20i64 {
            let sum: i64 = (3..=n).map(|h| h * (h - 2)).sum::<i64>() + (n - 1) + n * (n - 2);
            assert_eq!(t_cs(n as u32, 2).unwrap(), r(sum, n * (n - 1) / 2));
        }
        assert_eq!(t_cs(6, 2).unwrap(), r(79, 15));
        assert!(t_cs(4, 0).is_err());
    }

    #[test]
    fn lower_bound_and_entropy() {
        assert_eq!(classical_lower_bound_m1(8).unwrap(), 4);
        assert_eq!(classical_lower_bound_m1(5).unwrap(), 4);
        assert!(classical_lower_bound_m1(1).is_err());
        let e = entropy_budget_m1(8).unwrap();
        assert_eq!((e.total, e.global, e.local), (4.0, 3.0, 1.0));
        let e = entropy_budget_m1(2).unwrap();
        assert_eq!((e.total, e.global, e.local), (2.0, 1.0, 1.0));
        for n in 2..200 {
            let e = entropy_budget_m1(n).unwrap();
            assert_eq!(e.total, e.global + e.local);
            assert_eq!(e.total.ceil() as u64, classical_lower_bound_m1(n).unwrap());
        }
    }

    #[test]
    fn binomial_table() {
        let b = Binomials::new(60);
        assert_eq!(
            b.get(60, 30),
            "118264581564861424".parse::<BigInt>().unwrap()
        );
        assert_eq!(b.get(4, 5), BigInt::zero());
        assert_eq!(b.get(-1, 0), BigInt::zero());
        assert_eq!(b.get(0, 0), BigInt::one());
    }

    #[test]
    fn rational_text() {
        assert_eq!(r(22, 7).to_string(), "22/7");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!(r(6, -4).to_string(), "-3/2");
        assert_eq!("22/7".parse::<Rational>().unwrap(), r(22, 7));
        assert_eq!("-10/4".parse::<Rational>().unwrap(), r(-5, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(serde_json::to_string(&r(8, 3)).unwrap(), "\"8/3\"");
    }

    proptest! {
        #[test]
        fn rational_addition_is_canonical(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let sum = r(a, b) + r(c, d);
            // cross-multiplied reference
            let (num, den) = (BigInt::from(a * d + c * b), BigInt::from(b * d));
            prop_assert_eq!(sum.numer() * &den, &num * sum.denom());
            prop_assert!(sum.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(sum.numer(), sum.denom()).is_one());
            prop_assert_eq!(&(&sum - &r(c, d)), &r(a, b));
            prop_assert_eq!(&(&r(a, b) * &r(c, d)), &r(a * c, b * d));
        }
    }
}
