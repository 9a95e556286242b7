//! Exact arithmetic over ℚ and ℚ(i), plus small fixed-dimension linear algebra.
//!
//! Everything here is exact. [`Rational`] is a reduced big-integer fraction with
//! a positive denominator, so structural equality is value equality and the
//! derived hash can key equality-indexed collections directly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction of big integers.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `p/q`, or just `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter writing a rational as a `"p/q"` string.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Exact test of `log₂ n ≥ bound` for `n ≥ 1`.
///
/// With `bound = p/q` this is `n^q ≥ 2^p`. Cheap integer bounds and then
/// rigorous rational enclosures of `log₂ n` settle almost every case; the
/// big-integer power comparison is the fallback.
pub fn log2_at_least(n: u64, bound: &Rational) -> bool {
    assert!(n >= 1, "log2 of zero");
    if !bound.is_positive() {
        return true;
    }
    if *bound <= int(floor_log2(n) as i64) {
        return true;
    }
    if *bound > int(ceil_log2(n) as i64) {
        return false;
    }
    for bits in [64u32, 256, 1024] {
        let (lo, hi) = log2_enclosure(n, bits);
        if *bound <= lo {
            return true;
        }
        if *bound > hi {
            return false;
        }
    }
    let p: u64 = bound.numer().try_into().expect("numerator fits in u64");
    let q: u64 = bound.denom().try_into().expect("denominator fits in u64");
    BigUint::from(n).pow(q) >= BigUint::from(2u32).pow(p)
}

/// Rational `lo ≤ log₂ n ≤ hi`.
///
/// Binary digits of `log₂ y`, `y = n / 2^⌊log₂ n⌋ ∈ [1, 2)`, come from
/// repeated squaring: a digit is 1 exactly when `y² ≥ 2`, after which `y²` is
/// halved. `y` is tracked as an integer interval scaled by `2^prec`, rounded
/// outward, and extraction stops at the first digit the interval can not
/// decide.
pub fn log2_enclosure(n: u64, prec: u32) -> (Rational, Rational) {
    let f = floor_log2(n);
    let one = BigUint::one() << prec;
    let two = &one << 1u32;
    let mut lo = BigUint::from(n) << prec >> f;
    let mut hi = lo.clone();
    let mut digits = BigUint::zero();
    let mut count = 0u32;
    while count < prec {
        let sq_lo = (&lo * &lo) >> prec;
        let sq_hi = ((&hi * &hi) + (&one - 1u32)) >> prec;
        let digit = if sq_lo >= two {
            true
        } else if sq_hi < two {
            false
        } else {
            break;
        };
        digits <<= 1u32;
        count += 1;
        if digit {
            digits += 1u32;
            lo = sq_lo >> 1u32;
            hi = (sq_hi + 1u32) >> 1u32;
        } else {
            lo = sq_lo;
            hi = sq_hi;
        }
    }
    let scale = BigInt::from(BigUint::one() << count);
    let base = Rational::from_integer(BigInt::from(f));
    let frac = Rational::new(BigInt::from(digits), scale.clone());
    let lo = base + frac;
    let hi = &lo + Rational::new(BigInt::one(), scale);
    (lo, hi)
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1, "log2 of zero");
    63 - n.leading_zeros()
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    let f = floor_log2(n);
    if n.is_power_of_two() {
        f
    } else {
        f + 1
    }
}

/// An element of ℚ(i).
///
/// Ordering is lexicographic on `(re.numer, re.denom, im.numer, im.denom)`.
/// It is a total order used for deterministic iteration, not a field order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(int(re), int(im))
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Ok(Self::new(num.re / &n, num.im / n))
    }

    fn sort_key(&self) -> [&BigInt; 4] {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
    }
}

/// Exact `a / b`; fails when `b = 0`.
pub fn gq_div(a: &GaussianRational, b: &GaussianRational) -> Result<GaussianRational> {
    a.checked_div(b)
}

impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

/// Set-file spelling: `3`, `-1/2`, `i`, `-i`, `2/3i`, `1+2i`, `1/2-i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |v: &Rational| -> String {
            if v.is_one() {
                "i".to_string()
            } else if (-v).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(v))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if self.im.is_negative() {
                    write!(f, "{}{}", fmt_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Fixed-length exact rational vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VecQ<const N: usize>(pub [Rational; N]);

pub type Vec4Q = VecQ<4>;
pub type Vec3Q = VecQ<3>;
pub type Vec2Q = VecQ<2>;

impl<const N: usize> VecQ<N> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn from_ints(v: [i64; N]) -> Self {
        Self(v.map(int))
    }

    pub fn unit(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = Rational::one();
        v
    }

    pub fn dot(&self, rhs: &Self) -> Rational {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self(std::array::from_fn(|j| &self.0[j] * k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// First index holding a nonzero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// True iff `self` and `rhs` are linearly dependent (all 2×2 minors vanish).
    pub fn is_parallel(&self, rhs: &Self) -> bool {
        (0..N).all(|a| (a + 1..N).all(|b| &self.0[a] * &rhs.0[b] == &self.0[b] * &rhs.0[a]))
    }

    /// Numeric lexicographic comparison.
    pub fn cmp_lex(&self, rhs: &Self) -> Ordering {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Basis of the orthogonal complement of `self` (which must be nonzero).
    ///
    /// With pivot `j`, the basis is `e_k − (v_k / v_j)·e_j` for `k ≠ j`. In that
    /// basis, a vector `w ⊥ self` has coordinates `w_k` for `k ≠ j`: see
    /// [`VecQ::drop_coord`].
    pub fn complement_basis(&self) -> (usize, Vec<Self>) {
        let j = self.pivot().expect("complement of zero vector");
        let basis = (0..N)
            .filter(|&k| k != j)
            .map(|k| {
                let mut b = Self::unit(k);
                b.0[j] = -(&self.0[k] / &self.0[j]);
                b
            })
            .collect();
        (j, basis)
    }
}

impl VecQ<4> {
    /// Drop coordinate `j`, giving coordinates in [`VecQ::complement_basis`].
    pub fn drop_coord(&self, j: usize) -> Vec3Q {
        let mut it = (0..4).filter(|&k| k != j).map(|k| self.0[k].clone());
        VecQ(std::array::from_fn(|_| it.next().unwrap()))
    }
}

impl<const N: usize> Index<usize> for VecQ<N> {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for VecQ<N> {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for &VecQ<N> {
    type Output = VecQ<N>;
    fn add(self, rhs: Self) -> VecQ<N> {
        VecQ(std::array::from_fn(|j| &self.0[j] + &rhs.0[j]))
    }
}

impl<const N: usize> Sub for &VecQ<N> {
    type Output = VecQ<N>;
    fn sub(self, rhs: Self) -> VecQ<N> {
        VecQ(std::array::from_fn(|j| &self.0[j] - &rhs.0[j]))
    }
}

impl<const N: usize> Neg for &VecQ<N> {
    type Output = VecQ<N>;
    fn neg(self) -> VecQ<N> {
        VecQ(std::array::from_fn(|j| -&self.0[j]))
    }
}

impl<const N: usize> Serialize for VecQ<N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(fmt_rational))
    }
}

impl<const N: usize> fmt::Display for VecQ<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Determinant by Gaussian elimination over ℚ with row pivoting.
fn det_n<const N: usize>(rows: &[VecQ<N>; N]) -> Rational {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..N {
        let Some(p) = (col..N).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..N {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            let (upper, lower) = m.split_at_mut(r);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= &f * src;
            }
        }
    }
    det
}

pub fn det2(rows: &[Vec2Q; 2]) -> Rational {
    &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0]
}

pub fn det3(rows: &[Vec3Q; 3]) -> Rational {
    det_n(rows)
}

pub fn det4(rows: &[Vec4Q; 4]) -> Rational {
    det_n(rows)
}

/// Sign of the 2D orientation determinant of `(a, b, c)`: positive when
/// counter-clockwise.
pub fn orient2d(a: &Vec2Q, b: &Vec2Q, c: &Vec2Q) -> Ordering {
    let ab = b - a;
    let ac = c - a;
    det2(&[ab, ac]).cmp(&Rational::zero())
}

/// Reduce a nonzero rational vector to a primitive integer vector with the
/// same direction (positive scaling only).
pub fn primitive_direction<const N: usize>(v: &VecQ<N>) -> [BigInt; N] {
    let lcm = v.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: [BigInt; N] = std::array::from_fn(|j| (&v.0[j] * &lcm).to_integer());
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.map(|c| c / &g)
}
