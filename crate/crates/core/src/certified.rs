//! Rounding-safe real arithmetic for bound evaluation.
//!
//! Values are enclosed in intervals with dyadic rational endpoints. The
//! transcendental functions (`ln`, `exp`) are evaluated in fixed point on big
//! integers with floor/ceil rounding on every step and an explicit bound on the
//! truncated series tail, so the true value always lies inside the returned
//! interval. The default working precision is 160 bits; callers that cannot
//! decide a comparison at that precision retry with more.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 160;

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn round_down(r: &BigRational, prec: u32) -> BigRational {
    let s = pow2(prec);
    BigRational::new(floor_div(&(r.numer() * &s), r.denom()), s)
}

fn round_up(r: &BigRational, prec: u32) -> BigRational {
    let s = pow2(prec);
    BigRational::new(ceil_div(&(r.numer() * &s), r.denom()), s)
}

/// A closed interval `[lo, hi]` of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Outward rounding of both ends to `prec` fractional bits.
    pub fn rounded(&self, prec: u32) -> Self {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, r: &BigRational) -> Interval {
        self.mul(&Interval::point(r.clone()))
    }

    /// `1 / self` for a strictly positive interval.
    pub fn recip(&self) -> Interval {
        assert!(self.lo.is_positive(), "reciprocal of a non-positive interval");
        Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }

    /// Ordering of every point of the interval against `v`, if uniform.
    pub fn cmp_rational(&self, v: &BigRational) -> Option<Ordering> {
        if &self.hi < v {
            Some(Ordering::Less)
        } else if &self.lo > v {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Sign of the enclosed value, if decided.
    pub fn sign(&self) -> Option<Ordering> {
        self.cmp_rational(&BigRational::zero())
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        rational_to_f64(&mid)
    }

    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // huge values: scale by bit length
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom() << shift as usize)
    } else {
        BigRational::new(r.numer() << (-shift) as usize, r.denom().clone())
    };
    scaled.to_integer().to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// `atanh(p/q)` for `0 <= p/q <= 1/3`.
fn atanh_small(x: &BigRational, prec: u32) -> Interval {
    assert!(!x.is_negative() && x <= &rat(1, 3), "atanh argument out of range");
    if x.is_zero() {
        return Interval::from_int(0);
    }
    let p = prec + 32;
    let s = pow2(p);
    let xs = x.numer() * &s;
    let x_lo = floor_div(&xs, x.denom());
    let x_hi = ceil_div(&xs, x.denom());
    let x2_lo = floor_div(&(&x_lo * &x_lo), &s);
    let x2_hi = ceil_div(&(&x_hi * &x_hi), &s);
    let (mut t_lo, mut t_hi) = (x_lo, x_hi);
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    let stop = pow2(p - prec - 4);
    let mut k: i64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += floor_div(&t_lo, &d);
        sum_hi += ceil_div(&t_hi, &d);
        t_lo = floor_div(&(&t_lo * &x2_lo), &s);
        t_hi = ceil_div(&(&t_hi * &x2_hi), &s);
        k += 1;
        if t_hi < stop {
            break;
        }
    }
    // remaining terms are bounded by t_k / (1 - x^2) <= 9/8 t_k
    sum_hi += ceil_div(&(&t_hi * BigInt::from(9)), &BigInt::from(8));
    Interval::new(BigRational::new(sum_lo, s.clone()), BigRational::new(sum_hi, s))
}

pub fn ln2(prec: u32) -> Interval {
    atanh_small(&rat(1, 3), prec).scale(&rat(2, 1))
}

pub fn ln3(prec: u32) -> Interval {
    ln2(prec).add(&atanh_small(&rat(1, 5), prec).scale(&rat(2, 1)))
}

/// Natural logarithm of a positive rational.
pub fn ln(r: &BigRational, prec: u32) -> Interval {
    assert!(r.is_positive(), "logarithm of a non-positive number");
    if r.is_one() {
        return Interval::from_int(0);
    }
    // r = 2^t * u with 1 <= u < 2
    let mut t = r.numer().bits() as i64 - r.denom().bits() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let scale = |t: i64| -> BigRational {
        if t >= 0 {
            BigRational::from_integer(pow2(t as u32))
        } else {
            BigRational::new(BigInt::one(), pow2((-t) as u32))
        }
    };
    let mut u = r / scale(t);
    while u >= two {
        u /= &two;
        t += 1;
    }
    while u < BigRational::one() {
        u *= &two;
        t -= 1;
    }
    let y = (&u - BigRational::one()) / (&u + BigRational::one());
    let frac = atanh_small(&y, prec + 8).scale(&rat(2, 1));
    let whole = ln2(prec + 8 + 64).scale(&BigRational::from_integer(BigInt::from(t)));
    whole.add(&frac).rounded(prec)
}

pub fn ln_int(v: &BigUint, prec: u32) -> Interval {
    ln(
        &BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone())),
        prec,
    )
}

/// `exp(y)` for a rational `y`, enclosed.
fn exp_point(y: &BigRational, prec: u32) -> Interval {
    if y.is_zero() {
        return Interval::from_int(1);
    }
    if y.is_negative() {
        return exp_point(&-y, prec + 8).recip().rounded(prec);
    }
    // reduce to z = y / 2^j <= 1/2
    let ybits = (y.numer().bits() as i64 - y.denom().bits() as i64).max(0) as u32;
    let j = ybits + 2;
    let p = prec + 32 + 2 * j;
    let s = pow2(p);
    let zs = y.numer() * &s;
    let zden = y.denom() << j as usize;
    let z_lo = floor_div(&zs, &zden);
    let z_hi = ceil_div(&zs, &zden);
    let (mut t_lo, mut t_hi) = (s.clone(), s.clone());
    let (mut e_lo, mut e_hi) = (BigInt::zero(), BigInt::zero());
    let stop = pow2(p - prec - 8);
    let mut k: i64 = 0;
    loop {
        e_lo += &t_lo;
        e_hi += &t_hi;
        k += 1;
        let kk = BigInt::from(k);
        t_lo = floor_div(&(&t_lo * &z_lo), &(&s * &kk));
        t_hi = ceil_div(&(&t_hi * &z_hi), &(&s * &kk));
        if t_hi < stop {
            break;
        }
    }
    // ratio of consecutive remaining terms is at most z/(k+1) <= 1/2
    e_hi += &t_hi * BigInt::from(2);
    for _ in 0..j {
        e_lo = floor_div(&(&e_lo * &e_lo), &s);
        e_hi = ceil_div(&(&e_hi * &e_hi), &s);
    }
    Interval::new(BigRational::new(e_lo, s.clone()), BigRational::new(e_hi, s)).rounded(prec)
}

pub fn exp(y: &Interval, prec: u32) -> Interval {
    let lo = exp_point(y.lo(), prec);
    if y.is_point() {
        return lo;
    }
    let hi = exp_point(y.hi(), prec);
    Interval::new(lo.lo, hi.hi)
}

/// `sqrt(r)` for a non-negative rational.
pub fn sqrt(r: &BigRational, prec: u32) -> Interval {
    assert!(!r.is_negative(), "square root of a negative number");
    let s2 = pow2(2 * prec);
    let scaled = r.numer() * &s2;
    let q_lo = floor_div(&scaled, r.denom());
    let root_lo = q_lo.sqrt();
    let s = pow2(prec);
    let lo = BigRational::new(root_lo.clone(), s.clone());
    let exact = &lo * &lo == *r;
    if exact {
        return Interval::point(lo);
    }
    Interval::new(lo, BigRational::new(root_lo + 1, s))
}

/// A real-valued quantity: exact when it is rational, enclosed otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigRational),
    Enclosure(Interval),
}

impl BoundValue {
    pub fn from_int(v: BigUint) -> Self {
        BoundValue::Exact(BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v)))
    }

    pub fn interval(&self) -> Interval {
        match self {
            BoundValue::Exact(v) => Interval::point(v.clone()),
            BoundValue::Enclosure(iv) => iv.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }

    pub fn lower(&self) -> BigRational {
        self.interval().lo
    }

    pub fn upper(&self) -> BigRational {
        self.interval().hi
    }

    /// The exact integer value, if this is an exact integer.
    pub fn as_integer(&self) -> Option<BigUint> {
        match self {
            BoundValue::Exact(v) if v.is_integer() && !v.is_negative() => v.to_integer().to_biguint(),
            _ => None,
        }
    }

    /// Smallest integer certainly at least the value.
    pub fn ceil_integer(&self) -> BigInt {
        self.upper().ceil().to_integer()
    }

    /// Largest integer certainly at most the value.
    pub fn floor_integer(&self) -> BigInt {
        self.lower().floor().to_integer()
    }

    pub fn cmp_integer(&self, v: &BigUint) -> Option<Ordering> {
        let r = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()));
        match self {
            BoundValue::Exact(x) => Some(x.cmp(&r)),
            BoundValue::Enclosure(iv) => iv.cmp_rational(&r),
        }
    }

    pub fn mul(&self, o: &BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => BoundValue::Exact(a * b),
            _ => BoundValue::Enclosure(self.interval().mul(&o.interval())),
        }
    }

    pub fn add(&self, o: &BoundValue) -> BoundValue {
        match (self, o) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => BoundValue::Exact(a + b),
            _ => BoundValue::Enclosure(self.interval().add(&o.interval())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => rational_to_f64(v),
            BoundValue::Enclosure(iv) => iv.midpoint_f64(),
        }
    }

    /// Decimal for exact integers, otherwise a short floating summary.
    pub fn to_display_string(&self) -> String {
        match self {
            BoundValue::Exact(v) if v.is_integer() => v.to_integer().to_string(),
            BoundValue::Exact(v) => format!("{}/{}", v.numer(), v.denom()),
            BoundValue::Enclosure(iv) => format!(
                "~{:.6e} [{:.9e}, {:.9e}]",
                iv.midpoint_f64(),
                rational_to_f64(iv.lo()),
                rational_to_f64(iv.hi())
            ),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

/// `base^e` for a positive rational base and rational exponent; exact when
/// `e` is an integer.
pub fn pow(base: &BigRational, e: &BigRational, prec: u32) -> BoundValue {
    assert!(base.is_positive(), "power of a non-positive base");
    if e.is_integer() {
        let k = e.to_integer();
        let mag = k.abs().to_u64().expect("exponent too large") as usize;
        let v = num_traits::pow::pow(base.clone(), mag);
        return BoundValue::Exact(if k.is_negative() { v.recip() } else { v });
    }
    let y = ln(base, prec + 32).scale(e);
    BoundValue::Enclosure(exp(&y, prec))
}

/// `base^e` for an exponent known only as an interval.
pub fn pow_interval(base: &BigRational, e: &Interval, prec: u32) -> BoundValue {
    if e.is_point() {
        return pow(base, e.lo(), prec);
    }
    let y = ln(base, prec + 32).mul(e);
    BoundValue::Enclosure(exp(&y, prec))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(iv: &Interval, x: f64) -> bool {
        // f64 reference values carry their own rounding error
        let tol = x.abs() * 1e-12;
        rational_to_f64(iv.lo()) <= x + tol && rational_to_f64(iv.hi()) >= x - tol
    }

    #[test]
    fn log_constants() {
        let l2 = ln2(160);
        let l3 = ln3(160);
        assert!(contains(&l2, std::f64::consts::LN_2));
        assert!(contains(&l3, 3f64.ln()));
        assert!(l2.width_f64() < 1e-45);
        assert!(l3.width_f64() < 1e-45);
    }

    #[test]
    fn ln_matches_float() {
        for (n, d) in [(7i64, 3i64), (1, 10), (1000, 1), (123456789, 1000), (2, 3)] {
            let iv = ln(&frac(n, d), 128);
            assert!(contains(&iv, (n as f64 / d as f64).ln()), "ln {n}/{d}");
            assert!(iv.width_f64() < 1e-30);
        }
        assert!(ln(&int(1), 64).is_point());
    }

    #[test]
    fn exp_matches_float() {
        for y in [frac(1, 3), frac(-5, 2), int(10), frac(3001, 7)] {
            let iv = exp(&Interval::point(y.clone()), 128);
            let f = rational_to_f64(&y).exp();
            assert!(contains(&iv, f), "exp {y}");
            assert!(iv.width_f64() <= f * 1e-30);
            // log of the enclosure brackets y again
            let back = ln(iv.lo(), 128);
            assert!(back.lo() <= &y);
            assert!(ln(iv.hi(), 128).hi() >= &y);
        }
    }

    #[test]
    fn exp_ln_round_trip_encloses() {
        // 3^(10/3) encloses the real cube root of 59049
        let v = pow(&int(3), &frac(10, 3), 128);
        let iv = v.interval();
        let lo = iv.lo().clone();
        let hi = iv.hi().clone();
        let cube = |r: &BigRational| r * r * r;
        assert!(cube(&lo) <= int(59049));
        assert!(cube(&hi) >= int(59049));
    }

    #[test]
    fn integral_powers_are_exact() {
        assert_eq!(pow(&int(3), &int(4), 128), BoundValue::Exact(int(81)));
        assert_eq!(pow(&frac(2, 3), &int(-2), 128), BoundValue::Exact(frac(9, 4)));
    }

    #[test]
    fn sqrt_enclosure() {
        assert!(sqrt(&int(49), 64).is_point());
        let r2 = sqrt(&int(2), 100);
        assert!(r2.lo() * r2.lo() <= int(2) && r2.hi() * r2.hi() >= int(2));
    }

    #[test]
    fn comparisons() {
        let v = pow(&int(3), &frac(1, 3), 128);
        assert_eq!(v.cmp_integer(&BigUint::from(1u32)), Some(Ordering::Greater));
        assert_eq!(v.cmp_integer(&BigUint::from(2u32)), Some(Ordering::Less));
        assert_eq!(v.ceil_integer(), BigInt::from(2));
        assert_eq!(v.floor_integer(), BigInt::from(1));
    }
}
