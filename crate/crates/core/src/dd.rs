//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi)/2`, giving about 32 significant digits.
//!
//! Elementary functions are computed to close to full double-double
//! accuracy by argument reduction and Taylor series (`exp`, `sin`, `cos`) or
//! one Newton step from the `f64` value (`ln`, `atan2`, `cbrt`).

use std::cmp::Ordering;
use std::f64::consts;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

#[derive(Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const fn dd(hi: f64, lo: f64) -> DoubleDouble {
    DoubleDouble { hi, lo }
}

const DD_PI: DoubleDouble = dd(consts::PI, 1.2246467991473532e-16);
const DD_TAU: DoubleDouble = dd(consts::TAU, 2.4492935982947064e-16);
const DD_FRAC_PI_2: DoubleDouble = dd(consts::FRAC_PI_2, 6.123233995736766e-17);
const DD_FRAC_PI_4: DoubleDouble = dd(consts::FRAC_PI_4, 3.061616997868383e-17);
const DD_E: DoubleDouble = dd(consts::E, 1.4456468917292502e-16);
const DD_LN_2: DoubleDouble = dd(consts::LN_2, 2.3190468138462996e-17);
const DD_LN_10: DoubleDouble = dd(consts::LN_10, -2.1707562233822494e-16);
const DD_SQRT_2: DoubleDouble = dd(consts::SQRT_2, -9.667293313452913e-17);
const DD_FRAC_2_PI: DoubleDouble = dd(consts::FRAC_2_PI, -3.935735335036497e-17);

/// `2^-104`, the unit roundoff of the format.
const EPS: f64 = 4.930380657631324e-32;

impl DoubleDouble {
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        dd(hi, lo)
    }

    /// Builds `a + b` for arbitrary `f64`s.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        dd(hi, lo)
    }

    /// Exact conversion from `f64`.
    pub const fn of(x: f64) -> Self {
        dd(x, 0.0)
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        dd(hi, lo)
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        dd(self.hi * s, self.lo * s)
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// Taylor series of `exp(r) - 1` for small `|r|`.
    fn expm1_small(r: Self) -> Self {
        let mut term = r;
        let mut sum = r;
        for k in 2..40 {
            term = term * r / Self::of(k as f64);
            sum += term;
            if term.hi.abs() <= EPS * sum.hi.abs() {
                break;
            }
        }
        sum
    }

    /// `(sin r, cos r)` for `|r| <= π/4` by Taylor series.
    fn sin_cos_small(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut term = r;
        let mut s = r;
        for k in 1..40 {
            term = -term * r2 / Self::of(((2 * k) * (2 * k + 1)) as f64);
            s += term;
            if term.hi.abs() <= EPS * s.hi.abs().max(1e-300) {
                break;
            }
        }
        let mut term = Self::one();
        let mut c = Self::one();
        for k in 1..40 {
            term = -term * r2 / Self::of(((2 * k - 1) * (2 * k)) as f64);
            c += term;
            if term.hi.abs() <= EPS {
                break;
            }
        }
        (s, c)
    }

    fn sin_cos_impl(self) -> (Self, Self) {
        if !self.is_finite() {
            return (Self::nan(), Self::nan());
        }
        if self.is_zero() {
            return (self, Self::one());
        }
        // x = k π/2 + r
        let k = (self * DD_FRAC_2_PI).round();
        let r = self - DD_FRAC_PI_2 * k;
        let (s, c) = Self::sin_cos_small(r);
        match (k.hi.rem_euclid(4.0)) as i64 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn parse_decimal(src: &str) -> Option<Self> {
        let s = src.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" => {
                return Some(if neg {
                    Self::neg_infinity()
                } else {
                    Self::infinity()
                })
            }
            "nan" => return Some(Self::nan()),
            _ => {}
        }
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (int, frac) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        let ten = Self::of(10.0);
        let mut v = Self::zero();
        for c in int.chars().chain(frac.chars()) {
            let d = c.to_digit(10)?;
            v = v * ten + Self::of(d as f64);
        }
        let e = exp - frac.len() as i32;
        v = if e >= 0 {
            v * ten.powi(e)
        } else {
            v / ten.powi(-e)
        };
        Some(if neg { -v } else { v })
    }

    /// Decimal digits of `|self|` and the decimal exponent of the first.
    fn digits(self, count: usize) -> (Vec<u8>, i32) {
        let mut x = self.abs();
        if x.is_zero() {
            return (vec![0; count], 0);
        }
        let ten = Self::of(10.0);
        let mut e = x.hi.log10().floor() as i32;
        x = if e >= 0 {
            x / ten.powi(e)
        } else {
            x * ten.powi(-e)
        };
        if x.hi >= 10.0 {
            x = x / ten;
            e += 1;
        } else if x.hi < 1.0 {
            x = x * ten;
            e -= 1;
        }
        let mut out = Vec::with_capacity(count + 1);
        for _ in 0..=count {
            let d = x.hi.floor().clamp(0.0, 9.0);
            out.push(d as u8);
            x = (x - Self::of(d)) * ten;
        }
        // round on the extra digit
        if out[count] >= 5 {
            let mut i = count;
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    e += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }
        out.truncate(count);
        (out, e)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        dd(x, 0.0)
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> f64 {
        x.hi + x.lo
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        dd(-self.hi, -self.lo)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        if !s.is_finite() {
            return dd(s, 0.0);
        }
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        dd(hi, lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        if !p.is_finite() {
            return dd(p, 0.0);
        }
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        dd(hi, lo)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || q1 == 0.0 {
            return dd(q1, 0.0);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        dd(hi, lo) + Self::of(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        dd(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        dd(1.0, 0.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = ();
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ()> {
        if radix != 10 {
            return Err(());
        }
        Self::parse_decimal(s).ok_or(())
    }
}

impl std::str::FromStr for DoubleDouble {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Self::parse_decimal(s).ok_or(())
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i128(&self) -> Option<i128> {
        let t = self.trunc();
        t.hi.to_i128()?.checked_add(t.lo.to_i128()?)
    }
    fn to_i64(&self) -> Option<i64> {
        self.to_i128()?.try_into().ok()
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i128()?.try_into().ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
    fn to_f32(&self) -> Option<f32> {
        Some((self.hi + self.lo) as f32)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::from_sum(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::from_sum(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(dd(x, 0.0))
    }
    fn from_f32(x: f32) -> Option<Self> {
        Some(dd(x as f64, 0.0))
    }
}

impl NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(|x| dd(x, 0.0))
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        DD_E
    }
    fn FRAC_1_PI() -> Self {
        Self::one() / DD_PI
    }
    fn FRAC_1_SQRT_2() -> Self {
        DD_SQRT_2 / Self::of(2.0)
    }
    fn FRAC_2_PI() -> Self {
        DD_FRAC_2_PI
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Self::of(2.0) / DD_PI.sqrt()
    }
    fn FRAC_PI_2() -> Self {
        DD_FRAC_PI_2
    }
    fn FRAC_PI_3() -> Self {
        DD_PI / Self::of(3.0)
    }
    fn FRAC_PI_4() -> Self {
        DD_FRAC_PI_4
    }
    fn FRAC_PI_6() -> Self {
        DD_PI / Self::of(6.0)
    }
    fn FRAC_PI_8() -> Self {
        DD_FRAC_PI_4 / Self::of(2.0)
    }
    fn LN_10() -> Self {
        DD_LN_10
    }
    fn LN_2() -> Self {
        DD_LN_2
    }
    fn LOG10_E() -> Self {
        Self::one() / DD_LN_10
    }
    fn LOG2_E() -> Self {
        Self::one() / DD_LN_2
    }
    fn PI() -> Self {
        DD_PI
    }
    fn SQRT_2() -> Self {
        DD_SQRT_2
    }
    fn TAU() -> Self {
        DD_TAU
    }
    fn LOG10_2() -> Self {
        DD_LN_2 / DD_LN_10
    }
    fn LOG2_10() -> Self {
        DD_LN_10 / DD_LN_2
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        dd(f64::NAN, f64::NAN)
    }
    fn infinity() -> Self {
        dd(f64::INFINITY, 0.0)
    }
    fn neg_infinity() -> Self {
        dd(f64::NEG_INFINITY, 0.0)
    }
    fn neg_zero() -> Self {
        dd(-0.0, 0.0)
    }
    fn min_value() -> Self {
        dd(f64::MIN, 0.0)
    }
    fn min_positive_value() -> Self {
        // smallest value that still carries a full-precision low part
        dd(f64::MIN_POSITIVE * 2f64.powi(53), 0.0)
    }
    fn epsilon() -> Self {
        dd(EPS, 0.0)
    }
    fn max_value() -> Self {
        dd(f64::MAX, 0.0)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            Self::from_sum(hi, self.lo.floor())
        } else {
            dd(hi, 0.0)
        }
    }
    fn ceil(self) -> Self {
        let hi = self.hi.ceil();
        if hi == self.hi {
            Self::from_sum(hi, self.lo.ceil())
        } else {
            dd(hi, 0.0)
        }
    }
    fn round(self) -> Self {
        let r = (self + Self::of(0.5)).floor();
        if self.hi < 0.0 {
            -((-self) + Self::of(0.5)).floor()
        } else {
            r
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.hi.is_sign_negative()) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        dd(self.hi.signum(), 0.0)
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }
    fn powf(self, n: Self) -> Self {
        if n.is_zero() {
            return Self::one();
        }
        if n.fract().is_zero() && n.abs() < Self::of(2f64.powi(30)) {
            return self.powi(n.hi as i32 + n.lo as i32);
        }
        (n * self.ln()).exp()
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::zero()
            } else {
                Self::nan()
            };
        }
        if self.hi.is_infinite() {
            return self;
        }
        let q = self.hi.sqrt();
        let (p, e) = two_prod(q, q);
        let r = (self - Self::from_sum(p, e)).hi / (2.0 * q);
        Self::from_sum(q, r)
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::infinity();
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        if self.is_zero() {
            return Self::one();
        }
        // x = k ln 2 + r, then exp(r) = (exp(r / 512))^512
        let k = (self.hi / DD_LN_2.hi).round();
        let r = (self - DD_LN_2.mul_f64(k)).ldexp(-9);
        let mut e = Self::expm1_small(r);
        for _ in 0..9 {
            // (1+e)² - 1 = e(2+e)
            e = e * (e + Self::of(2.0));
        }
        (e + Self::one()).ldexp(k as i32)
    }
    fn exp2(self) -> Self {
        (self * DD_LN_2).exp()
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::neg_infinity()
            } else {
                Self::nan()
            };
        }
        if self.hi.is_infinite() {
            return self;
        }
        // y ← y + x e^{-y} - 1
        let y = Self::of(self.hi.ln());
        y + self * (-y).exp() - Self::one()
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / DD_LN_2
    }
    fn log10(self) -> Self {
        self.ln() / DD_LN_10
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Self::zero()
        }
    }
    fn cbrt(self) -> Self {
        if self.is_zero() || !self.is_finite() {
            return self;
        }
        let y = Self::of(self.hi.cbrt());
        y - (y * y * y - self) / (Self::of(3.0) * y * y)
    }
    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return Self::zero();
        }
        if big.is_infinite() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos_impl().0
    }
    fn cos(self) -> Self {
        self.sin_cos_impl().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos_impl();
        s / c
    }
    fn asin(self) -> Self {
        self.atan2((Self::one() - self * self).sqrt())
    }
    fn acos(self) -> Self {
        (Self::one() - self * self).sqrt().atan2(self)
    }
    fn atan(self) -> Self {
        self.atan2(Self::one())
    }
    fn atan2(self, other: Self) -> Self {
        let (y, x) = (self, other);
        if x.is_zero() && y.is_zero() {
            return Self::of(y.hi.atan2(x.hi));
        }
        // Newton step on the angle
        let z = Self::of(y.hi.atan2(x.hi));
        let (s, c) = z.sin_cos_impl();
        z + (y * c - x * s) / (x * c + y * s)
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn exp_m1(self) -> Self {
        if self.abs().hi < 0.5 {
            Self::expm1_small(self)
        } else {
            self.exp() - Self::one()
        }
    }
    fn ln_1p(self) -> Self {
        let y = Self::of(self.hi.ln_1p());
        // y ← y + (1+x) e^{-y} - 1
        y + (Self::one() + self) * (-y).exp() - Self::one()
    }
    fn sinh(self) -> Self {
        if self.abs().hi < 0.5 {
            let e = Self::expm1_small(self);
            // sinh x = (e + e/(1+e)) / 2 with e = exp(x) - 1
            (e + e / (e + Self::one())) / Self::of(2.0)
        } else {
            let e = self.exp();
            (e - e.recip()) / Self::of(2.0)
        }
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) / Self::of(2.0)
    }
    fn tanh(self) -> Self {
        if self.abs().hi > 40.0 {
            return self.signum();
        }
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let r = (a + (a * a + Self::one()).sqrt()).ln();
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        (self + (self * self - Self::one()).sqrt()).ln()
    }
    fn atanh(self) -> Self {
        ((Self::one() + self) / (Self::one() - self)).ln() / Self::of(2.0)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}

/// Applies the width of the formatter; `Formatter::pad` would treat the
/// precision as a maximum length.
fn pad(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    match f.width() {
        Some(w) if w > s.chars().count() => {
            let fill = w - s.chars().count();
            let (l, r) = match f.align() {
                Some(fmt::Alignment::Left) => (0, fill),
                Some(fmt::Alignment::Center) => (fill / 2, fill - fill / 2),
                _ => (fill, 0),
            };
            let c = f.fill();
            for _ in 0..l {
                write!(f, "{c}")?;
            }
            f.write_str(s)?;
            for _ in 0..r {
                write!(f, "{c}")?;
            }
            Ok(())
        }
        _ => f.write_str(s),
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return fmt::Display::fmt(&self.hi, f);
        }
        let sign = if self.hi < 0.0 { "-" } else { "" };
        match f.precision() {
            Some(p) => {
                // fixed notation with p fractional digits
                let (_, e) = self.digits(1);
                let total = (e + 1 + p as i32).max(1) as usize;
                let (d, e) = self.digits(total);
                let mut s = String::from(sign);
                let int_len = e + 1;
                if int_len <= 0 {
                    s.push('0');
                } else {
                    for i in 0..int_len as usize {
                        s.push((b'0' + d.get(i).copied().unwrap_or(0)) as char);
                    }
                }
                if p > 0 {
                    s.push('.');
                    for k in 0..p as i32 {
                        let idx = int_len + k;
                        let c = if idx < 0 {
                            0
                        } else {
                            d.get(idx as usize).copied().unwrap_or(0)
                        };
                        s.push((b'0' + c) as char);
                    }
                }
                pad(f, &s)
            }
            None => {
                let (d, e) = self.digits(32);
                let mut s = String::from(sign);
                let last = d.iter().rposition(|&c| c != 0).unwrap_or(0);
                if (-5..21).contains(&e) {
                    if e < 0 {
                        s.push_str("0.");
                        for _ in 0..(-e - 1) {
                            s.push('0');
                        }
                        d[..=last].iter().for_each(|&c| s.push((b'0' + c) as char));
                    } else {
                        for i in 0..=(e as usize).max(last) {
                            if i == e as usize + 1 {
                                s.push('.');
                            }
                            s.push((b'0' + d.get(i).copied().unwrap_or(0)) as char);
                        }
                    }
                } else {
                    s.push((b'0' + d[0]) as char);
                    if last > 0 {
                        s.push('.');
                        d[1..=last].iter().for_each(|&c| s.push((b'0' + c) as char));
                    }
                    s.push_str(&format!("e{e}"));
                }
                pad(f, &s)
            }
        }
    }
}

impl fmt::LowerExp for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return fmt::LowerExp::fmt(&self.hi, f);
        }
        let n = f.precision().map(|p| p + 1).unwrap_or(32);
        let (d, e) = self.digits(n);
        let mut s = String::from(if self.hi < 0.0 { "-" } else { "" });
        s.push((b'0' + d[0]) as char);
        let last = if f.precision().is_some() {
            n - 1
        } else {
            d.iter().rposition(|&c| c != 0).unwrap_or(0)
        };
        if last > 0 {
            s.push('.');
            d[1..=last].iter().for_each(|&c| s.push((b'0' + c) as char));
        }
        s.push_str(&format!("e{e}"));
        pad(f, &s)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for DoubleDouble {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self:e}"))
    }
}

impl<'de> serde::Deserialize<'de> for DoubleDouble {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse_decimal(&s).ok_or_else(|| serde::de::Error::custom("not a decimal number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DoubleDouble;

    fn close(a: D, b: D, tol: f64) -> bool {
        ((a - b).abs() / b.abs().max(D::one())).hi <= tol
    }

    fn parse(s: &str) -> D {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        let third = D::one() / D::of(3.0);
        assert!(close(third * D::of(3.0), D::one(), 1e-31));
        let x = D::from_sum(1.0, 1e-20);
        assert_eq!((x - D::one()).hi, 1e-20);
        assert!(close(D::of(2.0).sqrt().sqr(), D::of(2.0), 1e-31));
        assert!(close(D::of(27.0).cbrt(), D::of(3.0), 1e-31));
        assert_eq!(D::from_i64(i64::MAX).unwrap().to_i64(), Some(i64::MAX));
    }

    #[test]
    fn elementary_functions() {
        // mpmath, 35 digits
        assert!(close(D::one().exp(), DD_E, 1e-31));
        assert!(close(D::of(2.0).ln(), DD_LN_2, 1e-31));
        assert!(close(D::of(10.0).ln(), DD_LN_10, 1e-31));
        assert!(close(
            D::one().sin(),
            parse("0.84147098480789650665250232163029900"),
            1e-31
        ));
        assert!(close(
            D::of(100.0).cos(),
            parse("0.86231887228768393410193851395084254"),
            1e-30
        ));
        assert!(close(
            parse("-0.3").exp(),
            parse("0.74081822068171786606687377931782227"),
            1e-31
        ));
        assert!(close(
            D::of(0.25).sinh(),
            parse("0.25261231680816830791412515054205788"),
            1e-31
        ));
        assert!(close(D::one().atan2(D::one()), DD_FRAC_PI_4, 1e-31));
        assert!(close(
            D::of(3.0).atan2(D::of(-4.0)),
            parse("2.4980915447965088516598341545621802"),
            1e-31
        ));
        assert!(close(D::of(1e-20).ln_1p(), D::of(1e-20), 1e-30));
        assert!(close(D::of(2.0).powf(D::of(0.5)), DD_SQRT_2, 1e-31));
    }

    #[test]
    fn rounding() {
        assert_eq!(D::of(2.5).floor(), D::of(2.0));
        assert_eq!(D::of(-2.5).floor(), D::of(-3.0));
        assert_eq!(D::of(2.5).round(), D::of(3.0));
        assert_eq!(D::of(-2.5).round(), D::of(-3.0));
        assert_eq!(D::from_sum(4.0, -1e-20).floor(), D::of(3.0));
        assert_eq!(D::from_sum(4.0, 1e-20).ceil(), D::of(5.0));
    }

    #[test]
    fn formatting() {
        assert_eq!(format!("{}", D::of(1.5)), "1.5");
        assert_eq!(format!("{:.3}", D::of(2.0).sqrt()), "1.414");
        assert_eq!(format!("{:e}", D::of(1234.0)), "1.234e3");
        assert_eq!(format!("{:.20}", DD_PI), "3.14159265358979323846");
        assert_eq!(parse("-1.25e-3"), -D::of(1.25) / D::of(1000.0));
    }
}
