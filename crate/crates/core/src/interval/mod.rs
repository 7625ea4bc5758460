//! Validated interval arithmetic over extended-range endpoints.
//!
//! Every [`Bound`] encloses the exact real result of the expression that
//! produced it. Endpoints are binary floats at the working precision
//! (see [`set_precision`]) until their magnitude passes the log cutoff,
//! after which they are stored as `±exp(l)`.

mod context;
mod ext;

pub use context::{log_cutoff, precision, set_log_cutoff, set_precision, DEFAULT_PRECISION, PRECISION_ENV};
pub use ext::{Dir, Ext};

use astro_float::{BigFloat, Word};
use ext::fl;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntervalError {
    #[error("zero denominator in rational {numerator}/0")]
    ZeroDenominator { numerator: i64 },
    #[error("{op}: argument {interval} is outside the domain")]
    Domain { op: &'static str, interval: String },
    #[error("{op}: magnitude leaves the representable range")]
    Overflow { op: &'static str },
    #[error("cannot parse {0:?} as a decimal number")]
    Parse(String),
    #[error("lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: String, hi: String },
}

type Result<T> = std::result::Result<T, IntervalError>;

/// A closed interval `[lo, hi]` of reals.
#[derive(Clone, Debug)]
pub struct Bound {
    lo: Ext,
    hi: Ext,
}

fn domain(op: &'static str, b: &Bound) -> IntervalError {
    IntervalError::Domain { op, interval: b.to_string() }
}

impl Bound {
    /// Builds `[lo, hi]`, rejecting inverted or unordered endpoints.
    pub fn new(lo: Ext, hi: Ext) -> Result<Bound> {
        if lo.le(&hi) {
            Ok(Bound { lo, hi })
        } else {
            Err(IntervalError::Inverted { lo: lo.to_decimal(20, Dir::Down), hi: hi.to_decimal(20, Dir::Up) })
        }
    }

    pub fn point(x: Ext) -> Bound {
        Bound { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Bound {
        Bound::point(Ext::from_i64(n))
    }

    pub fn from_f64(x: f64) -> Bound {
        Bound::point(Ext::from_f64(x))
    }

    pub fn zero() -> Bound {
        Bound::from_int(0)
    }

    pub fn one() -> Bound {
        Bound::from_int(1)
    }

    /// Tightest enclosure of `p/q`; degenerate when `p/q` is representable.
    pub fn from_rational(p: i64, q: i64) -> Result<Bound> {
        if q == 0 {
            return Err(IntervalError::ZeroDenominator { numerator: p });
        }
        let (p, q) = if q < 0 { (-(p as i128), -(q as i128)) } else { (p as i128, q as i128) };
        let num = BigFloat::from_i128(p, 128);
        let den = BigFloat::from_i128(q, 128);
        Ok(Bound { lo: Ext::Lin(fl::div(&num, &den, Dir::Down)), hi: Ext::Lin(fl::div(&num, &den, Dir::Up)) })
    }

    /// Exact enclosure of a decimal literal such as `1.39`, `-0.001` or `2.5e-3`.
    pub fn from_decimal_str(s: &str) -> Result<Bound> {
        let bad = || IntervalError::Parse(s.to_string());
        let t = s.trim();
        let (mant, exp10) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if exp10.unsigned_abs() > 4000 || int_part.len() + frac_part.len() > 4000 {
            return Err(bad());
        }
        let ten = BigFloat::from_word(10, 64);
        let mut num = BigFloat::from_word(0, 64);
        for c in int_part.chars().chain(frac_part.chars()) {
            let d = BigFloat::from_word(c as Word - '0' as Word, 64);
            num = fl::exact_add(&fl::exact_mul(&num, &ten), &d);
        }
        if neg {
            num = num.neg();
        }
        let shift = exp10 - frac_part.len() as i32;
        let mut pow = BigFloat::from_word(1, 64);
        for _ in 0..shift.unsigned_abs() {
            pow = pow.mul_full_prec(&ten);
        }
        if shift >= 0 {
            let v = fl::exact_mul(&num, &pow);
            Ok(Bound { lo: Ext::Lin(fl::round(&v, Dir::Down)), hi: Ext::Lin(fl::round(&v, Dir::Up)) })
        } else {
            Ok(Bound { lo: Ext::Lin(fl::div(&num, &pow, Dir::Down)), hi: Ext::Lin(fl::div(&num, &pow, Dir::Up)) })
        }
    }

    pub fn pi() -> Bound {
        Bound { lo: Ext::Lin(fl::pi(Dir::Down)), hi: Ext::Lin(fl::pi(Dir::Up)) }
    }

    pub fn ln10() -> Bound {
        let ten = fl::int(10);
        Bound { lo: Ext::Lin(fl::ln(&ten, Dir::Down)), hi: Ext::Lin(fl::ln(&ten, Dir::Up)) }
    }

    pub fn lo(&self) -> &Ext {
        &self.lo
    }

    pub fn hi(&self) -> &Ext {
        &self.hi
    }

    pub fn endpoint(&self, dir: Dir) -> &Ext {
        match dir {
            Dir::Down => &self.lo,
            Dir::Up => &self.hi,
        }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64(Dir::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64(Dir::Up)
    }

    /// Midpoint image in f64, for display and heuristics.
    pub fn approx_f64(&self) -> f64 {
        let (a, b) = (self.lo_f64(), self.hi_f64());
        if a.is_finite() && b.is_finite() {
            a / 2.0 + b / 2.0
        } else if a.is_finite() {
            b
        } else {
            a
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self.lo.compare(&self.hi), Some(Ordering::Equal))
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo.signum() >= 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Ext) -> bool {
        self.lo.le(x) && x.le(&self.hi)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Bound) -> bool {
        other.lo.le(&self.lo) && self.hi.le(&other.hi)
    }

    /// Every point of `self` is ≤ every point of `other`.
    pub fn certainly_le(&self, other: &Bound) -> bool {
        self.hi.le(&other.lo)
    }

    pub fn certainly_lt(&self, other: &Bound) -> bool {
        self.hi.lt(&other.lo)
    }

    pub fn neg(&self) -> Bound {
        Bound { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &Bound) -> Result<Bound> {
        Ok(Bound { lo: self.lo.add(&o.lo, Dir::Down)?, hi: self.hi.add(&o.hi, Dir::Up)? })
    }

    pub fn sub(&self, o: &Bound) -> Result<Bound> {
        Ok(Bound { lo: self.lo.sub(&o.hi, Dir::Down)?, hi: self.hi.sub(&o.lo, Dir::Up)? })
    }

    pub fn mul(&self, o: &Bound) -> Result<Bound> {
        let (a, b) = (self, o);
        let sa = (a.lo.signum() >= 0, a.hi.signum() <= 0);
        let sb = (b.lo.signum() >= 0, b.hi.signum() <= 0);
        let m = |x: &Ext, y: &Ext, d: Dir| x.mul(y, d);
        let (lo, hi) = match (sa, sb) {
            // a ≥ 0
            ((true, _), (true, _)) => (m(&a.lo, &b.lo, Dir::Down)?, m(&a.hi, &b.hi, Dir::Up)?),
            ((true, _), (_, true)) => (m(&a.hi, &b.lo, Dir::Down)?, m(&a.lo, &b.hi, Dir::Up)?),
            ((true, _), _) => (m(&a.hi, &b.lo, Dir::Down)?, m(&a.hi, &b.hi, Dir::Up)?),
            // a ≤ 0
            ((_, true), (true, _)) => (m(&a.lo, &b.hi, Dir::Down)?, m(&a.hi, &b.lo, Dir::Up)?),
            ((_, true), (_, true)) => (m(&a.hi, &b.hi, Dir::Down)?, m(&a.lo, &b.lo, Dir::Up)?),
            ((_, true), _) => (m(&a.lo, &b.hi, Dir::Down)?, m(&a.lo, &b.lo, Dir::Up)?),
            // a straddles 0
            (_, (true, _)) => (m(&a.lo, &b.hi, Dir::Down)?, m(&a.hi, &b.hi, Dir::Up)?),
            (_, (_, true)) => (m(&a.hi, &b.lo, Dir::Down)?, m(&a.lo, &b.lo, Dir::Up)?),
            _ => {
                let lo = m(&a.lo, &b.hi, Dir::Down)?.min_dir(&m(&a.hi, &b.lo, Dir::Down)?, Dir::Down);
                let hi = m(&a.lo, &b.lo, Dir::Up)?.max_dir(&m(&a.hi, &b.hi, Dir::Up)?, Dir::Up);
                (lo, hi)
            }
        };
        Ok(Bound { lo, hi })
    }

    pub fn div(&self, o: &Bound) -> Result<Bound> {
        if o.contains_zero() {
            return Err(domain("div", o));
        }
        if o.hi.signum() < 0 {
            return self.neg().div(&o.neg());
        }
        let a = self;
        let d = |x: &Ext, y: &Ext, dir: Dir| x.div(y, dir);
        let (lo, hi) = if a.lo.signum() >= 0 {
            (d(&a.lo, &o.hi, Dir::Down)?, d(&a.hi, &o.lo, Dir::Up)?)
        } else if a.hi.signum() <= 0 {
            (d(&a.lo, &o.lo, Dir::Down)?, d(&a.hi, &o.hi, Dir::Up)?)
        } else {
            (d(&a.lo, &o.lo, Dir::Down)?, d(&a.hi, &o.lo, Dir::Up)?)
        };
        Ok(Bound { lo, hi })
    }

    pub fn recip(&self) -> Result<Bound> {
        Bound::one().div(self)
    }

    pub fn exp(&self) -> Result<Bound> {
        Ok(Bound { lo: self.lo.exp(Dir::Down)?, hi: self.hi.exp(Dir::Up)? })
    }

    /// Natural logarithm; requires a strictly positive interval.
    pub fn ln(&self) -> Result<Bound> {
        if !self.is_positive() {
            return Err(domain("log", self));
        }
        Ok(Bound { lo: self.lo.ln(Dir::Down)?, hi: self.hi.ln(Dir::Up)? })
    }

    pub fn sqrt(&self) -> Result<Bound> {
        if !self.is_nonnegative() {
            return Err(domain("sqrt", self));
        }
        Ok(Bound { lo: self.lo.sqrt(Dir::Down)?, hi: self.hi.sqrt(Dir::Up)? })
    }

    pub fn cosh(&self) -> Result<Bound> {
        let c = |x: &Ext, dir: Dir| -> Result<Ext> {
            let s = x.exp(dir)?.add(&x.neg().exp(dir)?, dir)?;
            Ok(s.half_dir(dir))
        };
        if self.lo.signum() >= 0 {
            Ok(Bound { lo: c(&self.lo, Dir::Down)?, hi: c(&self.hi, Dir::Up)? })
        } else if self.hi.signum() <= 0 {
            Ok(Bound { lo: c(&self.hi, Dir::Down)?, hi: c(&self.lo, Dir::Up)? })
        } else {
            let hi = c(&self.lo, Dir::Up)?.max_dir(&c(&self.hi, Dir::Up)?, Dir::Up);
            Ok(Bound { lo: Ext::one(), hi })
        }
    }

    pub fn sinh(&self) -> Result<Bound> {
        let s = |x: &Ext, dir: Dir| -> Result<Ext> {
            let d = x.exp(dir)?.sub(&x.neg().exp(dir.flip())?, dir)?;
            Ok(d.half_dir(dir))
        };
        Ok(Bound { lo: s(&self.lo, Dir::Down)?, hi: s(&self.hi, Dir::Up)? })
    }

    pub fn abs(&self) -> Bound {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Bound { lo: Ext::zero(), hi: self.lo.neg().max_dir(&self.hi, Dir::Up) }
        }
    }

    pub fn min(&self, o: &Bound) -> Bound {
        Bound { lo: self.lo.min_dir(&o.lo, Dir::Down), hi: self.hi.min_dir(&o.hi, Dir::Up) }
    }

    pub fn max(&self, o: &Bound) -> Bound {
        Bound { lo: self.lo.max_dir(&o.lo, Dir::Down), hi: self.hi.max_dir(&o.hi, Dir::Up) }
    }

    /// Integer power.
    pub fn powi(&self, n: i64) -> Result<Bound> {
        if n == 0 {
            return Ok(Bound::one());
        }
        if n < 0 {
            if self.contains_zero() {
                return Err(domain("pow", self));
            }
            return self.powi(-n)?.recip();
        }
        let k = n as u64;
        let a = self.abs();
        let mag_lo = a.lo.powi_abs(k, Dir::Down)?;
        let mag_hi = a.hi.powi_abs(k, Dir::Up)?;
        if k % 2 == 0 {
            return Ok(Bound { lo: mag_lo, hi: mag_hi });
        }
        // odd powers are monotone
        let signed = |x: &Ext, dir: Dir| -> Result<Ext> {
            if x.signum() < 0 {
                Ok(x.powi_abs(k, dir.flip())?.neg())
            } else {
                x.powi_abs(k, dir)
            }
        };
        Ok(Bound { lo: signed(&self.lo, Dir::Down)?, hi: signed(&self.hi, Dir::Up)? })
    }

    /// `self^(p/q)`. Non-integer exponents require a nonnegative base.
    pub fn pow_rational(&self, p: i64, q: i64) -> Result<Bound> {
        if q == 0 {
            return Err(IntervalError::ZeroDenominator { numerator: p });
        }
        let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
        let g = gcd(p.unsigned_abs(), q as u64) as i64;
        if g > 1 {
            p /= g;
            q /= g;
        }
        if q == 1 {
            return self.powi(p);
        }
        if !self.is_nonnegative() {
            return Err(domain("pow_rational", self));
        }
        if q == 2 {
            return self.sqrt()?.powi(p);
        }
        if self.lo.is_zero() {
            if p < 0 {
                return Err(domain("pow_rational", self));
            }
            if self.hi.is_zero() {
                return Ok(Bound::zero());
            }
            let top = Bound::point(self.hi.clone()).pow_rational(p, q)?;
            return Ok(Bound { lo: Ext::zero(), hi: top.hi });
        }
        let r = Bound::from_rational(p, q)?;
        r.mul(&self.ln()?)?.exp()
    }

    /// Enclosure of `log10(self)` as (lower, upper); exact for powers of ten.
    pub fn log10_report(&self) -> Result<(Ext, Ext)> {
        if !self.is_positive() {
            return Err(domain("log10_report", self));
        }
        let ln10 = Bound::ln10();
        let one_side = |x: &Ext, dir: Dir| -> Result<Ext> {
            if let Some(k) = x.exact_log10() {
                return Ok(Ext::from_i64(k));
            }
            let l = Bound::point(x.clone()).ln()?.div(&ln10)?;
            Ok(l.endpoint(dir).clone())
        };
        Ok((one_side(&self.lo, Dir::Down)?, one_side(&self.hi, Dir::Up)?))
    }

    /// `log10` enclosure as a Bound.
    pub fn log10(&self) -> Result<Bound> {
        let (lo, hi) = self.log10_report()?;
        Bound::new(lo, hi)
    }

    /// `(hi - lo) / |midpoint|` in f64; infinite for intervals the f64 range cannot express.
    pub fn rel_width(&self) -> f64 {
        let w = match self.hi.sub(&self.lo, Dir::Up) {
            Ok(w) => w,
            Err(_) => return f64::INFINITY,
        };
        let mag = self.lo.abs().max_dir(&self.hi.abs(), Dir::Down);
        if mag.is_zero() {
            return if w.is_zero() { 0.0 } else { f64::INFINITY };
        }
        match w.div(&mag, Dir::Up) {
            Ok(r) => r.to_f64(Dir::Up),
            Err(_) => f64::INFINITY,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(f, "[{}, {}]", self.lo.to_decimal(d, Dir::Down), self.hi.to_decimal(d, Dir::Up))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Bound {
        Bound::from_rational(p, q).unwrap()
    }

    #[test]
    fn rationals() {
        let h = r(1, 2);
        assert!(h.is_point());
        assert_eq!(h.lo_f64(), 0.5);
        assert!(r(94, 100).rel_width() <= 1e-30);
        let t = r(1, 3);
        assert!(!t.is_point());
        assert!(t.lo_f64() <= 1.0 / 3.0 && 1.0 / 3.0 <= t.hi_f64());
        assert!(matches!(Bound::from_rational(1, 0), Err(IntervalError::ZeroDenominator { .. })));
        assert!(r(3, -4).certainly_lt(&Bound::zero()));
    }

    #[test]
    fn decimals_match_rationals() {
        let a = Bound::from_decimal_str("1.39").unwrap();
        let b = r(139, 100);
        assert!(a.is_subset(&b) && b.is_subset(&a));
        let c = Bound::from_decimal_str("2.5e-3").unwrap();
        assert!(c.is_subset(&r(1, 400)) && r(1, 400).is_subset(&c));
        assert!(Bound::from_decimal_str("1.2.3").is_err());
        assert!(Bound::from_decimal_str("").is_err());
        assert!(Bound::from_decimal_str("-7").unwrap().certainly_lt(&Bound::zero()));
    }

    #[test]
    fn exp_and_cosh_at_zero() {
        let e = Bound::zero().exp().unwrap();
        assert!(e.contains(&Ext::one()));
        assert!(e.rel_width() <= 1e-30);
        assert!(Bound::zero().cosh().unwrap().contains(&Ext::one()));
    }

    #[test]
    fn exp_of_huge_argument_stays_in_log_form() {
        let x = Bound::from_decimal_str("1e69").unwrap();
        let y = x.exp().unwrap();
        assert!(y.lo().is_log());
        let back = y.ln().unwrap();
        assert!(back.contains(x.lo()));
    }

    #[test]
    fn domain_errors_name_the_operation() {
        let e = Bound::from_int(-1).ln().unwrap_err();
        assert!(matches!(e, IntervalError::Domain { op: "log", .. }));
        assert!(e.to_string().contains("log"));
        let s = r(-1, 2).sqrt().unwrap_err();
        assert!(matches!(s, IntervalError::Domain { op: "sqrt", .. }));
        let straddle = Bound::new(Ext::from_i64(-1), Ext::from_i64(1)).unwrap();
        assert!(matches!(Bound::one().div(&straddle), Err(IntervalError::Domain { op: "div", .. })));
        assert!(matches!(r(-1, 2).pow_rational(1, 3), Err(IntervalError::Domain { op: "pow_rational", .. })));
    }

    #[test]
    fn log10_reports() {
        let (lo, hi) = Bound::from_int(100).log10_report().unwrap();
        assert_eq!((lo.to_f64(Dir::Down), hi.to_f64(Dir::Up)), (2.0, 2.0));
        let b = Bound::new(Ext::from_i64(1000), Ext::from_i64(10000)).unwrap();
        let (lo, hi) = b.log10_report().unwrap();
        assert_eq!((lo.to_f64(Dir::Down), hi.to_f64(Dir::Up)), (3.0, 4.0));
        let big = Bound::from_int(100_000).exp().unwrap();
        let (lo, hi) = big.log10_report().unwrap();
        // 10^5 / ln 10 = 43429.448190325182765112891891660508229439...
        let lo_ref = Bound::from_decimal_str("43429.44819032518276511289189166050822943").unwrap();
        let hi_ref = Bound::from_decimal_str("43429.44819032518276511289189166050822944").unwrap();
        assert!(lo.le(lo_ref.lo()) && hi_ref.hi().le(&hi));
        assert!(Bound::new(lo, hi).unwrap().rel_width() < 1e-30);
        assert!(Bound::zero().log10_report().is_err());
    }

    #[test]
    fn identities_contain_their_values() {
        let x = r(7, 3).exp().unwrap();
        assert!(x.sub(&x).unwrap().contains(&Ext::zero()));
        assert!(x.div(&x).unwrap().contains(&Ext::one()));
    }

    #[test]
    fn powers() {
        let two = Bound::from_int(2);
        let c = two.powi(3).unwrap();
        assert!(c.is_point() && c.lo_f64() == 8.0);
        let m = Bound::new(Ext::from_i64(-2), Ext::from_i64(3)).unwrap();
        let sq = m.powi(2).unwrap();
        assert_eq!((sq.lo_f64(), sq.hi_f64()), (0.0, 9.0));
        let cube = m.powi(3).unwrap();
        assert_eq!((cube.lo_f64(), cube.hi_f64()), (-8.0, 27.0));
        let s = Bound::from_int(4).pow_rational(1, 2).unwrap();
        assert!(s.is_point() && s.lo_f64() == 2.0);
        let t = Bound::from_int(8).pow_rational(2, 3).unwrap();
        assert!(t.contains(&Ext::from_i64(4)));
        let z = Bound::new(Ext::zero(), Ext::from_i64(8)).unwrap().pow_rational(1, 3).unwrap();
        assert!(z.lo().is_zero() && z.contains(&Ext::from_i64(2)));
        assert!(Bound::from_int(-2).powi(-1).unwrap().contains(&Ext::from_f64(-0.5)));
    }

    #[test]
    fn mul_sign_cases() {
        let iv = |a: i64, b: i64| Bound::new(Ext::from_i64(a), Ext::from_i64(b)).unwrap();
        let cases = [(-3, -1), (-2, 4), (1, 5), (0, 0), (-1, 0)];
        for &(a, b) in &cases {
            for &(c, d) in &cases {
                let p = iv(a, b).mul(&iv(c, d)).unwrap();
                let prods = [a * c, a * d, b * c, b * d];
                let lo = *prods.iter().min().unwrap() as f64;
                let hi = *prods.iter().max().unwrap() as f64;
                assert_eq!((p.lo_f64(), p.hi_f64()), (lo, hi), "[{a},{b}]·[{c},{d}]");
            }
        }
    }

    #[test]
    fn min_max_and_abs() {
        let a = r(1, 3);
        let b = r(1, 2);
        assert!(a.min(&b).is_subset(&a));
        assert!(a.max(&b).is_subset(&b));
        let s = Bound::new(Ext::from_i64(-5), Ext::from_i64(2)).unwrap().abs();
        assert_eq!((s.lo_f64(), s.hi_f64()), (0.0, 5.0));
    }

    #[test]
    fn sinh_is_odd_and_cosh_is_even() {
        let x = r(3, 2);
        let s = x.sinh().unwrap();
        let sn = x.neg().sinh().unwrap();
        assert!(s.neg().is_subset(&sn) && sn.is_subset(&s.neg()));
        let c = x.cosh().unwrap();
        let cn = x.neg().cosh().unwrap();
        assert!(c.is_subset(&cn) && cn.is_subset(&c));
        assert!(c.lo_f64() <= 1.5f64.cosh() && 1.5f64.cosh() <= c.hi_f64());
    }

    #[test]
    fn log_domain_arithmetic_round_trips() {
        let big = Bound::from_int(5000).exp().unwrap();
        let twice = big.mul(&Bound::from_int(2)).unwrap();
        let back = twice.div(&big).unwrap();
        assert!(back.contains(&Ext::from_i64(2)));
        assert!(back.rel_width() < 1e-30);
        let sum = big.add(&Bound::from_int(6)).unwrap();
        assert!(big.certainly_le(&sum) || big.lo().le(sum.hi()));
        let diff = big.sub(&big).unwrap();
        assert!(diff.contains(&Ext::zero()));
    }
}
