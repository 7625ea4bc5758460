//! Extended-range endpoints.
//!
//! An [`Ext`] is an exact real number: either an ordinary binary float, or
//! `±exp(l)` for a binary float `l`. Every operation takes a rounding
//! direction and returns an endpoint on the requested side of the true result.

use super::context::{self, with_consts, GUARD_BITS};
use super::IntervalError;
use astro_float::{BigFloat, Exponent, RoundingMode, Sign, Word};
use std::cmp::Ordering;

const RN: RoundingMode = RoundingMode::ToEven;

/// Exponent of a correction term that is treated as negligible, as a power of two.
const NEGLIGIBLE_EXP: Exponent = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Directed primitives on plain binary floats at the working precision.
pub(crate) mod fl {
    use super::*;

    pub type F = BigFloat;

    pub fn prec() -> usize {
        context::precision()
    }

    pub fn zero() -> F {
        BigFloat::from_word(0, prec())
    }

    pub fn int(n: i64) -> F {
        BigFloat::from_i64(n, prec().max(64))
    }

    pub fn one() -> F {
        int(1)
    }

    /// `2^k`.
    pub fn pow2(k: Exponent) -> F {
        let mut x = BigFloat::from_word(1, prec());
        x.set_exponent(k + 1);
        x
    }

    pub fn cmp(a: &F, b: &F) -> Ordering {
        match a.cmp(b) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            Some(_) => Ordering::Greater,
            None => panic!("comparison with NaN"),
        }
    }

    pub fn exp_of(x: &F) -> Exponent {
        x.exponent().unwrap_or(0)
    }

    fn is_pow2(x: &F) -> bool {
        match x.as_raw_parts() {
            Some((m, _, _, _, _)) => {
                let (top, rest) = m.split_last().expect("nonempty mantissa");
                *top == 1 << (Word::BITS - 1) && rest.iter().all(|&w| w == 0)
            }
            None => false,
        }
    }

    pub fn clean(mut x: F) -> F {
        x.set_inexact(false);
        x
    }

    /// Neighbouring float at the precision of `x`.
    pub fn next(x: &F, dir: Dir) -> F {
        if x.is_zero() {
            let t = BigFloat::min_positive(prec());
            return match dir {
                Dir::Up => t,
                Dir::Down => t.neg(),
            };
        }
        let bits = x.mantissa_max_bit_len().unwrap_or(prec());
        let e = exp_of(x);
        let away = (dir == Dir::Up) == x.is_positive();
        let step_e = if !away && is_pow2(x) { e - 1 } else { e };
        let mut u = BigFloat::from_word(1, bits);
        u.set_exponent(step_e - bits as Exponent + 1);
        let r = match dir {
            Dir::Up => x.add(&u, bits, RN),
            Dir::Down => x.sub(&u, bits, RN),
        };
        clean(r)
    }

    /// Rounds an exact value to the working precision in the given direction.
    pub fn round(exact: &F, dir: Dir) -> F {
        let mut r = exact.clone();
        if r.mantissa_max_bit_len().unwrap_or(0) > prec() {
            r.set_precision(prec(), RN).expect("precision change");
        }
        let r = clean(r);
        match (dir, cmp(&r, exact)) {
            (Dir::Down, Ordering::Greater) => next(&r, Dir::Down),
            (Dir::Up, Ordering::Less) => next(&r, Dir::Up),
            _ => r,
        }
    }

    pub fn add(a: &F, b: &F, dir: Dir) -> F {
        if a.is_zero() {
            return round(b, dir);
        }
        if b.is_zero() {
            return round(a, dir);
        }
        let p = prec() as Exponent;
        let (big, small) = if exp_of(a) >= exp_of(b) { (a, b) } else { (b, a) };
        if exp_of(big) - exp_of(small) > p + 2 && big.mantissa_max_bit_len().unwrap_or(0) <= prec() {
            let big = clean(big.clone());
            return match (dir, small.is_positive()) {
                (Dir::Up, true) => next(&big, Dir::Up),
                (Dir::Down, false) => next(&big, Dir::Down),
                _ => big,
            };
        }
        round(&a.add_full_prec(b), dir)
    }

    pub fn sub(a: &F, b: &F, dir: Dir) -> F {
        add(a, &b.neg(), dir)
    }

    /// Exact sum. astro's full-precision add mishandles a zero operand.
    pub fn exact_add(a: &F, b: &F) -> F {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        a.add_full_prec(b)
    }

    pub fn exact_mul(a: &F, b: &F) -> F {
        if a.is_zero() || b.is_zero() {
            return BigFloat::from_word(0, 64);
        }
        a.mul_full_prec(b)
    }

    pub fn mul(a: &F, b: &F, dir: Dir) -> F {
        if a.is_zero() || b.is_zero() {
            return zero();
        }
        round(&a.mul_full_prec(b), dir)
    }

    pub fn div(a: &F, b: &F, dir: Dir) -> F {
        assert!(!b.is_zero(), "division by zero float");
        if a.is_zero() {
            return zero();
        }
        let q = clean(a.div(b, prec(), RN));
        let back = q.mul_full_prec(b);
        // q > a/b exactly when q·b and a compare in the direction of b's sign
        let c = cmp(&back, a);
        let q_above = if b.is_positive() { c == Ordering::Greater } else { c == Ordering::Less };
        let q_below = if b.is_positive() { c == Ordering::Less } else { c == Ordering::Greater };
        match dir {
            Dir::Down if q_above => next(&q, Dir::Down),
            Dir::Up if q_below => next(&q, Dir::Up),
            _ => q,
        }
    }

    pub fn sqrt(x: &F, dir: Dir) -> F {
        if x.is_zero() {
            return zero();
        }
        let r = clean(x.sqrt(prec(), RN));
        match (dir, cmp(&r.mul_full_prec(&r), x)) {
            (Dir::Down, Ordering::Greater) => next(&r, Dir::Down),
            (Dir::Up, Ordering::Less) => next(&r, Dir::Up),
            _ => r,
        }
    }

    /// Rounds a guard-precision approximation outward by one ulp of the working precision.
    fn settle(approx: F, dir: Dir) -> F {
        let mut r = approx;
        r.set_precision(prec(), RN).expect("precision change");
        next(&clean(r), dir)
    }

    /// Returns `None` when the result leaves the float exponent range.
    pub fn exp(x: &F, dir: Dir) -> Option<F> {
        if x.is_zero() {
            return Some(one());
        }
        let y = with_consts(|cc| x.exp(prec() + GUARD_BITS, RN, cc));
        if y.is_inf() || y.is_nan() {
            return None;
        }
        if y.is_zero() {
            return Some(match dir {
                Dir::Down => zero(),
                Dir::Up => BigFloat::min_positive(prec()),
            });
        }
        Some(settle(y, dir))
    }

    pub fn ln(x: &F, dir: Dir) -> F {
        assert!(x.is_positive() && !x.is_zero(), "ln of nonpositive float");
        if cmp(x, &one()) == Ordering::Equal {
            return zero();
        }
        let y = with_consts(|cc| x.ln(prec() + GUARD_BITS, RN, cc));
        settle(y, dir)
    }

    pub fn pi(dir: Dir) -> F {
        let y = with_consts(|cc| cc.pi(prec() + GUARD_BITS, RN));
        settle(y, dir)
    }

    pub fn half(x: &F) -> F {
        if x.is_zero() {
            return x.clone();
        }
        let mut h = x.clone();
        h.set_exponent(exp_of(x) - 1);
        h
    }

    /// Nearest f64, for heuristics and display only.
    pub fn approx_f64(x: &F) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let (m, _, s, e, _) = x.as_raw_parts().expect("finite float");
        let top = *m.last().expect("nonempty mantissa") as f64;
        let shift = e as i64 - Word::BITS as i64;
        let v = if shift > 1100 {
            f64::INFINITY
        } else if shift < -1200 {
            0.0
        } else if shift < -1000 {
            top * 2f64.powi(-1000) * 2f64.powi((shift + 1000) as i32)
        } else {
            top * 2f64.powi(shift as i32)
        };
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Exact conversion of an integer-valued float, when it fits.
    pub fn to_i128(x: &F) -> Option<i128> {
        if x.is_zero() {
            return Some(0);
        }
        let (m, _, s, e, _) = x.as_raw_parts()?;
        if e <= 0 || e > 126 {
            return None;
        }
        let mut acc: u128 = 0;
        let mut bits_taken = 0i64;
        for w in m.iter().rev() {
            for k in (0..Word::BITS).rev() {
                let bit = (w >> k) & 1;
                if bits_taken < e as i64 {
                    acc = (acc << 1) | bit as u128;
                } else if bit != 0 {
                    return None;
                }
                bits_taken += 1;
            }
        }
        if bits_taken < e as i64 {
            acc <<= e as i64 - bits_taken;
        }
        let v = acc as i128;
        Some(if s == Sign::Neg { -v } else { v })
    }

    /// Directed conversion to f64.
    pub fn to_f64(x: &F, dir: Dir) -> f64 {
        let e = exp_of(x);
        if x.is_zero() {
            return 0.0;
        }
        if e > 1025 {
            return match (dir, x.is_positive()) {
                (Dir::Up, true) => f64::INFINITY,
                (Dir::Down, true) => f64::MAX,
                (Dir::Up, false) => -f64::MAX,
                (Dir::Down, false) => f64::NEG_INFINITY,
            };
        }
        if e < -1000 {
            let t = 2f64.powi(-1000);
            return match (dir, x.is_positive()) {
                (Dir::Up, true) => t,
                (Dir::Down, true) => 0.0,
                (Dir::Up, false) => 0.0,
                (Dir::Down, false) => -t,
            };
        }
        let mut c = approx_f64(x);
        loop {
            let cb = BigFloat::from_f64(c, 64);
            match (dir, cmp(&cb, x)) {
                (Dir::Down, Ordering::Greater) => c = c.next_down(),
                (Dir::Up, Ordering::Less) => c = c.next_up(),
                _ => return c,
            }
        }
    }
}

use fl::F;

/// An exact extended real: a binary float or `±exp(ln)`.
#[derive(Clone, Debug)]
pub enum Ext {
    Lin(BigFloat),
    Log { neg: bool, ln: BigFloat },
}

fn overflow(op: &'static str) -> IntervalError {
    IntervalError::Overflow { op }
}

impl Ext {
    pub fn zero() -> Ext {
        Ext::Lin(fl::zero())
    }

    pub fn one() -> Ext {
        Ext::Lin(fl::one())
    }

    pub fn from_i64(n: i64) -> Ext {
        Ext::Lin(fl::int(n))
    }

    /// Exact conversion from a finite f64.
    pub fn from_f64(x: f64) -> Ext {
        assert!(x.is_finite(), "non-finite f64");
        Ext::Lin(BigFloat::from_f64(x, fl::prec().max(64)))
    }

    /// `exp(ln)`, kept in log form.
    pub fn exp_of(ln: BigFloat) -> Ext {
        Ext::Log { neg: false, ln }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Lin(x) if x.is_zero())
    }

    pub fn signum(&self) -> i32 {
        match self {
            Ext::Lin(x) if x.is_zero() => 0,
            Ext::Lin(x) => {
                if x.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Ext::Log { neg, .. } => {
                if *neg {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_log(&self) -> bool {
        matches!(self, Ext::Log { .. })
    }

    pub fn neg(&self) -> Ext {
        match self {
            Ext::Lin(x) if x.is_zero() => self.clone(),
            Ext::Lin(x) => Ext::Lin(x.neg()),
            Ext::Log { neg, ln } => Ext::Log { neg: !neg, ln: ln.clone() },
        }
    }

    pub fn abs(&self) -> Ext {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Direction in which the magnitude must move for the value to move in `dir`.
    fn mag_dir(&self, dir: Dir) -> Dir {
        if self.signum() < 0 {
            dir.flip()
        } else {
            dir
        }
    }

    /// Bound on `ln|self|` in direction `md`. Requires a nonzero value.
    pub fn ln_abs(&self, md: Dir) -> F {
        match self {
            Ext::Lin(x) => fl::ln(&x.abs(), md),
            Ext::Log { ln, .. } => ln.clone(),
        }
    }

    /// The value as a plain float, rounded in `dir`; `None` past the float range.
    pub fn to_float(&self, dir: Dir) -> Option<F> {
        match self {
            Ext::Lin(x) => Some(x.clone()),
            Ext::Log { neg, ln } => {
                let md = if *neg { dir.flip() } else { dir };
                let m = fl::exp(ln, md)?;
                Some(if *neg { m.neg() } else { m })
            }
        }
    }

    pub fn to_f64(&self, dir: Dir) -> f64 {
        match self.to_float(dir) {
            Some(x) => fl::to_f64(&x, dir),
            None => {
                // beyond the float exponent range: ±huge or ±tiny
                let (neg, ln) = match self {
                    Ext::Log { neg, ln } => (*neg, ln),
                    Ext::Lin(_) => unreachable!(),
                };
                let huge = ln.is_positive();
                match (neg, huge, dir) {
                    (false, true, Dir::Up) => f64::INFINITY,
                    (false, true, Dir::Down) => f64::MAX,
                    (true, true, Dir::Up) => -f64::MAX,
                    (true, true, Dir::Down) => f64::NEG_INFINITY,
                    (false, false, Dir::Up) => f64::MIN_POSITIVE,
                    (false, false, Dir::Down) => 0.0,
                    (true, false, Dir::Up) => 0.0,
                    (true, false, Dir::Down) => -f64::MIN_POSITIVE,
                }
            }
        }
    }

    /// Rough f64 image of `ln|self|`, for heuristics and display.
    pub fn approx_ln_abs(&self) -> f64 {
        match self {
            Ext::Lin(x) if x.is_zero() => f64::NEG_INFINITY,
            Ext::Lin(x) => {
                let e = fl::exp_of(x) as f64;
                let m = fl::approx_f64(x).abs() / 2f64.powf(e);
                m.ln() + e * std::f64::consts::LN_2
            }
            Ext::Log { ln, .. } => fl::approx_f64(ln),
        }
    }

    /// Decimal digits of a positive float by exact scaling with powers of ten;
    /// `k` is a guess at the decimal exponent, `md` the rounding direction of the magnitude.
    fn lin_to_decimal(x: &F, neg: bool, mut k: i64, digits: usize, md: Dir) -> String {
        let pow10 = |n: i64| {
            let mut p = fl::one();
            for _ in 0..n {
                p = fl::exact_mul(&p, &fl::int(10));
            }
            p
        };
        let mut ds = String::new();
        for _ in 0..4 {
            let shift = digits as i64 - 1 - k;
            let scaled = if shift >= 0 {
                fl::exact_mul(x, &pow10(shift))
            } else {
                // quotient rounded in md, then the integer part rounded in md again
                fl::div(x, &pow10(-shift), md)
            };
            let mut t = scaled.int();
            if md == Dir::Up && fl::cmp(&t, &scaled) == Ordering::Less {
                t = fl::exact_add(&t, &fl::one());
            }
            ds = fl::to_i128(&t).unwrap_or(0).to_string();
            if ds.len() > digits {
                k += 1;
            } else if ds.len() < digits {
                k -= 1;
            } else {
                break;
            }
        }
        if ds.len() > digits {
            // rounded up to a power of ten
            ds.truncate(digits);
            k += 1;
        }
        let (head, tail) = ds.split_at(1);
        let tail = tail.trim_end_matches('0');
        let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
        format!("{}{}e{}", if neg { "-" } else { "" }, body, k)
    }

    /// `x + t` for linear x and a log-domain t below x's last bit: x itself,
    /// or its neighbour when t pushes in the rounding direction.
    fn absorb_negligible(x: &Ext, t: &Ext, dir: Dir) -> Option<Ext> {
        let (Ext::Lin(xf), Ext::Log { neg, .. }) = (x, t) else { return None };
        if xf.mantissa_max_bit_len().unwrap_or(usize::MAX) > fl::prec() {
            return None;
        }
        let (lx, lt) = (x.approx_ln_abs(), t.approx_ln_abs());
        // generous margin against the f64 approximations of both logarithms
        let margin = (fl::prec() as f64 + 8.0) * std::f64::consts::LN_2 + 1.0 + 1e-9 * (lx.abs() + lt.abs());
        if !(lx - lt > margin) {
            return None;
        }
        let mut x = fl::clean(xf.clone());
        // step at working precision, not at the (possibly shorter) mantissa of x
        x.set_precision(fl::prec(), RN).expect("widening is exact");
        Some(Ext::Lin(match (dir, neg) {
            (Dir::Up, false) => fl::next(&x, Dir::Up),
            (Dir::Down, true) => fl::next(&x, Dir::Down),
            _ => x,
        }))
    }

    /// Puts a directed float result into canonical form.
    fn settle_lin(x: F, dir: Dir) -> Ext {
        if x.is_zero() {
            return Ext::Lin(x);
        }
        let c = context::log_cutoff();
        let e = fl::exp_of(&x);
        if e > c || e < -c {
            let neg = !x.is_positive();
            let md = if neg { dir.flip() } else { dir };
            Ext::Log { neg, ln: fl::ln(&x.abs(), md) }
        } else {
            Ext::Lin(x)
        }
    }

    /// Builds `±exp(l)`, converting back to a plain float when the magnitude is moderate.
    fn settle_log(neg: bool, l: F, dir: Dir) -> Ext {
        let limit = (context::log_cutoff() as f64 - 4.0) * std::f64::consts::LN_2;
        if fl::approx_f64(&l).abs() < limit {
            let md = if neg { dir.flip() } else { dir };
            if let Some(m) = fl::exp(&l, md) {
                return Ext::Lin(if neg { m.neg() } else { m });
            }
        }
        Ext::Log { neg, ln: l }
    }

    /// Rigorous comparison of two exact values; `None` if the working
    /// precision cannot separate them.
    pub fn compare(&self, other: &Ext) -> Option<Ordering> {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return Some(sa.cmp(&sb));
        }
        if sa == 0 {
            return Some(Ordering::Equal);
        }
        let m = cmp_abs(self, other)?;
        Some(if sa > 0 { m } else { m.reverse() })
    }

    pub fn le(&self, other: &Ext) -> bool {
        matches!(self.compare(other), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn lt(&self, other: &Ext) -> bool {
        matches!(self.compare(other), Some(Ordering::Less))
    }

    pub fn add(&self, other: &Ext, dir: Dir) -> Result<Ext, IntervalError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if let (Ext::Lin(a), Ext::Lin(b)) = (self, other) {
            return Ok(Ext::settle_lin(fl::add(a, b, dir), dir));
        }
        if let Some(r) = Ext::absorb_negligible(self, other, dir).or_else(|| Ext::absorb_negligible(other, self, dir)) {
            return Ok(r);
        }
        if self.signum() == other.signum() {
            let neg = self.signum() < 0;
            let md = self.mag_dir(dir);
            let la = self.ln_abs(md);
            let lb = other.ln_abs(md);
            let (big, small) = if fl::cmp(&la, &lb) == Ordering::Less { (lb, la) } else { (la, lb) };
            let delta = fl::sub(&small, &big, md);
            let corr = ln1p_exp(&delta, md)?;
            return Ok(Ext::settle_log(neg, fl::add(&big, &corr, md), dir));
        }
        let (pos, negm) = if self.signum() > 0 { (self, other.abs()) } else { (other, self.abs()) };
        match cmp_abs(pos, &negm) {
            Some(Ordering::Equal) => Ok(Ext::zero()),
            Some(Ordering::Greater) => match ln_diff(pos, &negm, dir)? {
                Some(l) => Ok(Ext::settle_log(false, l, dir)),
                None => Ok(Ext::zero()),
            },
            Some(Ordering::Less) => match ln_diff(&negm, pos, dir.flip())? {
                Some(l) => Ok(Ext::settle_log(true, l, dir)),
                None => Ok(Ext::zero()),
            },
            // indistinguishable magnitudes: the difference lies in [-|neg|, pos]
            None => Ok(match dir {
                Dir::Up => pos.clone(),
                Dir::Down => negm.neg(),
            }),
        }
    }

    pub fn sub(&self, other: &Ext, dir: Dir) -> Result<Ext, IntervalError> {
        self.add(&other.neg(), dir)
    }

    pub fn mul(&self, other: &Ext, dir: Dir) -> Result<Ext, IntervalError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Ext::zero());
        }
        if let (Ext::Lin(a), Ext::Lin(b)) = (self, other) {
            return Ok(Ext::settle_lin(fl::mul(a, b, dir), dir));
        }
        let neg = (self.signum() < 0) != (other.signum() < 0);
        let md = if neg { dir.flip() } else { dir };
        let l = fl::add(&self.ln_abs(md), &other.ln_abs(md), md);
        Ok(Ext::settle_log(neg, l, dir))
    }

    pub fn div(&self, other: &Ext, dir: Dir) -> Result<Ext, IntervalError> {
        assert!(!other.is_zero(), "division by an exact zero endpoint");
        if self.is_zero() {
            return Ok(Ext::zero());
        }
        if let (Ext::Lin(a), Ext::Lin(b)) = (self, other) {
            return Ok(Ext::settle_lin(fl::div(a, b, dir), dir));
        }
        let neg = (self.signum() < 0) != (other.signum() < 0);
        let md = if neg { dir.flip() } else { dir };
        let l = fl::sub(&self.ln_abs(md), &other.ln_abs(md.flip()), md);
        Ok(Ext::settle_log(neg, l, dir))
    }

    pub fn exp(&self, dir: Dir) -> Result<Ext, IntervalError> {
        match self {
            Ext::Lin(x) => {
                let limit = (context::log_cutoff() as f64 - 4.0) * std::f64::consts::LN_2;
                if fl::approx_f64(x).abs() < limit {
                    let y = fl::exp(x, dir).ok_or_else(|| overflow("exp"))?;
                    Ok(Ext::settle_lin(y, dir))
                } else {
                    Ok(Ext::exp_of(fl::round(x, dir)))
                }
            }
            Ext::Log { neg, ln } => {
                if fl::exp_of(ln) < -NEGLIGIBLE_EXP {
                    // |self| < 2^-(2^20): exp(self) is 1 up to far below one ulp
                    let one = fl::one();
                    let r = match (dir, *neg) {
                        (Dir::Up, false) => fl::next(&one, Dir::Up),
                        (Dir::Down, true) => fl::next(&one, Dir::Down),
                        _ => one,
                    };
                    return Ok(Ext::Lin(r));
                }
                let x = self.to_float(dir).ok_or_else(|| overflow("exp"))?;
                Ext::Lin(x).exp(dir)
            }
        }
    }

    /// Natural log of a positive value.
    pub fn ln(&self, dir: Dir) -> Result<Ext, IntervalError> {
        assert!(self.signum() > 0, "ln of nonpositive endpoint");
        match self {
            Ext::Lin(x) => Ok(Ext::settle_lin(fl::ln(x, dir), dir)),
            Ext::Log { ln, .. } => Ok(Ext::settle_lin(fl::round(ln, dir), dir)),
        }
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, dir: Dir) -> Result<Ext, IntervalError> {
        assert!(self.signum() >= 0, "sqrt of negative endpoint");
        match self {
            Ext::Lin(x) => Ok(Ext::settle_lin(fl::sqrt(x, dir), dir)),
            Ext::Log { ln, .. } => Ok(Ext::settle_log(false, fl::half(ln), dir)),
        }
    }

    /// Halving with a rounding direction (exact for plain floats).
    pub fn half_dir(&self, dir: Dir) -> Ext {
        match self {
            Ext::Lin(x) => Ext::Lin(fl::half(x)),
            Ext::Log { .. } => self.mul(&Ext::Lin(fl::half(&fl::one())), dir).expect("halving"),
        }
    }

    /// `|self|^n` for n ≥ 0, rounded in direction `md` on the magnitude.
    pub fn powi_abs(&self, n: u64, md: Dir) -> Result<Ext, IntervalError> {
        let mut base = self.abs();
        let mut acc = Ext::one();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, md)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, md)?;
            }
        }
        Ok(acc)
    }

    /// Smaller of two values, rounded so the result is a valid bound in `dir`.
    pub fn min_dir(&self, other: &Ext, dir: Dir) -> Ext {
        match self.compare(other) {
            Some(Ordering::Greater) => other.clone(),
            Some(_) => self.clone(),
            None => match dir {
                Dir::Up => self.clone(),
                Dir::Down => match (self.to_float(Dir::Down), other.to_float(Dir::Down)) {
                    (Some(a), Some(b)) => Ext::Lin(if fl::cmp(&a, &b) == Ordering::Less { a } else { b }),
                    _ => self.clone(),
                },
            },
        }
    }

    pub fn max_dir(&self, other: &Ext, dir: Dir) -> Ext {
        match self.compare(other) {
            Some(Ordering::Less) => other.clone(),
            Some(_) => self.clone(),
            None => match dir {
                Dir::Down => self.clone(),
                Dir::Up => match (self.to_float(Dir::Up), other.to_float(Dir::Up)) {
                    (Some(a), Some(b)) => Ext::Lin(if fl::cmp(&a, &b) == Ordering::Greater { a } else { b }),
                    _ => self.clone(),
                },
            },
        }
    }

    /// Floor as an integer, if it fits in i64.
    pub fn floor_i64(&self) -> Option<i64> {
        let x = match self {
            Ext::Lin(x) => x.clone(),
            Ext::Log { ln, .. } if ln.is_negative() => fl::zero(),
            Ext::Log { .. } => return None,
        };
        if fl::exp_of(&x) > 62 {
            return None;
        }
        let t = x.int();
        let mut v = fl::to_i128(&t)?;
        if fl::cmp(&t, &x) == Ordering::Greater {
            v -= 1;
        }
        if matches!(self, Ext::Log { neg: true, .. }) {
            // -tiny
            v = -1;
        }
        i64::try_from(v).ok()
    }

    /// If the value is an exact integer power of ten, its exponent.
    pub fn exact_log10(&self) -> Option<i64> {
        let x = match self {
            Ext::Lin(x) if x.is_positive() && !x.is_zero() => x,
            _ => return None,
        };
        if fl::exp_of(x) > 126 || !x.is_int() {
            return None;
        }
        let mut v = fl::to_i128(x)?;
        let mut k = 0;
        while v % 10 == 0 {
            v /= 10;
            k += 1;
        }
        (v == 1).then_some(k)
    }

    /// Decimal rendering with `digits` significant digits, rounded in `dir`
    /// (so a lower endpoint prints at or below its value).
    pub fn to_decimal(&self, digits: usize, dir: Dir) -> String {
        let digits = digits.clamp(1, 36);
        if self.is_zero() {
            return "0".to_string();
        }
        if let Ext::Lin(x) = self {
            if x.is_int() && fl::exp_of(x) <= 120 {
                if let Some(v) = fl::to_i128(x) {
                    if v.unsigned_abs().to_string().len() <= digits {
                        return v.to_string();
                    }
                }
            }
        }
        let neg = self.signum() < 0;
        let md = self.mag_dir(dir);
        let approx_l10 = self.approx_ln_abs() / std::f64::consts::LN_10;
        if !approx_l10.is_finite() || approx_l10.abs() > 1e15 {
            let l = self.ln_abs(md);
            let inner = Ext::Lin(l).to_decimal(digits, md);
            return format!("{}exp({})", if neg { "-" } else { "" }, inner);
        }
        let mut k = approx_l10.floor() as i64;
        if let Ext::Lin(x) = self {
            if approx_l10.abs() < 2000.0 {
                return Ext::lin_to_decimal(&x.abs(), neg, k, digits, md);
            }
        }
        let ln10 = |d: Dir| fl::ln(&fl::int(10), d);
        let mantissa_at = |k: i64| -> Option<F> {
            // |self| / 10^k = exp(ln|self| - k ln 10), rounded in md
            let l = self.ln_abs(md);
            let kl = fl::mul(&fl::int(k), &ln10(if k >= 0 { md.flip() } else { md }), md.flip());
            fl::exp(&fl::sub(&l, &kl, md), md)
        };
        let mut s = match mantissa_at(k) {
            Some(s) => s,
            None => return format!("{}exp({})", if neg { "-" } else { "" }, fl::approx_f64(&self.ln_abs(md))),
        };
        for _ in 0..3 {
            let sf = fl::approx_f64(&s);
            if sf >= 10.0 {
                k += 1;
            } else if sf < 1.0 {
                k -= 1;
            } else {
                break;
            }
            s = mantissa_at(k).expect("rescaled mantissa");
        }
        let scale = BigFloat::from_i128(10i128.pow(digits as u32 - 1), fl::prec().max(128));
        let scaled = fl::mul(&s, &scale, md);
        let mut t = scaled.int();
        if md == Dir::Up && fl::cmp(&t, &scaled) == Ordering::Less {
            t = fl::add(&t, &fl::one(), Dir::Up);
        }
        let mut ds = fl::to_i128(&t).unwrap_or(0).to_string();
        if ds.len() > digits {
            // mantissa rounded up to 10.000…
            ds.truncate(digits);
            k += 1;
        }
        let (head, tail) = ds.split_at(1);
        let tail = tail.trim_end_matches('0');
        let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
        format!("{}{}e{}", if neg { "-" } else { "" }, body, k)
    }
}

impl std::fmt::Display for Ext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal(digits, Dir::Down))
    }
}

/// Compares |a| and |b| for exact values.
fn cmp_abs(a: &Ext, b: &Ext) -> Option<Ordering> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Some(Ordering::Equal),
        (true, false) => return Some(Ordering::Less),
        (false, true) => return Some(Ordering::Greater),
        _ => {}
    }
    match (a, b) {
        (Ext::Lin(x), Ext::Lin(y)) => Some(fl::cmp(&x.abs(), &y.abs())),
        (Ext::Log { ln: l1, .. }, Ext::Log { ln: l2, .. }) => Some(fl::cmp(l1, l2)),
        (Ext::Lin(_), Ext::Log { .. }) => cmp_lin_log(a, b),
        (Ext::Log { .. }, Ext::Lin(_)) => cmp_lin_log(b, a).map(Ordering::reverse),
    }
}

fn cmp_lin_log(lin: &Ext, log: &Ext) -> Option<Ordering> {
    let l = match log {
        Ext::Log { ln, .. } => ln,
        Ext::Lin(_) => unreachable!(),
    };
    let lo = lin.ln_abs(Dir::Down);
    let hi = lin.ln_abs(Dir::Up);
    if fl::cmp(&hi, l) == Ordering::Less {
        return Some(Ordering::Less);
    }
    if fl::cmp(&lo, l) == Ordering::Greater {
        return Some(Ordering::Greater);
    }
    let x = match lin {
        Ext::Lin(x) => x.abs(),
        Ext::Log { .. } => unreachable!(),
    };
    let ed = fl::exp(l, Dir::Down)?;
    let eu = fl::exp(l, Dir::Up)?;
    if fl::cmp(&x, &ed) == Ordering::Less {
        Some(Ordering::Less)
    } else if fl::cmp(&x, &eu) == Ordering::Greater {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// `ln(1 + exp(delta))` for delta ≤ 0 (roughly), rounded in `md`.
fn ln1p_exp(delta: &F, md: Dir) -> Result<F, IntervalError> {
    if !delta.is_positive() && fl::exp_of(delta) > 21 {
        // delta < -2^20: the correction lies in [0, 2^-(2^20)]
        return Ok(match md {
            Dir::Up => fl::pow2(-NEGLIGIBLE_EXP),
            Dir::Down => fl::zero(),
        });
    }
    let e = fl::exp(delta, md).ok_or_else(|| overflow("add"))?;
    let s = fl::add(&fl::one(), &e, md);
    Ok(fl::ln(&s, md))
}

/// `ln(|big| - |small|)` rounded in `md`, given |big| > |small|.
/// `None` when the lower bound collapses to zero.
fn ln_diff(big: &Ext, small: &Ext, md: Dir) -> Result<Option<F>, IntervalError> {
    let lb = big.ln_abs(md);
    let ls = small.ln_abs(md.flip());
    let delta = fl::sub(&ls, &lb, md.flip());
    if !delta.is_negative() || delta.is_zero() {
        return Ok(match md {
            Dir::Up => Some(lb),
            Dir::Down => None,
        });
    }
    if fl::exp_of(&delta) > 21 {
        // ln(1 - e^delta) lies in [-2^(1-2^20), 0]
        return Ok(Some(match md {
            Dir::Up => lb,
            Dir::Down => fl::sub(&lb, &fl::pow2(1 - NEGLIGIBLE_EXP), Dir::Down),
        }));
    }
    let t = fl::exp(&delta, md.flip()).ok_or_else(|| overflow("sub"))?;
    let one_minus = fl::sub(&fl::one(), &t, md);
    if !one_minus.is_positive() || one_minus.is_zero() {
        return Ok(match md {
            Dir::Up => Some(lb),
            Dir::Down => None,
        });
    }
    Ok(Some(fl::add(&lb, &fl::ln(&one_minus, md), md)))
}
