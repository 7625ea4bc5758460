//! Random expression trees, evaluated both as Bounds and in MPFR.

use super::mpfr::{num, PREC};
use hypcob::Bound;
use rand::Rng;
use rug::ops::Pow;
use rug::Float;

#[derive(Clone, Debug)]
pub enum Expr {
    Leaf(String),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
    Cosh(Box<Expr>),
    Sinh(Box<Expr>),
    Powi(Box<Expr>, i64),
    PowRational(Box<Expr>, i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

fn leaf<R: Rng>(rng: &mut R) -> Expr {
    let s = match rng.gen_range(0..4) {
        0 => rng.gen_range(-20i64..=20).to_string(),
        1 => format!("{}.{:03}", rng.gen_range(-9i64..=9), rng.gen_range(0..1000)),
        2 => format!("{}e{}", rng.gen_range(1..1000), rng.gen_range(-8i32..=3)),
        _ => format!("-0.{:06}", rng.gen_range(1..1_000_000)),
    };
    Expr::Leaf(s)
}

pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let mut sub = || Box::new(random_expr(rng, depth - 1));
    let a = sub();
    match rng.gen_range(0..15) {
        0 => Expr::Neg(a),
        1 => Expr::Abs(a),
        2 => Expr::Exp(a),
        3 => Expr::Ln(a),
        4 => Expr::Sqrt(a),
        5 => Expr::Cosh(a),
        6 => Expr::Sinh(a),
        7 => Expr::Powi(a, rng.gen_range(-3..=5)),
        8 => Expr::PowRational(a, rng.gen_range(-7..=7), rng.gen_range(1..=12)),
        9 => Expr::Add(a, Box::new(random_expr(rng, depth - 1))),
        10 => Expr::Sub(a, Box::new(random_expr(rng, depth - 1))),
        11 => Expr::Mul(a, Box::new(random_expr(rng, depth - 1))),
        12 => Expr::Div(a, Box::new(random_expr(rng, depth - 1))),
        13 => Expr::Min(a, Box::new(random_expr(rng, depth - 1))),
        _ => Expr::Max(a, Box::new(random_expr(rng, depth - 1))),
    }
}

/// Bound evaluation; `None` when an operation refuses its input.
pub fn eval_bound(e: &Expr) -> Option<Bound> {
    Some(match e {
        Expr::Leaf(s) => Bound::from_decimal_str(s).ok()?,
        Expr::Neg(a) => eval_bound(a)?.neg(),
        Expr::Abs(a) => eval_bound(a)?.abs(),
        Expr::Exp(a) => eval_bound(a)?.exp().ok()?,
        Expr::Ln(a) => eval_bound(a)?.ln().ok()?,
        Expr::Sqrt(a) => eval_bound(a)?.sqrt().ok()?,
        Expr::Cosh(a) => eval_bound(a)?.cosh().ok()?,
        Expr::Sinh(a) => eval_bound(a)?.sinh().ok()?,
        Expr::Powi(a, k) => eval_bound(a)?.powi(*k).ok()?,
        Expr::PowRational(a, p, q) => eval_bound(a)?.pow_rational(*p, *q).ok()?,
        Expr::Add(a, b) => eval_bound(a)?.add(&eval_bound(b)?).ok()?,
        Expr::Sub(a, b) => eval_bound(a)?.sub(&eval_bound(b)?).ok()?,
        Expr::Mul(a, b) => eval_bound(a)?.mul(&eval_bound(b)?).ok()?,
        Expr::Div(a, b) => eval_bound(a)?.div(&eval_bound(b)?).ok()?,
        Expr::Min(a, b) => eval_bound(a)?.min(&eval_bound(b)?),
        Expr::Max(a, b) => eval_bound(a)?.max(&eval_bound(b)?),
    })
}

/// MPFR evaluation at the oracle precision; `None` outside the real domain
/// or the MPFR exponent range.
pub fn eval_mpfr(e: &Expr) -> Option<Float> {
    let f = |x: Float| -> Option<Float> { x.is_finite().then_some(x) };
    // a zero from a product, quotient or transcendental of nonzero inputs is an MPFR underflow
    let nz = |x: Float| -> Option<Float> { (!x.is_zero()).then_some(x) };
    let p = |x: &Float| Float::with_val(PREC, x);
    match e {
        Expr::Leaf(s) => f(num(s)),
        Expr::Neg(a) => f(-eval_mpfr(a)?),
        Expr::Abs(a) => f(eval_mpfr(a)?.abs()),
        Expr::Exp(a) => nz(f(eval_mpfr(a)?.exp())?),
        Expr::Ln(a) => {
            let x = eval_mpfr(a)?;
            if x <= 0 {
                return None;
            }
            f(x.ln())
        }
        Expr::Sqrt(a) => {
            let x = eval_mpfr(a)?;
            if x < 0 {
                return None;
            }
            f(x.sqrt())
        }
        Expr::Cosh(a) => f(eval_mpfr(a)?.cosh()),
        Expr::Sinh(a) => {
            let x = eval_mpfr(a)?;
            if x.is_zero() {
                return Some(x);
            }
            nz(f(x.sinh())?)
        }
        Expr::Powi(a, k) => {
            let x = eval_mpfr(a)?;
            if x.is_zero() && *k < 0 {
                return None;
            }
            let zero = x.is_zero();
            let y = f(x.pow(*k as i32))?;
            if zero {
                Some(y)
            } else {
                nz(y)
            }
        }
        Expr::PowRational(a, pp, q) => {
            let x = eval_mpfr(a)?;
            if x < 0 || (x.is_zero() && *pp <= 0) {
                return None;
            }
            if x.is_zero() {
                return Some(Float::with_val(PREC, 0));
            }
            let r = Float::with_val(PREC, *pp) / Float::with_val(PREC, *q);
            nz(f(x.pow(r))?)
        }
        Expr::Add(a, b) => f(p(&(eval_mpfr(a)? + eval_mpfr(b)?))),
        Expr::Sub(a, b) => f(p(&(eval_mpfr(a)? - eval_mpfr(b)?))),
        Expr::Mul(a, b) => {
            let (x, y) = (eval_mpfr(a)?, eval_mpfr(b)?);
            if x.is_zero() || y.is_zero() {
                return Some(Float::with_val(PREC, 0));
            }
            nz(f(p(&(x * y)))?)
        }
        Expr::Div(a, b) => {
            let d = eval_mpfr(b)?;
            if d.is_zero() {
                return None;
            }
            let x = eval_mpfr(a)?;
            if x.is_zero() {
                return Some(Float::with_val(PREC, 0));
            }
            nz(f(p(&(x / d)))?)
        }
        Expr::Min(a, b) => {
            let (x, y) = (eval_mpfr(a)?, eval_mpfr(b)?);
            Some(if x < y { x } else { y })
        }
        Expr::Max(a, b) => {
            let (x, y) = (eval_mpfr(a)?, eval_mpfr(b)?);
            Some(if x > y { x } else { y })
        }
    }
}

#[derive(Default, Debug, Clone, Copy)]
pub struct FuzzTally {
    pub trees: usize,
    /// Both sides produced a value and the Bound contained the oracle.
    pub checked: usize,
    pub refused: usize,
    pub oracle_out_of_range: usize,
    pub violations: usize,
}

/// Runs `trees` random trees from `seed`; returns the tally and the first violating tree.
pub fn fuzz(seed: u64, trees: usize, depth: u32) -> (FuzzTally, Option<Expr>) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = FuzzTally { trees, ..Default::default() };
    let mut first = None;
    for _ in 0..trees {
        let e = random_expr(&mut rng, depth);
        let Some(b) = eval_bound(&e) else {
            t.refused += 1;
            continue;
        };
        let Some(x) = eval_mpfr(&e) else {
            t.oracle_out_of_range += 1;
            continue;
        };
        if super::mpfr::encloses(&b, &x) {
            t.checked += 1;
        } else {
            t.violations += 1;
            if std::env::var_os("HYPCOB_FUZZ_TRACE").is_some() {
                eprintln!("violation: {e:?}\n  bound {b}\n  oracle {}", x.to_string_radix(10, Some(30)));
            }
            first.get_or_insert(e);
        }
    }
    (t, first)
}
