//! MPFR evaluations at 665 bits (200 decimal digits) of the closed forms,
//! written from the formulas directly and sharing no code with the crate.

use astro_float::Sign;
use hypcob::{Bound, Ext};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

pub const PREC: u32 = 665;

pub fn num(s: &str) -> Float {
    Float::with_val(PREC, Float::parse(s).expect("decimal literal"))
}

pub fn int(n: i64) -> Float {
    Float::with_val(PREC, n)
}

pub fn ln10() -> Float {
    int(10).ln()
}

/// Exact value of a linear endpoint.
pub fn lin_to_mpfr(x: &astro_float::BigFloat) -> Float {
    if x.is_zero() {
        return int(0);
    }
    let (words, _bits, sign, exp, _) = x.as_raw_parts().expect("finite endpoint");
    let mut m = Integer::new();
    for w in words.iter().rev() {
        m <<= 64;
        m += *w;
    }
    // value = 0.mantissa × 2^exp
    let shift = exp as i64 - 64 * words.len() as i64;
    let prec = (64 * words.len() as u32).max(64);
    let mut f = Float::with_val(prec, m);
    if shift >= 0 {
        f <<= shift as u32;
    } else {
        f >>= (-shift) as u32;
    }
    if sign == Sign::Neg {
        f = -f;
    }
    f
}

/// `lo - tol ≤ x ≤ hi + tol` with `tol = |x|·2^-600`, the oracle's own error budget.
/// Log-domain endpoints are compared on the log scale.
pub fn encloses(b: &Bound, x: &Float) -> bool {
    let tol = Float::with_val(PREC, x.abs_ref()) >> 600u32;
    let below = |e: &Ext| -> bool {
        // e ≤ x + tol
        match e {
            Ext::Lin(v) => lin_to_mpfr(v) <= Float::with_val(PREC, x + &tol),
            Ext::Log { neg, ln } => log_le(*neg, ln, x, true),
        }
    };
    let above = |e: &Ext| -> bool {
        match e {
            Ext::Lin(v) => Float::with_val(PREC, x - &tol) <= lin_to_mpfr(v),
            Ext::Log { neg, ln } => log_le(*neg, ln, x, false),
        }
    };
    below(b.lo()) && above(b.hi())
}

/// Compares `±exp(ln)` with x: `endpoint ≤ x` if `endpoint_below`, else `x ≤ endpoint`.
fn log_le(neg: bool, ln: &astro_float::BigFloat, x: &Float, endpoint_below: bool) -> bool {
    let l = lin_to_mpfr(ln);
    let slack = Float::with_val(PREC, 1) >> 600u32;
    let xs = if x.is_sign_negative() { -1 } else if x.is_zero() { 0 } else { 1 };
    let es = if neg { -1 } else { 1 };
    if xs != es {
        return if endpoint_below { es < xs } else { xs < es };
    }
    let lx = Float::with_val(PREC, x.abs_ref()).ln();
    // for positives, endpoint ≤ x iff ln ≤ ln x; signs flip the comparison
    let mag_le = |a: &Float, b: &Float| Float::with_val(PREC, a - &slack) <= *b;
    match (endpoint_below, neg) {
        (true, false) | (false, true) => mag_le(&l, &lx),
        (false, false) | (true, true) => mag_le(&lx, &l),
    }
}

/// Whether the log10 enclosure `[lo, hi]` of a Bound contains `l10`.
pub fn log10_encloses(b: &Bound, l10: &Float) -> bool {
    let (lo, hi) = b.log10_report().expect("positive");
    let pair = Bound::new(lo, hi).expect("ordered");
    encloses(&pair, l10)
}

/// `ln 𝔫` for the closed form `4V·[200 + exp(X)] + 6` with
/// `X = 11 + 15·e^{11/2}·V^{7/12}·(cosh(57V) − 1)^{8/3}·(1 + 3/δ)^{1/2}`,
/// written as `ln(4V) + X + ln1p((200 + 6/(4V))·e^{−X})`. For the inputs used
/// here e^{−X} underflows, which changes the result by far less than 2^{−665}.
pub fn closed_form_ln(v: &str, delta: &str) -> Float {
    let v = num(v);
    let d = num(delta);
    let cosh = Float::with_val(PREC, &v * int(57)).cosh() - int(1);
    let inner = int(15)
        * Float::with_val(PREC, num("5.5").exp())
        * Float::with_val(PREC, (&v).pow(Float::with_val(PREC, 7) / int(12)))
        * cosh.pow(Float::with_val(PREC, 8) / int(3))
        * (int(1) + int(3) / d).sqrt();
    let x = Float::with_val(PREC, int(11) + inner);
    let four_v = Float::with_val(PREC, int(4) * &v);
    let tail = (int(200) + int(6) / &four_v) * Float::with_val(PREC, -&x).exp();
    four_v.ln() + x + Float::with_val(PREC, tail).ln_1p()
}

pub fn closed_form_log10(v: &str, delta: &str) -> Float {
    closed_form_ln(v, delta) / ln10()
}

/// Weyl-law coefficients (𝔞, 𝔟, 𝔡, 𝔢) of the built-in ε = 0.15 profile.
pub const WEYL_015: (i64, i64, i64, i64) = (3, 402, 100, 780);

/// `V/(π·sinh²(ε/2))`.
pub fn diameter(v: &str, eps: &str) -> Float {
    let s = Float::with_val(PREC, num(eps) / int(2)).sinh();
    num(v) / (Float::with_val(PREC, Constant::Pi) * s.square())
}

/// `e^{11/2}·V^{1/12}·(cosh D − 1)^{4/3}` at diameter `D`.
pub fn c_v_eps(v: &str, dia: &Float) -> Float {
    let c = Float::with_val(PREC, dia.cosh_ref()) - int(1);
    num("5.5").exp()
        * Float::with_val(PREC, num(v).pow(Float::with_val(PREC, 1) / int(12)))
        * c.pow(Float::with_val(PREC, 4) / int(3))
}

/// `ln 𝔫` for the assembled constant `𝔫 = 4·sf + 6`, with
/// `sf = V[2𝔡 + H·8·exp(E)]`, `H = 2𝔞 + 3𝔟 + 2𝔢`, `E = 15·𝔠·√V·√(1 + 3/δ)`.
pub fn assembled_ln(v: &str, eps: &str, delta: &str, weyl: (i64, i64, i64, i64)) -> Float {
    let (a, b, dd, e) = weyl;
    let h = int(2 * a + 3 * b + 2 * e);
    let vv = num(v);
    let c = c_v_eps(v, &diameter(v, eps));
    let big_e = Float::with_val(PREC, int(15) * c * vv.clone().sqrt() * (int(1) + int(3) / num(delta)).sqrt());
    // 𝔫 = 32·V·H·e^E + (8·V·𝔡 + 6)
    let lead = Float::with_val(PREC, int(32) * &vv * &h);
    let rest = Float::with_val(PREC, int(8) * &vv * int(dd) + int(6));
    let tail = rest / &lead * Float::with_val(PREC, -&big_e).exp();
    lead.ln() + big_e + Float::with_val(PREC, tail).ln_1p()
}

/// Oracle value as a Bound-free decimal string with `digits` significant digits.
pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}
