//! Outward-rounded evaluation of `ln`, `log2` and `sqrt` on a binary
//! fixed-point grid of spacing `2^-PREC`.
//!
//! Lower endpoints are built only from floors of lower bounds and upper
//! endpoints only from ceilings of upper bounds, plus an explicit series
//! tail bound, so every returned bracket contains the real value.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Bracket, Rational};

const PREC: u32 = 96;

/// `tau` brackets are never wider than `2^-TAU_MAX_WIDTH_BITS`.
pub const TAU_MAX_WIDTH_BITS: u32 = 20;

fn one() -> BigInt {
    BigInt::one() << PREC
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn fixed_to_rational(v: BigInt) -> Rational {
    Rational::from_big(v, one())
}

/// `ln 2` as `(lo, hi)` on the fixed grid, from `sum 1/(k 2^k)`.
fn ln2_fixed() -> &'static (BigInt, BigInt) {
    static LN2: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    LN2.get_or_init(|| {
        let terms = PREC + 8;
        let mut lo = BigInt::zero();
        for k in 1..=terms {
            let den = BigInt::from(k) << k;
            lo += one() / den;
        }
        // each floor loses < 1 ulp; the tail past `terms` is < 2^-terms < 1 ulp
        let hi = &lo + BigInt::from(terms) + 1;
        (lo, hi)
    })
}

/// `sum_{i>=0} z^(2i+1)/(2i+1)` (= atanh z) for fixed-point `0 <= z <= 1/3`.
fn atanh_fixed(z: &BigInt, round_up: bool) -> BigInt {
    let unit = one();
    let scale = |v: BigInt, d: &BigInt| if round_up { div_ceil(&v, d) } else { v.div_floor(d) };
    if z.is_zero() {
        return BigInt::zero();
    }
    let z2 = scale(z * z, &unit);
    let mut pow = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    loop {
        sum += scale(pow.clone(), &BigInt::from(k));
        pow = scale(&pow * &z2, &unit);
        k += 2;
        if round_up {
            if pow <= BigInt::one() {
                // remaining terms sum to at most pow / (1 - z^2) <= 9/8 pow
                sum += pow * 2;
                break;
            }
        } else if pow.is_zero() {
            break;
        }
    }
    sum
}

/// Exact `floor(log2 r)` for `r >= 1`.
fn floor_log2_ge_one(num: &BigInt, den: &BigInt) -> u64 {
    let mut k = num.bits().saturating_sub(den.bits());
    // 2^k <= r  <=>  den << k <= num
    while k > 0 && (den << k) > *num {
        k -= 1;
    }
    while (den << (k + 1)) <= *num {
        k += 1;
    }
    k
}

/// `ln r` for rational `r >= 1`, as fixed-point `(lo, hi)` and the
/// integer part `k = floor(log2 r)` with the reduced `ln(r / 2^k)` bracket.
fn ln_parts(r: &Rational) -> (u64, BigInt, BigInt) {
    assert!(*r >= 1, "ln bracket requires r >= 1, got {r}");
    let (p, q) = (r.numer(), r.denom());
    let k = floor_log2_ge_one(p, q);
    // m = p / (q 2^k) in [1, 2); z = (m - 1)/(m + 1) in [0, 1/3)
    let q2k = q << k;
    let zn = p - &q2k;
    let zd = p + &q2k;
    let scaled = zn << PREC;
    let z_lo = scaled.div_floor(&zd);
    let z_hi = div_ceil(&scaled, &zd);
    let lm_lo = atanh_fixed(&z_lo, false) * 2;
    let lm_hi = atanh_fixed(&z_hi, true) * 2;
    (k, lm_lo, lm_hi)
}

/// Bracket on the natural logarithm of a rational `r >= 1`.
pub fn ln_bracket(r: &Rational) -> Bracket {
    let (k, lm_lo, lm_hi) = ln_parts(r);
    let (l2_lo, l2_hi) = ln2_fixed();
    let lo = BigInt::from(k) * l2_lo + lm_lo;
    let hi = BigInt::from(k) * l2_hi + lm_hi;
    Bracket::new(fixed_to_rational(lo), fixed_to_rational(hi))
}

/// Bracket on `log2 r` for rational `r >= 1`; exact when `r` is a power of two.
pub fn log2_bracket(r: &Rational) -> Bracket {
    let (k, lm_lo, lm_hi) = ln_parts(r);
    let whole = Rational::from_integer(k);
    if lm_hi.is_zero() {
        return Bracket::exact(whole);
    }
    let (l2_lo, l2_hi) = ln2_fixed();
    let frac_lo = (lm_lo << PREC).div_floor(l2_hi);
    let frac_hi = div_ceil(&(lm_hi << PREC), l2_lo);
    Bracket::new(&whole + fixed_to_rational(frac_lo), &whole + fixed_to_rational(frac_hi))
}

/// Exact `ceil(log2 r)` for positive rational `r` (may be negative).
pub fn ceil_log2(r: &Rational) -> i64 {
    assert!(r.is_positive(), "ceil_log2 of nonpositive {r}");
    let (p, q) = (r.numer(), r.denom());
    let mut c = p.bits() as i64 - q.bits() as i64;
    // smallest c with 2^c >= p/q
    let ge = |c: i64| -> bool {
        if c >= 0 {
            (q << c as u64) >= *p
        } else {
            *q >= (p << (-c) as u64)
        }
    };
    while ge(c - 1) {
        c -= 1;
    }
    while !ge(c) {
        c += 1;
    }
    c
}

/// `sqrt(ln n / n)` bracketed with width at most `2^-20`.
pub fn tau(n: u64) -> Bracket {
    assert!(n >= 1, "tau requires n >= 1");
    if n == 1 {
        return Bracket::exact(Rational::zero());
    }
    let l = ln_bracket(&Rational::from_integer(n));
    let nn = BigInt::from(n);
    let fixed = |r: &Rational, up: bool| -> BigInt {
        let s = r.numer() << PREC;
        if up {
            div_ceil(&s, r.denom())
        } else {
            s.div_floor(r.denom())
        }
    };
    let v_lo = fixed(l.lo(), false).div_floor(&nn);
    let v_hi = div_ceil(&fixed(l.hi(), true), &nn);
    let s_lo = (v_lo << PREC).sqrt();
    let rad = v_hi << PREC;
    let mut s_hi = rad.sqrt();
    if &s_hi * &s_hi < rad {
        s_hi += 1;
    }
    debug_assert!(s_lo.sign() != Sign::Minus);
    Bracket::new(fixed_to_rational(s_lo), fixed_to_rational(s_hi))
}
