//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are stored as rational coefficient vectors modulo `x^N - 1`,
//! with lazy canonical reduction modulo the N-th cyclotomic polynomial for
//! equality and zero tests. The ambient conductor is always a multiple of 4
//! so that `i` lies in the field and real/imaginary parts are field elements.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Render a rational as `p/q` (or just `p` when q = 1).
pub fn rat_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q` or `p`. `offset` is added to reported error positions so
/// callers tokenizing a longer string can report absolute positions.
pub fn parse_rational(s: &str, offset: usize) -> Result<Rational> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let bad = |pos: usize, msg: &str| Error::Parse {
        pos: offset + lead + pos,
        msg: msg.to_string(),
    };
    if t.is_empty() {
        return Err(bad(0, "empty rational"));
    }
    let (np, dp) = match t.find('/') {
        Some(i) => (&t[..i], Some((&t[i + 1..], i + 1))),
        None => (t, None),
    };
    let numer: BigInt = np
        .parse()
        .map_err(|_| bad(0, &format!("invalid integer `{np}`")))?;
    let denom: BigInt = match dp {
        Some((ds, di)) => {
            if ds.is_empty() {
                return Err(bad(di, "missing denominator"));
            }
            let d: BigInt = ds
                .parse()
                .map_err(|_| bad(di, &format!("invalid integer `{ds}`")))?;
            if d.is_zero() {
                return Err(bad(di, "zero denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(numer, denom))
}

fn default_conductor_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("LAURICELLA_MAX_CONDUCTOR")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1024)
    })
}

fn check_conductor(n: u64) -> Result<u32> {
    let cap = default_conductor_cap();
    if n > cap {
        return Err(Error::ConductorCap { needed: n, cap });
    }
    Ok(n as u32)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd_u64(b, a % b) }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of the N-th cyclotomic polynomial, low degree first.
/// Computed by exact division of x^N - 1 by the product of the proper
/// cyclotomic divisors; memoized.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = divide_exact(&num, &cyclotomic_polynomial(d));
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials (remainder known to vanish).
fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = std::mem::replace(&mut rem[i], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        let q = i - dd;
        for (j, dj) in den.iter().enumerate().take(dd) {
            let t = &c * dj;
            rem[q + j] -= t;
        }
        quot[q] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An exact element of Q(zeta_N), coefficients indexing zeta^0..zeta^{N-1}.
#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u32) -> Self {
        let order = order.max(1);
        CyclotomicNumber {
            order,
            coeffs: vec![Rational::zero(); order as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, value: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// zeta_N^k as an element of Q(zeta_{lcm(4,N)}).
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("root_of_unity requires N >= 1".into()));
        }
        let ambient = check_conductor(lcm_u64(4, n))?;
        let step = (ambient as u64 / n) as i64;
        let idx = (k * step).rem_euclid(ambient as i64) as usize;
        let mut z = Self::zero(ambient);
        z.coeffs[idx] = Rational::one();
        Ok(z)
    }

    /// e^{2 pi i r} for rational r, exact.
    pub fn exp_2pi_i(r: &Rational) -> Result<Self> {
        let den = r.denom().to_u64().ok_or_else(|| Error::ConductorCap {
            needed: u64::MAX,
            cap: default_conductor_cap(),
        })?;
        let num = (r.numer() % BigInt::from(den))
            .to_i64()
            .expect("reduced numerator fits");
        Self::root_of_unity(den, num)
    }

    /// sin(pi r) as an exact real element: (z - conj z) / 2i with z = e^{i pi r}.
    pub fn sin_pi(r: &Rational) -> Result<Self> {
        let half = r / rat(2, 1);
        let z = Self::exp_2pi_i(&half)?;
        z.imag_part()
    }

    /// cos(pi r), exact.
    pub fn cos_pi(r: &Rational) -> Result<Self> {
        let half = r / rat(2, 1);
        let z = Self::exp_2pi_i(&half)?;
        z.real_part()
    }

    /// cot(pi r) = cos(pi r) / sin(pi r); fails on integer r.
    pub fn cot_pi(r: &Rational) -> Result<Self> {
        let c = Self::cos_pi(r)?;
        let s = Self::sin_pi(r)?;
        c.div(&s)
    }

    /// The imaginary unit at the given (4-divisible) conductor.
    pub fn i_unit(order: u32) -> Self {
        debug_assert_eq!(order % 4, 0);
        let mut z = Self::zero(order);
        z.coeffs[(order / 4) as usize] = Rational::one();
        z
    }

    fn promoted(&self, order: u32) -> Self {
        if self.order == order {
            return self.clone();
        }
        debug_assert_eq!(order % self.order, 0);
        let step = (order / self.order) as usize;
        let mut z = Self::zero(order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.coeffs[j * step] = c.clone();
            }
        }
        z
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let n = check_conductor(lcm_u64(self.order as u64, other.order as u64))?;
        Ok((self.promoted(n), other.promoted(n)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        let mut z = self.clone();
        for c in z.coeffs.iter_mut() {
            *c = -c.clone();
        }
        z
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let n = a.order as usize;
        let mut out = vec![Rational::zero(); n];
        for (i, ci) in a.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                out[k] += ci * cj;
            }
        }
        Ok(CyclotomicNumber { order: a.order, coeffs: out })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut z = self.clone();
        for c in z.coeffs.iter_mut() {
            *c *= s;
        }
        z
    }

    /// Complex conjugation: zeta^j -> zeta^{N-j}.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut z = Self::zero(self.order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.coeffs[(n - j) % n] = c.clone();
            }
        }
        z
    }

    pub fn real_part(&self) -> Result<Self> {
        let s = self.add(&self.conj())?;
        Ok(s.scale(&rat(1, 2)))
    }

    pub fn imag_part(&self) -> Result<Self> {
        // (a - conj a) / 2i = (a - conj a) * (-i/2)
        let d = self.sub(&self.conj())?;
        let n = check_conductor(lcm_u64(4, d.order as u64))?;
        let d = d.promoted(n);
        let minus_half_i = CyclotomicNumber::i_unit(n).neg().scale(&rat(1, 2));
        d.mul(&minus_half_i)
    }

    /// Canonical representative modulo the cyclotomic polynomial Phi_N:
    /// coefficient vector of length phi(N).
    pub fn canonical(&self) -> Vec<Rational> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = std::mem::replace(&mut rem[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            let q = i - deg;
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    rem[q + j] -= &c * Rational::from(pj.clone());
                }
            }
        }
        rem.truncate(deg.max(1));
        rem
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        self.canonical().iter().all(|c| c.is_zero())
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    pub fn is_real(&self) -> bool {
        self.eq_exact(&self.conj())
    }

    pub fn is_rational(&self) -> Option<Rational> {
        let c = self.canonical();
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0].clone())
        } else {
            None
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// Q[x]/(Phi_N). Fails exactly on zero.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from)
            .collect();
        let a = trim(self.canonical());
        // extended gcd: r0 = phi, r1 = a; track s only against a.
        let mut r0 = phi.clone();
        let mut r1 = a;
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd (nonzero constant since Phi_N is irreducible)
        if r0.len() != 1 {
            return Err(Error::Invalid(
                "cyclotomic inverse: gcd not constant (non-field modulus?)".into(),
            ));
        }
        let c = r0[0].clone();
        let inv_coeffs = poly_divmod(&s0, &phi).1;
        let mut z = Self::zero(self.order);
        for (j, v) in inv_coeffs.iter().enumerate() {
            z.coeffs[j] = v / c.clone();
        }
        Ok(z)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        a.mul(&b.invert()?)
    }

    /// Float embedding: Horner evaluation at e^{2 pi i / N}.
    /// Error is O(N * ulp * max |coefficient|).
    pub fn embed(&self) -> (f64, f64) {
        let n = self.order as f64;
        let theta = 2.0 * std::f64::consts::PI / n;
        let (zr, zi) = (theta.cos(), theta.sin());
        let (mut ar, mut ai) = (0.0_f64, 0.0_f64);
        for c in self.coeffs.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let nr = ar * zr - ai * zi + cf;
            let ni = ar * zi + ai * zr;
            ar = nr;
            ai = ni;
        }
        (ar, ai)
    }

    /// Exact sign of an exactly-real element. Zero is detected by field
    /// equality; a nonzero sign comes from interval evaluation on an
    /// increasing precision ladder (64, 256, 1024 bits).
    pub fn sign_of_real(&self) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        // Fast path: float evaluation with a crude rigorous bound.
        let (re, _im) = self.embed();
        let coeff_l1: f64 = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().map(f64::abs).unwrap_or(f64::INFINITY))
            .sum();
        let bound = 32.0 * self.order as f64 * f64::EPSILON * (coeff_l1 + 1.0);
        if re.is_finite() && re.abs() > bound {
            return Ok(if re > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        for bits in [64u32, 256, 1024] {
            let iv = self.real_interval(bits);
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(Error::SignUndecided)
    }

    /// Rigorous rational enclosure of the real part of the embedding.
    fn real_interval(&self, bits: u32) -> Interval {
        let prec = bits + 16;
        let mut acc = Interval::point_scaled(BigInt::zero(), prec);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cosj = cos_2pi_frac(j as u32, self.order, prec);
            acc = acc.add(&cosj.mul_rational(c, prec), prec);
        }
        acc
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let d = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        quot[d] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[d + j] -= t;
        }
        rem = trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (trim(quot), rem)
}

// ---------------------------------------------------------------------------
// Fixed-point interval arithmetic for the sign ladder.
// Values are intervals [lo, hi] * 2^{-prec} with BigInt endpoints.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct Interval {
    lo: BigInt,
    hi: BigInt,
}

impl Interval {
    fn point_scaled(v: BigInt, _prec: u32) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r * Rational::from(BigInt::one() << prec);
        let lo = scaled.floor().to_integer();
        let hi = scaled.ceil().to_integer();
        Interval { lo, hi }
    }

    fn add(&self, other: &Self, _prec: u32) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    fn neg(&self) -> Self {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    fn mul(&self, other: &Self, prec: u32) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval {
            lo: floor_shift(lo, prec),
            hi: ceil_shift(hi, prec),
        }
    }

    fn mul_rational(&self, r: &Rational, prec: u32) -> Self {
        self.mul(&Interval::from_rational(r, prec), prec)
    }

    fn div_uint(&self, d: u64, _prec: u32) -> Self {
        let d = BigInt::from(d);
        Interval {
            lo: div_floor_big(&self.lo, &d),
            hi: div_ceil_big(&self.hi, &d),
        }
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_negative() { q - 1 } else { q }
}

fn div_ceil_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_positive() { q + 1 } else { q }
}

fn floor_shift(v: BigInt, prec: u32) -> BigInt {
    div_floor_big(&v, &(BigInt::one() << prec))
}

fn ceil_shift(v: BigInt, prec: u32) -> BigInt {
    div_ceil_big(&v, &(BigInt::one() << prec))
}

/// Enclosure of pi at the given precision via the Machin formula
/// pi = 16 atan(1/5) - 4 atan(1/239) with alternating-series remainders.
fn pi_interval(prec: u32) -> Interval {
    fn atan_inv(x: u64, prec: u32) -> Interval {
        let scale = BigInt::one() << prec;
        let mut acc = Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        };
        let xx = BigInt::from(x) * BigInt::from(x);
        let mut power = BigInt::from(x); // x^(2k+1)
        let mut k = 0u64;
        loop {
            let denom = BigInt::from(2 * k + 1) * &power;
            let lo = div_floor_big(&scale, &denom);
            let hi = div_ceil_big(&scale, &denom);
            let term = Interval { lo, hi };
            if k % 2 == 0 {
                acc = acc.add(&term, prec);
            } else {
                acc = acc.add(&term.neg(), prec);
            }
            // remainder of the alternating series is bounded by the next term
            let next_denom = BigInt::from(2 * k + 3) * &power * &xx;
            let rem_hi = div_ceil_big(&scale, &next_denom);
            if rem_hi.is_zero() || rem_hi == BigInt::one() {
                acc = acc.add(
                    &Interval {
                        lo: -(&rem_hi + 1u32),
                        hi: &rem_hi + 1u32,
                    },
                    prec,
                );
                return acc;
            }
            power *= &xx;
            k += 1;
        }
    }
    let a5 = atan_inv(5, prec);
    let a239 = atan_inv(239, prec);
    let mut acc = Interval {
        lo: a5.lo * 16,
        hi: a5.hi * 16,
    };
    let b = Interval {
        lo: a239.lo * 4,
        hi: a239.hi * 4,
    };
    acc = acc.add(&b.neg(), prec);
    acc
}

/// Enclosure of cos(2 pi j / n) by symmetry reduction and Taylor series.
/// Folds x = j/n to [0, 1/4] via cos(2pi x) = cos(2pi(1-x)) and
/// cos(2pi x) = -cos(2pi(1/2 - x)).
fn cos_2pi_frac(j: u32, n: u32, prec: u32) -> Interval {
    let j = (j % n) as u64;
    let n = n as u64;
    let m = j.min(n - j); // fold to [0, 1/2]
    let (m, neg) = if 4 * m > n {
        // x in (1/4, 1/2]: cos(2pi x) = -cos(2pi (1/2 - x)); half - x = (n - 2m)/(2n)
        ((n - 2 * m, 2 * n), true)
    } else {
        ((m, n), false)
    };
    let (p, q) = m;
    // theta = 2 pi p / q, p/q in [0, 1/4] => theta in [0, pi/2]
    let pi = pi_interval(prec);
    let theta = Interval {
        lo: pi.lo * 2 * p,
        hi: pi.hi * 2 * p,
    }
    .div_uint(q, prec);
    let c = cos_taylor(&theta, prec);
    if neg { c.neg() } else { c }
}

/// cos on [0, pi/2] by Taylor with alternating remainder bound.
fn cos_taylor(theta: &Interval, prec: u32) -> Interval {
    let one = Interval::point_scaled(BigInt::one() << prec, prec);
    let t2 = theta.mul(theta, prec);
    let mut term = one.clone(); // theta^{2k} / (2k)!
    let mut acc = one;
    let mut k = 1u64;
    loop {
        term = term.mul(&t2, prec).div_uint((2 * k - 1) * (2 * k), prec);
        if k % 2 == 1 {
            acc = acc.add(&term.neg(), prec);
        } else {
            acc = acc.add(&term, prec);
        }
        // alternating series: remainder bounded by the next term, which is
        // below the current one for k >= 1 since theta <= pi/2 < 2
        let mag = term.lo.abs().max(term.hi.abs());
        if k >= 2 && mag <= BigInt::from(4) {
            let slack = BigInt::from(8);
            acc = acc.add(
                &Interval {
                    lo: -slack.clone(),
                    hi: slack,
                },
                prec,
            );
            return acc;
        }
        k += 1;
    }
}
