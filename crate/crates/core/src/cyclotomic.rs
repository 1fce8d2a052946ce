//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNumber`] of order `N` is a rational polynomial in `ζ_N = e^{2πi/N}`
//! reduced modulo the `N`-th cyclotomic polynomial, so it is stored in the
//! power basis `1, ζ_N, ..., ζ_N^{φ(N)-1}`. Values of different orders are
//! combined by lifting both to the least common multiple.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("cannot parse cyclotomic number {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("order {from} does not divide {to}")]
    BadLift { from: u32, to: u32 },
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    BadLength { order: u32, expected: usize, got: usize },
    #[error("order must be positive")]
    ZeroOrder,
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let den = cyclotomic_polynomial(d);
        num = divide_monic(&num, &den);
    }
    let p = Arc::new(num);
    cache().lock().expect("cache poisoned").insert(n, p.clone());
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - dd] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[k - dd + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient, the degree of the `n`-th cyclotomic polynomial.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Exact element of the cyclotomic field `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    /// Builds from power-basis coefficients; the slice must have length `φ(order)`.
    pub fn new(order: u32, coeffs: Vec<BigRational>) -> Result<Self, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let expected = totient(order);
        if coeffs.len() != expected {
            return Err(CyclotomicError::BadLength {
                order,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(CycNumber { order, coeffs })
    }

    /// Reduces an arbitrary polynomial in `ζ_order` to canonical form.
    fn from_poly(order: u32, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        if poly.len() < deg {
            poly.resize(deg, BigRational::zero());
        }
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            for (i, &pi) in phi.iter().enumerate().take(deg) {
                if pi != 0 {
                    poly[k - deg + i] -= &c * BigRational::from_integer(BigInt::from(pi));
                }
            }
        }
        poly.truncate(deg);
        CycNumber {
            order,
            coeffs: poly,
        }
    }

    /// Sum of `c * ζ_order^k` over the given terms, exponents taken mod `order`.
    pub fn from_terms(order: u32, terms: &[(i64, BigRational)]) -> Result<Self, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let mut poly = vec![BigRational::zero(); order as usize];
        for (k, c) in terms {
            let e = k.rem_euclid(order as i64) as usize;
            poly[e] += c;
        }
        Ok(Self::from_poly(order, poly))
    }

    pub fn rational(r: BigRational) -> Self {
        CycNumber {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `ζ_order^k`.
    pub fn root_of_unity(order: u32, k: i64) -> Result<Self, CyclotomicError> {
        Self::from_terms(order, &[(k, BigRational::one())])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Re-expresses this number in `Q(ζ_m)`; requires `order | m`.
    pub fn lift(&self, m: u32) -> Result<Self, CyclotomicError> {
        if m == 0 || !m.is_multiple_of(self.order) {
            return Err(CyclotomicError::BadLift {
                from: self.order,
                to: m,
            });
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[(j * step) % m as usize] += c;
        }
        Ok(Self::from_poly(m, poly))
    }

    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.order, other.order);
        (
            self.lift(m).expect("lcm is a multiple"),
            other.lift(m).expect("lcm is a multiple"),
        )
    }

    /// Galois automorphism `ζ ↦ ζ^a`; `a` must be coprime to the order.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.order as i64;
        debug_assert!(n == 1 || a.rem_euclid(n).gcd(&n) == 1);
        let mut poly = vec![BigRational::zero(); self.order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[((j as i64) * a).rem_euclid(n) as usize] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this number is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Floating point value, for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, c)| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * j as f64 / n;
            (re + v * t.cos(), im + v * t.sin())
        })
    }

    /// Canonical key at the stored order. Only meaningful for comparing values
    /// that are known to share an order, e.g. entries of generated matrix groups.
    pub fn key(&self) -> (u32, Vec<BigRational>) {
        (self.order, self.coeffs.clone())
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.lift_pair(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl Add for &CycNumber {
    type Output = CycNumber;

    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (mut a, b) = self.lift_pair(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;

    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (mut a, b) = self.lift_pair(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;

    fn neg(self) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;

    fn mul(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = self.lift_pair(rhs);
        if a.order == 1 {
            return CycNumber::rational(&a.coeffs[0] * &b.coeffs[0]);
        }
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycNumber::from_poly(a.order, poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> Self {
        iter.fold(CycNumber::zero(), |acc, x| &acc + &x)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formal sums such as `1/2*z8^1 - 1/2*z8^3`; rationals print as `p/q`.
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if j == 0 {
                fmt_rational(&mag)
            } else if mag.is_one() {
                format!("z{}^{}", self.order, j)
            } else {
                format!("{}*z{}^{}", fmt_rational(&mag), self.order, j)
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for CycNumber {
    type Err = CyclotomicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| CyclotomicError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            let after_slash = current.ends_with('/') || current.ends_with('^');
            if (ch == '+' || ch == '-') && !after_slash {
                if i > 0 {
                    if current.is_empty() {
                        return Err(err("dangling sign"));
                    }
                    terms.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((negative, current));

        let mut acc = CycNumber::zero();
        for (neg, t) in terms {
            let (coef_part, root) = match t.split_once('z') {
                Some((c, r)) => (c.strip_suffix('*').unwrap_or(c), Some(r)),
                None => (t.as_str(), None),
            };
            let mut coef = if coef_part.is_empty() {
                if root.is_none() {
                    return Err(err("empty term"));
                }
                BigRational::one()
            } else {
                coef_part
                    .parse::<BigRational>()
                    .map_err(|_| err(&format!("bad coefficient {coef_part:?}")))?
            };
            if neg {
                coef = -coef;
            }
            let value = match root {
                None => CycNumber::rational(coef),
                Some(r) => {
                    let (n, k) = match r.split_once('^') {
                        Some((n, k)) => (n, k),
                        None => (r, "1"),
                    };
                    let n: u32 = n.parse().map_err(|_| err(&format!("bad order {n:?}")))?;
                    let k: i64 = k.parse().map_err(|_| err(&format!("bad exponent {k:?}")))?;
                    if n == 0 {
                        return Err(err("order must be positive"));
                    }
                    CycNumber::from_terms(n, &[(k, coef)])?
                }
            };
            acc = &acc + &value;
        }
        Ok(acc)
    }
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
