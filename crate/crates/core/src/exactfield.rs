//! Arbitrary-precision rational arithmetic and the cyclotomic field `Q(xi_n)`.
//!
//! Elements of `Q(xi_n)` are stored as length-`n` rational coefficient
//! vectors modulo `x^n - 1`, so multiplication is plain cyclic convolution.
//! That representation is not canonical — the quotient ring `Q[x]/(x^n - 1)`
//! has zero divisors — so equality and zero tests always reduce modulo the
//! n-th cyclotomic polynomial `Phi_n`, the minimal polynomial of
//! `xi = exp(2*pi*i/n)`. Every operation is exact; floating point only
//! appears in [`CycloElement::to_complex`], a diagnostic bridge.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from field-level operations.
#[derive(Debug, Error)]
pub enum FieldError {
    /// Inversion of the zero element of `Q(xi_n)`.
    #[error("division by zero in Q(xi_{0})")]
    DivisionByZero(usize),
    /// A rational literal that is not `p` or `p/q`.
    #[error("invalid rational literal `{0}`: expected `p` or `p/q` with integer p and nonzero q")]
    InvalidRational(String),
}

/// Exact rational from integer numerator and denominator.
///
/// Panics if `den == 0`; the result is stored in lowest terms with a
/// positive denominator (the normal form `num_rational` maintains).
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::InvalidRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// `[numerator, denominator]` decimal-string pair used in JSON payloads.
pub fn rational_to_pair(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

/// Inverse of [`rational_to_pair`].
pub fn rational_from_pair(pair: &[String; 2]) -> Result<BigRational, FieldError> {
    let bad = || FieldError::InvalidRational(format!("{}/{}", pair[0], pair[1]));
    let num: BigInt = pair[0].parse().map_err(|_| bad())?;
    let den: BigInt = pair[1].parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

// ---------------------------------------------------------------------------
// Dense rational polynomials, used for Phi_n construction, reduction and
// extended-euclidean inversion. Internal to this module.
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `Q`, ascending coefficients, trailing
/// zeros trimmed; the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct QPoly(Vec<BigRational>);

impl QPoly {
    pub(crate) fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub(crate) fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    fn constant(c: BigRational) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// `x^n - 1`.
    fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[0] = -BigRational::one();
        coeffs[n] = BigRational::one();
        QPoly(coeffs)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub(crate) fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(out)
    }

    fn sub(&self, rhs: &QPoly) -> QPoly {
        let len = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            let b = rhs.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            out.push(a - b);
        }
        QPoly::from_coeffs(out)
    }

    fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// True iff `div` divides `self` exactly; remainder-only division.
    pub(crate) fn divides_exactly(&self, div: &QPoly) -> bool {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.0.len() - 1;
        if self.0.len() <= dd {
            return self.is_zero();
        }
        let lead_inv = div.0[dd].recip();
        let mut rem = self.0.clone();
        for d in (dd..rem.len()).rev() {
            if rem[d].is_zero() {
                continue;
            }
            let q = &rem[d] * &lead_inv;
            for (i, c) in div.0.iter().take(dd).enumerate() {
                if !c.is_zero() {
                    let delta = &q * c;
                    rem[d - dd + i] -= delta;
                }
            }
        }
        rem[..dd].iter().all(Zero::is_zero)
    }

    /// Quotient and remainder; panics if `div` is zero.
    pub(crate) fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.0.len() - 1;
        if self.0.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let lead_inv = div.0[dd].recip();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for d in (dd..rem.len()).rev() {
            if rem[d].is_zero() {
                continue;
            }
            let q = &rem[d] * &lead_inv;
            for (i, c) in div.0.iter().enumerate() {
                if !c.is_zero() {
                    let delta = &q * c;
                    rem[d - dd + i] -= delta;
                }
            }
            quot[d - dd] = q;
        }
        rem.truncate(dd);
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Extended euclidean algorithm: returns `(g, u, v)` with
    /// `g = u*self + v*other`, `g` monic unless zero.
    pub(crate) fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut u0 = QPoly::constant(BigRational::one());
        let mut u1 = QPoly::zero();
        let mut v0 = QPoly::zero();
        let mut v1 = QPoly::constant(BigRational::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if let Some(d) = r0.degree() {
            let norm = r0.0[d].recip();
            r0 = r0.scale(&norm);
            u0 = u0.scale(&norm);
            v0 = v0.scale(&norm);
        }
        (r0, u0, v0)
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// The n-th cyclotomic polynomial `Phi_n`, monic over `Z` with degree
/// `phi(n)` (Euler's totient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPolynomial {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicPolynomial {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending integer coefficients; monic.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    #[cfg(test)]
    fn to_qpoly(&self) -> QPoly {
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for CyclotomicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn divisors(n: usize) -> Vec<usize> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

fn euler_totient(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

type PhiEntry = Arc<(CyclotomicPolynomial, QPoly)>;

// Small orders hit a lock-free OnceLock table; zero tests call this on
// every canonicalisation, so the fallback mutex map is for rare large n
// only.
const PHI_TABLE_LEN: usize = 64;
static PHI_TABLE: [OnceLock<PhiEntry>; PHI_TABLE_LEN] =
    [const { OnceLock::new() }; PHI_TABLE_LEN];

fn phi_overflow_cache() -> &'static Mutex<HashMap<usize, PhiEntry>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, PhiEntry>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_phi(n: usize) -> PhiEntry {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, divided out exactly.
    let mut quotient = QPoly::x_pow_minus_one(n);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = phi_cached(d);
        let (q, r) = quotient.divrem(&phi_d.1);
        assert!(r.is_zero(), "cyclotomic division left a remainder at n={n}, d={d}");
        quotient = q;
    }
    let coeffs: Vec<BigInt> = quotient
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "non-integer coefficient in Phi_{n}");
            c.to_integer()
        })
        .collect();
    assert_eq!(coeffs.len() - 1, euler_totient(n), "deg Phi_{n} != phi({n})");
    Arc::new((CyclotomicPolynomial { order: n, coeffs }, quotient))
}

fn phi_cached(n: usize) -> PhiEntry {
    if n < PHI_TABLE_LEN {
        return Arc::clone(PHI_TABLE[n].get_or_init(|| compute_phi(n)));
    }
    if let Some(hit) = phi_overflow_cache().lock().unwrap().get(&n) {
        return Arc::clone(hit);
    }
    let entry = compute_phi(n);
    phi_overflow_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&entry));
    entry
}

/// Compute `Phi_n` by exact division of `x^n - 1` by the product of `Phi_d`
/// over proper divisors `d` of `n`. Total for `n >= 1`; results are cached
/// per process.
pub fn cyclotomic_polynomial(n: usize) -> CyclotomicPolynomial {
    assert!(n >= 1, "cyclotomic_polynomial requires n >= 1");
    phi_cached(n).0.clone()
}

// ---------------------------------------------------------------------------
// CycloElement
// ---------------------------------------------------------------------------

/// An element of `Q(xi_n)` as the residue of `sum_k c_k x^k` (`k < n`)
/// under `x -> xi = exp(2*pi*i/n)`.
///
/// The coefficient vector is a representative modulo `x^n - 1`, so two
/// structurally different vectors can denote the same field element;
/// [`PartialEq`] and [`CycloElement::is_zero`] compare modulo `Phi_n`.
/// Binary operations panic if the orders differ.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "CycloElementRepr", try_from = "CycloElementRepr")]
pub struct CycloElement {
    order: usize,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct CycloElementRepr {
    n: usize,
    coeffs: Vec<[String; 2]>,
}

impl From<CycloElement> for CycloElementRepr {
    fn from(e: CycloElement) -> Self {
        CycloElementRepr {
            n: e.order,
            coeffs: e.coeffs.iter().map(rational_to_pair).collect(),
        }
    }
}

impl TryFrom<CycloElementRepr> for CycloElement {
    type Error = String;

    fn try_from(repr: CycloElementRepr) -> Result<Self, String> {
        if repr.n < 2 {
            return Err(format!("cyclotomic order must be >= 2, got {}", repr.n));
        }
        if repr.coeffs.len() != repr.n {
            return Err(format!(
                "expected {} coefficients, got {}",
                repr.n,
                repr.coeffs.len()
            ));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|p| rational_from_pair(p).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycloElement {
            order: repr.n,
            coeffs,
        })
    }
}

impl CycloElement {
    /// Wrap a length-`order` coefficient vector. Panics unless
    /// `order >= 2` and `coeffs.len() == order`.
    pub fn new(order: usize, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 2, "cyclotomic order must be >= 2, got {order}");
        assert_eq!(coeffs.len(), order, "coefficient vector must have length {order}");
        CycloElement { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        CycloElement::new(order, vec![BigRational::zero(); order])
    }

    pub fn one(order: usize) -> Self {
        CycloElement::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: usize, value: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); order];
        coeffs[0] = value;
        CycloElement::new(order, coeffs)
    }

    /// Small-integer coefficient vector, handy in tests and tables.
    pub fn from_ints(order: usize, ints: &[i64]) -> Self {
        assert!(ints.len() <= order, "too many coefficients for order {order}");
        let mut coeffs = vec![BigRational::zero(); order];
        for (k, v) in ints.iter().enumerate() {
            coeffs[k] = BigRational::from_integer(BigInt::from(*v));
        }
        CycloElement::new(order, coeffs)
    }

    /// `xi^e` with the exponent reduced modulo `n` (negative exponents wrap).
    pub fn root_power(order: usize, e: i64) -> Self {
        assert!(order >= 2, "cyclotomic order must be >= 2, got {order}");
        let k = e.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); order];
        coeffs[k] = BigRational::one();
        CycloElement { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True if every stored coefficient is literally zero. This is a
    /// representative-level check; see [`CycloElement::is_zero`] for the
    /// field-level test.
    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The single `(position, coefficient)` term if exactly one coefficient
    /// is structurally nonzero.
    pub(crate) fn single_term(&self) -> Option<(usize, &BigRational)> {
        let mut found = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((k, c));
            }
        }
        found
    }

    /// Exact zero test: true iff the representative polynomial is divisible
    /// by `Phi_n`.
    pub fn is_zero(&self) -> bool {
        if self.is_structurally_zero() {
            return true;
        }
        let phi = phi_cached(self.order);
        QPoly::from_coeffs(self.coeffs.clone()).divides_exactly(&phi.1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return CycloElement::zero(self.order);
        }
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `xi^shift` (cyclic rotation of the coefficient vector).
    pub fn mul_root_power(&self, shift: i64) -> Self {
        let n = self.order;
        let s = shift.rem_euclid(n as i64) as usize;
        if s == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(k + s) % n] = c.clone();
            }
        }
        CycloElement { order: n, coeffs }
    }

    /// Multiplicative inverse via reduction modulo `Phi_n` and the extended
    /// euclidean algorithm over `Q[x]`, lifted back to the length-`n`
    /// representation.
    pub fn inverse(&self) -> Result<CycloElement, FieldError> {
        let n = self.order;
        let phi = phi_cached(n);
        let (_, reduced) = QPoly::from_coeffs(self.coeffs.clone()).divrem(&phi.1);
        if reduced.is_zero() {
            return Err(FieldError::DivisionByZero(n));
        }
        let (g, u, _) = reduced.xgcd(&phi.1);
        // Phi_n is irreducible over Q, so the gcd with any nonzero residue
        // is the constant 1 after normalization.
        debug_assert_eq!(g.degree(), Some(0));
        let mut coeffs = vec![BigRational::zero(); n];
        for (k, c) in u.coeffs().iter().enumerate() {
            coeffs[k] = c.clone();
        }
        Ok(CycloElement { order: n, coeffs })
    }

    /// Floating-point evaluation `sum_k c_k exp(2*pi*i*k/n)`; diagnostics
    /// only, never used for zero testing.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = std::f64::consts::TAU * k as f64 / n;
            acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
        }
        acc
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && (self - other).is_zero()
    }
}

fn assert_same_order(a: &CycloElement, b: &CycloElement) {
    assert_eq!(
        a.order, b.order,
        "cyclotomic order mismatch: {} vs {}",
        a.order, b.order
    );
}

impl Add for &CycloElement {
    type Output = CycloElement;

    fn add(self, rhs: &CycloElement) -> CycloElement {
        assert_same_order(self, rhs);
        CycloElement {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloElement {
    type Output = CycloElement;

    fn sub(self, rhs: &CycloElement) -> CycloElement {
        assert_same_order(self, rhs);
        CycloElement {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;

    fn neg(self) -> CycloElement {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CycloElement {
    type Output = CycloElement;

    /// Cyclic convolution of coefficient vectors (multiplication modulo
    /// `x^n - 1`).
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        assert_same_order(self, rhs);
        let n = self.order;
        // Single-term operands cover most of the orbit-matrix entries; a
        // rotation plus scale avoids the full convolution.
        if let Some((k, c)) = self.single_term() {
            return rhs.mul_root_power(k as i64).scale(c);
        }
        if let Some((k, c)) = rhs.single_term() {
            return self.mul_root_power(k as i64).scale(c);
        }
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % n] += a * b;
                }
            }
        }
        CycloElement { order: n, coeffs }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -&self
    }
}
