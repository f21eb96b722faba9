//! The ring A = F_q[t]: canonical dense polynomials, the δ-codec and the
//! total order it induces, plus the factorial and valuation formulas.

mod factorial;
mod parse;

pub use factorial::{factorial_direct, factorial_product, factorial_residue, valuation, valuation_of_factorial, valuation_of_factorial_u64};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Arbitrary-precision natural number used for δ values and valuations.
pub type Nat = BigUint;

/// A polynomial over F_q, stored as ascending coefficient indices with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficient indices, trimming
    /// trailing zeros. Fails if an index is not below q.
    pub fn new(field: &FieldSpec, coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c as u64 >= field.q()) {
            return Err(Error::ElementOutOfRange { index: bad as u64, q: field.q() });
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, FieldElement::ONE)
    }

    pub fn constant(field: &FieldSpec, c: FieldElement) -> Poly {
        Poly::from_raw(field, vec![c.0])
    }

    /// The monomial `t^n`.
    pub fn t_pow(field: &FieldSpec, n: usize) -> Poly {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        Poly { field: field.clone(), coeffs }
    }

    /// `t + c`.
    pub fn linear(field: &FieldSpec, c: FieldElement) -> Poly {
        Poly::from_raw(field, vec![c.0, 1])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree of a non-zero polynomial; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `deg f` with the zero polynomial mapped to 0.
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The leading coefficient, `sign(f)`.
    pub fn sign(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| FieldElement(c))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// True when the constant term vanishes, i.e. `f ∈ tA`.
    pub fn divisible_by_t(&self) -> bool {
        self.coeffs.first().is_none_or(|&c| c == 0)
    }

    /// Leading coefficient and the monic polynomial it scales.
    pub fn monic_split(&self) -> Result<(FieldElement, Poly)> {
        let lead = self.sign().ok_or(Error::ZeroPolynomial)?;
        Ok((lead, self.scale(self.field.inv(lead.0))))
    }

    pub fn to_monic(&self) -> Poly {
        match self.sign() {
            None => self.clone(),
            Some(lead) => self.scale(self.field.inv(lead.0)),
        }
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Poly { field: self.field.clone(), coeffs }
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (o, &s) in out.iter_mut().zip(short.iter()) {
            *o = f.add(*o, s);
        }
        Poly::from_raw(f, out)
    }

    fn sub_unchecked(&self, other: &Poly) -> Poly {
        self.add_unchecked(&other.neg_ref())
    }

    fn neg_ref(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        Poly { field: self.field.clone(), coeffs }
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly { field: self.field.clone(), coeffs: mul_coeffs(&self.field, &self.coeffs, &other.coeffs) }
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = div_rem_coeffs(&self.field, &self.coeffs, &divisor.coeffs);
        Ok((Poly::from_raw(&self.field, q), Poly::from_raw(&self.field, r)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        rem_in_place(&self.field, &mut r, &divisor.coeffs);
        Ok(Poly::from_raw(&self.field, r))
    }

    /// Returns the quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        if self.is_zero() {
            return Ok(other.is_zero());
        }
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            rem_in_place(f, &mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Poly::from_raw(f, a).to_monic())
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &Nat, modulus: &Poly) -> Result<Poly> {
        self.check_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let mut base = self.coeffs.clone();
        rem_in_place(f, &mut base, &modulus.coeffs);
        let mut acc: Vec<u32> = vec![1];
        rem_in_place(f, &mut acc, &modulus.coeffs);
        for i in (0..e.bits()).rev() {
            acc = mul_coeffs(f, &acc, &acc);
            rem_in_place(f, &mut acc, &modulus.coeffs);
            if e.bit(i) {
                acc = mul_coeffs(f, &acc, &base);
                rem_in_place(f, &mut acc, &modulus.coeffs);
            }
        }
        Ok(Poly::from_raw(f, acc))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as u64)))
            .collect();
        Poly::from_raw(f, coeffs)
    }

    /// δ(f) = Σ i_j q^j, with δ(0) = 0.
    pub fn delta(&self) -> Nat {
        let q = Nat::from(self.field.q());
        self.coeffs.iter().rev().fold(Nat::zero(), |acc, &c| acc * &q + Nat::from(c))
    }

    /// δ(f) when it fits in a `u64`.
    pub fn delta_u64(&self) -> Option<u64> {
        let q = self.field.q();
        self.coeffs
            .iter()
            .rev()
            .try_fold(0u64, |acc, &c| acc.checked_mul(q)?.checked_add(c as u64))
    }

    /// δ^{-1}(m): the polynomial whose coefficient indices are the q-adic
    /// digits of `m`.
    pub fn from_delta(field: &FieldSpec, m: &Nat) -> Poly {
        if let Some(small) = m.to_u64() {
            return Poly::from_delta_u64(field, small);
        }
        let q = Nat::from(field.q());
        let mut rest = m.clone();
        let mut coeffs = Vec::new();
        while !rest.is_zero() {
            let digit = &rest % &q;
            coeffs.push(digit.to_u32().expect("digit below q"));
            rest /= &q;
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_delta_u64(field: &FieldSpec, mut m: u64) -> Poly {
        let q = field.q();
        let mut coeffs = Vec::new();
        while m > 0 {
            coeffs.push((m % q) as u32);
            m /= q;
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Compares by δ without building the integers: degree first, then
    /// coefficient indices from the top down.
    pub fn compare(&self, other: &Poly) -> Result<Ordering> {
        self.check_field(other)?;
        Ok(self.delta_cmp(other))
    }

    pub(crate) fn delta_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Evaluates at a field element (Horner).
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        FieldElement(self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x.0), c)))
    }
}

/// δ-order comparison; see [`Poly::compare`].
pub fn poly_compare(f: &Poly, g: &Poly) -> Result<Ordering> {
    f.compare(g)
}

pub fn delta(f: &Poly) -> Nat {
    f.delta()
}

pub fn delta_inv(field: &FieldSpec, m: &Nat) -> Poly {
    Poly::from_delta(field, m)
}

/// Polynomials of one field are ordered by δ; different fields are ordered
/// by their parameters first.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.cmp(&other.field).then_with(|| self.delta_cmp(other))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands belong to different fields; use the
        /// `try_` method for a checked variant.
        impl $trait<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }

        impl $trait<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self.to_literal())
    }
}

pub(crate) fn mul_coeffs(f: &FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Reduces `a` modulo the non-zero `b` in place, leaving a trimmed remainder.
pub(crate) fn rem_in_place(f: &FieldSpec, a: &mut Vec<u32>, b: &[u32]) {
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let factor = f.neg(f.mul(top, lead_inv));
            let shift = a.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate().take(db) {
                if bc != 0 {
                    a[shift + i] = f.add(a[shift + i], f.mul(factor, bc));
                }
            }
        }
        a.pop();
    }
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn div_rem_coeffs(f: &FieldSpec, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = f.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u32; a.len() - db];
    while r.len() > db {
        let top = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if top != 0 {
            let factor = f.mul(top, lead_inv);
            q[shift] = factor;
            let neg = f.neg(factor);
            for (i, &bc) in b.iter().enumerate().take(db) {
                if bc != 0 {
                    r[shift + i] = f.add(r[shift + i], f.mul(neg, bc));
                }
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    (q, r)
}
