//! Exact arithmetic in F_q, q = p^k.
//!
//! Elements are identified with indices `0..q`. For a prime field index `i`
//! is the residue `i mod p`. For `k > 1` the base-`p` digits of `i` are the
//! coordinates of the element in the power basis `1, x, …, x^{k-1}` modulo
//! the field modulus. Index 0 is zero and index 1 is one in both cases, so
//! the enumeration `a_0 = 0, a_1 = 1, a_2, …` is fixed and reproducible.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::DEFAULT_Q_CAP;
use crate::literal;

/// Fields small enough for full addition and multiplication tables.
const TABLE_LIMIT: u64 = 256;

/// Conway polynomials (ascending coefficients over F_p) for the built-in q.
const CONWAY: &[(u64, u64, u32, &[u64])] = &[
    (4, 2, 2, &[1, 1, 1]),
    (8, 2, 3, &[1, 1, 0, 1]),
    (9, 3, 2, &[2, 2, 1]),
    (16, 2, 4, &[1, 1, 0, 0, 1]),
    (25, 5, 2, &[2, 4, 1]),
    (27, 3, 3, &[1, 2, 0, 1]),
];

/// An element of F_q, by its index in the canonical enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

enum Arith {
    Tables { add: Vec<u32>, mul: Vec<u32> },
    Prime,
    LogExp { log: Vec<u32>, exp: Vec<u32> },
}

struct FieldData {
    p: u64,
    k: u32,
    q: u64,
    modulus: Option<Vec<u64>>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    arith: Arith,
}

/// A validated finite field. Cheap to clone; all clones share the
/// precomputed arithmetic tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn default_modulus(q: u64) -> Option<&'static [u64]> {
    CONWAY.iter().find(|row| row.0 == q).map(|row| row.3)
}

/// Builds F_{p^k}; see [`FieldSpec::new`].
pub fn make_field(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    FieldSpec::new(p, k, modulus)
}

impl FieldSpec {
    /// Validates `p`, `k` and the modulus. With `k > 1` and no modulus the
    /// built-in Conway polynomial for `q` is used if one exists.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self> {
        Self::with_cap(p, k, modulus, DEFAULT_Q_CAP)
    }

    pub fn with_cap(p: u64, k: u32, modulus: Option<&[u64]>, q_cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= q_cap && q <= u32::MAX as u64)
            .ok_or_else(|| Error::cap("q", format!("{p}^{k}"), q_cap))?;
        let modulus = match (k, modulus) {
            (1, Some(_)) => return Err(Error::UnexpectedModulus(p)),
            (1, None) => None,
            (_, Some(m)) => {
                validate_modulus(p, k, m)?;
                Some(m.to_vec())
            }
            (_, None) => Some(default_modulus(q).ok_or(Error::MissingModulus(q))?.to_vec()),
        };
        Ok(FieldSpec(Arc::new(build(p, k, q, modulus))))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_q with the built-in modulus when `q` is not prime.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::new(p, k, None)
    }

    /// Parses `"q=9,modulus=x^2+2x+2"`, `"q=7"` or a bare `"7"`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut q = None;
        let mut modulus = None;
        for part in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part.split_once('=') {
                Some(("q", v)) => q = Some(v.trim().to_string()),
                Some(("modulus", v)) => modulus = Some(v.trim().to_string()),
                Some((key, _)) => return Err(Error::Parse(format!("unknown field key '{key}'"))),
                None if q.is_none() => q = Some(part.to_string()),
                None => return Err(Error::Parse(format!("unexpected field token '{part}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("field literal needs q".into()))?;
        let q: u64 = q.parse().map_err(|_| Error::Parse(format!("bad q '{q}'")))?;
        Self::from_q_and_modulus(q, modulus.as_deref())
    }

    /// `q` plus an optional modulus literal over F_p such as `x^2+2x+2`.
    pub fn from_q_and_modulus(q: u64, modulus: Option<&str>) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        match modulus {
            None => Self::new(p, k, None),
            Some(lit) => {
                let coeffs = parse_modulus(p, lit)?;
                Self::new(p, k, Some(&coeffs))
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.0.modulus.as_deref()
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.q() {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q() })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q() as u32).map(FieldElement)
    }

    pub fn same_field(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }

    fn key(&self) -> (u64, u32, Option<&[u64]>) {
        (self.0.p, self.0.k, self.0.modulus.as_deref())
    }

    pub fn fe_add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add(a.0, b.0))
    }

    pub fn fe_sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.sub(a.0, b.0))
    }

    pub fn fe_mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul(a.0, b.0))
    }

    pub fn fe_neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg(a.0))
    }

    pub fn fe_inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(FieldElement(self.inv(a.0)))
    }

    pub fn fe_pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.pow(a.0, e))
    }

    /// Renders an element as `i` for prime fields and `a<i>` otherwise.
    pub fn format_element(&self, a: FieldElement) -> String {
        if self.is_prime_field() {
            a.0.to_string()
        } else {
            format!("a{}", a.0)
        }
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let d = &*self.0;
        match &d.arith {
            Arith::Tables { add, .. } => add[(a as usize) * d.q as usize + b as usize],
            Arith::Prime => {
                let s = a as u64 + b as u64;
                (if s >= d.p { s - d.p } else { s }) as u32
            }
            Arith::LogExp { .. } => add_digits(d.p, d.k, a, b),
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul(a, b)
    }

    /// Multiplicative inverse; index 0 maps to 0.
    #[inline]
    pub(crate) fn inv(&self, a: u32) -> u32 {
        self.0.inv[a as usize]
    }

    pub(crate) fn pow(&self, a: u32, e: u64) -> u32 {
        self.0.pow(a, e)
    }

    /// The unique `b` with `b^p = a`.
    pub(crate) fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, self.q() / self.p())
    }

    /// Element with the given residue mod p (the prime subfield image of `n`).
    pub(crate) fn from_int(&self, n: u64) -> u32 {
        (n % self.p()) as u32
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for FieldSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.q())?;
        if let Some(m) = self.modulus() {
            write!(f, ",modulus={}", literal::format_terms(m, 'x', false))?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s)
    }
}

impl FieldData {
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Tables { mul, .. } => mul[(a as usize) * self.q as usize + b as usize],
            Arith::Prime => ((a as u64 * b as u64) % self.p) as u32,
            Arith::LogExp { log, exp } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let s = log[a as usize] as u64 + log[b as usize] as u64;
                    exp[(s % (self.q - 1)) as usize]
                }
            }
        }
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn parse_modulus(p: u64, lit: &str) -> Result<Vec<u64>> {
    let terms = literal::parse_terms(lit)?;
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut coeffs = vec![0u64; deg + 1];
    for (c, d) in terms {
        if c >= p {
            return Err(Error::Parse(format!("modulus coefficient {c} is not below p = {p}")));
        }
        coeffs[d] = (coeffs[d] + c) % p;
    }
    Ok(coeffs)
}

fn validate_modulus(p: u64, k: u32, m: &[u64]) -> Result<()> {
    if m.len() != k as usize + 1 {
        return Err(Error::InvalidModulus(format!("expected degree {k}, got {} coefficients", m.len())));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus(format!("coefficients must lie in 0..{p}")));
    }
    if m[k as usize] != 1 {
        return Err(Error::InvalidModulus("modulus must be monic".into()));
    }
    if !irreducible_over_prime(p, m) {
        return Err(Error::InvalidModulus(format!(
            "{} is reducible over F_{p}",
            literal::format_terms(m, 'x', false)
        )));
    }
    Ok(())
}

/// Exhaustive check that the monic `m` has no monic factor of degree at most
/// `deg m / 2` over F_p.
fn irreducible_over_prime(p: u64, m: &[u64]) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if rem_mod_p(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(v: &[u64], p: u64) -> u32 {
    v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
}

/// Remainder of `a` modulo the monic `b` over F_p.
fn rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * bc) % p) % p;
        }
        r.pop();
    }
    r
}

fn add_digits(p: u64, k: u32, a: u32, b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a as u64, b as u64);
    let (mut out, mut place) = (0u64, 1u64);
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out as u32
}

fn neg_digits(p: u64, k: u32, a: u32) -> u32 {
    let mut a = a as u64;
    let (mut out, mut place) = (0u64, 1u64);
    for _ in 0..k {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out as u32
}

/// Product of two extension-field elements through their coordinate vectors.
fn mul_coords(p: u64, m: &[u64], a: u32, b: u32) -> u32 {
    let k = m.len() - 1;
    let av = digits(a as u64, p, k);
    let bv = digits(b as u64, p, k);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in av.iter().enumerate() {
        for (j, &y) in bv.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = rem_mod_p(&prod, m, p);
    r.resize(k, 0);
    undigits(&r, p)
}

fn build(p: u64, k: u32, q: u64, modulus: Option<Vec<u64>>) -> FieldData {
    let qs = q as usize;
    let neg: Vec<u32> = (0..q as u32)
        .map(|a| if k == 1 { ((p - a as u64) % p) as u32 } else { neg_digits(p, k, a) })
        .collect();
    let raw_mul = |a: u32, b: u32| -> u32 {
        match &modulus {
            None => ((a as u64 * b as u64) % p) as u32,
            Some(m) => mul_coords(p, m, a, b),
        }
    };

    let arith = if q <= TABLE_LIMIT {
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                let i = a as usize * qs + b as usize;
                add[i] = if k == 1 { ((a as u64 + b as u64) % p) as u32 } else { add_digits(p, k, a, b) };
                mul[i] = raw_mul(a, b);
            }
        }
        Arith::Tables { add, mul }
    } else if k == 1 {
        Arith::Prime
    } else {
        let g = (2..q as u32)
            .find(|&g| multiplicative_order(g, q, &raw_mul) == q - 1)
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; qs - 1];
        let mut log = vec![0u32; qs];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = raw_mul(x, g);
        }
        Arith::LogExp { log, exp }
    };

    let mut data = FieldData { p, k, q, modulus, neg, inv: Vec::new(), arith };
    data.inv = (0..q as u32).map(|a| if a == 0 { 0 } else { data.pow(a, q - 2) }).collect();
    data
}

fn multiplicative_order(g: u32, q: u64, mul: &impl Fn(u32, u32) -> u32) -> u64 {
    let mut x = g;
    let mut n = 1;
    while x != 1 {
        x = mul(x, g);
        n += 1;
        if n > q {
            break;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(i: u32) -> FieldElement {
        FieldElement(i)
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(make_field(2, 1, None).unwrap().q(), 2);
        let f4 = make_field(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.q(), 4);
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn make_field_rejects_bad_moduli() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(make_field(2, 2, Some(&[1, 0, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(make_field(2, 2, Some(&[1, 1, 2])), Err(Error::InvalidModulus(_))));
        assert!(matches!(make_field(3, 2, Some(&[2, 2, 2])), Err(Error::InvalidModulus(_))));
        assert_eq!(make_field(5, 1, Some(&[1, 1])).unwrap_err(), Error::UnexpectedModulus(5));
        assert_eq!(make_field(2, 5, None).unwrap_err(), Error::MissingModulus(32));
        assert!(make_field(2, 5, Some(&[1, 0, 1, 0, 0, 1])).is_ok());
        assert!(matches!(make_field(2, 20, None), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn element_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.fe_add(fe(1), fe(2)), fe(0));
        assert_eq!(f3.fe_mul(fe(2), fe(2)), fe(1));
        let f4 = FieldSpec::of_order(4).unwrap();
        assert_eq!(f4.fe_add(fe(2), fe(3)), fe(1));
        assert_eq!(f4.fe_mul(fe(2), fe(2)), fe(3));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.fe_inv(fe(2)).unwrap(), fe(3));
        assert_eq!(f5.fe_inv(fe(0)), Err(Error::InverseOfZero));
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FieldSpec::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.fe_add(FieldElement::ZERO, a), a);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
            let f = FieldSpec::of_order(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.fe_mul(FieldElement::ONE, a), a);
                assert_eq!(f.fe_add(a, f.fe_neg(a)), FieldElement::ZERO);
                if a != FieldElement::ZERO {
                    let inv = f.fe_inv(a).unwrap();
                    assert_eq!(f.fe_mul(a, inv), FieldElement::ONE, "q={q}");
                    assert_eq!(f.fe_inv(inv).unwrap(), a);
                }
                for &b in &els {
                    assert_eq!(f.fe_add(a, b), f.fe_add(b, a));
                    assert_eq!(f.fe_mul(a, b), f.fe_mul(b, a));
                    for &c in &els {
                        assert_eq!(f.fe_add(f.fe_add(a, b), c), f.fe_add(a, f.fe_add(b, c)));
                        assert_eq!(f.fe_mul(f.fe_mul(a, b), c), f.fe_mul(a, f.fe_mul(b, c)));
                        assert_eq!(
                            f.fe_mul(a, f.fe_add(b, c)),
                            f.fe_add(f.fe_mul(a, b), f.fe_mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn builtin_moduli_are_primitive() {
        for &(q, p, k, m) in CONWAY {
            let spec = FieldSpec::new(p, k, None).unwrap();
            assert_eq!(spec.modulus().unwrap(), m);
            // x has index p
            let x = p as u32;
            let order = multiplicative_order(x, q, &|a, b| spec.mul(a, b));
            assert_eq!(order, q - 1, "q={q}");
        }
    }

    #[test]
    fn large_fields_use_log_tables_consistently() {
        let big = FieldSpec::new(2, 10, Some(&[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let raw = big.modulus().unwrap().to_vec();
        for (a, b) in [(3u32, 700u32), (1023, 1023), (512, 2), (0, 77)] {
            assert_eq!(big.mul(a, b), mul_coords(2, &raw, a, b));
        }
        let p = FieldSpec::prime(65521).unwrap();
        assert_eq!(p.fe_mul(fe(65520), fe(65520)), fe(1));
        assert_eq!(p.fe_mul(fe(2), p.fe_inv(fe(2)).unwrap()), fe(1));
    }

    #[test]
    fn literals_round_trip() {
        let f9 = FieldSpec::parse("q=9,modulus=x^2+2x+2").unwrap();
        assert_eq!(f9.to_string(), "q=9,modulus=x^2+2x+2");
        assert_eq!(f9, FieldSpec::of_order(9).unwrap());
        assert_eq!(FieldSpec::parse("q=7").unwrap().to_string(), "q=7");
        assert_eq!(FieldSpec::parse("5").unwrap().q(), 5);
        assert!(FieldSpec::parse("q=6").is_err());
        assert!(FieldSpec::parse("q=9,modulus=x^2+1,foo=1").is_err());
        assert_eq!(f9.format_element(fe(4)), "a4");
        assert_eq!(FieldSpec::prime(7).unwrap().format_element(fe(4)), "4");
    }
}
