//! Factorization in F_q[t] and the multiplicative statistics built on it:
//! ω(f), τ(f) and the maximal monic irreducible factor 𝒫(f).
//!
//! Two interchangeable [`Factorizer`]s are registered by name:
//! `trial` (division by sieved irreducibles) and `cantor-zassenhaus`
//! (squarefree, distinct-degree and seeded equal-degree splitting). Both
//! return the same canonical [`Factorization`].

mod cache;
mod cantor_zassenhaus;
mod sieve;
mod trial;

pub use cache::CachedFactorizer;
pub use cantor_zassenhaus::CantorZassenhaus;
pub use sieve::{count_monic_irreducibles, irreducibles_of_degree, sieve_irreducibles, IrreducibleTable};
pub use trial::TrialDivision;
pub(crate) use trial::trial_divide;

use std::collections::BTreeMap;
use std::sync::LazyLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{Nat, Poly};
use crate::registry::{Named, Registry};

/// Seed used when none is configured.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_5a4a_0001;

/// `unit · ∏ P_i^{e_i}` with distinct monic irreducible `P_i` sorted
/// ascending in δ-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    field: FieldSpec,
    unit: FieldElement,
    factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Canonicalizes: merges repeated factors and sorts them.
    pub fn new(field: &FieldSpec, unit: FieldElement, factors: impl IntoIterator<Item = (Poly, u32)>) -> Self {
        let mut merged: BTreeMap<Poly, u32> = BTreeMap::new();
        for (p, e) in factors {
            if e > 0 {
                *merged.entry(p).or_insert(0) += e;
            }
        }
        Factorization { field: field.clone(), unit, factors: merged.into_iter().collect() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn unit(&self) -> FieldElement {
        self.unit
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    /// ω(f): number of distinct monic irreducible factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// τ(f) = ∏ (e_i + 1): number of distinct monic divisors.
    pub fn tau(&self) -> Nat {
        self.factors.iter().fold(Nat::from(1u32), |acc, (_, e)| acc * BigUint::from(e + 1))
    }

    /// 𝒫(f), the δ-largest monic irreducible factor. `None` for units.
    pub fn max_irreducible(&self) -> Option<&Poly> {
        self.factors.last().map(|(p, _)| p)
    }

    /// `(deg P_i, e_i)` for every factor, in factor order.
    pub fn signature(&self) -> Vec<(u32, u32)> {
        self.factors.iter().map(|(p, e)| (p.deg() as u32, *e)).collect()
    }

    pub fn reconstruct(&self) -> Poly {
        let mut acc = Poly::constant(&self.field, self.unit);
        for (p, e) in &self.factors {
            acc = &acc * &p.pow(*e);
        }
        acc
    }

    pub fn to_json(&self) -> FactorizationJson {
        FactorizationJson {
            unit: self.unit.0,
            factors: self.factors.iter().map(|(p, e)| (p.to_literal(), *e)).collect(),
        }
    }

    pub fn from_json(field: &FieldSpec, json: &FactorizationJson) -> Result<Self> {
        let unit = field.element(json.unit as u64)?;
        let factors = json
            .factors
            .iter()
            .map(|(lit, e)| Poly::parse(field, lit).map(|p| (p, *e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization::new(field, unit, factors))
    }
}

/// Wire form: `{"unit": i, "factors": [["t+1", 2], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub unit: u32,
    pub factors: Vec<(String, u32)>,
}

pub trait Factorizer: Named + Send + Sync {
    /// Factors a non-zero polynomial.
    fn factorize(&self, f: &Poly) -> Result<Factorization>;
}

/// Registry holding `trial` and `cantor-zassenhaus`.
pub fn factorizers(seed: u64) -> Registry<dyn Factorizer> {
    let mut reg: Registry<dyn Factorizer> = Registry::new("factorization method");
    reg.register(Box::new(TrialDivision::default()));
    reg.register(Box::new(CantorZassenhaus::new(seed)));
    reg
}

static DEFAULT_FACTORIZER: LazyLock<CantorZassenhaus> = LazyLock::new(|| CantorZassenhaus::new(DEFAULT_SEED));

pub fn default_factorizer() -> &'static dyn Factorizer {
    &*DEFAULT_FACTORIZER
}

/// Factors with the default (Cantor–Zassenhaus) method.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    default_factorizer().factorize(f)
}

pub fn omega(f: &Poly) -> Result<usize> {
    Ok(factorize(f)?.omega())
}

pub fn tau(f: &Poly) -> Result<Nat> {
    Ok(factorize(f)?.tau())
}

/// 𝒫(f) for non-constant `f`.
pub fn max_irreducible_factor(f: &Poly) -> Result<Poly> {
    if f.is_constant() {
        return Err(if f.is_zero() { Error::ZeroPolynomial } else { Error::ConstantPolynomial });
    }
    Ok(factorize(f)?.max_irreducible().expect("non-constant input has a factor").clone())
}

/// Rabin's test: `f` of degree `n` is irreducible iff `t^{q^n} ≡ t (mod f)`
/// and `gcd(t^{q^{n/r}} - t, f) = 1` for every prime `r | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.to_monic();
    let field = f.field();
    let t = Poly::t_pow(field, 1);
    let q = Nat::from(field.q());
    let mut frob = Vec::with_capacity(n + 1);
    let mut h = t.clone();
    frob.push(h.clone());
    for _ in 0..n {
        h = h.pow_mod(&q, &f)?;
        frob.push(h.clone());
    }
    if frob[n] != t.rem(&f)? {
        return Ok(false);
    }
    for r in prime_divisors(n) {
        let g = (&frob[n / r] - &t).gcd(&f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits off the unit and rejects zero; shared by the factorizers.
pub(crate) fn split_unit(f: &Poly) -> Result<(FieldElement, Poly)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    f.monic_split()
}
