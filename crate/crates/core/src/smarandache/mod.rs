//! The Smarandache function S(f): the δ-least `g` with `f | g!`.
//!
//! The closed form works on prime powers through the `b_j` representation
//! of the exponent and takes the δ-maximum over the factorization. Two
//! oracles of decreasing cost and increasing trust live in [`oracle`].

mod dynamics;
pub mod oracle;
mod rep;

pub use dynamics::{
    check_delta_contraction, check_delta_contraction_with, distance_to_fixed, distance_to_fixed_with, fixed_points, inverse_image_prime_powers, is_fixed_point,
    iteration_chain, s_iterate, Contraction, InverseImage,
};
pub use oracle::{s_oracle_definition, s_oracle_valuation};
pub use rep::{rep_compose, rep_decompose, repunit, RepDecomposition};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::{self, is_irreducible, CantorZassenhaus, Factorization, Factorizer, DEFAULT_SEED};
use crate::limits::Limits;
use crate::poly::{Nat, Poly};
use crate::registry::{Named, Registry};

/// δ(S(P^e)) for any irreducible `P` of degree `d` over F_q.
pub fn s_prime_power_delta(q: u64, d: u32, e: &Nat) -> Result<Nat> {
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let base = Nat::from(q).pow(d);
    let rep = rep_decompose(e, &base)?;
    Ok(rep.terms().iter().map(|(c, j)| c * base.pow(*j)).sum())
}

/// S(P^e) = δ⁻¹(Σ c_i q^{d j_i}) where `e = Σ c_i b_{j_i}` in base `q^d`.
pub fn s_prime_power(p: &Poly, e: &Nat) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.is_constant() || !is_irreducible(p)? {
        return Err(Error::NotIrreducible);
    }
    let d = p.deg() as u32;
    Ok(Poly::from_delta(p.field(), &s_prime_power_delta(p.field().q(), d, e)?))
}

/// δ(S(f)) from a factorization: the maximum over its prime powers.
pub fn s_delta_of(fz: &Factorization) -> Nat {
    let q = fz.field().q();
    fz.signature()
        .into_iter()
        .map(|(d, e)| s_prime_power_delta(q, d, &Nat::from(e)).expect("factorization has positive exponents"))
        .max()
        .unwrap_or_default()
}

/// S(f) with the default factorizer. S(0) = 0 and S(b) = 0 for constants.
pub fn s(f: &Poly) -> Poly {
    s_with(f, factor::default_factorizer()).expect("the default factorizer accepts every non-zero input")
}

/// S(f) with an explicit factorizer.
pub fn s_with(f: &Poly, factorizer: &dyn Factorizer) -> Result<Poly> {
    if f.is_constant() {
        return Ok(Poly::zero(f.field()));
    }
    let fz = factorizer.factorize(f)?;
    Ok(Poly::from_delta(f.field(), &s_delta_of(&fz)))
}

/// A way of computing S, selected by name at runtime.
pub trait SmarandacheStrategy: Named + Send + Sync {
    fn s(&self, f: &Poly) -> Result<Poly>;
}

/// The closed form over a pluggable factorizer.
pub struct ClosedForm {
    factorizer: Arc<dyn Factorizer>,
}

impl ClosedForm {
    pub fn new(factorizer: Arc<dyn Factorizer>) -> Self {
        ClosedForm { factorizer }
    }
}

impl Default for ClosedForm {
    fn default() -> Self {
        ClosedForm::new(Arc::new(CantorZassenhaus::new(DEFAULT_SEED)))
    }
}

impl Named for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }
}

impl SmarandacheStrategy for ClosedForm {
    fn s(&self, f: &Poly) -> Result<Poly> {
        s_with(f, self.factorizer.as_ref())
    }
}

/// Scans `g = δ⁻¹(0), δ⁻¹(1), …` testing `f | g!` directly.
pub struct DefinitionOracle {
    cap: u64,
}

impl DefinitionOracle {
    pub fn new(cap: u64) -> Self {
        DefinitionOracle { cap }
    }
}

impl Named for DefinitionOracle {
    fn name(&self) -> &'static str {
        "definition-oracle"
    }
}

impl SmarandacheStrategy for DefinitionOracle {
    fn s(&self, f: &Poly) -> Result<Poly> {
        oracle::s_oracle_definition_capped(f, self.cap)
    }
}

/// Scans `m = 0, 1, …` testing the factorial valuation formula.
pub struct ValuationOracle {
    cap: u64,
}

impl ValuationOracle {
    pub fn new(cap: u64) -> Self {
        ValuationOracle { cap }
    }
}

impl Named for ValuationOracle {
    fn name(&self) -> &'static str {
        "valuation-oracle"
    }
}

impl SmarandacheStrategy for ValuationOracle {
    fn s(&self, f: &Poly) -> Result<Poly> {
        oracle::s_oracle_valuation_capped(f, self.cap)
    }
}

/// `closed-form`, `definition-oracle` and `valuation-oracle`.
pub fn strategies(limits: &Limits, factorizer: Arc<dyn Factorizer>) -> Registry<dyn SmarandacheStrategy> {
    let mut reg: Registry<dyn SmarandacheStrategy> = Registry::new("S strategy");
    reg.register(Box::new(ClosedForm::new(factorizer)));
    reg.register(Box::new(DefinitionOracle::new(limits.definition_oracle_cap)));
    reg.register(Box::new(ValuationOracle::new(limits.valuation_oracle_cap)));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    fn n(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn prime_power_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        let t = p(&f2, "t");
        assert_eq!(s_prime_power(&t, &n(3)).unwrap(), p(&f2, "t^2"));
        assert_eq!(s_prime_power(&t, &n(3)).unwrap().delta(), n(4));
        let s32 = s_prime_power(&p(&f3, "t"), &n(2)).unwrap();
        assert_eq!(s32, p(&f3, "2*t"));
        assert_eq!(s32.delta(), n(6));
        assert_eq!(s_prime_power(&p(&f2, "t^2+t+1"), &n(1)).unwrap(), p(&f2, "t^2"));
    }

    #[test]
    fn prime_power_errors() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(s_prime_power(&p(&f2, "t^2+1"), &n(1)), Err(Error::NotIrreducible));
        assert_eq!(s_prime_power(&p(&f2, "t"), &n(0)), Err(Error::ZeroExponent));
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(s_prime_power(&p(&f3, "2*t"), &n(1)), Err(Error::NotMonic));
    }

    #[test]
    fn s_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(s(&p(&f2, "t^2+1")), p(&f2, "t^2"));
        assert_eq!(s(&p(&f2, "t^2+t")), p(&f2, "t"));
        assert_eq!(s(&Poly::zero(&f2)), Poly::zero(&f2));
        for q in [2u64, 3, 4, 5] {
            let field = FieldSpec::of_order(q).unwrap();
            let b = Poly::from_delta_u64(&field, q - 1);
            assert!(b.is_constant());
            assert!(s(&b).is_zero());
        }
    }

    #[test]
    fn registry_strategies_agree() {
        let f3 = FieldSpec::prime(3).unwrap();
        let reg = strategies(&Limits::default(), Arc::new(CantorZassenhaus::new(5)));
        assert_eq!(reg.names(), vec!["closed-form", "definition-oracle", "valuation-oracle"]);
        for m in 1..=60u64 {
            let f = Poly::from_delta_u64(&f3, m);
            let want = reg.get("closed-form").unwrap().s(&f).unwrap();
            for strat in reg.iter() {
                assert_eq!(strat.s(&f).unwrap(), want, "{} on {f}", strat.name());
            }
        }
    }
}
