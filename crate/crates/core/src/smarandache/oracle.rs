//! Scanning oracles for S, independent of the closed form.

use crate::error::{Error, Result};
use crate::factor;
use crate::limits::Limits;
use crate::poly::{factorial_residue, valuation_of_factorial_u64, Poly};

/// The first `g` in δ-order with `f | g!`, straight from the definition.
pub fn s_oracle_definition(f: &Poly) -> Result<Poly> {
    s_oracle_definition_capped(f, Limits::default().definition_oracle_cap)
}

pub fn s_oracle_definition_capped(f: &Poly, cap: u64) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    for m in 0..=cap {
        let g = Poly::from_delta_u64(field, m);
        if factorial_residue(&g, f, cap)?.is_zero() {
            return Ok(g);
        }
    }
    Err(Error::cap("delta of S(f)", format!("> {cap}"), cap))
}

/// The first `m` whose factorial valuations cover every prime power of `f`.
pub fn s_oracle_valuation(f: &Poly) -> Result<Poly> {
    s_oracle_valuation_capped(f, Limits::default().valuation_oracle_cap)
}

pub fn s_oracle_valuation_capped(f: &Poly, cap: u64) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    let q = field.q();
    let sig: Vec<(u32, u64)> = if f.is_constant() {
        Vec::new()
    } else {
        factor::factorize(f)?.signature().into_iter().map(|(d, e)| (d, e as u64)).collect()
    };
    for m in 0..=cap {
        if sig.iter().all(|&(d, e)| valuation_of_factorial_u64(d, m, q) >= e) {
            return Ok(Poly::from_delta_u64(field, m));
        }
    }
    Err(Error::cap("delta of S(f)", format!("> {cap}"), cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn definition_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(s_oracle_definition(&p(&f2, "t^3")).unwrap(), p(&f2, "t^2"));
        assert_eq!(s_oracle_definition(&p(&f2, "t+1")).unwrap(), p(&f2, "t"));
        assert_eq!(s_oracle_definition(&Poly::one(&f2)).unwrap(), Poly::zero(&f2));
        assert_eq!(s_oracle_definition(&Poly::zero(&f2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn definition_cap() {
        let f2 = FieldSpec::prime(2).unwrap();
        let err = s_oracle_definition_capped(&p(&f2, "t^5"), 4).unwrap_err();
        assert_eq!(err.kind(), "cap_exceeded");
    }

    #[test]
    fn valuation_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        let s5 = s_oracle_valuation(&p(&f2, "t^5")).unwrap();
        assert_eq!(s5.delta_u64(), Some(8));
        assert_eq!(s5, p(&f2, "t^3"));
        let s = s_oracle_valuation(&p(&f3, "t^2+2*t+1")).unwrap();
        assert_eq!(s.delta_u64(), Some(6));
        assert_eq!(s, p(&f3, "2*t"));
        assert_eq!(s_oracle_valuation(&p(&f2, "t^2+t+1")).unwrap(), p(&f2, "t^2"));
    }

    #[test]
    fn valuation_cap() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(s_oracle_valuation_capped(&p(&f2, "t^5"), 7).unwrap_err().kind(), "cap_exceeded");
        assert!(s_oracle_valuation_capped(&p(&f2, "t^5"), 8).is_ok());
    }
}
