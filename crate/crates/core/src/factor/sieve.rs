use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::limits::Limits;
use crate::poly::{mul_coeffs, Nat, Poly};

/// Monic irreducibles grouped by degree, each group in δ-order. Degrees are
/// filled in bottom-up by striking products of lower-degree irreducibles
/// from the list of all monic polynomials.
#[derive(Debug, Clone)]
pub struct IrreducibleTable {
    field: FieldSpec,
    by_degree: Vec<Vec<Poly>>,
}

impl IrreducibleTable {
    pub fn new(field: &FieldSpec) -> Self {
        IrreducibleTable { field: field.clone(), by_degree: vec![Vec::new()] }
    }

    pub fn build(field: &FieldSpec, max_deg: usize, limits: &Limits) -> Result<Self> {
        let mut table = IrreducibleTable::new(field);
        table.extend_to(max_deg, limits)?;
        Ok(table)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    /// Irreducibles of exactly degree `d` (empty when `d` is not sieved yet).
    pub fn degree(&self, d: usize) -> &[Poly] {
        self.by_degree.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every sieved irreducible in δ-order.
    pub fn iter(&self) -> impl Iterator<Item = &Poly> {
        self.by_degree.iter().flatten()
    }

    pub fn extend_to(&mut self, max_deg: usize, limits: &Limits) -> Result<()> {
        let q = self.field.q();
        if max_deg > self.max_degree() {
            match q.checked_pow(max_deg as u32) {
                Some(count) if count <= limits.census_cap => {}
                _ => return Err(Error::cap("q^max_deg", format!("{q}^{max_deg}"), limits.census_cap)),
            }
        }
        while self.max_degree() < max_deg {
            let d = self.max_degree() + 1;
            let level = self.sieve_level(d);
            self.by_degree.push(level);
        }
        Ok(())
    }

    fn sieve_level(&self, d: usize) -> Vec<Poly> {
        let field = &self.field;
        let q = field.q();
        let base = q.pow(d as u32);
        let mut composite = vec![false; base as usize];
        for e in 1..=d / 2 {
            let cofactor_base = q.pow((d - e) as u32);
            for p in &self.by_degree[e] {
                for low in 0..cofactor_base {
                    let g = Poly::from_delta_u64(field, cofactor_base + low);
                    let prod = mul_coeffs(field, p.coeffs(), g.coeffs());
                    let idx = Poly::from_raw(field, prod).delta_u64().expect("within cap") - base;
                    composite[idx as usize] = true;
                }
            }
        }
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(low, _)| Poly::from_delta_u64(field, base + low as u64))
            .collect()
    }
}

/// All monic irreducibles of degree `1..=max_deg`, in δ-order.
pub fn sieve_irreducibles(field: &FieldSpec, max_deg: usize, limits: &Limits) -> Result<Vec<Poly>> {
    Ok(IrreducibleTable::build(field, max_deg, limits)?.iter().cloned().collect())
}

pub fn irreducibles_of_degree(field: &FieldSpec, d: usize, limits: &Limits) -> Result<Vec<Poly>> {
    Ok(IrreducibleTable::build(field, d, limits)?.degree(d).to_vec())
}

/// Number of monic irreducibles of degree exactly `n`:
/// `(1/n) Σ_{d | n} μ(d) q^{n/d}`.
pub fn count_monic_irreducibles(field: &FieldSpec, n: u32) -> Result<Nat> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let q = BigInt::from(field.q());
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n % d == 0) {
        match mobius(d) {
            0 => {}
            m => sum += BigInt::from(m) * q.pow(n / d),
        }
    }
    let count = sum / BigInt::from(n);
    Ok(count.to_biguint().expect("necklace count is non-negative"))
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}


#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[Poly]) -> Vec<String> {
        v.iter().map(Poly::to_literal).collect()
    }

    #[test]
    fn sieve_examples() {
        let lim = Limits::default();
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(lits(&sieve_irreducibles(&f2, 2, &lim).unwrap()), ["t", "t+1", "t^2+t+1"]);
        assert_eq!(sieve_irreducibles(&f2, 3, &lim).unwrap().len(), 5);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(lits(&sieve_irreducibles(&f3, 1, &lim).unwrap()), ["t", "t+1", "t+2"]);
    }

    #[test]
    fn sieve_cap() {
        let f2 = FieldSpec::prime(2).unwrap();
        let lim = Limits { census_cap: 1 << 10, ..Limits::default() };
        assert!(sieve_irreducibles(&f2, 10, &lim).is_ok());
        assert!(matches!(sieve_irreducibles(&f2, 11, &lim), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn mobius_counts() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(count_monic_irreducibles(&f2, 1).unwrap(), Nat::from(2u32));
        assert_eq!(count_monic_irreducibles(&f2, 3).unwrap(), Nat::from(2u32));
        assert_eq!(count_monic_irreducibles(&f3, 2).unwrap(), Nat::from(3u32));
        assert!(count_monic_irreducibles(&f3, 0).is_err());
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn sieve_agrees_with_mobius() {
        let lim = Limits::default();
        for (q, max) in [(2u64, 10usize), (3, 6), (4, 4), (5, 4)] {
            let field = FieldSpec::of_order(q).unwrap();
            let table = IrreducibleTable::build(&field, max, &lim).unwrap();
            for d in 1..=max {
                let expected = count_monic_irreducibles(&field, d as u32).unwrap();
                assert_eq!(Nat::from(table.degree(d).len()), expected, "q={q} d={d}");
            }
        }
    }
}
