use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::gf::FieldSpec;
use crate::limits::Limits;
use crate::poly::{div_rem_coeffs, Poly};
use crate::registry::Named;

use super::{split_unit, Factorization, Factorizer, IrreducibleTable};

/// Trial division by every monic irreducible of degree at most half the
/// remaining cofactor. Irreducible tables are sieved on demand per field and
/// shared between calls; sieving is bounded by `limits.census_cap`.
pub struct TrialDivision {
    limits: Limits,
    tables: Mutex<HashMap<FieldSpec, Arc<IrreducibleTable>>>,
}

impl Default for TrialDivision {
    fn default() -> Self {
        TrialDivision::new(Limits::default())
    }
}

impl TrialDivision {
    pub fn new(limits: Limits) -> Self {
        TrialDivision { limits, tables: Mutex::new(HashMap::new()) }
    }

    fn table(&self, field: &FieldSpec, max_deg: usize) -> Result<Arc<IrreducibleTable>> {
        let mut tables = self.tables.lock().expect("table lock poisoned");
        let entry = tables.entry(field.clone()).or_insert_with(|| Arc::new(IrreducibleTable::new(field)));
        if entry.max_degree() < max_deg {
            let mut grown = (**entry).clone();
            grown.extend_to(max_deg, &self.limits)?;
            *entry = Arc::new(grown);
        }
        Ok(entry.clone())
    }
}

impl Named for TrialDivision {
    fn name(&self) -> &'static str {
        "trial"
    }
}

impl Factorizer for TrialDivision {
    fn factorize(&self, f: &Poly) -> Result<Factorization> {
        let (unit, monic) = split_unit(f)?;
        let field = f.field();
        let mut rest = monic.coeffs().to_vec();
        let mut out = Vec::new();
        let mut d = 1;
        while 2 * d < rest.len() {
            let table = self.table(field, d)?;
            strip_level(field, &mut rest, table.degree(d), d, &mut out);
            d += 1;
        }
        finish(field, rest, &mut out);
        Ok(Factorization::new(field, unit, out))
    }
}

/// Factors a monic polynomial given a table sieved to at least half its
/// degree. Returns `(P, e)` pairs in δ-order.
pub(crate) fn trial_divide(table: &IrreducibleTable, monic: &[u32]) -> Vec<(Poly, u32)> {
    let field = table.field();
    let mut rest = monic.to_vec();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d < rest.len() {
        debug_assert!(d <= table.max_degree(), "irreducible table too short");
        strip_level(field, &mut rest, table.degree(d), d, &mut out);
        d += 1;
    }
    finish(field, rest, &mut out);
    out
}

fn strip_level(field: &FieldSpec, rest: &mut Vec<u32>, level: &[Poly], d: usize, out: &mut Vec<(Poly, u32)>) {
    for p in level {
        let e = strip(field, rest, p.coeffs());
        if e > 0 {
            out.push((p.clone(), e));
        }
        if 2 * d >= rest.len() {
            break;
        }
    }
}

fn finish(field: &FieldSpec, rest: Vec<u32>, out: &mut Vec<(Poly, u32)>) {
    if rest.len() > 1 {
        out.push((Poly::from_raw(field, rest), 1));
        out.sort();
    }
}

/// Divides `p` out of `rest` as often as possible, returning the count.
pub(crate) fn strip(field: &FieldSpec, rest: &mut Vec<u32>, p: &[u32]) -> u32 {
    let mut e = 0;
    while rest.len() >= p.len() {
        let (q, r) = div_rem_coeffs(field, rest, p);
        if !r.is_empty() {
            break;
        }
        *rest = q;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::factor::is_irreducible;

    #[test]
    fn grows_tables_lazily_and_respects_caps() {
        let f2 = FieldSpec::prime(2).unwrap();
        let trial = TrialDivision::new(Limits { census_cap: 1 << 6, ..Limits::default() });
        let f = Poly::parse(&f2, "t^12+t^3+1").unwrap();
        assert!(trial.factorize(&f).is_ok());
        let small = Poly::parse(&f2, "t^2+t+1").unwrap().pow(20);
        assert!(trial.factorize(&small).is_ok());
        let g = Poly::parse(&f2, "t^17+t^3+1").unwrap();
        assert!(is_irreducible(&g).unwrap());
        assert!(matches!(trial.factorize(&g), Err(Error::CapExceeded { .. })));
    }
}
