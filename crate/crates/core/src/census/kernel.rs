use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::{trial_divide, IrreducibleTable};
use crate::gf::FieldSpec;
use crate::limits::Limits;
use crate::registry::{Named, Registry};

/// `(deg P, e)` for each prime power `P^e` exactly dividing a polynomial.
pub type Signature = [(u32, u32)];

/// Produces factorization signatures for the monic degree-`n` polynomials
/// with low-order index in a given range. Index `i` encodes the
/// coefficients below the leading one as base-q digits, so ascending index
/// is ascending δ.
pub trait CensusKernel: Named + Send + Sync {
    fn supports(&self, field: &FieldSpec) -> bool;
    fn prepare(&self, field: &FieldSpec, n: usize, limits: &Limits) -> Result<Box<dyn Scanner>>;
}

pub trait Scanner: Send + Sync {
    fn scan(&self, range: Range<u64>, visit: &mut dyn FnMut(u64, &Signature));
}

/// Trial division over [`FieldSpec`] arithmetic; any q.
pub struct Generic;

impl Named for Generic {
    fn name(&self) -> &'static str {
        "generic"
    }
}

impl CensusKernel for Generic {
    fn supports(&self, _field: &FieldSpec) -> bool {
        true
    }

    fn prepare(&self, field: &FieldSpec, n: usize, limits: &Limits) -> Result<Box<dyn Scanner>> {
        let table = Arc::new(IrreducibleTable::build(field, n / 2, limits)?);
        Ok(Box::new(GenericScanner { table, n }))
    }
}

struct GenericScanner {
    table: Arc<IrreducibleTable>,
    n: usize,
}

impl Scanner for GenericScanner {
    fn scan(&self, range: Range<u64>, visit: &mut dyn FnMut(u64, &Signature)) {
        let q = self.table.field().q();
        let mut coeffs = vec![0u32; self.n + 1];
        let mut sig = Vec::new();
        for idx in range {
            let mut rest = idx;
            for c in coeffs.iter_mut().take(self.n) {
                *c = (rest % q) as u32;
                rest /= q;
            }
            coeffs[self.n] = 1;
            sig.clear();
            sig.extend(trial_divide(&self.table, &coeffs).iter().map(|(p, e)| (p.deg() as u32, *e)));
            visit(idx, &sig);
        }
    }
}

/// q = 2 only: polynomials packed into `u64` bit masks, shift-xor division.
pub struct Gf2Packed;

impl Named for Gf2Packed {
    fn name(&self) -> &'static str {
        "gf2-packed"
    }
}

impl CensusKernel for Gf2Packed {
    fn supports(&self, field: &FieldSpec) -> bool {
        field.q() == 2
    }

    fn prepare(&self, field: &FieldSpec, n: usize, limits: &Limits) -> Result<Box<dyn Scanner>> {
        if !self.supports(field) {
            return Err(Error::InvalidArgument(format!("kernel gf2-packed needs q = 2, got q = {}", field.q())));
        }
        if n > 62 {
            return Err(Error::cap("n", n, 62));
        }
        let table = IrreducibleTable::build(field, n / 2, limits)?;
        let by_degree = (0..=n / 2)
            .map(|d| table.degree(d).iter().map(|p| pack(p.coeffs())).collect())
            .collect();
        Ok(Box::new(Gf2Scanner { by_degree, n }))
    }
}

fn pack(coeffs: &[u32]) -> u64 {
    coeffs.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c as u64) << i))
}

fn degree_of(a: u64) -> u32 {
    63 - a.leading_zeros()
}

/// Quotient and remainder of `a` by `b` (deg b = db) over GF(2).
#[inline]
fn divmod(a: u64, b: u64, db: u32) -> (u64, u64) {
    let mut q = 0;
    let mut r = a;
    while r != 0 {
        let dr = degree_of(r);
        if dr < db {
            break;
        }
        let s = dr - db;
        q |= 1 << s;
        r ^= b << s;
    }
    (q, r)
}

struct Gf2Scanner {
    by_degree: Vec<Vec<u64>>,
    n: usize,
}

impl Scanner for Gf2Scanner {
    fn scan(&self, range: Range<u64>, visit: &mut dyn FnMut(u64, &Signature)) {
        let lead = 1u64 << self.n;
        let mut sig = Vec::with_capacity(self.n);
        for idx in range {
            let mut rest = lead | idx;
            sig.clear();
            let mut d = 1u32;
            'outer: while 2 * d <= degree_of(rest) {
                for &p in &self.by_degree[d as usize] {
                    let mut e = 0;
                    loop {
                        let (q, r) = divmod(rest, p, d);
                        if r != 0 {
                            break;
                        }
                        rest = q;
                        e += 1;
                    }
                    if e > 0 {
                        sig.push((d, e));
                    }
                    if 2 * d > degree_of(rest) {
                        break 'outer;
                    }
                }
                d += 1;
            }
            if rest > 1 {
                sig.push((degree_of(rest), 1));
            }
            visit(idx, &sig);
        }
    }
}

/// `generic` and `gf2-packed`.
pub fn kernels() -> Registry<dyn CensusKernel> {
    let mut reg: Registry<dyn CensusKernel> = Registry::new("census kernel");
    reg.register(Box::new(Generic));
    reg.register(Box::new(Gf2Packed));
    reg
}

/// Resolves `auto` to the fastest kernel supporting `field`.
pub fn select_kernel<'a>(reg: &'a Registry<dyn CensusKernel>, name: &str, field: &FieldSpec) -> Result<&'a dyn CensusKernel> {
    let name = match name {
        "auto" if field.q() == 2 => "gf2-packed",
        "auto" => "generic",
        other => other,
    };
    let kernel = reg.get(name)?;
    if !kernel.supports(field) {
        return Err(Error::InvalidArgument(format!("kernel {name} does not support q = {}", field.q())));
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(kernel: &dyn CensusKernel, field: &FieldSpec, n: usize) -> Vec<Vec<(u32, u32)>> {
        let scanner = kernel.prepare(field, n, &Limits::default()).unwrap();
        let mut out = Vec::new();
        scanner.scan(0..field.q().pow(n as u32), &mut |_, sig| {
            let mut s = sig.to_vec();
            s.sort();
            out.push(s);
        });
        out
    }

    #[test]
    fn kernels_agree_on_gf2() {
        let f2 = FieldSpec::prime(2).unwrap();
        for n in 1..=12 {
            assert_eq!(collect(&Generic, &f2, n), collect(&Gf2Packed, &f2, n), "n = {n}");
        }
    }

    #[test]
    fn small_signatures() {
        let f2 = FieldSpec::prime(2).unwrap();
        // t^2, t^2+1, t^2+t, t^2+t+1
        assert_eq!(collect(&Gf2Packed, &f2, 2), vec![vec![(1, 2)], vec![(1, 2)], vec![(1, 1), (1, 1)], vec![(2, 1)]]);
    }

    #[test]
    fn selection() {
        let reg = kernels();
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(select_kernel(&reg, "auto", &f2).unwrap().name(), "gf2-packed");
        assert_eq!(select_kernel(&reg, "auto", &f3).unwrap().name(), "generic");
        assert!(select_kernel(&reg, "gf2-packed", &f3).is_err());
        assert!(select_kernel(&reg, "nope", &f3).is_err());
    }
}
