use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gf::FieldSpec;
use crate::poly::{Nat, Poly};
use crate::registry::Named;

use super::{split_unit, Factorization, Factorizer};

/// Squarefree decomposition, distinct-degree factorization, then randomized
/// equal-degree splitting. Every call reseeds a ChaCha8 stream from `seed`,
/// so results never depend on call order.
#[derive(Debug, Clone)]
pub struct CantorZassenhaus {
    seed: u64,
}

impl CantorZassenhaus {
    pub fn new(seed: u64) -> Self {
        CantorZassenhaus { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Named for CantorZassenhaus {
    fn name(&self) -> &'static str {
        "cantor-zassenhaus"
    }
}

impl Factorizer for CantorZassenhaus {
    fn factorize(&self, f: &Poly) -> Result<Factorization> {
        let (unit, monic) = split_unit(f)?;
        let field = f.field();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut factors = Vec::new();
        for (part, mult) in squarefree(&monic)? {
            for (block, d) in distinct_degree(&part)? {
                for p in equal_degree(&block, d, &mut rng)? {
                    factors.push((p, mult));
                }
            }
        }
        Ok(Factorization::new(field, unit, factors))
    }
}

/// Squarefree parts `(g_i, i)` of a monic `f`, so that `f = ∏ g_i^i` with
/// squarefree, pairwise coprime `g_i`.
pub(crate) fn squarefree(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let field = f.field();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?.expect("gcd divides f");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.exact_div(&y)?.expect("gcd divides w");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w)?.expect("w divides c");
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(field, &c);
        let p = field.p() as u32;
        for (g, m) in squarefree(&root)? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// For `c` whose derivative vanishes: the polynomial `r` with `r^p = c`.
fn pth_root(field: &FieldSpec, c: &Poly) -> Poly {
    let p = field.p() as usize;
    let coeffs = c.coeffs().iter().step_by(p).map(|&a| field.pth_root(a)).collect();
    Poly::from_raw(field, coeffs)
}

/// Splits a squarefree monic `f` into `(product of all irreducible factors
/// of degree d, d)` blocks.
pub(crate) fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let q = Nat::from(field.q());
    let t = Poly::t_pow(field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut d = 1;
    while 2 * d <= rest.deg() {
        h = h.pow_mod(&q, &rest)?;
        let g = (&h - &t).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?.expect("gcd divides");
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if !rest.is_constant() {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    Ok(out)
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub(crate) fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.deg();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field();
    let q = field.q();
    let target = n / d;
    let odd_exponent = (q % 2 == 1).then(|| (Nat::from(q).pow(d as u32) - 1u32) / 2u32);
    let mut parts = vec![f.clone()];
    while parts.len() < target {
        let coeffs: Vec<u32> = (0..n).map(|_| (rng.next_u64() % q) as u32).collect();
        let a = Poly::from_raw(field, coeffs);
        if a.is_constant() {
            continue;
        }
        let z = match &odd_exponent {
            Some(e) => &a.pow_mod(e, f)? - &Poly::one(field),
            None => trace(&a, f, field.k() as usize * d)?,
        };
        let mut next = Vec::with_capacity(parts.len() + 1);
        for u in parts {
            if u.deg() == d {
                next.push(u);
                continue;
            }
            let g = z.gcd(&u)?;
            if g.is_one() || g.deg() == u.deg() {
                next.push(u);
            } else {
                let other = u.exact_div(&g)?.expect("gcd divides");
                next.push(g);
                next.push(other);
            }
        }
        parts = next;
    }
    Ok(parts)
}

/// `a + a^2 + a^4 + … + a^{2^{m-1}} mod f`, the absolute trace used for
/// splitting in characteristic 2.
fn trace(a: &Poly, f: &Poly, m: usize) -> Result<Poly> {
    let two = Nat::from(2u32);
    let mut term = a.rem(f)?;
    let mut acc = term.clone();
    for _ in 1..m {
        term = term.pow_mod(&two, f)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::is_irreducible;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn squarefree_handles_pth_powers() {
        let f3 = FieldSpec::prime(3).unwrap();
        // (t+1)^3 (t^2+1)^4 t
        let f = &(&p(&f3, "t+1").pow(3) * &p(&f3, "t^2+1").pow(4)) * &p(&f3, "t");
        let parts = squarefree(&f).unwrap();
        let rebuilt = parts.iter().fold(Poly::one(&f3), |acc, (g, i)| &acc * &g.pow(*i));
        assert_eq!(rebuilt, f);
        let mut mults: Vec<u32> = parts.iter().map(|x| x.1).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 3, 4]);
    }

    #[test]
    fn distinct_degree_groups() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f = &(&p(&f2, "t^2+t") * &p(&f2, "t^2+t+1")) * &p(&f2, "t^3+t+1");
        let blocks = distinct_degree(&f).unwrap();
        let degs: Vec<usize> = blocks.iter().map(|b| b.1).collect();
        assert_eq!(degs, vec![1, 2, 3]);
        assert_eq!(blocks[0].0, p(&f2, "t^2+t"));
    }

    #[test]
    fn random_high_degree_inputs_split_into_irreducibles() {
        let cz = CantorZassenhaus::new(99);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2u64, 3, 4, 5] {
            let field = FieldSpec::of_order(q).unwrap();
            for _ in 0..40 {
                let deg = 20 + (rng.next_u64() % 45) as usize;
                let mut coeffs: Vec<u32> = (0..deg).map(|_| (rng.next_u64() % q) as u32).collect();
                coeffs.push(1 + (rng.next_u64() % (q - 1)) as u32);
                let f = Poly::from_raw(&field, coeffs);
                let fz = cz.factorize(&f).unwrap();
                assert_eq!(fz.reconstruct(), f);
                for (g, _) in fz.factors() {
                    assert!(g.is_monic() && is_irreducible(g).unwrap());
                }
            }
        }
    }
}
