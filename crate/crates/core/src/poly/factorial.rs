//! Factorials `f! = ∏_{g<f} (f - g)` and P-adic valuations of them.
//!
//! Materializing `f!` is only feasible for small δ(f); the routines here are
//! the reference side of the checks. Production code goes through
//! [`valuation_of_factorial`] instead.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::gf::FieldSpec;
use crate::limits::Limits;

use super::{mul_coeffs, rem_in_place, Nat, Poly};

fn capped_delta(f: &Poly, cap: u64) -> Result<u64> {
    match f.delta_u64() {
        Some(d) if d <= cap => Ok(d),
        _ => Err(Error::cap("delta(f)", f.delta(), cap)),
    }
}

/// `f!` straight from the definition: the product of `f - g` over all
/// `g < f` in δ-order, with `0! = 1`.
pub fn factorial_direct(f: &Poly, limits: &Limits) -> Result<Poly> {
    let n = capped_delta(f, limits.factorial_delta_cap)?;
    let field = f.field();
    let mut acc = vec![1u32];
    for m in 0..n {
        let g = Poly::from_delta_u64(field, m);
        let diff = f - &g;
        acc = mul_coeffs(field, &acc, diff.coeffs());
    }
    Ok(Poly::from_raw(field, acc))
}

/// `f!` through the product formula
/// `(∏_j a_{i_j}!) · ∏_{j≥1} (∏_{h monic, deg h = j} h)^{i_j}`.
pub fn factorial_product(f: &Poly, limits: &Limits) -> Result<Poly> {
    capped_delta(f, limits.factorial_delta_cap)?;
    let field = f.field();
    let mut unit = 1u32;
    for &i in f.coeffs() {
        unit = field.mul(unit, constant_factorial(field, i));
    }
    let mut acc = Poly::constant(field, crate::gf::FieldElement(unit));
    for (j, &i) in f.coeffs().iter().enumerate().skip(1) {
        if i == 0 {
            continue;
        }
        acc = &acc * &monic_product(field, j).pow(i);
    }
    Ok(acc)
}

/// `a_i! = ∏_{m<i} (a_i - a_m)`.
fn constant_factorial(field: &FieldSpec, i: u32) -> u32 {
    (0..i).fold(1, |acc, m| field.mul(acc, field.sub(i, m)))
}

/// Product of all monic polynomials of degree `j`, which is `(t^j)!`.
fn monic_product(field: &FieldSpec, j: usize) -> Poly {
    let q = field.q();
    let count = q.pow(j as u32);
    let mut acc = vec![1u32];
    for low in 0..count {
        let h = Poly::from_delta_u64(field, count + low);
        acc = mul_coeffs(field, &acc, h.coeffs());
    }
    Poly::from_raw(field, acc)
}

/// `g! mod modulus`, computed factor by factor without materializing `g!`.
/// Divisibility `modulus | g!` holds exactly when the result is zero.
pub fn factorial_residue(g: &Poly, modulus: &Poly, cap: u64) -> Result<Poly> {
    g.check_field(modulus)?;
    if modulus.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let n = capped_delta(g, cap)?;
    let field = g.field();
    let mut acc = vec![1u32];
    rem_in_place(field, &mut acc, modulus.coeffs());
    for m in 0..n {
        if acc.is_empty() {
            break;
        }
        let mut diff = (g - &Poly::from_delta_u64(field, m)).coeffs;
        rem_in_place(field, &mut diff, modulus.coeffs());
        acc = mul_coeffs(field, &acc, &diff);
        rem_in_place(field, &mut acc, modulus.coeffs());
    }
    Ok(Poly::from_raw(field, acc))
}

/// `v_P(h)`: the largest `e` with `P^e | h`, for monic irreducible `P`.
pub fn valuation(p: &Poly, h: &Poly) -> Result<Nat> {
    p.check_field(h)?;
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.is_constant() || !is_irreducible(p)? {
        return Err(Error::NotIrreducible);
    }
    let field = h.field();
    let mut rest = h.coeffs().to_vec();
    let mut count = 0u64;
    loop {
        let (q, r) = super::div_rem_coeffs(field, &rest, p.coeffs());
        if !r.is_empty() {
            break;
        }
        rest = q;
        count += 1;
    }
    Ok(Nat::from(count))
}

/// `v_P(f!) = Σ_{j≥1} ⌊δ(f) / q^{d j}⌋` for any irreducible `P` of degree `d`.
pub fn valuation_of_factorial(d: u32, delta_f: &Nat, q: u64) -> Nat {
    assert!(d >= 1, "degree of an irreducible polynomial is at least 1");
    if let Some(small) = delta_f.to_u64() {
        return Nat::from(valuation_of_factorial_u64(d, small, q));
    }
    let step = Nat::from(q).pow(d);
    let mut total = Nat::zero();
    let mut level = delta_f / &step;
    while !level.is_zero() {
        total += &level;
        level /= &step;
    }
    total
}

pub fn valuation_of_factorial_u64(d: u32, delta_f: u64, q: u64) -> u64 {
    let step = match q.checked_pow(d) {
        Some(s) => s,
        None => return 0,
    };
    let mut total = 0;
    let mut level = delta_f / step;
    while level > 0 {
        total += level;
        level /= step;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    fn expand(field: &FieldSpec, factors: &[&str]) -> Poly {
        factors.iter().fold(Poly::one(field), |acc, s| &acc * &p(field, s))
    }

    #[test]
    fn direct_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let lim = Limits::default();
        let expected = expand(&f2, &["t^2", "t^2+1", "t^2+t", "t^2+t+1"]);
        assert_eq!(factorial_direct(&p(&f2, "t^2"), &lim).unwrap(), expected);
        assert_eq!(factorial_direct(&p(&f2, "t"), &lim).unwrap(), p(&f2, "t^2+t"));
        for q in [2, 3, 5] {
            let field = FieldSpec::prime(q).unwrap();
            assert!(factorial_direct(&Poly::zero(&field), &lim).unwrap().is_one());
        }
    }

    #[test]
    fn product_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let lim = Limits::default();
        let quadratics = expand(&f2, &["t^2", "t^2+1", "t^2+t", "t^2+t+1"]);
        assert_eq!(factorial_product(&p(&f2, "t^2"), &lim).unwrap(), quadratics);
        let cubics: Vec<String> = (8..16).map(|m| Poly::from_delta_u64(&f2, m).to_literal()).collect();
        let cubics: Vec<&str> = cubics.iter().map(String::as_str).collect();
        assert_eq!(factorial_product(&p(&f2, "t^3"), &lim).unwrap(), expand(&f2, &cubics));
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(factorial_product(&p(&f3, "t"), &lim).unwrap(), expand(&f3, &["t", "t+1", "t+2"]));
    }

    #[test]
    fn caps_are_enforced() {
        let f2 = FieldSpec::prime(2).unwrap();
        let lim = Limits { factorial_delta_cap: 8, ..Limits::default() };
        assert!(factorial_direct(&p(&f2, "t^3"), &lim).is_ok());
        assert!(matches!(factorial_direct(&p(&f2, "t^3+1"), &lim), Err(Error::CapExceeded { .. })));
        assert!(matches!(factorial_product(&p(&f2, "t^4"), &lim), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn residue_matches_materialized_factorial() {
        let f3 = FieldSpec::prime(3).unwrap();
        let lim = Limits::default();
        let modulus = p(&f3, "t^3+2*t^2+1");
        for m in 0..60 {
            let g = Poly::from_delta_u64(&f3, m);
            let full = factorial_direct(&g, &lim).unwrap();
            assert_eq!(factorial_residue(&g, &modulus, 512).unwrap(), full.rem(&modulus).unwrap());
        }
    }

    #[test]
    fn valuation_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(valuation(&p(&f2, "t"), &p(&f2, "t^2+t")).unwrap(), Nat::from(1u32));
        assert_eq!(valuation(&p(&f2, "t+1"), &p(&f2, "t^2+1")).unwrap(), Nat::from(2u32));
        assert_eq!(valuation(&p(&f2, "t^2+t+1"), &Poly::one(&f2)).unwrap(), Nat::zero());
        assert_eq!(valuation(&p(&f2, "t"), &Poly::zero(&f2)), Err(Error::ZeroPolynomial));
        assert_eq!(valuation(&p(&f2, "t^2+1"), &p(&f2, "t")), Err(Error::NotIrreducible));
    }

    #[test]
    fn valuation_of_factorial_examples() {
        let lim = Limits::default();
        let f2 = FieldSpec::prime(2).unwrap();
        let fact = factorial_direct(&p(&f2, "t^2"), &lim).unwrap();
        assert_eq!(valuation(&p(&f2, "t"), &fact).unwrap(), Nat::from(3u32));
        assert_eq!(valuation_of_factorial(1, &Nat::from(4u32), 2), Nat::from(3u32));
        assert_eq!(valuation(&p(&f2, "t^2+t+1"), &fact).unwrap(), Nat::from(1u32));
        assert_eq!(valuation_of_factorial(2, &Nat::from(4u32), 2), Nat::from(1u32));
        assert_eq!(valuation_of_factorial(3, &Nat::zero(), 5), Nat::zero());
        let huge = Nat::from(2u32).pow(100u32);
        assert_eq!(valuation_of_factorial(1, &huge, 2), &huge - Nat::from(1u32));
    }
}
