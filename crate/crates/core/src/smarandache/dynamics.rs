//! Iteration of S, its fixed points, prime-power preimages and the
//! δ-contraction inequality.

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{self, Factorizer};
use crate::gf::FieldSpec;
use crate::poly::{Nat, Poly};

use super::{repunit, s_with};

/// `S^{(n)}(f)`.
pub fn s_iterate(f: &Poly, n: usize) -> Poly {
    iteration_chain(f, n).pop().expect("chain starts with f")
}

/// `[f, S(f), …, S^{(n)}(f)]`.
pub fn iteration_chain(f: &Poly, n: usize) -> Vec<Poly> {
    let factorizer = factor::default_factorizer();
    let mut chain = vec![f.clone()];
    for _ in 0..n {
        let next = s_with(chain.last().unwrap(), factorizer).expect("the default factorizer never fails");
        chain.push(next);
    }
    chain
}

/// `{t}` for q > 2, `{t, t²}` for q = 2.
pub fn fixed_points(field: &FieldSpec) -> Vec<Poly> {
    let mut out = vec![Poly::t_pow(field, 1)];
    if field.q() == 2 {
        out.push(Poly::t_pow(field, 2));
    }
    out
}

pub fn is_fixed_point(f: &Poly) -> bool {
    let ones = f.coeffs().iter().filter(|&&c| c != 0).count() == 1 && f.is_monic();
    ones && (f.degree() == Some(1) || (f.degree() == Some(2) && f.field().q() == 2))
}

/// The least `n` with `S^{(n)}(f)` fixed, using `factorizer` for each step.
pub fn distance_to_fixed_with(f: &Poly, factorizer: &dyn Factorizer) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let mut cur = f.clone();
    let mut n = 0;
    while !is_fixed_point(&cur) {
        cur = s_with(&cur, factorizer)?;
        n += 1;
    }
    Ok(n)
}

pub fn distance_to_fixed(f: &Poly) -> Result<usize> {
    distance_to_fixed_with(f, factor::default_factorizer())
}

/// Every `P^e` with `deg P = d` and `e_lo ≤ e ≤ e_hi` has `S(P^e) = f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseImage {
    pub d: u32,
    #[serde(serialize_with = "nat_string")]
    pub e_lo: Nat,
    #[serde(serialize_with = "nat_string")]
    pub e_hi: Nat,
}

fn nat_string<S: serde::Serializer>(n: &Nat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// The prime powers in S⁻¹(f), grouped by degree. Empty unless `t | f`, `f ≠ 0`.
pub fn inverse_image_prime_powers(f: &Poly) -> Vec<InverseImage> {
    if f.is_zero() || !f.divisible_by_t() {
        return Vec::new();
    }
    let delta = f.delta();
    let q = Nat::from(f.field().q());
    let mut out = Vec::new();
    let mut base = q.clone();
    let mut d = 1u32;
    while base <= delta {
        if delta.is_multiple_of(&base) {
            let mut e0 = Nat::zero();
            let mut lowest = 0u32;
            let mut rest = delta.clone();
            let mut j = 0u32;
            while !rest.is_zero() {
                let (next, c) = rest.div_rem(&base);
                if !c.is_zero() {
                    e0 += c * repunit(&base, j);
                    if lowest == 0 {
                        lowest = j;
                    }
                }
                rest = next;
                j += 1;
            }
            let e_lo = &e0 - Nat::from(lowest - 1);
            out.push(InverseImage { d, e_lo, e_hi: e0 });
        }
        base *= &q;
        d += 1;
    }
    out
}

/// Outcome of comparing `q·δ(S(f))` with `δ(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contraction {
    InequalityStrict,
    Equality,
    Violation,
    NotApplicable,
}

impl Contraction {
    pub fn as_str(self) -> &'static str {
        match self {
            Contraction::InequalityStrict => "inequality_strict",
            Contraction::Equality => "equality",
            Contraction::Violation => "violation",
            Contraction::NotApplicable => "not_applicable",
        }
    }
}

pub fn check_delta_contraction(f: &Poly) -> Result<Contraction> {
    check_delta_contraction_with(f, factor::default_factorizer())
}

/// Inputs that are irreducible or of the form `b(t+c)²` are not applicable.
pub fn check_delta_contraction_with(f: &Poly, factorizer: &dyn Factorizer) -> Result<Contraction> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let fz = factorizer.factorize(f)?;
    let sig = fz.signature();
    if sig == [(f.deg() as u32, 1)] || sig == [(1, 2)] {
        return Ok(Contraction::NotApplicable);
    }
    let lhs = super::s_delta_of(&fz) * f.field().q();
    Ok(match lhs.cmp(&f.delta()) {
        std::cmp::Ordering::Less => Contraction::InequalityStrict,
        std::cmp::Ordering::Equal => Contraction::Equality,
        std::cmp::Ordering::Greater => Contraction::Violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    fn img(d: u32, lo: u64, hi: u64) -> InverseImage {
        InverseImage { d, e_lo: Nat::from(lo), e_hi: Nat::from(hi) }
    }

    #[test]
    fn iterate_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(s_iterate(&p(&f3, "t^2+1"), 3), p(&f3, "t"));
        assert_eq!(iteration_chain(&p(&f3, "t^2+1"), 3)[2], p(&f3, "2*t"));
        assert_eq!(s_iterate(&p(&f3, "t^2+t+2"), 0), p(&f3, "t^2+t+2"));
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(s_iterate(&p(&f2, "t^2"), 1), p(&f2, "t^2"));
    }

    #[test]
    fn distance_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(distance_to_fixed(&p(&f2, "t^2")).unwrap(), 0);
        assert_eq!(distance_to_fixed(&p(&f5, "t")).unwrap(), 0);
        assert_eq!(distance_to_fixed(&p(&f3, "t^2+1")).unwrap(), 3);
        assert_eq!(distance_to_fixed(&p(&f3, "2")), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn fixed_point_examples() {
        for q in [2u64, 3, 4] {
            let field = FieldSpec::of_order(q).unwrap();
            let want: Vec<&str> = if q == 2 { vec!["t", "t^2"] } else { vec!["t"] };
            let got: Vec<String> = fixed_points(&field).iter().map(|f| f.to_literal()).collect();
            assert_eq!(got, want);
            for g in fixed_points(&field) {
                assert!(is_fixed_point(&g));
                assert_eq!(s_iterate(&g, 1), g);
            }
        }
    }

    #[test]
    fn inverse_image_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(inverse_image_prime_powers(&p(&f2, "t^2")), vec![img(1, 2, 3), img(2, 1, 1)]);
        assert!(inverse_image_prime_powers(&p(&f2, "t+1")).is_empty());
        assert!(inverse_image_prime_powers(&Poly::one(&f2)).is_empty());
        assert!(inverse_image_prime_powers(&Poly::zero(&f2)).is_empty());
    }

    #[test]
    fn contraction_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(check_delta_contraction(&p(&f2, "t^3")).unwrap(), Contraction::Equality);
        assert_eq!(check_delta_contraction(&p(&f3, "t^3")).unwrap(), Contraction::Equality);
        assert_eq!(check_delta_contraction(&p(&f2, "t^2+t")).unwrap(), Contraction::InequalityStrict);
        assert_eq!(check_delta_contraction(&p(&f2, "t^2+1")).unwrap(), Contraction::NotApplicable);
        assert_eq!(check_delta_contraction(&p(&f3, "2*t^2+t+2")).unwrap(), Contraction::NotApplicable);
        assert_eq!(check_delta_contraction(&p(&f2, "t^2")).unwrap(), Contraction::NotApplicable);
        assert_eq!(check_delta_contraction(&p(&f2, "1")), Err(Error::ConstantPolynomial));
    }
}
