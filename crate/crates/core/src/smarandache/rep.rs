use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Nat;

/// `e = Σ c_i · b_{j_i}` with `b_j = (base^j - 1)/(base - 1)`,
/// `j_1 > … > j_k > 0`, `1 ≤ c_i < base` except `1 ≤ c_k ≤ base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepDecomposition {
    base: Nat,
    terms: Vec<(Nat, u32)>,
}

impl RepDecomposition {
    /// Validates the digit and position constraints.
    pub fn new(base: Nat, terms: Vec<(Nat, u32)>) -> Result<Self> {
        if base < Nat::from(2u32) {
            return Err(Error::InvalidArgument(format!("base {base} must be at least 2")));
        }
        if terms.is_empty() {
            return Err(Error::InvalidArgument("decomposition needs at least one term".into()));
        }
        let last = terms.len() - 1;
        for (i, (c, j)) in terms.iter().enumerate() {
            if *j == 0 {
                return Err(Error::InvalidArgument("positions must be positive".into()));
            }
            if i > 0 && terms[i - 1].1 <= *j {
                return Err(Error::InvalidArgument("positions must strictly decrease".into()));
            }
            let in_range = if i == last { *c <= base } else { *c < base };
            if c.is_zero() || !in_range {
                return Err(Error::InvalidArgument(format!("digit {c} out of range at position {j}")));
            }
        }
        Ok(RepDecomposition { base, terms })
    }

    pub fn base(&self) -> &Nat {
        &self.base
    }

    /// `(c_i, j_i)` pairs, positions strictly decreasing.
    pub fn terms(&self) -> &[(Nat, u32)] {
        &self.terms
    }

    pub fn compose(&self) -> Nat {
        self.terms.iter().map(|(c, j)| c * repunit(&self.base, *j)).sum()
    }
}

/// `b_j = 1 + base + … + base^{j-1}`.
pub fn repunit(base: &Nat, j: u32) -> Nat {
    let mut b = Nat::zero();
    for _ in 0..j {
        b = b * base + 1u32;
    }
    b
}

/// Greedy decomposition: peel off the largest `b_j ≤ e`, repeat on the remainder.
pub fn rep_decompose(e: &Nat, base: &Nat) -> Result<RepDecomposition> {
    if e.is_zero() {
        return Err(Error::ZeroExponent);
    }
    if *base < Nat::from(2u32) {
        return Err(Error::InvalidArgument(format!("base {base} must be at least 2")));
    }
    let mut ladder = vec![Nat::zero(), Nat::one()];
    while ladder.last().unwrap() <= e {
        let next = ladder.last().unwrap() * base + 1u32;
        ladder.push(next);
    }
    // ladder[j] = b_j and ladder.last() > e
    let mut terms = Vec::new();
    let mut rest = e.clone();
    let mut j = ladder.len() - 2;
    while !rest.is_zero() {
        while ladder[j] > rest {
            j -= 1;
        }
        let (c, r) = rest.div_rem(&ladder[j]);
        terms.push((c, j as u32));
        rest = r;
        j -= 1;
    }
    Ok(RepDecomposition { base: base.clone(), terms })
}

pub fn rep_compose(r: &RepDecomposition) -> Nat {
    r.compose()
}
