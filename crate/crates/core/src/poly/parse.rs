use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::literal;

use super::Poly;

impl Poly {
    /// Parses the literal grammar (`t^3+2*t+1`, coefficients are element
    /// indices) or the JSON array form `[i_0, i_1, …, i_n]`.
    pub fn parse(field: &FieldSpec, src: &str) -> Result<Poly> {
        let trimmed = src.trim();
        if trimmed.starts_with('[') {
            let coeffs: Vec<u64> = serde_json::from_str(trimmed)
                .map_err(|e| Error::Parse(format!("bad coefficient array: {e}")))?;
            return Poly::from_indices(field, &coeffs);
        }
        let terms = literal::parse_terms(trimmed)?;
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![0u32; deg + 1];
        for (c, d) in terms {
            if c >= field.q() {
                return Err(Error::Parse(format!("coefficient index {c} is not below q = {}", field.q())));
            }
            coeffs[d] = field.add(coeffs[d], c as u32);
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    pub fn from_indices(field: &FieldSpec, coeffs: &[u64]) -> Result<Poly> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for &c in coeffs {
            if c >= field.q() {
                return Err(Error::Parse(format!("coefficient index {c} is not below q = {}", field.q())));
            }
            raw.push(c as u32);
        }
        Ok(Poly::from_raw(field, raw))
    }

    /// Canonical literal, highest degree first: `t^3+2*t+1`.
    pub fn to_literal(&self) -> String {
        let wide: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        literal::format_terms(&wide, 't', true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_input_forms_agree() {
        let f3 = FieldSpec::prime(3).unwrap();
        let a = Poly::parse(&f3, "t^3+2*t+1").unwrap();
        let b = Poly::parse(&f3, "[1, 2, 0, 1]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_literal(), "t^3+2*t+1");
        assert_eq!(Poly::parse(&f3, "t + t").unwrap().to_literal(), "2*t");
        assert_eq!(Poly::parse(&f3, "[0, 0, 0]").unwrap().to_literal(), "0");
    }

    #[test]
    fn rejects_out_of_range_coefficients() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(matches!(Poly::parse(&f2, "2*t"), Err(Error::Parse(_))));
        assert!(matches!(Poly::parse(&f2, "[0, 3]"), Err(Error::Parse(_))));
        assert!(matches!(Poly::parse(&f2, "[0, "), Err(Error::Parse(_))));
    }
}
