//! Resource caps shared by the expensive operations.

use std::env;

pub const DEFAULT_Q_CAP: u64 = 1 << 16;

/// Caps for the operations whose cost is exponential in degree. Exceeding any
/// of them is reported as [`crate::Error::CapExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest field size accepted by [`crate::gf::FieldSpec`].
    pub q_cap: u64,
    /// Largest δ(f) for which `f!` may be materialized.
    pub factorial_delta_cap: u64,
    /// Largest δ-index the pure-definition oracle scans to.
    pub definition_oracle_cap: u64,
    /// Largest δ-index the valuation oracle scans to.
    pub valuation_oracle_cap: u64,
    /// Largest number of monic polynomials a census or sieve level may enumerate.
    pub census_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            q_cap: DEFAULT_Q_CAP,
            factorial_delta_cap: 4096,
            definition_oracle_cap: 512,
            valuation_oracle_cap: 10_000_000,
            census_cap: 1 << 24,
        }
    }
}

impl Limits {
    /// Defaults overridden by `SMARANDACHE_Q_CAP`, `SMARANDACHE_DELTA_CAP`,
    /// `SMARANDACHE_DEFINITION_CAP`, `SMARANDACHE_VALUATION_CAP` and
    /// `SMARANDACHE_CENSUS_CAP` when set to a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        let read = |key: &str, slot: &mut u64| {
            if let Some(v) = env::var(key).ok().and_then(|s| s.trim().parse::<u64>().ok()) {
                if v > 0 {
                    *slot = v;
                }
            }
        };
        read("SMARANDACHE_Q_CAP", &mut limits.q_cap);
        read("SMARANDACHE_DELTA_CAP", &mut limits.factorial_delta_cap);
        read("SMARANDACHE_DEFINITION_CAP", &mut limits.definition_oracle_cap);
        read("SMARANDACHE_VALUATION_CAP", &mut limits.valuation_oracle_cap);
        read("SMARANDACHE_CENSUS_CAP", &mut limits.census_cap);
        limits
    }
}
