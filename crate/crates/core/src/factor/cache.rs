use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;

use crate::error::Result;
use crate::gf::FieldSpec;
use crate::poly::{Nat, Poly};
use crate::registry::Named;

use super::{Factorization, Factorizer};

/// Memoizes another factorizer keyed by `(field, δ(f))`.
pub struct CachedFactorizer<F> {
    inner: F,
    cache: Mutex<LruCache<(FieldSpec, Nat), Factorization>>,
}

impl<F: Factorizer> CachedFactorizer<F> {
    pub fn new(inner: F, capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        CachedFactorizer { inner, cache: Mutex::new(LruCache::new(cap)) }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<F: Factorizer> Named for CachedFactorizer<F> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }
}

impl<F: Factorizer> Factorizer for CachedFactorizer<F> {
    fn factorize(&self, f: &Poly) -> Result<Factorization> {
        let key = (f.field().clone(), f.delta());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let fz = self.inner.factorize(f)?;
        self.cache.lock().unwrap().put(key, fz.clone());
        Ok(fz)
    }
}
