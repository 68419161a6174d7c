//! Per-algebra memo tables, written once per key and shared between readers.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::pbw::{AlgElem, Color, Monomial, TensorElem};
use crate::scalar::Scalar;

pub(crate) struct Table<K, V>(RwLock<HashMap<K, Arc<V>>>);

impl<K, V> Default for Table<K, V> {
    fn default() -> Self {
        Table(RwLock::new(HashMap::new()))
    }
}

impl<K: Eq + Hash + Clone, V> Table<K, V> {
    pub(crate) fn get_or_try<F>(&self, key: &K, build: F) -> Result<Arc<V>>
    where
        F: FnOnce() -> Result<V>,
    {
        if let Some(v) = self.0.read().unwrap().get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(build()?);
        self.0.write().unwrap().entry(key.clone()).or_insert(v.clone());
        Ok(v)
    }
}

#[derive(Default)]
pub(crate) struct Memo {
    pub r: Table<(Color, Color), TensorElem>,
    pub r_inv: Table<(Color, Color), TensorElem>,
    pub z: Table<Color, AlgElem>,
    pub traces: Table<Color, HashMap<Monomial, Scalar>>,
    pub idempotents: Table<Color, Vec<AlgElem>>,
}
