use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::basis::XiBasisFreeEnergy;
use super::fit::fit_free_energy;
use super::FreeEnergyError;
use crate::hurwitz_numbers::HurwitzTable;

/// Lazily fitted free energies for one `r`, sharing a Hurwitz table.
pub struct FreeEnergyStore {
    pub r: u32,
    table: Arc<HurwitzTable>,
    fits: Mutex<BTreeMap<(u32, usize), Arc<XiBasisFreeEnergy>>>,
}

impl FreeEnergyStore {
    pub fn new(r: u32, table: Arc<HurwitzTable>) -> Self {
        Self { r, table, fits: Mutex::new(BTreeMap::new()) }
    }

    pub fn table(&self) -> &Arc<HurwitzTable> {
        &self.table
    }

    pub fn get(&self, g: u32, n: usize) -> Result<Arc<XiBasisFreeEnergy>, FreeEnergyError> {
        if let Some(f) = self.fits.lock().unwrap().get(&(g, n)) {
            return Ok(f.clone());
        }
        // Fit outside the lock; a racing fit produces the same value.
        let f = Arc::new(fit_free_energy(self.r, g, n, &self.table)?);
        Ok(self.fits.lock().unwrap().entry((g, n)).or_insert(f).clone())
    }

    /// Replaces a stored free energy, e.g. with a deliberately perturbed one.
    pub fn insert(&self, f: XiBasisFreeEnergy) {
        assert_eq!(f.r, self.r);
        self.fits.lock().unwrap().insert((f.g, f.n), Arc::new(f));
    }
}
