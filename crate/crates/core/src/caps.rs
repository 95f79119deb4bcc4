//! Size limits for dense tables and exhaustive searches.
//!
//! `LATTICECALC_CAPS` may raise any of them, e.g.
//! `LATTICECALC_CAPS="sites=14,table=4194304,bfs=5000000"`. Values below the
//! defaults are ignored.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "LATTICECALC_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest support of a dense local table.
    pub max_sites: usize,
    /// Largest number of entries `|S|^|Λ|` of a dense table.
    pub max_table_entries: u128,
    /// Largest component explored by configuration BFS.
    pub max_bfs_states: usize,
    /// Largest `|S|^|X|` for finite cohomology.
    pub max_configurations: u128,
    /// Largest number of unknowns in an invariance-kernel system.
    pub max_unknowns: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_sites: 12,
            max_table_entries: 1 << 20,
            max_bfs_states: 1_000_000,
            max_configurations: 1 << 20,
            max_unknowns: 20_000,
        }
    }
}

impl Caps {
    /// Process-wide caps: defaults raised by the environment, read once.
    pub fn current() -> Caps {
        static CURRENT: std::sync::OnceLock<Caps> = std::sync::OnceLock::new();
        *CURRENT.get_or_init(|| Caps::from_env().unwrap_or_default())
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(desc) => Caps::default().raised_by(&desc),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn raised_by(mut self, desc: &str) -> Result<Self> {
        for item in desc.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("{ENV_VAR}: expected key=value, got {item:?}")))?;
            let value: u128 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{ENV_VAR}: bad number in {item:?}")))?;
            let as_usize = usize::try_from(value).unwrap_or(usize::MAX);
            match key.trim() {
                "sites" => self.max_sites = self.max_sites.max(as_usize),
                "table" => self.max_table_entries = self.max_table_entries.max(value),
                "bfs" => self.max_bfs_states = self.max_bfs_states.max(as_usize),
                "configs" => self.max_configurations = self.max_configurations.max(value),
                "unknowns" => self.max_unknowns = self.max_unknowns.max(as_usize),
                other => return Err(Error::Parse(format!("{ENV_VAR}: unknown key {other:?}"))),
            }
        }
        Ok(self)
    }

    pub fn check_table(&self, states: usize, sites: usize) -> Result<()> {
        let entries = (states as u128).checked_pow(sites as u32).unwrap_or(u128::MAX);
        if sites > self.max_sites || entries > self.max_table_entries {
            return Err(Error::SupportCap { sites, entries });
        }
        Ok(())
    }
}
