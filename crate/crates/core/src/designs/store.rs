//! Small designs shipped as data. The default store is compiled in; the
//! environment variable `HWP_DESIGN_STORE` points at a directory with the
//! same layout to use instead. Every entry is checked when loaded.

use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;

use super::latin::MolsSquare;
use crate::certify::Certificate;
use crate::error::{invalid, HwpError, Result};
use crate::graph::GraphSpec;

const EMBEDDED: [(&str, &str); 5] = [
    ("index.json", include_str!("../../designs/index.json")),
    ("kts9.json", include_str!("../../designs/kts9.json")),
    ("kts15.json", include_str!("../../designs/kts15.json")),
    ("kts21.json", include_str!("../../designs/kts21.json")),
    ("mols10.json", include_str!("../../designs/mols10.json")),
];

#[derive(Debug, Deserialize)]
struct Index {
    designs: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Entry {
    UniformFactorization { name: String, v: usize, cycle_len: usize, file: String },
    OrthogonalPair { name: String, order: usize, file: String },
}

#[derive(Debug, Default)]
pub struct DesignStore {
    pub uniform: Vec<(String, Certificate)>,
    pub mols: Vec<(String, MolsSquare)>,
}

impl DesignStore {
    /// Parses and checks a store; `read` maps a file name to its contents.
    pub fn load(read: impl Fn(&str) -> Result<String>) -> Result<DesignStore> {
        let index: Index = serde_json::from_str(&read("index.json")?)?;
        let mut store = DesignStore::default();
        for entry in index.designs {
            match entry {
                Entry::UniformFactorization { name, v, cycle_len, file } => {
                    let cert = Certificate::from_json(&read(&file)?)?;
                    let uniform = cert.factors.iter().flatten().all(|c| c.len() == cycle_len);
                    if cert.graph != GraphSpec::complete_star(v) || !uniform || !cert.verify().ok {
                        return invalid(format!("stored design {name} does not verify"));
                    }
                    store.uniform.push((name, cert));
                }
                Entry::OrthogonalPair { name, order, file } => {
                    let pair: MolsSquare = serde_json::from_str(&read(&file)?)?;
                    if pair.order != order {
                        return invalid(format!("stored design {name} has the wrong order"));
                    }
                    pair.validate()
                        .map_err(|e| HwpError::Invalid(format!("stored design {name}: {e}")))?;
                    store.mols.push((name, pair));
                }
            }
        }
        Ok(store)
    }

    pub fn embedded() -> Result<DesignStore> {
        DesignStore::load(|file| {
            EMBEDDED
                .iter()
                .find(|(f, _)| *f == file)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| HwpError::Invalid(format!("no embedded design file {file}")))
        })
    }

    pub fn from_dir(dir: &Path) -> Result<DesignStore> {
        DesignStore::load(|file| Ok(std::fs::read_to_string(dir.join(file))?))
    }

    pub fn uniform(&self, v: usize, cycle_len: usize) -> Option<(&str, &Certificate)> {
        self.uniform
            .iter()
            .find(|(_, c)| c.graph == GraphSpec::complete_star(v) && c.factors[0][0].len() == cycle_len)
            .map(|(name, c)| (name.as_str(), c))
    }
}

/// The process-wide store, loaded on first use.
pub fn design_store() -> Result<&'static DesignStore> {
    static STORE: OnceLock<std::result::Result<DesignStore, String>> = OnceLock::new();
    let loaded = STORE.get_or_init(|| {
        let store = match std::env::var_os("HWP_DESIGN_STORE") {
            Some(dir) => DesignStore::from_dir(Path::new(&dir)),
            None => DesignStore::embedded(),
        };
        store.map_err(|e| e.to_string())
    });
    loaded.as_ref().map_err(|e| HwpError::Invalid(format!("design store: {e}")))
}

pub(crate) fn stored_mols(order: usize) -> Result<Option<MolsSquare>> {
    Ok(design_store()?
        .mols
        .iter()
        .find(|(_, p)| p.order == order)
        .map(|(_, p)| p.clone()))
}
