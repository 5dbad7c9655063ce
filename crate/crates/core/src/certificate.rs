//! JSON coloring certificates: `{"n": int, "k": int, "colors": [int; n], "meta": {...}}`.
//!
//! Colors must already be in canonical restricted-growth form. A file that is
//! not is rejected with the normalized colors in the error, never renamed.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::{find_rainbow_triple, residue_palettes, ColorId, Coloring, Palette};
use crate::error::{invalid, Error, Result};
use crate::modular::{CyclicInstance, Triple};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u64,
    pub k: i64,
    pub colors: Vec<ColorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<CertificateMeta>,
}

/// What re-checking a certificate found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub instance: CyclicInstance,
    pub num_colors: usize,
    pub rainbow_triple: Option<Triple>,
}

impl Verification {
    pub fn is_rainbow_free(&self) -> bool {
        self.rainbow_triple.is_none()
    }
}

impl Certificate {
    /// Certificate for `c`, relabeled into canonical form.
    pub fn from_coloring(c: &Coloring, k: i64, meta: Option<CertificateMeta>) -> Self {
        Self {
            n: c.n(),
            k,
            colors: c.canonical().into_colors(),
            meta,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn instance(&self) -> Result<CyclicInstance> {
        CyclicInstance::new(self.n, self.k)
    }

    /// Structural checks: length matches `n` and colors are canonical.
    pub fn coloring(&self) -> Result<Coloring> {
        if self.colors.len() as u64 != self.n {
            return Err(invalid(format!(
                "certificate declares n = {} but lists {} colors",
                self.n,
                self.colors.len()
            )));
        }
        let c = Coloring::new(self.colors.clone())?;
        if !c.is_canonical() {
            return Err(Error::NonCanonical {
                normalized: c.canonical().into_colors(),
            });
        }
        Ok(c)
    }

    /// Recomputes exactness and rainbow-freeness from scratch.
    pub fn verify(&self) -> Result<Verification> {
        let instance = self.instance()?;
        let c = self.coloring()?;
        Ok(Verification {
            instance,
            num_colors: c.num_colors(),
            rainbow_triple: find_rainbow_triple(&c, self.k),
        })
    }

    /// Residue palettes for every proper divisor `t` of `n` with `1 < t < n`.
    pub fn palettes_by_divisor(&self) -> Result<Vec<(u64, Vec<Palette>)>> {
        let c = self.coloring()?;
        (2..self.n)
            .filter(|t| self.n.is_multiple_of(*t))
            .map(|t| Ok((t, residue_palettes(&c, t)?)))
            .collect()
    }
}
