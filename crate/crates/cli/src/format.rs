//! Versioned JSON instance files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "fine",
//!   "generator": { "name": "...", "params": { ... } },
//!   "notes": "...",
//!   "instance": { ... }
//! }
//! ```
//!
//! `generator` and `notes` are optional. Money and power values are written
//! with exactly two decimals.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use siteflow::datagen::{GenParams, ScatterParams};
use siteflow::{CoarseInstance, FineInstance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Coarse,
    Fine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMetadata {
    pub name: String,
    pub params: GenParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<ScatterParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Coarse(CoarseInstance),
    Fine(FineInstance),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Coarse(_) => Kind::Coarse,
            Payload::Fine(_) => Kind::Fine,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub generator: Option<GeneratorMetadata>,
    pub notes: Option<String>,
    pub payload: Payload,
}

#[derive(Serialize)]
struct Written<'a> {
    format_version: u32,
    kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'a GeneratorMetadata>,
    #[serde(skip_serializing_if = "Option::is_none")]
    notes: Option<&'a str>,
    instance: &'a Payload,
}

#[derive(Deserialize)]
struct Read<'a> {
    format_version: u32,
    kind: Kind,
    #[serde(default)]
    generator: Option<GeneratorMetadata>,
    #[serde(default)]
    notes: Option<String>,
    #[serde(borrow)]
    instance: &'a RawValue,
}

impl InstanceFile {
    pub fn new(payload: Payload) -> Self {
        InstanceFile { generator: None, notes: None, payload }
    }

    pub fn to_json(&self) -> Result<String> {
        let written = Written {
            format_version: FORMAT_VERSION,
            kind: self.payload.kind(),
            generator: self.generator.as_ref(),
            notes: self.notes.as_deref(),
            instance: &self.payload,
        };
        let mut text = serde_json::to_string_pretty(&written)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let read: Read<'_> = serde_json::from_str(text).context("malformed instance file")?;
        if read.format_version != FORMAT_VERSION {
            bail!("unsupported format_version {} (expected {FORMAT_VERSION})", read.format_version);
        }
        let payload = match read.kind {
            Kind::Coarse => {
                let inst: CoarseInstance =
                    serde_json::from_str(read.instance.get()).context("malformed coarse instance")?;
                inst.validate()?;
                Payload::Coarse(inst)
            }
            Kind::Fine => {
                let inst: FineInstance = serde_json::from_str(read.instance.get()).context("malformed fine instance")?;
                inst.validate()?;
                Payload::Fine(inst)
            }
        };
        Ok(InstanceFile { generator: read.generator, notes: read.notes, payload })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }

    pub fn into_coarse(self) -> Result<CoarseInstance> {
        match self.payload {
            Payload::Coarse(inst) => Ok(inst),
            Payload::Fine(_) => bail!("expected a coarse instance, found a fine one"),
        }
    }

    pub fn into_fine(self) -> Result<FineInstance> {
        match self.payload {
            Payload::Fine(inst) => Ok(inst),
            Payload::Coarse(_) => bail!("expected a fine instance, found a coarse one"),
        }
    }
}
