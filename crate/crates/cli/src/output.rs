use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Output directory, created on first write.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &Path) -> Self {
        Self { root: root.to_path_buf() }
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.root).with_context(|| format!("creating {}", self.root.display()))?;
        let path = self.root.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    /// Deletes a leftover artifact from an earlier run, if any.
    pub fn remove(&self, name: &str) -> Result<()> {
        let path = self.root.join(name);
        match fs::remove_file(&path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => {
                Err(e).with_context(|| format!("removing {}", path.display()))
            }
            _ => Ok(()),
        }
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// `state,probability` rows.
pub fn distribution_csv(labels: &[String], weights: &[f64]) -> String {
    let mut out = String::from("state,probability\n");
    for (label, w) in labels.iter().zip(weights) {
        out.push_str(&format!("{label},{w}\n"));
    }
    out
}

pub fn render_distribution(labels: &[String], weights: &[f64], decimals: usize) -> String {
    labels
        .iter()
        .zip(weights)
        .map(|(l, w)| format!("{l}={w:.decimals$}"))
        .collect::<Vec<_>>()
        .join("  ")
}
