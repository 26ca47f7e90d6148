use anyhow::Context;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Writes `<dir>/<name>.json` and `<dir>/<name>.csv`.
pub struct Output {
    dir: PathBuf,
}

#[derive(Serialize)]
struct ErrorDoc {
    error: String,
    message: String,
}

impl Output {
    pub fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn ensure(&self) -> anyhow::Result<()> {
        std::fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))
    }

    pub fn json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn csv<T: Serialize>(&self, name: &str, rows: &[T]) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(format!("{name}.csv"));
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(path)
    }

    /// Best-effort `error.json` describing a failed run.
    pub fn error(&self, e: &anyhow::Error) {
        let kind = match e.downcast_ref::<bicyclic::Error>() {
            Some(inner) => {
                let dbg = format!("{inner:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
            None => "Input".to_string(),
        };
        let doc = ErrorDoc { error: kind, message: format!("{e:#}") };
        if self.ensure().is_ok() {
            let _ = self.json("error", &doc);
        }
    }
}
