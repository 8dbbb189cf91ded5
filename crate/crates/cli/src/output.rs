//! CSV formatting, staged writes and the run manifest.
//!
//! Every file is first written as `<name>.partial` and renamed only once the
//! whole command has succeeded; the manifest is written last.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lrtrap::{ChainConfig, Exponent};

use crate::config::Settings;

/// Floats are always written with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn nu_field(nu: Exponent) -> String {
    match nu {
        Exponent::Infinite => "inf".into(),
        Exponent::Finite(v) => float(v),
    }
}

/// `;`-separated so the list stays one CSV field.
pub fn traps(traps: &[usize]) -> String {
    traps.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

pub fn config_comment(cfg: &ChainConfig) -> String {
    format!(
        "N={} nu={} gamma={} traps={}",
        cfg.n_nodes(),
        cfg.nu(),
        float(cfg.gamma()),
        traps(cfg.traps())
    )
}

/// In-memory CSV: one `#` comment line, a column header, then rows.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new(comment: &str, columns: &[&str]) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# {comment}");
        let _ = writeln!(text, "{}", columns.join(","));
        Self {
            text,
            width: columns.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        debug_assert_eq!(fields.len(), self.width);
        let line: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    /// Data rows only, without the comment and header lines.
    pub fn body(&self) -> &str {
        let mut it = self.text.splitn(3, '\n');
        it.next();
        it.next();
        it.next().unwrap_or("")
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub struct Outputs {
    dir: PathBuf,
    staged: Vec<(PathBuf, PathBuf)>,
    started: Instant,
}

impl Outputs {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            staged: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        let target = self.dir.join(name);
        let partial = self.dir.join(format!("{name}.partial"));
        fs::write(&partial, contents)?;
        self.staged.push((target, partial));
        Ok(())
    }

    /// Publishes the staged files and then the manifest. Returns every path
    /// written, manifest last.
    pub fn finish(self, command: &str, stem: &str, settings: &Settings) -> io::Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.staged.len() + 1);
        for (target, partial) in &self.staged {
            fs::rename(partial, target)?;
            written.push(target.clone());
        }
        let mut text = String::new();
        let _ = writeln!(text, "command={command}");
        for (k, v) in settings {
            let _ = writeln!(text, "{k}={v}");
        }
        let names: Vec<String> = written
            .iter()
            .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect();
        let _ = writeln!(text, "outputs={}", names.join(","));
        let _ = writeln!(text, "tool_version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "wall_time={:.3}", self.started.elapsed().as_secs_f64());
        let manifest = self.dir.join(format!("{stem}.manifest"));
        let partial = self.dir.join(format!("{stem}.manifest.partial"));
        fs::write(&partial, text)?;
        fs::rename(&partial, &manifest)?;
        written.push(manifest);
        Ok(written)
    }
}
