use std::fmt::Display;
use std::fs;
use std::path::Path;

use psts::outcome::Status;

/// A usage or input problem; always exit code 3.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

pub fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

/// Ordered `key=value` lines. Wall time goes to stderr so that reports stay
/// byte-identical across runs.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        // Values are single-line by construction.
        let v = value.to_string().replace('\n', "; ");
        self.lines.push((key.to_string(), v));
        self
    }

    /// Appends an already formatted `key=value` block under a prefix.
    pub fn extend_text(&mut self, prefix: &str, text: &str) {
        for line in text.lines() {
            if let Some((k, v)) = line.split_once('=') {
                self.set(&format!("{prefix}{k}"), v);
            }
        }
    }

    pub fn status(&mut self, s: Status) -> u8 {
        self.set("status", s);
        s.exit_code() as u8
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn emit(&self, to: Option<&Path>) -> Result<(), Failure> {
        match to {
            Some(p) => write(p, &self.render()),
            None => {
                print!("{}", self.render());
                Ok(())
            }
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}
