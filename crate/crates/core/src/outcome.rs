//! Three-valued search results.
//!
//! `ProvedYes` always carries a witness, `ProvedNo` is only produced by a
//! search that exhausted its space (or by a necessary condition failing), and
//! `Unknown` means the budget ran out or the method cannot decide.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    ProvedYes,
    ProvedNo,
    Unknown,
}

impl Status {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::ProvedYes => 0,
            Status::ProvedNo => 1,
            Status::Unknown => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvedYes => "proved-yes",
            Status::ProvedNo => "proved-no",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<W> {
    pub status: Status,
    pub witness: Option<W>,
    /// Decision nodes or climb iterations consumed.
    pub effort: u64,
    /// Why the answer is what it is, when that is not obvious from the status.
    pub note: Option<String>,
}

impl<W> SearchOutcome<W> {
    pub fn yes(witness: W, effort: u64) -> Self {
        SearchOutcome {
            status: Status::ProvedYes,
            witness: Some(witness),
            effort,
            note: None,
        }
    }

    pub fn no(effort: u64, note: impl Into<Option<String>>) -> Self {
        SearchOutcome {
            status: Status::ProvedNo,
            witness: None,
            effort,
            note: note.into(),
        }
    }

    pub fn unknown(effort: u64, note: impl Into<Option<String>>) -> Self {
        SearchOutcome {
            status: Status::Unknown,
            witness: None,
            effort,
            note: note.into(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::ProvedYes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::ProvedNo
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }

    pub fn map<U, F: FnOnce(W) -> U>(self, f: F) -> SearchOutcome<U> {
        SearchOutcome {
            status: self.status,
            witness: self.witness.map(f),
            effort: self.effort,
            note: self.note,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
