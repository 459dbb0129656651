//! `gamespec`: a line-oriented text format for payoff models, games and
//! claims.
//!
//! ```text
//! protocol "demo"
//! party A
//! party B
//! param u
//! constraint 0 < u
//! event got "B receives the secret" by B
//! income B u when got
//! outcome {}
//! outcome {got}
//! game rational rational
//!   action A: follow | stop honest follow
//!   action B: follow honest follow
//!   map (follow, follow) -> {got} @ 1
//!   map (stop, follow) -> {} @ 1
//! claim "values" chain B : 0 < u expected
//! ```
//!
//! [`parse`] checks syntax, names and probabilities; [`elaborate`] builds the
//! engine values. [`export`] prints the canonical form, which re-parses to an
//! equal document.

mod elaborate;
mod export;
mod lexer;
mod parser;

use std::fmt;

use crate::claims::{Claim, Measure, Preference};
use crate::expr::{Constraint, Param};
use crate::game::{GameKind, Profile};
use crate::model::{EventAtom, Outcome, Party, PayoffRule};
use crate::rational::Rational;

pub use elaborate::elaborate;
pub use export::{document_from_entry, export, export_entry};
pub use parser::parse;

pub const FILE_EXTENSION: &str = "gamespec";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message} (at {token:?})")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>, token: &str) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
            token: token.to_string(),
        }
    }

    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError::new(pos.line, pos.column, message, &pos.token)
    }
}

/// Where a declaration starts in the source.
#[derive(Clone, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
    pub token: String,
}

/// Source positions kept for diagnostics during elaboration. They never
/// take part in document equality.
#[derive(Clone, Debug, Default)]
pub struct Spans {
    pub protocol: Pos,
    pub games: Vec<GameSpans>,
}

#[derive(Clone, Debug, Default)]
pub struct GameSpans {
    pub header: Pos,
    pub actions: Vec<Pos>,
    pub map: Vec<Pos>,
}

impl PartialEq for Spans {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Spans {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub party: Party,
    pub actions: Vec<String>,
    pub honest: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapEntry {
    pub profile: Profile,
    pub branches: Vec<(Outcome, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameBlock {
    pub name: String,
    pub kind: GameKind,
    pub actions: Vec<ActionDecl>,
    pub map: Vec<MapEntry>,
}

impl GameBlock {
    pub fn actions_of(&self, party: Party) -> Option<&ActionDecl> {
        self.actions.iter().find(|a| a.party == party)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecDocument {
    pub protocol: String,
    pub notes: Vec<String>,
    /// Exactly two names; the first is party A.
    pub parties: Vec<String>,
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    pub events: Vec<EventAtom>,
    pub rules: Vec<PayoffRule>,
    /// Empty means every subset of the events is feasible.
    pub outcomes: Vec<Outcome>,
    pub games: Vec<GameBlock>,
    pub claims: Vec<Claim>,
    pub preferences: Vec<Preference>,
    pub measures: Vec<Measure>,
    pub spans: Spans,
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&export(self))
    }
}

/// [`parse`] followed by [`elaborate`].
pub fn load(text: &str) -> Result<crate::catalog::ProtocolEntry, ParseError> {
    elaborate(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{get_protocol, PROTOCOL_NAMES};

    #[test]
    fn catalog_round_trip() {
        for name in PROTOCOL_NAMES {
            let entry = get_protocol(name).unwrap();
            let text = export_entry(&entry);
            let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(doc, document_from_entry(&entry), "{name}");
            assert_eq!(export(&doc), text, "{name}");
            let back = elaborate(&doc).unwrap();
            assert_eq!(back.model, entry.model);
            assert_eq!(back.games, entry.games);
            assert_eq!(back.claims, entry.claims);
        }
    }

    #[test]
    fn probabilities_print_as_fractions() {
        let text = export_entry(&get_protocol("oblivious_transfer").unwrap());
        assert!(text.contains("@ 1/2"));
    }

    #[test]
    fn elaboration_errors() {
        let base = "protocol \"t\"\nparty A\nparty B\nevent e \"x\"\ngame g custom\n  action A: x | y honest x\n";
        let missing = format!("{base}  action B: z honest z\n  map (x, z) -> {{}} @ 1\n");
        let e = load(&missing).unwrap_err();
        assert!(e.message.contains("(y, z)"), "{e}");
        assert_eq!(e.line, 5);
        let unmarked = format!("{base}  action B: z\n  map (x, z) -> {{}} @ 1\n  map (y, z) -> {{}} @ 1\n");
        let e = load(&unmarked).unwrap_err();
        assert!(e.message.contains("honest"), "{e}");
        assert_eq!(e.line, 7);
        let ok = format!("{base}  action B: z honest z\n  map (x, z) -> {{}} @ 1\n  map (y, z) -> {{e}} @ 1\n");
        let entry = load(&ok).unwrap();
        assert_eq!(entry.model.enumerate_outcomes().len(), 2);
    }
}
