//! Claims attached to a protocol: payoff-value chains, fairness
//! implications, equilibrium statements and property preferences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::game::Profile;
use crate::model::Party;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Separator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    /// Adjacent entries in the same unordered group; no order is claimed.
    #[serde(rename = "|")]
    Unordered,
}

impl Separator {
    pub fn as_str(self) -> &'static str {
        match self {
            Separator::Lt => "<",
            Separator::Le => "<=",
            Separator::Eq => "=",
            Separator::Unordered => "|",
        }
    }
}

impl fmt::Display for Separator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Refuted,
}

/// An ordered list of payoff values for one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainClaim {
    pub party: Party,
    pub entries: Vec<Expr>,
    pub separators: Vec<Separator>,
    pub expect: Expectation,
}

impl ChainClaim {
    pub fn new(party: Party, entries: Vec<Expr>, separators: Vec<Separator>, expect: Expectation) -> Self {
        assert!(entries.len() >= 2, "a chain needs at least two entries");
        assert_eq!(separators.len() + 1, entries.len(), "one separator between each pair");
        ChainClaim {
            party,
            entries,
            separators,
            expect,
        }
    }

    /// Convenience constructor for a chain with one separator everywhere.
    pub fn uniform(party: Party, entries: Vec<Expr>, sep: Separator, expect: Expectation) -> Self {
        let n = entries.len().saturating_sub(1);
        Self::new(party, entries, vec![sep; n], expect)
    }
}

impl fmt::Display for ChainClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries[0])?;
        for (sep, e) in self.separators.iter().zip(&self.entries[1..]) {
            write!(f, " {sep} {e}")?;
        }
        Ok(())
    }
}

/// With `honest` playing its honest action: if `antecedent.0`'s income
/// includes `antecedent.1`, then `consequent.0`'s income includes
/// `consequent.1` in the same branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessImplication {
    pub honest: Party,
    pub antecedent: (Party, Expr),
    pub consequent: (Party, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashClaim {
    pub game: String,
    pub profile: Profile,
    pub expect_nash: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    Chain(ChainClaim),
    Fairness(FairnessImplication),
    Nash(NashClaim),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
}

impl Claim {
    pub fn chain(id: &str, chain: ChainClaim) -> Self {
        Claim {
            id: id.to_string(),
            kind: ClaimKind::Chain(chain),
        }
    }

    pub fn fairness(id: &str, implication: FairnessImplication) -> Self {
        Claim {
            id: id.to_string(),
            kind: ClaimKind::Fairness(implication),
        }
    }

    pub fn nash(id: &str, game: &str, profile: Profile, expect_nash: bool) -> Self {
        Claim {
            id: id.to_string(),
            kind: ClaimKind::Nash(NashClaim {
                game: game.to_string(),
                profile,
                expect_nash,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Correctness,
    Privacy,
    Fairness,
    Exclusiveness,
    Voyeurism,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Correctness,
        Property::Privacy,
        Property::Fairness,
        Property::Exclusiveness,
        Property::Voyeurism,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Correctness => "correctness",
            Property::Privacy => "privacy",
            Property::Fairness => "fairness",
            Property::Exclusiveness => "exclusiveness",
            Property::Voyeurism => "voyeurism",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

/// A party's ranking of properties: tiers from least to most valued.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preference {
    pub party: Party,
    pub tiers: Vec<Vec<Property>>,
}

/// The payoff quantity that stands for a property's value to a party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub party: Party,
    pub property: Property,
    pub amount: Expr,
}
