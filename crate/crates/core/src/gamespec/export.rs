use std::fmt::Write;

use super::{ActionDecl, GameBlock, MapEntry, SpecDocument, Spans};
use crate::catalog::ProtocolEntry;
use crate::claims::{ClaimKind, Expectation};
use crate::expr::ParamRole;
use crate::model::{Outcome, Party, RuleKind};

pub fn document_from_entry(entry: &ProtocolEntry) -> SpecDocument {
    let m = &entry.model;
    let games = entry
        .games
        .iter()
        .map(|g| GameBlock {
            name: g.name().to_string(),
            kind: g.kind(),
            actions: Party::BOTH
                .into_iter()
                .map(|p| ActionDecl {
                    party: p,
                    actions: g.actions(p).actions.clone(),
                    honest: Some(g.actions(p).honest.clone()),
                })
                .collect(),
            map: g
                .profiles()
                .map(|profile| MapEntry {
                    branches: g.distribution(&profile).expect("total map").branches().to_vec(),
                    profile,
                })
                .collect(),
        })
        .collect();
    SpecDocument {
        protocol: entry.name.clone(),
        notes: entry.notes.clone(),
        parties: m.party_names().to_vec(),
        params: m.params().to_vec(),
        constraints: m.constraints().to_vec(),
        events: m.atoms().to_vec(),
        rules: m.rules().to_vec(),
        outcomes: m.enumerate_outcomes().to_vec(),
        games,
        claims: entry.claims.clone(),
        preferences: entry.preferences.clone(),
        measures: entry.measures.clone(),
        spans: Spans::default(),
    }
}

pub fn export_entry(entry: &ProtocolEntry) -> String {
    export(&document_from_entry(entry))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical text: fixed section order, one declaration per line, a blank
/// line between sections and two-space indentation inside games.
pub fn export(doc: &SpecDocument) -> String {
    let party = |p: Party| doc.parties.get(p.index()).map(String::as_str).unwrap_or(match p {
        Party::A => "A",
        Party::B => "B",
    });
    // Events inside a set follow declaration order.
    let outcome = |o: &Outcome| {
        let mut atoms: Vec<&str> = o.atoms().collect();
        atoms.sort_by_key(|a| doc.events.iter().position(|e| e.name == *a).unwrap_or(usize::MAX));
        format!("{{{}}}", atoms.join(", "))
    };

    let mut sections: Vec<Vec<String>> = vec![];
    let mut head = vec![format!("protocol {}", quote(&doc.protocol))];
    head.extend(doc.notes.iter().map(|n| format!("note {}", quote(n))));
    sections.push(head);
    sections.push(doc.parties.iter().map(|p| format!("party {p}")).collect());

    let mut params: Vec<String> = doc
        .params
        .iter()
        .map(|p| match p.role {
            ParamRole::Other => format!("param {}", p.name),
            role => format!("param {} {}", p.name, role.as_str()),
        })
        .collect();
    params.extend(doc.constraints.iter().map(|c| format!("constraint {c}")));
    sections.push(params);

    let mut events: Vec<String> = doc
        .events
        .iter()
        .map(|e| match e.subject {
            Some(p) => format!("event {} {} by {}", e.name, quote(&e.description), party(p)),
            None => format!("event {} {}", e.name, quote(&e.description)),
        })
        .collect();
    events.extend(doc.rules.iter().map(|r| {
        let kw = match r.kind {
            RuleKind::Income => "income",
            RuleKind::Expense => "expense",
        };
        format!("{kw} {} {} when {}", party(r.party), r.amount, r.trigger)
    }));
    sections.push(events);
    sections.push(doc.outcomes.iter().map(|o| format!("outcome {}", outcome(o))).collect());

    for g in &doc.games {
        let mut lines = vec![format!("game {} {}", g.name, g.kind.as_str())];
        for a in &g.actions {
            let mut line = format!("  action {}: {}", party(a.party), a.actions.join(" | "));
            if let Some(h) = &a.honest {
                write!(line, " honest {h}").expect("string write");
            }
            lines.push(line);
        }
        for m in &g.map {
            let branches: Vec<String> = m
                .branches
                .iter()
                .map(|(o, p)| format!("{} @ {p}", outcome(o)))
                .collect();
            lines.push(format!(
                "  map ({}, {}) -> {}",
                m.profile.a,
                m.profile.b,
                branches.join(", ")
            ));
        }
        sections.push(lines);
    }

    sections.push(
        doc.claims
            .iter()
            .map(|c| {
                let body = match &c.kind {
                    ClaimKind::Chain(ch) => format!(
                        "chain {} : {ch} {}",
                        party(ch.party),
                        match ch.expect {
                            Expectation::Holds => "expected",
                            Expectation::Refuted => "rejected",
                        }
                    ),
                    ClaimKind::Fairness(f) => format!(
                        "fairness honest {} : {} {} => {} {}",
                        party(f.honest),
                        party(f.antecedent.0),
                        f.antecedent.1,
                        party(f.consequent.0),
                        f.consequent.1
                    ),
                    ClaimKind::Nash(n) => format!(
                        "nash {} ({}, {}) {}",
                        n.game,
                        n.profile.a,
                        n.profile.b,
                        if n.expect_nash { "expected" } else { "rejected" }
                    ),
                };
                format!("claim {} {body}", quote(&c.id))
            })
            .collect(),
    );

    let mut prefs: Vec<String> = doc
        .preferences
        .iter()
        .map(|p| {
            let tiers: Vec<String> = p
                .tiers
                .iter()
                .map(|t| t.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(", "))
                .collect();
            format!("preference {} : {}", party(p.party), tiers.join(" < "))
        })
        .collect();
    prefs.extend(
        doc.measures
            .iter()
            .map(|m| format!("measure {} {} = {}", party(m.party), m.property.as_str(), m.amount)),
    );
    sections.push(prefs);

    let mut out = String::new();
    for (i, s) in sections.iter().filter(|s| !s.is_empty()).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for line in s {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}
