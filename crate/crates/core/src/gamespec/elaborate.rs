use std::sync::Arc;

use super::{ParseError, Pos, SpecDocument};
use crate::catalog::ProtocolEntry;
use crate::game::{ActionSet, OutcomeDistribution, Profile, StrategicGame};
use crate::model::{ModelParts, Party, PayoffModel};

/// Documents without `outcome` lines get every subset of their events,
/// which is only practical for a handful of events.
const MAX_IMPLICIT_EVENTS: usize = 16;

/// Builds the engine values for a parsed document: the payoff model, the
/// games (honest actions marked, maps total) and the claims.
pub fn elaborate(doc: &SpecDocument) -> Result<ProtocolEntry, ParseError> {
    let top = &doc.spans.protocol;
    let outcomes = if doc.outcomes.is_empty() {
        if doc.events.len() > MAX_IMPLICIT_EVENTS {
            return Err(ParseError::at(
                top.clone(),
                format!("{} events need an explicit outcome list", doc.events.len()),
            ));
        }
        (0u64..1 << doc.events.len())
            .map(|mask| {
                doc.events
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| e.name.clone())
                    .collect()
            })
            .collect()
    } else {
        doc.outcomes.clone()
    };
    let model = Arc::new(
        PayoffModel::new(ModelParts {
            name: doc.protocol.clone(),
            party_names: [doc.parties[0].clone(), doc.parties[1].clone()],
            params: doc.params.clone(),
            constraints: doc.constraints.clone(),
            atoms: doc.events.clone(),
            rules: doc.rules.clone(),
            outcomes,
        })
        .map_err(|e| ParseError::at(top.clone(), e.to_string()))?,
    );

    let mut games = vec![];
    for (gi, block) in doc.games.iter().enumerate() {
        let spans = doc.spans.games.get(gi).cloned().unwrap_or_default();
        let header = spans.header.clone();
        let party_name = |p: Party| doc.parties[p.index()].as_str();
        let mut sets = vec![];
        for party in Party::BOTH {
            let Some(idx) = block.actions.iter().position(|a| a.party == party) else {
                return Err(ParseError::at(
                    header,
                    format!("game '{}' has no action list for party '{}'", block.name, party_name(party)),
                ));
            };
            let decl = &block.actions[idx];
            let pos = spans.actions.get(idx).cloned().unwrap_or_else(|| header.clone());
            let Some(honest) = &decl.honest else {
                return Err(ParseError::at(
                    pos,
                    format!("no honest action marked for party '{}' in game '{}'", party_name(party), block.name),
                ));
            };
            let names: Vec<&str> = decl.actions.iter().map(String::as_str).collect();
            sets.push(ActionSet::new(party, &names, honest).map_err(|e| ParseError::at(pos, e.to_string()))?);
        }
        let b = sets.pop().expect("two action sets");
        let a = sets.pop().expect("two action sets");

        let mut entries = vec![];
        for x in &a.actions {
            for y in &b.actions {
                let profile = Profile::new(x, y);
                let Some(mi) = block.map.iter().position(|m| m.profile == profile) else {
                    return Err(ParseError::at(
                        header,
                        format!("game '{}' has no map entry for {profile}", block.name),
                    ));
                };
                let pos: Pos = spans.map.get(mi).cloned().unwrap_or_else(|| header.clone());
                let branches = block.map[mi].branches.clone();
                if let Some((o, _)) = branches.iter().find(|(o, _)| !model.is_feasible(o)) {
                    return Err(ParseError::at(pos, format!("outcome {o} is not in the outcome list")));
                }
                let dist = OutcomeDistribution::new(branches).map_err(|e| ParseError::at(pos, e.to_string()))?;
                entries.push((profile, dist));
            }
        }
        let game = StrategicGame::new(&block.name, block.kind, model.clone(), a, b, entries)
            .map_err(|e| ParseError::at(header.clone(), e.to_string()))?;
        games.push(game);
    }

    Ok(ProtocolEntry {
        name: doc.protocol.clone(),
        aliases: vec![],
        description: String::new(),
        model,
        games,
        claims: doc.claims.clone(),
        preferences: doc.preferences.clone(),
        measures: doc.measures.clone(),
        notes: doc.notes.clone(),
    })
}
