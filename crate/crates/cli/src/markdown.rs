//! Markdown rendering of the same values the JSON output carries.

use std::fmt::Write;

use protogame::analysis::Analysis;
use protogame::audit::{AuditReport, PairOrder, RankingVerdict, Verdict, Witness};
use protogame::catalog::CatalogListing;
use protogame::{Dominance, ParamSet};

pub fn listing(entries: &[CatalogListing]) -> String {
    let mut s = String::from("| protocol | aliases | description |\n|---|---|---|\n");
    for e in entries {
        let _ = writeln!(s, "| {} | {} | {} |", e.name, e.aliases.join(", "), e.description);
    }
    s
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::HoldsOnAllSamples => "holds on all samples",
        Verdict::Refuted => "refuted",
    }
}

fn witness(w: &Witness) -> String {
    match w {
        Witness::Inequality {
            params,
            step,
            separator,
            left,
            right,
        } => format!("step {step}: {left} {separator} {right} is false at {params}"),
        Witness::Fairness {
            params,
            profile,
            branch,
            probability,
        } => format!("profile {profile}, branch {branch} @ {probability}, at {params}"),
        Witness::Nash {
            params,
            sample,
            nash,
            deviation,
        } => {
            let dev = deviation
                .as_ref()
                .map(|d| format!("; {} deviates to {} ({} -> {})", d.party, d.action, d.before, d.after))
                .unwrap_or_default();
            let state = if *nash { "equilibrium" } else { "not an equilibrium" };
            format!("sample {sample} ({state}) at {params}{dev}")
        }
    }
}

fn audit_section(s: &mut String, a: &AuditReport) {
    let _ = writeln!(s, "### `{}`\n", a.claim_id);
    let _ = writeln!(s, "- statement: `{}`", a.statement);
    if let Some(g) = &a.game {
        let _ = writeln!(s, "- game: {g}");
    }
    let expected = a.expected.map(verdict).unwrap_or("informational");
    let _ = writeln!(
        s,
        "- verdict: **{}** over {} samples (expected: {expected})",
        verdict(a.verdict),
        a.samples
    );
    if let Some(w) = &a.counterexample {
        let _ = writeln!(s, "- counterexample: {}", witness(w));
    }
    if let Some(w) = &a.example {
        let _ = writeln!(s, "- evidence: {}", witness(w));
    }
    if let Some(sp) = &a.spectrum {
        let _ = writeln!(s, "- values vs payoff spectrum: {:?}", sp.relation);
    }
    let refuted: Vec<String> = a
        .steps
        .iter()
        .filter(|st| st.verdict == Verdict::Refuted)
        .map(|st| format!("{} ({} {} {})", st.step, st.left, st.separator, st.right))
        .collect();
    if !refuted.is_empty() {
        let _ = writeln!(s, "- refuted steps: {}", refuted.join("; "));
    }
    if let Some(search) = &a.order_search {
        match &search.stable_order {
            Some(order) => {
                let _ = writeln!(s, "- order on all samples: `{}`", order.join(" < "));
            }
            None => {
                let varies = search.pairs.iter().filter(|p| p.order == PairOrder::Varies).count();
                let _ = writeln!(
                    s,
                    "- pairwise order: {} of {} pairs vary across samples",
                    varies,
                    search.pairs.len()
                );
            }
        }
    }
    s.push('\n');
}

pub fn report(a: &Analysis, command: &str, version: &str, timing_ms: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} `{}`\n", command, a.protocol);
    let _ = writeln!(
        s,
        "protogame {version}; seed {}, {} samples, variant {}; {timing_ms} ms\n",
        a.config.seed, a.config.samples, a.config.variant
    );
    let source = if a.config.explicit_params { "given" } else { "sample 0" };
    let _ = writeln!(s, "## Instance ({source})\n\n{}\n", params_line(&a.instance));

    for sp in &a.spectra {
        let _ = writeln!(s, "## Payoffs of {}\n\n| outcome | payoff | value |\n|---|---|---|", sp.name);
        for e in &sp.entries {
            let _ = writeln!(s, "| {} | `{}` | {} |", e.outcome, e.symbolic, e.value);
        }
        s.push('\n');
    }

    let c = &a.classification;
    let _ = writeln!(s, "## Classification\n");
    let _ = writeln!(
        s,
        "- instance: zero-sum {}, non-positive-sum {}, closed {}",
        c.instance.zero_sum, c.instance.non_positive_sum, c.instance.closed
    );
    if let Some(w) = &c.instance.positive_sum_witness {
        let _ = writeln!(s, "- largest positive sum: {} at {}", w.sum, w.outcome);
    }
    let _ = writeln!(
        s,
        "- over {} samples: zero-sum {}, non-positive-sum {}, closed {}",
        c.samples, c.zero_sum_on_all_samples, c.non_positive_sum_on_all_samples, c.closed_on_all_samples
    );
    if let Some(open) = &c.first_open_sample {
        let _ = writeln!(
            s,
            "- not closed at sample {}: {} gains at {}",
            open.sample, open.violation.gaining_party, open.violation.outcome
        );
    }
    s.push('\n');

    for g in &a.games {
        let _ = writeln!(s, "## Game `{}` ({})\n", g.name, g.kind.as_str());
        let nash = if g.honest_nash.holds { "is" } else { "is not" };
        let _ = writeln!(s, "- honest profile {} {nash} a Nash equilibrium", g.honest_profile);
        if let Some(d) = &g.honest_nash.witness {
            let _ = writeln!(s, "- best deviation: {} plays {} ({} -> {})", d.party, d.action, d.before, d.after);
        }
        let eq: Vec<String> = g.equilibria.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "- pure equilibria: {}", if eq.is_empty() { "none".into() } else { eq.join(", ") });
        for d in &g.dominance {
            let rel = match d.relation {
                Dominance::StrictlyDominates => "strictly dominates",
                Dominance::WeaklyDominates => "weakly dominates",
                Dominance::None => continue,
            };
            let _ = writeln!(s, "- for {}: {} {rel} {}", d.party, d.action, d.over);
        }
        s.push('\n');
    }

    if !a.preferences.is_empty() {
        let _ = writeln!(s, "## Preferences\n");
        for p in &a.preferences {
            let tiers: Vec<String> = p
                .tiers
                .iter()
                .map(|t| t.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(", "))
                .collect();
            let state = match p.verdict {
                RankingVerdict::Confirmed => "confirmed by the measured values",
                RankingVerdict::Violated => "contradicted by the measured values",
                RankingVerdict::ReportOnly => "no measured values",
            };
            let _ = writeln!(s, "- {}: {} ({state})", p.party, tiers.join(" < "));
        }
        s.push('\n');
    }

    if !a.audits.is_empty() {
        let matched = a.all_claims_match.unwrap_or(true);
        let _ = writeln!(
            s,
            "## Audits\n\nAll verdicts match expectations: **{}**\n\n| claim | game | verdict | expected | match |\n|---|---|---|---|---|",
            if matched { "yes" } else { "no" }
        );
        for r in &a.audits {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                r.claim_id,
                r.game.as_deref().unwrap_or("-"),
                verdict(r.verdict),
                r.expected.map(verdict).unwrap_or("-"),
                if r.matches_expectation() { "yes" } else { "no" }
            );
        }
        s.push('\n');
        for r in &a.audits {
            audit_section(&mut s, r);
        }
    }

    if !a.notes.is_empty() {
        let _ = writeln!(s, "## Notes\n");
        for n in &a.notes {
            let _ = writeln!(s, "- {n}");
        }
    }
    s
}

fn params_line(p: &ParamSet) -> String {
    format!("`{p}`")
}
