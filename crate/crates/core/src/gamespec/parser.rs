use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{lex, Tok, Token};
use super::{ActionDecl, GameBlock, GameSpans, MapEntry, ParseError, Pos, SpecDocument};
use crate::claims::{
    ChainClaim, Claim, ClaimKind, Expectation, FairnessImplication, Measure, NashClaim, Preference, Property, Separator,
};
use crate::expr::{Constraint, Expr, Param, ParamRole, Relation};
use crate::game::{GameKind, Profile};
use crate::model::{EventAtom, Outcome, Party, PayoffRule, RuleKind};
use crate::rational::Rational;

type PResult<T> = Result<T, ParseError>;

/// Parses a document. Names must be declared before use; the first error
/// in source order is returned.
pub fn parse(text: &str) -> PResult<SpecDocument> {
    let tokens = lex(text)?;
    Parser {
        tokens,
        i: 0,
        doc: SpecDocument::default(),
        claim_ids: BTreeSet::new(),
    }
    .document()
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    doc: SpecDocument,
    claim_ids: BTreeSet<String>,
}

fn pos_of(t: &Token) -> Pos {
    Pos {
        line: t.line,
        column: t.column,
        token: t.text.clone(),
    }
}

fn err(t: &Token, message: impl Into<String>) -> ParseError {
    ParseError::new(t.line, t.column, message, &t.text)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.i].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.i += 1;
        }
        t
    }

    fn prev(&self) -> &Token {
        &self.tokens[self.i.saturating_sub(1)]
    }

    /// Error for a missing item. At a line end, blame the token before it
    /// (usually a dangling operator).
    fn expected(&self, what: &str) -> ParseError {
        let t = self.peek();
        if t.is_line_end() && self.i > 0 && !self.prev().is_line_end() {
            let p = self.prev();
            err(p, format!("expected {what} after '{}'", p.text))
        } else {
            err(t, format!("expected {what}, found {}", t.describe()))
        }
    }

    fn skip_blank_lines(&mut self) {
        while matches!(self.peek().tok, Tok::Newline) {
            self.bump();
        }
    }

    fn sym(&mut self, s: &str) -> PResult<Token> {
        if self.peek().is_sym(s) {
            Ok(self.bump())
        } else {
            Err(self.expected(&format!("'{s}'")))
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.peek().is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.expected(what)),
        }
    }

    fn word(&mut self, w: &str) -> PResult<Token> {
        if self.peek().is_word(w) {
            Ok(self.bump())
        } else {
            Err(self.expected(&format!("'{w}'")))
        }
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }

    /// Syntax errors later on the line take precedence over checks that
    /// need the whole statement.
    fn at_statement_end(&self) -> PResult<()> {
        let t = self.peek();
        if t.is_line_end() {
            Ok(())
        } else {
            Err(err(t, format!("unexpected {} (expected end of line)", t.describe())))
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        self.at_statement_end()?;
        self.bump();
        Ok(())
    }

    fn document(mut self) -> PResult<SpecDocument> {
        self.skip_blank_lines();
        let head = self.word("protocol")?;
        self.doc.spans.protocol = pos_of(&head);
        self.doc.protocol = self.string("protocol name string")?;
        self.end_of_statement()?;
        loop {
            self.skip_blank_lines();
            let t = self.peek().clone();
            let keyword = match &t.tok {
                Tok::Eof => break,
                Tok::Ident(k) => k.clone(),
                _ => return Err(err(&t, format!("expected a declaration, found {}", t.describe()))),
            };
            self.bump();
            match keyword.as_str() {
                "note" => {
                    let s = self.string("note string")?;
                    self.doc.notes.push(s);
                }
                "party" => self.party(&t)?,
                "param" => self.param()?,
                "constraint" => self.constraint()?,
                "event" => self.event()?,
                "income" => self.rule(RuleKind::Income)?,
                "expense" => self.rule(RuleKind::Expense)?,
                "outcome" => self.outcome_decl()?,
                "game" => self.game(&t)?,
                "action" => self.action(&t)?,
                "map" => self.map(&t)?,
                "claim" => self.claim()?,
                "preference" => self.preference()?,
                "measure" => self.measure()?,
                other => return Err(err(&t, format!("unknown declaration '{other}'"))),
            }
            self.end_of_statement()?;
        }
        if self.doc.parties.len() != 2 {
            return Err(err(self.peek(), "expected exactly two party declarations"));
        }
        Ok(self.doc)
    }

    fn party(&mut self, kw: &Token) -> PResult<()> {
        let (name, t) = self.ident("party name")?;
        if self.doc.parties.contains(&name) {
            return Err(err(&t, format!("duplicate party '{name}'")));
        }
        if self.doc.parties.len() == 2 {
            return Err(err(kw, "a protocol has exactly two parties"));
        }
        self.doc.parties.push(name);
        Ok(())
    }

    fn party_ref(&mut self) -> PResult<Party> {
        let (name, t) = self.ident("party name")?;
        match self.doc.parties.iter().position(|p| *p == name) {
            Some(0) => Ok(Party::A),
            Some(_) => Ok(Party::B),
            None => Err(err(&t, format!("undeclared party '{name}'"))),
        }
    }

    fn param(&mut self) -> PResult<()> {
        let (name, t) = self.ident("parameter name")?;
        if self.doc.params.iter().any(|p| p.name == name) {
            return Err(err(&t, format!("duplicate parameter '{name}'")));
        }
        let role = match &self.peek().tok {
            Tok::Ident(r) => {
                let r = r.clone();
                let rt = self.bump();
                ParamRole::from_name(&r).ok_or_else(|| err(&rt, format!("unknown parameter role '{r}'")))?
            }
            _ => ParamRole::Other,
        };
        self.doc.params.push(Param::new(name, role));
        Ok(())
    }

    fn constraint(&mut self) -> PResult<()> {
        let lhs = self.expr()?;
        let t = self.peek().clone();
        let (rel, swap) = match &t.tok {
            Tok::Sym("<") => (Relation::Lt, false),
            Tok::Sym("<=") => (Relation::Le, false),
            Tok::Sym("=") => (Relation::Eq, false),
            Tok::Sym(">") => (Relation::Lt, true),
            Tok::Sym(">=") => (Relation::Le, true),
            _ => return Err(self.expected("relation ('<', '<=', '=', '>', '>=')")),
        };
        self.bump();
        let rhs = self.expr()?;
        self.doc.constraints.push(if swap {
            Constraint::new(rhs, rel, lhs)
        } else {
            Constraint::new(lhs, rel, rhs)
        });
        Ok(())
    }

    fn event(&mut self) -> PResult<()> {
        let (name, t) = self.ident("event name")?;
        if self.doc.events.iter().any(|e| e.name == name) {
            return Err(err(&t, format!("duplicate event '{name}'")));
        }
        let description = self.string("event description string")?;
        let subject = if self.peek().is_word("by") {
            self.bump();
            Some(self.party_ref()?)
        } else {
            None
        };
        self.doc.events.push(EventAtom::new(name, description, subject));
        Ok(())
    }

    fn event_ref(&mut self) -> PResult<String> {
        let (name, t) = self.ident("event name")?;
        if self.doc.events.iter().any(|e| e.name == name) {
            Ok(name)
        } else {
            Err(err(&t, format!("undeclared event '{name}'")))
        }
    }

    fn rule(&mut self, kind: RuleKind) -> PResult<()> {
        let party = self.party_ref()?;
        let amount = self.expr()?;
        self.word("when")?;
        let trigger = self.event_ref()?;
        self.doc.rules.push(match kind {
            RuleKind::Income => PayoffRule::income(party, amount, &trigger),
            RuleKind::Expense => PayoffRule::expense(party, amount, &trigger),
        });
        Ok(())
    }

    fn outcome_set(&mut self) -> PResult<Outcome> {
        self.sym("{")?;
        let mut atoms: Vec<String> = vec![];
        if !self.peek().is_sym("}") {
            loop {
                let t = self.peek().clone();
                let name = self.event_ref()?;
                if atoms.contains(&name) {
                    return Err(err(&t, format!("event '{name}' listed twice")));
                }
                atoms.push(name);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.sym("}")?;
        Ok(atoms.into_iter().collect())
    }

    fn outcome_decl(&mut self) -> PResult<()> {
        let start = self.peek().clone();
        let o = self.outcome_set()?;
        if self.doc.outcomes.contains(&o) {
            return Err(err(&start, format!("duplicate outcome {o}")));
        }
        self.doc.outcomes.push(o);
        Ok(())
    }

    fn game(&mut self, kw: &Token) -> PResult<()> {
        let (name, t) = self.ident("game name")?;
        if self.doc.games.iter().any(|g| g.name == name) {
            return Err(err(&t, format!("duplicate game '{name}'")));
        }
        let (kind_name, kt) = self.ident("game kind (rational, naive or custom)")?;
        let kind = GameKind::from_name(&kind_name)
            .ok_or_else(|| err(&kt, format!("unknown game kind '{kind_name}' (expected rational, naive or custom)")))?;
        self.doc.games.push(GameBlock {
            name,
            kind,
            actions: vec![],
            map: vec![],
        });
        self.doc.spans.games.push(GameSpans {
            header: pos_of(kw),
            ..GameSpans::default()
        });
        Ok(())
    }

    fn current_game(&self, kw: &Token) -> PResult<usize> {
        if self.doc.games.is_empty() {
            return Err(err(kw, format!("'{}' outside a game block", kw.text)));
        }
        Ok(self.doc.games.len() - 1)
    }

    fn action(&mut self, kw: &Token) -> PResult<()> {
        let gi = self.current_game(kw)?;
        let pt = self.peek().clone();
        let party = self.party_ref()?;
        if self.doc.games[gi].actions_of(party).is_some() {
            return Err(err(&pt, format!("duplicate action list for '{}'", pt.text)));
        }
        if !self.doc.games[gi].map.is_empty() {
            return Err(err(kw, "action lists must come before map entries"));
        }
        self.sym(":")?;
        let mut actions: Vec<String> = vec![];
        loop {
            let (a, t) = self.ident("action name")?;
            if actions.contains(&a) {
                return Err(err(&t, format!("duplicate action '{a}'")));
            }
            actions.push(a);
            if !self.eat_sym("|") {
                break;
            }
        }
        let honest = if self.peek().is_word("honest") {
            self.bump();
            let (h, t) = self.ident("honest action name")?;
            if !actions.contains(&h) {
                return Err(err(&t, format!("honest action '{h}' is not in the action list")));
            }
            Some(h)
        } else {
            None
        };
        self.doc.games[gi].actions.push(ActionDecl { party, actions, honest });
        self.doc.spans.games[gi].actions.push(pos_of(kw));
        Ok(())
    }

    fn action_ref(&mut self, gi: usize, party: Party) -> PResult<String> {
        let (a, t) = self.ident("action name")?;
        let game = &self.doc.games[gi];
        let decl = game.actions_of(party).ok_or_else(|| {
            err(
                &t,
                format!("no action list for party '{}' in game '{}'", self.doc.parties[party.index()], game.name),
            )
        })?;
        if !decl.actions.contains(&a) {
            return Err(err(&t, format!("undeclared action '{a}' in game '{}'", game.name)));
        }
        Ok(a)
    }

    fn profile(&mut self, gi: usize) -> PResult<Profile> {
        self.sym("(")?;
        let a = self.action_ref(gi, Party::A)?;
        self.sym(",")?;
        let b = self.action_ref(gi, Party::B)?;
        self.sym(")")?;
        Ok(Profile::new(&a, &b))
    }

    fn map(&mut self, kw: &Token) -> PResult<()> {
        let gi = self.current_game(kw)?;
        let open = self.peek().clone();
        let profile = self.profile(gi)?;
        if self.doc.games[gi].map.iter().any(|m| m.profile == profile) {
            return Err(err(&open, format!("duplicate map entry for {profile}")));
        }
        self.sym("->")?;
        let mut branches: Vec<(Outcome, Rational)> = vec![];
        loop {
            let bt = self.peek().clone();
            let o = self.outcome_set()?;
            if branches.iter().any(|(x, _)| *x == o) {
                return Err(err(&bt, format!("outcome {o} appears twice in one distribution")));
            }
            self.sym("@")?;
            let pt = self.peek().clone();
            let p = self.rational()?;
            if !p.is_positive() {
                return Err(err(&pt, "branch probability must be positive"));
            }
            branches.push((o, p));
            if !self.eat_sym(",") {
                break;
            }
        }
        self.at_statement_end()?;
        let total: Rational = branches.iter().map(|(_, p)| p.clone()).sum();
        if total != Rational::one() {
            return Err(err(&open, format!("branch probabilities sum to {total}, not 1")));
        }
        self.doc.games[gi].map.push(MapEntry { profile, branches });
        self.doc.spans.games[gi].map.push(pos_of(kw));
        Ok(())
    }

    fn rational(&mut self) -> PResult<Rational> {
        let t = self.peek().clone();
        let Tok::Int(n) = &t.tok else {
            return Err(self.expected("number"));
        };
        self.bump();
        let d = if self.eat_sym("/") {
            let dt = self.peek().clone();
            let Tok::Int(d) = &dt.tok else {
                return Err(self.expected("denominator"));
            };
            if d.is_zero() {
                return Err(err(&dt, "zero denominator"));
            }
            self.bump();
            d.clone()
        } else {
            BigInt::from(1)
        };
        Ok(Rational::from_bigints(n.clone(), d))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat_sym("+") {
                e = e + self.term()?;
            } else if self.eat_sym("-") {
                e = e - self.term()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut e = self.factor()?;
        while self.eat_sym("*") {
            e = e * self.factor()?;
        }
        Ok(e)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => Ok(Expr::Lit(self.rational()?)),
            Tok::Ident(name) => {
                if !self.doc.params.iter().any(|p| p.name == *name) {
                    return Err(err(&t, format!("undeclared parameter '{name}'")));
                }
                self.bump();
                Ok(Expr::param(name.clone()))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Tok::Sym("-") => {
                self.bump();
                Ok(self.factor()?.negate())
            }
            _ => Err(self.expected("expression")),
        }
    }

    fn claim(&mut self) -> PResult<()> {
        let id = match &self.peek().tok {
            Tok::Str(_) => {
                let t = self.peek().clone();
                let id = self.string("claim id")?;
                if self.claim_ids.contains(&id) {
                    return Err(err(&t, format!("duplicate claim id \"{id}\"")));
                }
                id
            }
            _ => {
                let mut n = self.doc.claims.len() + 1;
                while self.claim_ids.contains(&format!("claim-{n}")) {
                    n += 1;
                }
                format!("claim-{n}")
            }
        };
        let (kind, kt) = self.ident("claim kind (chain, fairness or nash)")?;
        let claim = match kind.as_str() {
            "chain" => self.chain_claim()?,
            "fairness" => self.fairness_claim()?,
            "nash" => self.nash_claim()?,
            other => return Err(err(&kt, format!("unknown claim kind '{other}'"))),
        };
        self.claim_ids.insert(id.clone());
        self.doc.claims.push(Claim { id, kind: claim });
        Ok(())
    }

    fn expectation_word(&mut self) -> PResult<Option<bool>> {
        if self.peek().is_word("expected") {
            self.bump();
            Ok(Some(true))
        } else if self.peek().is_word("rejected") {
            self.bump();
            Ok(Some(false))
        } else {
            Ok(None)
        }
    }

    fn chain_claim(&mut self) -> PResult<ClaimKind> {
        let party = self.party_ref()?;
        self.sym(":")?;
        let mut entries = vec![self.expr()?];
        let mut separators = vec![];
        loop {
            let sep = match self.peek().tok {
                Tok::Sym("<") => Separator::Lt,
                Tok::Sym("<=") => Separator::Le,
                Tok::Sym("=") => Separator::Eq,
                Tok::Sym("|") => Separator::Unordered,
                _ => break,
            };
            self.bump();
            separators.push(sep);
            entries.push(self.expr()?);
        }
        if separators.is_empty() {
            return Err(self.expected("chain separator ('<', '<=', '=' or '|')"));
        }
        let expect = match self.expectation_word()? {
            Some(false) => Expectation::Refuted,
            _ => Expectation::Holds,
        };
        Ok(ClaimKind::Chain(ChainClaim::new(party, entries, separators, expect)))
    }

    fn fairness_claim(&mut self) -> PResult<ClaimKind> {
        self.word("honest")?;
        let honest = self.party_ref()?;
        self.sym(":")?;
        let ap = self.party_ref()?;
        let ae = self.expr()?;
        self.sym("=>")?;
        let cp = self.party_ref()?;
        let ce = self.expr()?;
        Ok(ClaimKind::Fairness(FairnessImplication {
            honest,
            antecedent: (ap, ae),
            consequent: (cp, ce),
        }))
    }

    fn nash_claim(&mut self) -> PResult<ClaimKind> {
        let (game, t) = self.ident("game name")?;
        let gi = self
            .doc
            .games
            .iter()
            .position(|g| g.name == game)
            .ok_or_else(|| err(&t, format!("undeclared game '{game}'")))?;
        let profile = self.profile(gi)?;
        let expect_nash = self
            .expectation_word()?
            .ok_or_else(|| self.expected("'expected' or 'rejected'"))?;
        Ok(ClaimKind::Nash(NashClaim {
            game,
            profile,
            expect_nash,
        }))
    }

    fn property(&mut self) -> PResult<Property> {
        let (name, t) = self.ident("property name")?;
        Property::from_name(&name).ok_or_else(|| {
            err(
                &t,
                format!("unknown property '{name}' (expected correctness, privacy, fairness, exclusiveness or voyeurism)"),
            )
        })
    }

    fn preference(&mut self) -> PResult<()> {
        let pt = self.peek().clone();
        let party = self.party_ref()?;
        if self.doc.preferences.iter().any(|p| p.party == party) {
            return Err(err(&pt, format!("duplicate preference for '{}'", pt.text)));
        }
        self.sym(":")?;
        let mut seen = BTreeSet::new();
        let mut tiers = vec![vec![]];
        loop {
            let t = self.peek().clone();
            let p = self.property()?;
            if !seen.insert(p) {
                return Err(err(&t, format!("property '{}' ranked twice", p.as_str())));
            }
            tiers.last_mut().expect("non-empty").push(p);
            if self.eat_sym(",") {
                continue;
            }
            if self.eat_sym("<") {
                tiers.push(vec![]);
                continue;
            }
            break;
        }
        self.doc.preferences.push(Preference { party, tiers });
        Ok(())
    }

    fn measure(&mut self) -> PResult<()> {
        let party = self.party_ref()?;
        let t = self.peek().clone();
        let property = self.property()?;
        if self.doc.measures.iter().any(|m| m.party == party && m.property == property) {
            return Err(err(&t, format!("duplicate measure for '{}'", property.as_str())));
        }
        self.sym("=")?;
        let amount = self.expr()?;
        self.doc.measures.push(Measure {
            party,
            property,
            amount,
        });
        Ok(())
    }
}
