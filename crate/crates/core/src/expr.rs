//! Payoff expressions over named parameters, parameter bindings and
//! constraints between expressions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Rational),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn lit(value: impl Into<Rational>) -> Self {
        Expr::Lit(value.into())
    }

    pub fn int(n: i64) -> Self {
        Expr::Lit(Rational::from_integer(n))
    }

    pub fn param(name: impl Into<String>) -> Self {
        Expr::Param(name.into())
    }

    /// Negation that folds literals, so `-3` is a literal and not `Neg(3)`.
    pub fn negate(self) -> Self {
        match self {
            Expr::Lit(v) => Expr::Lit(-v),
            e => Expr::Neg(Box::new(e)),
        }
    }

    pub fn eval(&self, params: &ParamSet) -> Result<Rational> {
        Ok(match self {
            Expr::Lit(v) => v.clone(),
            Expr::Param(name) => params
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnboundParam(name.clone()))?,
            Expr::Neg(e) => -e.eval(params)?,
            Expr::Add(a, b) => a.eval(params)? + b.eval(params)?,
            Expr::Sub(a, b) => a.eval(params)? - b.eval(params)?,
            Expr::Mul(a, b) => a.eval(params)? * b.eval(params)?,
        })
    }

    pub fn params(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Param(name) => {
                out.insert(name);
            }
            Expr::Neg(e) => e.collect_params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    /// Splits top-level `+` nodes: `a + b + c` yields `[a, b, c]`.
    pub fn additive_terms(&self) -> Vec<&Expr> {
        match self {
            Expr::Add(a, b) => {
                let mut terms = a.additive_terms();
                terms.extend(b.additive_terms());
                terms
            }
            e => vec![e],
        }
    }

    /// Views the expression as `coef * var + offset` with every other
    /// parameter taken from `known`. Returns `None` when the expression is
    /// not affine in `var` or mentions an unknown parameter besides `var`.
    pub fn affine_in(&self, var: &str, known: &ParamSet) -> Option<(Rational, Rational)> {
        match self {
            Expr::Lit(v) => Some((Rational::zero(), v.clone())),
            Expr::Param(name) if name == var => Some((Rational::one(), Rational::zero())),
            Expr::Param(name) => known.get(name).map(|v| (Rational::zero(), v.clone())),
            Expr::Neg(e) => e.affine_in(var, known).map(|(a, b)| (-a, -b)),
            Expr::Add(x, y) => {
                let (a1, b1) = x.affine_in(var, known)?;
                let (a2, b2) = y.affine_in(var, known)?;
                Some((a1 + a2, b1 + b2))
            }
            Expr::Sub(x, y) => {
                let (a1, b1) = x.affine_in(var, known)?;
                let (a2, b2) = y.affine_in(var, known)?;
                Some((a1 - a2, b1 - b2))
            }
            Expr::Mul(x, y) => {
                let (a1, b1) = x.affine_in(var, known)?;
                let (a2, b2) = y.affine_in(var, known)?;
                match (a1.is_zero(), a2.is_zero()) {
                    (true, _) => Some((&b1 * &a2, b1 * b2)),
                    (false, true) => Some((&a1 * &b2, b1 * b2)),
                    (false, false) => None,
                }
            }
        }
    }

    fn fmt_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Add(a, b) => {
                a.fmt_expr(f)?;
                f.write_str(" + ")?;
                b.fmt_term(f)
            }
            Expr::Sub(a, b) => {
                a.fmt_expr(f)?;
                f.write_str(" - ")?;
                b.fmt_term(f)
            }
            e => e.fmt_term(f),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Mul(a, b) => {
                a.fmt_term(f)?;
                f.write_str("*")?;
                b.fmt_factor(f)
            }
            e => e.fmt_factor(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(v) => write!(f, "{v}"),
            Expr::Param(name) => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_factor(f)
            }
            e => {
                f.write_str("(")?;
                e.fmt_expr(f)?;
                f.write_str(")")
            }
        }
    }
}

/// Canonical infix form; the gamespec parser reads it back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.negate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamRole {
    OwnSecret,
    OtherSecret,
    JointOutput,
    Amplification,
    Other,
}

impl ParamRole {
    pub const ALL: [ParamRole; 5] = [
        ParamRole::OwnSecret,
        ParamRole::OtherSecret,
        ParamRole::JointOutput,
        ParamRole::Amplification,
        ParamRole::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamRole::OwnSecret => "own_secret",
            ParamRole::OtherSecret => "other_secret",
            ParamRole::JointOutput => "joint_output",
            ParamRole::Amplification => "amplification",
            ParamRole::Other => "other",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub role: ParamRole,
}

impl Param {
    pub fn new(name: impl Into<String>, role: ParamRole) -> Self {
        Param {
            name: name.into(),
            role,
        }
    }
}

/// Values bound to parameter names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamSet(BTreeMap<String, Rational>);

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Rational) -> Option<Rational> {
        self.0.insert(name.into(), value)
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.insert(name, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every declared parameter is bound and nothing else is.
    pub fn check_complete(&self, decls: &[Param]) -> Result<()> {
        for p in decls {
            if !self.0.contains_key(&p.name) {
                return Err(Error::UnboundParam(p.name.clone()));
            }
        }
        for name in self.0.keys() {
            if !decls.iter().any(|p| &p.name == name) {
                return Err(Error::ExtraParam(name.clone()));
            }
        }
        Ok(())
    }
}

impl<S: Into<String>> FromIterator<(S, Rational)> for ParamSet {
    fn from_iter<I: IntoIterator<Item = (S, Rational)>>(iter: I) -> Self {
        ParamSet(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `lhs rel rhs`; `>` and `>=` are stored with their sides swapped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: Expr,
    pub rel: Relation,
    pub rhs: Expr,
}

impl Constraint {
    pub fn new(lhs: Expr, rel: Relation, rhs: Expr) -> Self {
        Constraint { lhs, rel, rhs }
    }

    pub fn lt(lhs: Expr, rhs: Expr) -> Self {
        Self::new(lhs, Relation::Lt, rhs)
    }

    pub fn gt(lhs: Expr, rhs: Expr) -> Self {
        Self::new(rhs, Relation::Lt, lhs)
    }

    pub fn is_satisfied(&self, params: &ParamSet) -> Result<bool> {
        Ok(self
            .rel
            .holds(&self.lhs.eval(params)?, &self.rhs.eval(params)?))
    }

    pub fn params(&self) -> BTreeSet<&str> {
        let mut out = self.lhs.params();
        out.extend(self.rhs.params());
        out
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintVerdict {
    AllSatisfied,
    Violated { index: usize, constraint: Constraint },
}

impl ConstraintVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ConstraintVerdict::AllSatisfied)
    }
}

/// Reports the first violated constraint, in declaration order.
pub fn check_constraints(params: &ParamSet, constraints: &[Constraint]) -> Result<ConstraintVerdict> {
    for (index, c) in constraints.iter().enumerate() {
        if !c.is_satisfied(params)? {
            return Ok(ConstraintVerdict::Violated {
                index,
                constraint: c.clone(),
            });
        }
    }
    Ok(ConstraintVerdict::AllSatisfied)
}

pub fn eval_expr(expr: &Expr, params: &ParamSet) -> Result<Rational> {
    expr.eval(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(name: &str) -> Expr {
        Expr::param(name)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn eval_examples() {
        let ps = ParamSet::new().with("k", r(2, 1)).with("u", r(3, 1));
        assert_eq!(eval_expr(&(p("k") * p("u")), &ps).unwrap(), r(6, 1));
        assert_eq!(eval_expr(&Expr::int(0), &ps).unwrap(), r(0, 1));
        let ps = ParamSet::new().with("k", r(3, 2)).with("u_B", r(4, 1));
        let e = (p("k") + Expr::int(1)) * p("u_B");
        assert_eq!(eval_expr(&e, &ps).unwrap(), r(10, 1));
    }

    #[test]
    fn unbound_param_is_named() {
        let err = eval_expr(&(p("k") * p("u")), &ParamSet::new().with("k", r(1, 1))).unwrap_err();
        assert_eq!(err, Error::UnboundParam("u".into()));
    }

    #[test]
    fn constraint_examples() {
        let fe = [Constraint::gt(p("u_AB"), p("u_AA")), Constraint::gt(p("u_AA"), Expr::int(0))];
        let ok = ParamSet::new().with("u_AB", r(3, 1)).with("u_AA", r(2, 1));
        assert!(check_constraints(&ok, &fe).unwrap().is_satisfied());

        let tie = ParamSet::new().with("u_AB", r(2, 1)).with("u_AA", r(2, 1));
        match check_constraints(&tie, &fe).unwrap() {
            ConstraintVerdict::Violated { index, constraint } => {
                assert_eq!(index, 0);
                assert_eq!(constraint.to_string(), "u_AA < u_AB");
            }
            v => panic!("expected violation, got {v:?}"),
        }

        let chain = [
            Constraint::lt(p("u"), p("u_ij")),
            Constraint::lt(p("u_ij"), p("k") * p("u")),
            Constraint::lt(p("k") * p("u"), p("u_ii")),
        ];
        let ps = ParamSet::new()
            .with("u", r(1, 1))
            .with("u_ij", r(5, 2))
            .with("k", r(2, 1))
            .with("u_ii", r(3, 1));
        match check_constraints(&ps, &chain).unwrap() {
            ConstraintVerdict::Violated { constraint, .. } => {
                assert_eq!(constraint.to_string(), "u_ij < k*u")
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn display_is_minimal_and_faithful() {
        let e = (Expr::int(1) - p("k")) * p("u_A");
        assert_eq!(e.to_string(), "(1 - k)*u_A");
        let e = -(p("k")) * p("u");
        assert_eq!(e.to_string(), "-k*u");
        let e = p("a") - (p("b") - p("c"));
        assert_eq!(e.to_string(), "a - (b - c)");
        let e = p("a") + Expr::lit(r(-3, 2));
        assert_eq!(e.to_string(), "a + -3/2");
        let e = Expr::Neg(Box::new(p("a") + p("b")));
        assert_eq!(e.to_string(), "-(a + b)");
    }

    #[test]
    fn affine_view() {
        let known = ParamSet::new().with("k", r(3, 1));
        let e = p("k") * p("u") - Expr::int(2);
        assert_eq!(e.affine_in("u", &known), Some((r(3, 1), r(-2, 1))));
        assert_eq!((p("u") * p("u")).affine_in("u", &known), None);
        assert_eq!(p("v").affine_in("u", &known), None);
    }

    #[test]
    fn additive_terms_split_only_sums() {
        let e = p("a") + p("k") * p("g");
        let terms = e.additive_terms();
        assert_eq!(terms.len(), 2);
        assert_eq!(*terms[1], p("k") * p("g"));
        assert_eq!((p("a") - p("b")).additive_terms().len(), 1);
    }

    #[derive(Clone, Debug)]
    enum Shape {
        Lit(i64, i64),
        Var(usize),
        Neg(Box<Shape>),
        Add(Box<Shape>, Box<Shape>),
        Sub(Box<Shape>, Box<Shape>),
        Mul(Box<Shape>, Box<Shape>),
    }

    fn shape() -> impl Strategy<Value = Shape> {
        let leaf = prop_oneof![
            (-20i64..20, 1i64..12).prop_map(|(n, d)| Shape::Lit(n, d)),
            (0usize..3).prop_map(Shape::Var),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Shape::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| Shape::Mul(Box::new(a), Box::new(b))),
            ]
        })
    }

    const VARS: [&str; 3] = ["x", "y", "z"];

    fn build(s: &Shape) -> Expr {
        match s {
            Shape::Lit(n, d) => Expr::lit(Rational::new(*n, *d)),
            Shape::Var(i) => p(VARS[*i]),
            Shape::Neg(a) => Expr::Neg(Box::new(build(a))),
            Shape::Add(a, b) => build(a) + build(b),
            Shape::Sub(a, b) => build(a) - build(b),
            Shape::Mul(a, b) => build(a) * build(b),
        }
    }

    // Independent evaluation over (numerator, denominator) pairs of i128.
    fn oracle(s: &Shape, vals: &[(i128, i128); 3]) -> (i128, i128) {
        fn norm((n, d): (i128, i128)) -> (i128, i128) {
            fn gcd(a: i128, b: i128) -> i128 {
                if b == 0 { a.abs() } else { gcd(b, a % b) }
            }
            let g = gcd(n, d).max(1);
            let (n, d) = (n / g, d / g);
            if d < 0 { (-n, -d) } else { (n, d) }
        }
        match s {
            Shape::Lit(n, d) => norm((*n as i128, *d as i128)),
            Shape::Var(i) => norm(vals[*i]),
            Shape::Neg(a) => {
                let (n, d) = oracle(a, vals);
                (-n, d)
            }
            Shape::Add(a, b) | Shape::Sub(a, b) => {
                let (n1, d1) = oracle(a, vals);
                let (n2, d2) = oracle(b, vals);
                let n2 = if matches!(s, Shape::Sub(..)) { -n2 } else { n2 };
                norm((n1 * d2 + n2 * d1, d1 * d2))
            }
            Shape::Mul(a, b) => {
                let (n1, d1) = oracle(a, vals);
                let (n2, d2) = oracle(b, vals);
                norm((n1 * n2, d1 * d2))
            }
        }
    }

    proptest! {
        #[test]
        fn eval_matches_independent_fraction_arithmetic(
            s in shape(),
            vals in proptest::array::uniform3((-9i128..9, 1i128..6)),
        ) {
            let ps: ParamSet = VARS
                .iter()
                .zip(vals.iter())
                .map(|(name, (n, d))| (*name, Rational::new(*n as i64, *d as i64)))
                .collect();
            let got = build(&s).eval(&ps).unwrap();
            let (n, d) = oracle(&s, &vals);
            prop_assert_eq!(got, Rational::from_bigints(n.into(), d.into()));
        }

        #[test]
        fn eval_distributes_exactly(
            a in shape(), b in shape(), c in shape(),
            vals in proptest::array::uniform3((-9i64..9, 1i64..6)),
        ) {
            let ps: ParamSet = VARS
                .iter()
                .zip(vals.iter())
                .map(|(name, (n, d))| (*name, Rational::new(*n, *d)))
                .collect();
            let (a, b, c) = (build(&a), build(&b), build(&c));
            let lhs = (a.clone() * (b.clone() + c.clone())).eval(&ps).unwrap();
            let rhs = (a.clone() * b.clone() + a.clone() * c.clone()).eval(&ps).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = (a.clone() - b.clone()).eval(&ps).unwrap();
            let rhs = (a + b.negate()).eval(&ps).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
