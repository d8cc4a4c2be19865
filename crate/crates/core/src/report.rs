//! Obstruction verdicts and their exact evidence trail.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::exact::{Fraction, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// No locally-flat Möbius band (hence no smooth one either).
    ObstructedTopological,
    /// No smooth Möbius band; the locally-flat question stays open.
    ObstructedSmoothOnly,
    Inconclusive,
    PreconditionFailed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::ObstructedTopological => "ObstructedTopological",
            Verdict::ObstructedSmoothOnly => "ObstructedSmoothOnly",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::PreconditionFailed => "PreconditionFailed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One exact value recorded while deciding a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Fact {
    Flag(bool),
    Integer(BigInt),
    Integers(Vec<BigInt>),
    Rational(Fraction),
    Rationals(Vec<Fraction>),
    Vector(Vec<i64>),
    Matrix(IntMatrix),
    Text(String),
}

impl From<bool> for Fact {
    fn from(v: bool) -> Self {
        Fact::Flag(v)
    }
}

impl From<i64> for Fact {
    fn from(v: i64) -> Self {
        Fact::Integer(v.into())
    }
}

impl From<u64> for Fact {
    fn from(v: u64) -> Self {
        Fact::Integer(v.into())
    }
}

impl From<BigInt> for Fact {
    fn from(v: BigInt) -> Self {
        Fact::Integer(v)
    }
}

impl From<Fraction> for Fact {
    fn from(v: Fraction) -> Self {
        Fact::Rational(v)
    }
}

impl From<Vec<Fraction>> for Fact {
    fn from(v: Vec<Fraction>) -> Self {
        Fact::Rationals(v)
    }
}

impl From<Vec<i64>> for Fact {
    fn from(v: Vec<i64>) -> Self {
        Fact::Vector(v)
    }
}

impl From<IntMatrix> for Fact {
    fn from(v: IntMatrix) -> Self {
        Fact::Matrix(v)
    }
}

impl From<&str> for Fact {
    fn from(v: &str) -> Self {
        Fact::Text(v.to_string())
    }
}

impl From<String> for Fact {
    fn from(v: String) -> Self {
        Fact::Text(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub label: String,
    pub fact: Fact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub knot: String,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

impl ObstructionReport {
    pub fn new(knot: impl Into<String>) -> Self {
        ObstructionReport { knot: knot.into(), verdict: Verdict::Inconclusive, evidence: Vec::new() }
    }

    pub fn precondition_failed(knot: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut r = Self::new(knot);
        r.verdict = Verdict::PreconditionFailed;
        r.record("precondition", Fact::Text(reason.into()));
        r
    }

    pub fn record(&mut self, label: &str, fact: impl Into<Fact>) {
        self.evidence.push(Evidence { label: label.to_string(), fact: fact.into() });
    }

    pub fn fact(&self, label: &str) -> Option<&Fact> {
        self.evidence.iter().find(|e| e.label == label).map(|e| &e.fact)
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }
}
