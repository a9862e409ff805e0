//! Executable encodings of the stability and triviality statements for real
//! biquadratic fields, each returning the matched clause and a trace of every
//! symbol it evaluated.

mod first_main;
mod fukuda;
mod input;
mod lemmas;
mod third_main;
mod trivial;

use serde::Serialize;

use crate::arith::legendre;

pub use first_main::classify_first_main;
pub use fukuda::{fukuda_stable, LayerValue, Stability};
pub use input::{FamilyInput, Q1Q2Input};
pub use lemmas::{rank3_families, rank_bounds_form_d, rank_k1, remark_conditions, Branch, RemarkCondition};
pub use third_main::{lemgen_case, third_main_predict, Expansion, LemgenCase, LemgenResult};
pub use trivial::classify_trivial_iwasawa;

/// Predicted 2-rank of a class group or Iwasawa module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RankPrediction {
    Exact(u32),
    AtLeast(u32),
    OneOf(Vec<u32>),
}

impl RankPrediction {
    pub fn exact(&self) -> Option<u32> {
        match self {
            RankPrediction::Exact(k) => Some(*k),
            _ => None,
        }
    }

    pub fn admits(&self, k: u32) -> bool {
        match self {
            RankPrediction::Exact(e) => *e == k,
            RankPrediction::AtLeast(b) => k >= *b,
            RankPrediction::OneOf(v) => v.contains(&k),
        }
    }
}

/// Predicted structure of a finite abelian 2-group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Structure {
    Trivial,
    /// cyclic of order `2^exp`
    Cyclic { exp: u32 },
    /// `Z/2 x Z/2^exp`
    TwoTimesCyclic { exp: u32 },
}

impl Structure {
    pub fn order(&self) -> u64 {
        match self {
            Structure::Trivial => 1,
            Structure::Cyclic { exp } => 1 << exp,
            Structure::TwoTimesCyclic { exp } => 2 << exp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// symbolic name, e.g. `(q1q2/r)` or `r mod 8`
    pub symbol: String,
    /// the same with numbers substituted, e.g. `(21/11)`
    pub instance: String,
    pub value: i64,
}

/// A predicted integer invariant, e.g. `h2(K_nu) = 8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderPrediction {
    pub invariant: String,
    /// admissible values; empty when only a divisibility is predicted
    pub values: Vec<u64>,
    pub divisible_by: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// clause identifier such as `Thm1-item5-C2`; `None` is an explicit no-match
    pub statement_id: Option<String>,
    pub predicted_rank_a: Option<RankPrediction>,
    pub predicted_rank_ainf: Option<RankPrediction>,
    pub predicted_structure: Option<Structure>,
    /// whether `A(K_inf)` is trivial, for the statements that decide it
    pub predicted_trivial: Option<bool>,
    pub orders: Vec<OrderPrediction>,
    pub trace: Vec<TraceEntry>,
    /// inconsistencies and overlaps met while classifying
    pub findings: Vec<String>,
}

impl Classification {
    pub(crate) fn new(trace: Trace) -> Self {
        Classification {
            statement_id: None,
            predicted_rank_a: None,
            predicted_rank_ainf: None,
            predicted_structure: None,
            predicted_trivial: None,
            orders: Vec::new(),
            trace: trace.0,
            findings: Vec::new(),
        }
    }

    /// A no-match with an empty trace.
    pub fn empty() -> Self {
        Classification::new(Trace::default())
    }

    pub fn matched(&self) -> bool {
        self.statement_id.is_some()
    }

    pub fn id(&self) -> &str {
        self.statement_id.as_deref().unwrap_or("none")
    }
}

/// Records symbols as they are evaluated.
#[derive(Default, Clone, Debug)]
pub(crate) struct Trace(pub(crate) Vec<TraceEntry>);

impl Trace {
    /// Legendre symbol `(a/p)` with `a` named `an` and `p` named `pn`.
    pub fn leg(&mut self, an: &str, a: i64, pn: &str, p: u64) -> i8 {
        let v = legendre(a, p);
        self.push(format!("({an}/{pn})"), format!("({a}/{p})"), v as i64);
        v
    }

    /// `n mod k` with `n` named `name`.
    pub fn md(&mut self, name: &str, n: u64, k: u64) -> u64 {
        let v = n % k;
        self.push(format!("{name} mod {k}"), format!("{n} mod {k}"), v as i64);
        v
    }

    pub fn push(&mut self, symbol: String, instance: String, value: i64) {
        if !self.0.iter().any(|e| e.symbol == symbol && e.instance == instance) {
            self.0.push(TraceEntry { symbol, instance, value });
        }
    }
}
