//! Executable axioms.
//!
//! Each checker examines every instance of an axiom's premise that it can
//! find (in a tree, or among sampled contribution vectors) and returns an
//! [`AxiomReport`]. A violated report always carries a witness from which the
//! violation can be re-derived; `instances_checked == 0` means the premise
//! never applied.

use std::fmt;

use serde::Serialize;

use crate::format::RawTree;

pub mod aggregate;
pub mod fuzz;
pub mod member;
pub mod outcome;

pub use aggregate::{check_agg_axiom, SampleConfig};
pub use fuzz::{fuzz, generate_tree, FuzzConfig, FuzzReport, FuzzSubject, Suite};
pub use member::{check_amc, check_fmc, check_ksym, PremiseScope};
pub use outcome::{check_cc, check_nrv, check_nur};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomId {
    KSym,
    #[serde(rename = "AMC")]
    Amc,
    #[serde(rename = "AMC~")]
    AmcSim,
    #[serde(rename = "FMC")]
    Fmc,
    #[serde(rename = "FMC~")]
    FmcSim,
    #[serde(rename = "01B")]
    B01,
    #[serde(rename = "BSM+")]
    BsmPlus,
    #[serde(rename = "BSM>")]
    BsmGt,
    #[serde(rename = "LIN")]
    Lin,
    #[serde(rename = "AN1")]
    An1,
    #[serde(rename = "NE0")]
    Ne0,
    #[serde(rename = "SIP")]
    Sip,
    #[serde(rename = "AAT")]
    Aat,
    #[serde(rename = "RED")]
    Red,
    #[serde(rename = "CC")]
    Cc,
    #[serde(rename = "NUR")]
    Nur,
    #[serde(rename = "NRV")]
    Nrv,
    #[serde(rename = "NIRV")]
    Nirv,
}

impl AxiomId {
    pub const MEMBER: [AxiomId; 5] = [AxiomId::KSym, AxiomId::Amc, AxiomId::AmcSim, AxiomId::Fmc, AxiomId::FmcSim];
    pub const AGGREGATION: [AxiomId; 9] = [
        AxiomId::B01,
        AxiomId::BsmPlus,
        AxiomId::BsmGt,
        AxiomId::Lin,
        AxiomId::An1,
        AxiomId::Ne0,
        AxiomId::Sip,
        AxiomId::Aat,
        AxiomId::Red,
    ];
    pub const OUTCOME: [AxiomId; 4] = [AxiomId::Nrv, AxiomId::Nirv, AxiomId::Nur, AxiomId::Cc];

    pub fn label(self) -> &'static str {
        match self {
            AxiomId::KSym => "KSym",
            AxiomId::Amc => "AMC",
            AxiomId::AmcSim => "AMC~",
            AxiomId::Fmc => "FMC",
            AxiomId::FmcSim => "FMC~",
            AxiomId::B01 => "01B",
            AxiomId::BsmPlus => "BSM+",
            AxiomId::BsmGt => "BSM>",
            AxiomId::Lin => "LIN",
            AxiomId::An1 => "AN1",
            AxiomId::Ne0 => "NE0",
            AxiomId::Sip => "SIP",
            AxiomId::Aat => "AAT",
            AxiomId::Red => "RED",
            AxiomId::Cc => "CC",
            AxiomId::Nur => "NUR",
            AxiomId::Nrv => "NRV",
            AxiomId::Nirv => "NIRV",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// No instance violated the axiom (possibly because there were none).
    Satisfied,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A member-contribution violation at one or two nodes of a tree.
    Member {
        tree: RawTree,
        group: Vec<String>,
        nodes: Vec<String>,
        action: String,
        values: Vec<f64>,
    },
    /// Contribution vectors on which an aggregator breaks the axiom.
    Vectors {
        vectors: Vec<Vec<f64>>,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        t: Option<f64>,
    },
    /// An outcome-level violation.
    Outcome {
        tree: RawTree,
        groups: Vec<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        outcome: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        reduction: Option<String>,
        values: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub verdict: Verdict,
    pub instances_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn satisfied(axiom: AxiomId, instances_checked: u64) -> Self {
        AxiomReport {
            axiom,
            verdict: Verdict::Satisfied,
            instances_checked,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn violated(axiom: AxiomId, instances_checked: u64, witness: Witness) -> Self {
        AxiomReport {
            axiom,
            verdict: Verdict::Violated,
            instances_checked,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn is_vacuous(&self) -> bool {
        self.instances_checked == 0
    }

    /// Folds another report on the same axiom into this one, keeping the
    /// first witness.
    pub fn merge(&mut self, other: AxiomReport) {
        debug_assert_eq!(self.axiom, other.axiom);
        self.instances_checked += other.instances_checked;
        if other.is_violated() && !self.is_violated() {
            self.verdict = Verdict::Violated;
            self.witness = other.witness;
        }
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let verdict = match (self.verdict, self.instances_checked) {
            (Verdict::Violated, _) => "Violated",
            (Verdict::Satisfied, 0) => "Satisfied (vacuous)",
            (Verdict::Satisfied, _) => "Satisfied",
        };
        let mut s = format!("{:<5} {:<20} instances={}", self.axiom.label(), verdict, self.instances_checked);
        if let Some(w) = &self.witness {
            s.push_str("  witness: ");
            s.push_str(&w.describe());
        }
        s
    }
}

fn fmt_values(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", round12(*x))).collect();
    format!("[{}]", parts.join(", "))
}

/// Rounds away floating noise for display.
pub fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::Member {
                group,
                nodes,
                action,
                values,
                ..
            } => format!(
                "G={{{}}} nodes={} action={} values={}",
                group.join(","),
                nodes.join(","),
                action,
                fmt_values(values)
            ),
            Witness::Vectors { vectors, values, t } => {
                let vs: Vec<String> = vectors.iter().map(|v| fmt_values(v)).collect();
                let mut s = format!("{} -> {}", vs.join(" vs "), fmt_values(values));
                if let Some(t) = t {
                    s.push_str(&format!(" (t={t})"));
                }
                s
            }
            Witness::Outcome {
                groups,
                outcome,
                reduction,
                values,
                ..
            } => {
                let gs: Vec<String> = groups.iter().map(|g| format!("{{{}}}", g.join(","))).collect();
                let mut s = format!("groups={}", gs.join(" "));
                if let Some(w) = outcome {
                    s.push_str(&format!(" outcome={w}"));
                }
                if let Some(r) = reduction {
                    s.push_str(&format!(" reduction={r}"));
                }
                if !values.is_empty() {
                    s.push_str(&format!(" values={}", fmt_values(values)));
                }
                s
            }
        }
    }
}

/// Whether the reference compliance tables claim that the named built-in
/// contribution function satisfies a member axiom.
pub fn claimed_member(function: &str, axiom: AxiomId) -> Option<bool> {
    let fails = match function {
        "like" => AxiomId::KSym,
        "risk" => AxiomId::Amc,
        "negl" => AxiomId::Fmc,
        _ => return None,
    };
    AxiomId::MEMBER.contains(&axiom).then_some(axiom != fails)
}

/// Claimed compliance of a built-in aggregator. The (01B) cell for `sum`
/// follows the worked argument (sum is unbounded), not the table cell.
pub fn claimed_aggregation(aggregator: &str, axiom: AxiomId) -> Option<bool> {
    use AxiomId::*;
    let fails: &[AxiomId] = match aggregator {
        "sum" => &[B01, An1, Sip],
        "avg" => &[BsmPlus, An1, Ne0],
        "max" => &[BsmPlus, BsmGt, Lin, Ne0],
        "mprod" => &[Sip],
        _ => return None,
    };
    AxiomId::AGGREGATION
        .contains(&axiom)
        .then_some(!fails.contains(&axiom))
}

/// Claimed compliance of `agg ∘ r` for an aggregator satisfying (BSM) and (RED).
pub fn claimed_outcome(function: &str, axiom: AxiomId) -> Option<bool> {
    use AxiomId::*;
    let fails: &[AxiomId] = match function {
        "like" => &[],
        "risk" => &[Nur],
        "negl" => &[Nrv, Nirv],
        _ => return None,
    };
    AxiomId::OUTCOME
        .contains(&axiom)
        .then_some(!fails.contains(&axiom))
}
