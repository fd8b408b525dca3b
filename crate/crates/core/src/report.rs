//! JSON shapes for reports. Profiles and committees use their text form and
//! voters are numbered from 1.

use serde::{Deserialize, Serialize};

use crate::axioms::{AxiomVerdict, Witness};
use crate::model::letters;
use crate::rules::{profile_cap, DEFAULT_PROFILE_CAP, PROFILE_CAP_ENV};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    Outcome {
        profile: String,
        committee: String,
        group: Vec<usize>,
        candidates: String,
        ell: usize,
        text: String,
    },
    Manipulation {
        voter: usize,
        profile: String,
        outcome: String,
        reported: String,
        variant: String,
        manipulated_outcome: String,
        text: String,
    },
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        let text = w.to_string();
        match w {
            Witness::Outcome(o) => WitnessReport::Outcome {
                profile: o.profile.to_string(),
                committee: o.committee.to_string(),
                group: o.group.iter().map(|i| i + 1).collect(),
                candidates: letters(o.candidates),
                ell: o.ell,
                text,
            },
            Witness::Manipulation(m) => WitnessReport::Manipulation {
                voter: m.voter + 1,
                profile: m.truthful.to_string(),
                outcome: m.truthful_outcome.to_string(),
                reported: m.reported.to_string(),
                variant: m.variant().to_string(),
                manipulated_outcome: m.manipulated_outcome.to_string(),
                text,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub axiom: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

impl From<&AxiomVerdict> for VerdictReport {
    fn from(v: &AxiomVerdict) -> Self {
        VerdictReport {
            axiom: v.axiom.name().to_string(),
            passed: v.passed,
            witness: v.witness.as_ref().map(WitnessReport::from),
        }
    }
}

impl VerdictReport {
    pub fn to_text(&self) -> String {
        match &self.witness {
            None => format!("{}: pass", self.axiom),
            Some(WitnessReport::Outcome { text, .. }) | Some(WitnessReport::Manipulation { text, .. }) => {
                format!("{}: FAIL: {text}", self.axiom)
            }
        }
    }
}

/// Run settings that affect what a command may enumerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub profile_cap: u64,
    /// Set when the cap came from the environment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_env: Option<String>,
    pub threads: usize,
}

impl Metadata {
    pub fn current(cap: u64, threads: usize) -> Metadata {
        let env = std::env::var(PROFILE_CAP_ENV).ok();
        Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            profile_cap: cap,
            cap_env: env
                .filter(|_| cap == profile_cap() && cap != DEFAULT_PROFILE_CAP)
                .map(|v| format!("{PROFILE_CAP_ENV}={v}")),
            threads,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{check_jr, check_strategyproofness, SpVariant};
    use crate::model::ElectionParams;
    use crate::rules::{build_table, Rule};

    #[test]
    fn voters_are_one_based() {
        let t = build_table(Rule::Av, &ElectionParams::new(4, 3, 3).unwrap()).unwrap();
        let r = VerdictReport::from(&check_jr(&t));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["passed"], false);
        let group = json["witness"]["group"].as_array().unwrap();
        assert!(group.iter().all(|v| v.as_u64().unwrap() >= 1));

        let pav = build_table(Rule::Pav, &ElectionParams::new(4, 5, 3).unwrap()).unwrap();
        let r = VerdictReport::from(&check_strategyproofness(&pav, SpVariant::Subset));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["witness"]["kind"], "manipulation");
        assert!(json["witness"]["voter"].as_u64().unwrap() >= 1);
    }
}
