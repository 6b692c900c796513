//! Verification certificates and parameter claims.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    /// Computed exactly (rank or exhaustive enumeration).
    Exact,
    /// A lower bound certified by the construction.
    Bound,
}

/// A claimed parameter value together with how it is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub quantity: String,
    pub value: u64,
    pub kind: ClaimKind,
    pub source: String,
}

impl Claim {
    pub fn exact(quantity: &str, value: u64, source: &str) -> Claim {
        Claim {
            quantity: quantity.into(),
            value,
            kind: ClaimKind::Exact,
            source: source.into(),
        }
    }

    pub fn bound(quantity: &str, value: u64, source: &str) -> Claim {
        Claim {
            quantity: quantity.into(),
            value,
            kind: ClaimKind::Bound,
            source: source.into(),
        }
    }

    /// `"exact 2"` or `"certified ≥ 4 (source)"`.
    pub fn describe(&self) -> String {
        match self.kind {
            ClaimKind::Exact => format!("exact {}", self.value),
            ClaimKind::Bound => format!("certified ≥ {} ({})", self.value, self.source),
        }
    }
}

/// How a property was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Deterministic,
    Randomized,
    Exhaustive,
}

/// Verification strategy requested by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Proof by multilinear decomposition, refused when the estimated number of
    /// field multiply-adds exceeds `limit`.
    Deterministic { limit: u128 },
    /// Direct checks on uniformly sampled inputs.
    Randomized { samples: u64, seed: u64 },
}

/// Default cap on multiply-adds for deterministic checks.
pub const DEFAULT_DET_LIMIT: u128 = 1_000_000_000;

/// Default seed for randomized checks.
pub const DEFAULT_SEED: u64 = 0x5eed;

impl VerifyMode {
    pub fn deterministic() -> VerifyMode {
        VerifyMode::Deterministic {
            limit: DEFAULT_DET_LIMIT,
        }
    }

    pub fn randomized(samples: u64, seed: u64) -> VerifyMode {
        VerifyMode::Randomized { samples, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCount {
    pub name: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: String,
    pub mode: Mode,
    pub passed: bool,
    pub checks: Vec<CheckCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub claims: Vec<Claim>,
}

impl Certificate {
    pub fn new(property: &str, mode: Mode) -> Certificate {
        Certificate {
            property: property.into(),
            mode,
            passed: true,
            checks: Vec::new(),
            samples: None,
            seed: None,
            limit: None,
            failure: None,
            claims: Vec::new(),
        }
    }

    pub fn record(&mut self, name: &str, count: u64) {
        self.checks.push(CheckCount {
            name: name.into(),
            count,
        });
    }

    pub fn fail(&mut self, why: String) {
        self.passed = false;
        if self.failure.is_none() {
            self.failure = Some(why);
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mode = match self.mode {
            Mode::Deterministic => "deterministic".to_string(),
            Mode::Randomized => format!(
                "randomized, {} samples, seed {}",
                self.samples.unwrap_or(0),
                self.seed.unwrap_or(0)
            ),
            Mode::Exhaustive => "exhaustive".to_string(),
        };
        let total: u64 = self.checks.iter().map(|c| c.count).sum();
        let status = if self.passed { "PASS" } else { "FAIL" };
        match &self.failure {
            Some(f) => format!("{} {status} ({mode}, {total} checks): {f}", self.property),
            None => format!("{} {status} ({mode}, {total} checks)", self.property),
        }
    }
}
