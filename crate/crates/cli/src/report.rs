//! Reports. The machine form is line-oriented and byte-stable for fixed
//! inputs: tensor lines are sorted by (h-order, word tuple, coefficient) and
//! timings appear only in the human form.

use std::fmt::Write as _;
use std::time::Duration;

use ito_hopf::hseries::HSeries;
use ito_hopf::ybe::{Residual, YbeReport};
use ito_hopf::{AlgebraDef, LegTensor, MultiTensorElt, Scalar};

/// One term: `h^order`, word tuple, coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub order: usize,
    pub key: String,
    pub coeff: String,
}

fn frac(c: &Scalar) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn word_text(alg: &AlgebraDef, w: &[u16]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&l| alg.name(l as usize)).collect::<Vec<_>>().join(".")
}

/// Terms of a `T(L)`-valued tensor at one order; legs separated by `,`,
/// letters within a leg by `.`, the empty word written `1`.
pub fn multi_lines(alg: &AlgebraDef, order: usize, x: &MultiTensorElt) -> Vec<Line> {
    x.terms()
        .iter()
        .map(|(key, c)| Line {
            order,
            key: format!("({})", key.iter().map(|w| word_text(alg, w)).collect::<Vec<_>>().join(",")),
            coeff: frac(c),
        })
        .collect()
}

/// Terms of an `L'`-valued tensor at one order; a unit slot is written `1`.
pub fn leg_lines(alg: &AlgebraDef, order: usize, x: &LegTensor) -> Vec<Line> {
    x.terms()
        .iter()
        .map(|(key, c)| Line {
            order,
            key: format!(
                "({})",
                key.iter().map(|s| s.index().map_or("1", |i| alg.name(i))).collect::<Vec<_>>().join(",")
            ),
            coeff: frac(c),
        })
        .collect()
}

pub fn multi_series_lines(alg: &AlgebraDef, s: &HSeries<MultiTensorElt>) -> Vec<Line> {
    (0..=s.order()).flat_map(|k| multi_lines(alg, k, s.coeff(k))).collect()
}

pub fn leg_series_lines(alg: &AlgebraDef, s: &HSeries<LegTensor>) -> Vec<Line> {
    (0..=s.order()).flat_map(|k| leg_lines(alg, k, s.coeff(k))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails {
        /// Lowest failing `h`-order and its smallest joint rank, if known.
        order: Option<usize>,
        joint_rank: Vec<usize>,
        detail: String,
        residual: Vec<Line>,
    },
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

pub fn from_bool(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Holds
    } else {
        Outcome::Fails { order: None, joint_rank: Vec::new(), detail: detail.into(), residual: Vec::new() }
    }
}

pub fn from_ybe(alg: &AlgebraDef, rep: &YbeReport) -> Outcome {
    match &rep.failure {
        None => Outcome::Holds,
        Some(f) => {
            let mut residual = match &f.residual {
                Residual::Unital(x) => leg_lines(alg, f.order, x),
                Residual::Ito(x) => multi_lines(alg, f.order, x),
            };
            residual.sort();
            Outcome::Fails {
                order: Some(f.order),
                joint_rank: f.joint_rank.clone(),
                detail: "sides differ".into(),
                residual,
            }
        }
    }
}

pub fn from_error(e: impl std::fmt::Display) -> Outcome {
    from_bool(false, e.to_string())
}

#[derive(Clone, Debug)]
pub struct Dump {
    pub name: String,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub source: String,
    pub order: usize,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
    pub dumps: Vec<Dump>,
    /// Human-only remarks such as warnings.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(Check::holds)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.holds())
    }

    pub fn dump(&mut self, name: impl Into<String>, mut lines: Vec<Line>) {
        lines.sort();
        self.dumps.push(Dump { name: name.into(), lines });
    }

    /// Deterministic machine form.
    pub fn machine(&self) -> String {
        let mut out = String::from("itohopf-report 1\n");
        let _ = writeln!(out, "command {}", self.command);
        let _ = writeln!(out, "source {}", self.source);
        let _ = writeln!(out, "order {}", self.order);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "trials {}", self.trials);
        for c in &self.checks {
            match &c.outcome {
                Outcome::Holds => {
                    let _ = writeln!(out, "check {} holds", c.name);
                }
                Outcome::Fails { order, joint_rank, detail, residual } => {
                    let order = order.map_or("-".to_string(), |k| k.to_string());
                    let rank = if joint_rank.is_empty() {
                        "-".to_string()
                    } else {
                        joint_rank.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
                    };
                    let _ = writeln!(out, "check {} fails order={order} rank={rank} detail={detail}", c.name);
                    for l in residual {
                        let _ = writeln!(out, "residual {} {} {} {}", c.name, l.order, l.key, l.coeff);
                    }
                }
            }
        }
        for d in &self.dumps {
            for l in &d.lines {
                let _ = writeln!(out, "dump {} {} {} {}", d.name, l.order, l.key, l.coeff);
            }
        }
        let _ = writeln!(out, "result {}", if self.all_hold() { "pass" } else { "fail" });
        out
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} on {} (order {}, seed {}, trials {})", self.command, self.source, self.order, self.seed, self.trials);
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for c in &self.checks {
            match &c.outcome {
                Outcome::Holds => {
                    let _ = writeln!(out, "  PASS {} ({:.1?})", c.name, c.elapsed);
                }
                Outcome::Fails { order, joint_rank, detail, residual } => {
                    let at = order.map(|k| format!(" at h^{k} rank {joint_rank:?}")).unwrap_or_default();
                    let _ = writeln!(out, "  FAIL {}{at}: {detail} ({:.1?})", c.name, c.elapsed);
                    for l in residual.iter().take(12) {
                        let _ = writeln!(out, "       h^{} {} {}", l.order, l.key, l.coeff);
                    }
                    if residual.len() > 12 {
                        let _ = writeln!(out, "       ... {} more terms", residual.len() - 12);
                    }
                }
            }
        }
        for d in &self.dumps {
            let _ = writeln!(out, "{}:", d.name);
            if d.lines.is_empty() {
                let _ = writeln!(out, "  0");
            }
            for l in &d.lines {
                let _ = writeln!(out, "  h^{} {} {}", l.order, l.key, l.coeff);
            }
        }
        let passed = self.checks.iter().filter(|c| c.holds()).count();
        let _ = writeln!(out, "{passed}/{} checks hold ({:.2?})", self.checks.len(), self.elapsed);
        out
    }
}
