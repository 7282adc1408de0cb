//! One function per command. Each returns a report; library errors inside a
//! check become failing checks, so the exit status reflects them.

use std::time::Instant;

use ito_hopf::hseries::HSeries;
use ito_hopf::par;
use ito_hopf::prodint::{double_bf, double_fb, expansion_defect, multi_series_mul, unit_series};
use ito_hopf::quantise::{
    build_context, cobracket, coassociativity_check, deformed_coproduct, quasitriangularity_check, QuantisationContext,
};
use ito_hopf::random;
use ito_hopf::tensor::{coproduct, ito_product, iterated_coproduct, multi_ito_product, word, TensorElt};
use ito_hopf::ybe::{cybe_check, hierarchy_solve, qybe_check, toy_qybe_check};
use ito_hopf::{AlgebraDef, LegTensor, LinearSpace, MultiTensorElt};

use crate::report::{self, from_bool, from_error, from_ybe, Check, Outcome, Report};

/// Everything a command needs, resolved from the problem file and flags.
pub struct Inputs {
    pub alg: AlgebraDef,
    pub r: HSeries<LegTensor>,
    pub source: String,
    pub order: usize,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    CheckAssoc,
    Cybe,
    QybeToy,
    Dpi,
    Qybe,
    Inverse,
    Hierarchy,
    Deform(String),
    Coassoc,
    Cobracket,
    Selftest,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::CheckAssoc => "check-assoc".into(),
            Command::Cybe => "cybe".into(),
            Command::QybeToy => "qybe-toy".into(),
            Command::Dpi => "dpi".into(),
            Command::Qybe => "qybe".into(),
            Command::Inverse => "inverse".into(),
            Command::Hierarchy => "hierarchy".into(),
            Command::Deform(x) => format!("deform {x}"),
            Command::Coassoc => "coassoc".into(),
            Command::Cobracket => "cobracket".into(),
            Command::Selftest => "selftest".into(),
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<(String, Outcome)> + Send + Sync + 'a>;

struct Builder<'a> {
    inputs: &'a Inputs,
    report: Report,
}

impl<'a> Builder<'a> {
    fn new(inputs: &'a Inputs, command: &Command) -> Self {
        let report = Report {
            command: command.name(),
            source: inputs.source.clone(),
            order: inputs.order,
            seed: inputs.seed,
            trials: inputs.trials,
            ..Report::default()
        };
        Self { inputs, report }
    }

    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        self.report.checks.push(Check { name: name.into(), outcome, elapsed: start.elapsed() });
    }

    /// Several checks from one computation, sharing its elapsed time.
    fn batch(&mut self, f: impl FnOnce() -> Vec<(String, Outcome)>) {
        let start = Instant::now();
        let outs = f();
        let elapsed = start.elapsed();
        for (name, outcome) in outs {
            self.report.checks.push(Check { name, outcome, elapsed });
        }
    }

    /// Independent checks, run concurrently and recorded in the given order.
    fn concurrent(&mut self, jobs: Vec<Job<'_>>) {
        let results = par::map(&jobs, |job| {
            let start = Instant::now();
            let out = job();
            (out, start.elapsed())
        });
        for (outs, elapsed) in results {
            for (name, outcome) in outs {
                self.report.checks.push(Check { name, outcome, elapsed });
            }
        }
    }

    fn finish(mut self, start: Instant) -> Report {
        self.report.elapsed = start.elapsed();
        self.report
    }
}

fn context(inputs: &Inputs) -> Result<QuantisationContext, Outcome> {
    build_context(&inputs.alg, &inputs.r).map_err(from_error)
}

fn resolve_basis(alg: &AlgebraDef, x: &str) -> Option<usize> {
    alg.index_of(x).or_else(|| x.parse::<usize>().ok().filter(|&i| (1..=alg.dim()).contains(&i)).map(|i| i - 1))
}

fn assoc_outcome(alg: &AlgebraDef) -> Outcome {
    let rep = alg.check_associativity();
    let names: Vec<String> =
        rep.failures.iter().map(|&(i, j, k)| format!("({},{},{})", alg.name(i), alg.name(j), alg.name(k))).collect();
    from_bool(rep.passed(), format!("failing triples {}", names.join(" ")))
}

fn cybe_outcome(inputs: &Inputs) -> Outcome {
    let r1 = if inputs.order >= 1 { inputs.r.coeff(1).clone() } else { LegTensor::zero(2) };
    cybe_check(&inputs.alg, &r1).map_or_else(from_error, |rep| from_ybe(&inputs.alg, &rep))
}

fn toy_outcome(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Outcome {
    toy_qybe_check(alg, r).map_or_else(from_error, |rep| from_ybe(alg, &rep))
}

fn qybe_outcome(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Outcome {
    match double_fb(alg, r).and_then(|rr| qybe_check(alg, &rr.series)) {
        Ok(rep) => from_ybe(alg, &rep),
        Err(e) => from_error(e),
    }
}

/// `R R⁻¹ = 1`, `R⁻¹ R = 1` with `R⁻¹` built from the quasi-inverse of `r`,
/// and agreement with the order-by-order series inverse of `R`.
fn inverse_outcomes(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> (Vec<(String, Outcome)>, Option<HSeries<MultiTensorElt>>) {
    let names = ["inverse.fb-bf", "inverse.bf-fb", "inverse.series-inverse"];
    let run = || -> ito_hopf::Result<([bool; 3], HSeries<MultiTensorElt>)> {
        let rr = double_fb(alg, r)?.series;
        let rp = r.quasi_inverse_with(|a, b| alg.mul_leg(a, b).expect("two legs"))?;
        let rr_inv = double_bf(alg, &rp)?.series;
        let one = unit_series(r.order());
        let inv = rr.invert_with(&MultiTensorElt::unit(2), |a, b| multi_ito_product(alg, a, b).expect("two legs"))?;
        let oks = [multi_series_mul(alg, &rr, &rr_inv)? == one, multi_series_mul(alg, &rr_inv, &rr)? == one, inv == rr_inv];
        Ok((oks, rr_inv))
    };
    match run() {
        Ok((oks, rr_inv)) => {
            (names.iter().zip(oks).map(|(n, ok)| (n.to_string(), from_bool(ok, "identity fails"))).collect(), Some(rr_inv))
        }
        Err(e) => (names.iter().map(|n| (n.to_string(), from_error(&e))).collect(), None),
    }
}

fn expansion_outcome(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> (Outcome, Option<HSeries<MultiTensorElt>>) {
    match double_fb(alg, r) {
        Err(e) => (from_error(e), None),
        Ok(dp) => {
            let o = match expansion_defect(&dp.series, r) {
                Ok(None) => Outcome::Holds,
                Ok(Some((k, ranks))) => Outcome::Fails {
                    order: Some(k),
                    joint_rank: ranks,
                    detail: "component outside 1 + r + beta shape".into(),
                    residual: Vec::new(),
                },
                Err(e) => from_error(e),
            };
            (o, Some(dp.series))
        }
    }
}

/// Coassociativity of the deformed coproduct on the unit and each generator.
fn coassoc_outcomes(ctx: &QuantisationContext) -> Vec<(String, Outcome)> {
    let alg = &ctx.alg;
    let mut items: Vec<(String, TensorElt)> = vec![("1".into(), TensorElt::unit())];
    items.extend((0..alg.dim()).map(|i| (alg.name(i).to_string(), TensorElt::letter(i))));
    par::map(&items, |(name, x)| (format!("coassoc.{name}"), from_ybe(alg, &coassociativity_check(ctx, x))))
}

type Named<T> = Vec<(String, T)>;

fn cobracket_outcomes(ctx: &QuantisationContext) -> (Named<Outcome>, Named<LegTensor>) {
    let alg = &ctx.alg;
    let mut checks = Vec::new();
    let mut dumps = Vec::new();
    for i in 0..alg.dim() {
        let name = alg.name(i);
        // extraction is compared with the closed form inside `cobracket`
        match cobracket(ctx, &alg.basis(i)) {
            Ok(d) => {
                checks.push((format!("cobracket.{name}.closed-form"), Outcome::Holds));
                let skew = d.flip_21().map(|f| d.add(&f).is_zero()).unwrap_or(false);
                checks.push((format!("cobracket.{name}.skew"), from_bool(skew, "δ + flip δ != 0")));
                dumps.push((format!("delta({name})"), d));
            }
            Err(e) => checks.push((format!("cobracket.{name}.closed-form"), from_error(e))),
        }
    }
    (checks, dumps)
}

/// Hopf axioms of `T(L)` on seeded random tensors.
fn hopf_outcome(alg: &AlgebraDef, seed: u64, trials: usize) -> Outcome {
    let mut g = random::rng(seed);
    for t in 0..trials {
        let [a, b, c] = [(); 3].map(|_| random::tensor(&mut g, alg.dim(), 3, 4));
        let run = || -> ito_hopf::Result<Option<&'static str>> {
            let p = |x: &TensorElt, y: &TensorElt| ito_product(alg, x, y);
            if p(&p(&a, &b)?, &c)? != p(&a, &p(&b, &c)?)? {
                return Ok(Some("associativity"));
            }
            let da = coproduct(&a);
            if da.apply_coproduct_to_leg(1, 2)? != da.apply_coproduct_to_leg(2, 2)? {
                return Ok(Some("coassociativity"));
            }
            let whole = MultiTensorElt::from_tensor(&a);
            if da.apply_counit_to_leg(1)? != whole || da.apply_counit_to_leg(2)? != whole {
                return Ok(Some("counit"));
            }
            if coproduct(&p(&a, &b)?) != multi_ito_product(alg, &da, &coproduct(&b))? {
                return Ok(Some("multiplicativity"));
            }
            for m in 1..=3 {
                let proj = iterated_coproduct(&a, m).rank_project(&vec![1; m])?;
                let terms = a.rank_part(m).terms().iter().map(|(w, c)| (w.iter().map(|&l| word(&[l as usize])).collect(), c.clone())).collect::<Vec<_>>();
                if proj != MultiTensorElt::from_terms(m, terms)? {
                    return Ok(Some("projection formula"));
                }
            }
            Ok(None)
        };
        match run() {
            Ok(None) => {}
            Ok(Some(what)) => return from_bool(false, format!("{what} fails in trial {t}")),
            Err(e) => return from_error(e),
        }
    }
    Outcome::Holds
}

/// Toy equation against the full equation on seeded random `r`.
fn equivalence_outcome(alg: &AlgebraDef, seed: u64, trials: usize, order: usize) -> Outcome {
    let mut g = random::rng(seed ^ 0x9e37_79b9);
    for t in 0..trials {
        let r = random::trial_r(&mut g, alg, None, order);
        let run = || -> ito_hopf::Result<bool> {
            let toy = toy_qybe_check(alg, &r)?;
            let q = qybe_check(alg, &double_fb(alg, &r)?.series)?;
            Ok(toy.failing_order() == q.failing_order())
        };
        match run() {
            Ok(true) => {}
            Ok(false) => return from_bool(false, format!("toy and full equations disagree in trial {t}")),
            Err(e) => return from_error(e),
        }
    }
    Outcome::Holds
}

pub fn run(command: &Command, inputs: &Inputs) -> Report {
    let start = Instant::now();
    let mut b = Builder::new(inputs, command);
    let alg = &inputs.alg;
    let r = &inputs.r;
    match command {
        Command::CheckAssoc => b.check("associativity", || assoc_outcome(alg)),
        Command::Cybe => b.check("cybe", || cybe_outcome(inputs)),
        Command::QybeToy => b.check("qybe-toy", || toy_outcome(alg, r)),
        Command::Dpi => {
            let mut series = None;
            b.check("dpi.expansion-shape", || {
                let (o, s) = expansion_outcome(alg, r);
                series = s;
                o
            });
            if let Some(s) = series {
                b.report.dump("R", report::multi_series_lines(alg, &s));
            }
        }
        Command::Qybe => b.check("qybe", || qybe_outcome(alg, r)),
        Command::Inverse => {
            let mut rr_inv = None;
            b.batch(|| {
                let (outs, inv) = inverse_outcomes(alg, r);
                rr_inv = inv;
                outs
            });
            if let Some(s) = rr_inv {
                b.report.dump("R_inv", report::multi_series_lines(alg, &s));
            }
        }
        Command::Hierarchy => hierarchy(&mut b),
        Command::Deform(x) => deform(&mut b, x),
        Command::Coassoc => match context(inputs) {
            Ok(ctx) => b.batch(|| coassoc_outcomes(&ctx)),
            Err(o) => b.check("coassoc.context", || o),
        },
        Command::Cobracket => match context(inputs) {
            Ok(ctx) => {
                let (checks, dumps) = cobracket_outcomes(&ctx);
                for (name, outcome) in checks {
                    b.check(name, || outcome);
                }
                for (name, d) in dumps {
                    b.report.dump(name, report::leg_lines(alg, 1, &d));
                }
            }
            Err(o) => b.check("cobracket.context", || o),
        },
        Command::Selftest => selftest(&mut b),
    }
    b.finish(start)
}

/// Solves for `r_2, r_3, ...` given `r_1` from the input, each order on top
/// of the particular solutions chosen below it.
fn hierarchy(b: &mut Builder<'_>) {
    let inputs = b.inputs;
    let alg = &inputs.alg;
    let r1 = inputs.r.coeff(1.min(inputs.order)).clone();
    let mut rs = vec![r1];
    for n in 2..=inputs.order.max(2) {
        let mut chosen = None;
        b.check(format!("hierarchy.r{n}.consistent"), || match hierarchy_solve(alg, &rs, n) {
            Err(e) => from_error(e),
            Ok(set) => match set.particular {
                None => from_bool(false, "no solution for this r_1 and the lower orders chosen"),
                Some(p) => {
                    chosen = Some((p, set.kernel.len()));
                    Outcome::Holds
                }
            },
        });
        let Some((p, kernel)) = chosen else { break };
        b.report.notes.push(format!("r{n}: solution space of dimension {kernel}; particular solution dumped"));
        b.report.dump(format!("r{n}"), report::leg_lines(alg, n, &p));
        rs.push(p);
    }
}

fn deform(b: &mut Builder<'_>, x: &str) {
    let inputs = b.inputs;
    let alg = &inputs.alg;
    let Some(i) = resolve_basis(alg, x) else {
        b.check(format!("deform.{x}"), || from_bool(false, format!("unknown basis element `{x}`")));
        return;
    };
    let name = alg.name(i).to_string();
    let ctx = match context(inputs) {
        Ok(c) => c,
        Err(o) => return b.check(format!("deform.{name}.context"), || o),
    };
    let mut value = None;
    b.check(format!("deform.{name}.cross-check"), || match deformed_coproduct(&ctx, &TensorElt::letter(i)) {
        Ok(d) => {
            value = Some(d);
            Outcome::Holds
        }
        Err(e) => from_error(e),
    });
    let Some(d) = value else { return };
    b.check(format!("deform.{name}.counit"), || {
        let whole = HSeries::constant(ctx.order(), MultiTensorElt::from_tensor(&TensorElt::letter(i)));
        let ok = [1, 2].iter().all(|&leg| d.series.try_map(|c| c.apply_counit_to_leg(leg)).ok() == Some(whole.clone()));
        from_bool(ok, "counit does not recover the input")
    });
    if let Some(w) = &d.warning {
        b.report.notes.push(w.clone());
    }
    let covered: Vec<String> = d.cross_checked.iter().map(|(m, n)| format!("({m},{n})")).collect();
    b.report.notes.push(format!("projection cross-check covered joint ranks {}", covered.join(" ")));
    for ((m, n), s) in d.components() {
        b.report.dump(format!("Delta_h({name})[{m},{n}]"), report::multi_series_lines(alg, &s));
    }
}

fn selftest(b: &mut Builder<'_>) {
    let inputs = b.inputs;
    let (alg, r) = (&inputs.alg, &inputs.r);
    b.check("associativity", || assoc_outcome(alg));
    let (seed, trials, order) = (inputs.seed, inputs.trials, inputs.order);
    let mut jobs: Vec<Job<'_>> = vec![
        Box::new(|| vec![("cybe".into(), cybe_outcome(inputs))]),
        Box::new(|| vec![("qybe-toy".into(), toy_outcome(alg, r))]),
        Box::new(|| vec![("dpi.expansion-shape".into(), expansion_outcome(alg, r).0)]),
        Box::new(|| vec![("qybe".into(), qybe_outcome(alg, r))]),
        Box::new(|| inverse_outcomes(alg, r).0),
        Box::new(move || vec![("hopf.random".into(), hopf_outcome(alg, seed, trials))]),
        Box::new(move || vec![("toy-vs-full.random".into(), equivalence_outcome(alg, seed, trials, order.min(3)))]),
    ];
    if order > 4 {
        b.report.notes.push("quasitriangularity is checked at order 4".into());
    }
    match context(inputs) {
        Ok(ctx) => {
            let ctx = std::sync::Arc::new(ctx);
            let c = ctx.clone();
            jobs.push(Box::new(move || {
                // grid identities up to 3 x 3 legs, at most order 4
                let small = if c.order() > 4 {
                    build_context(&c.alg, &c.r.truncate(4).expect("lower order"))
                } else {
                    Ok((*c).clone())
                };
                match small {
                    Ok(s) => quasitriangularity_check(&s, 3)
                        .into_iter()
                        .map(|nc| (format!("quasitriangular.{}", nc.name.replace(' ', "")), from_ybe(&s.alg, &nc.report)))
                        .collect(),
                    Err(e) => vec![("quasitriangular.context".into(), from_error(e))],
                }
            }));
            let c = ctx.clone();
            jobs.push(Box::new(move || coassoc_outcomes(&c)));
            let c = ctx.clone();
            jobs.push(Box::new(move || cobracket_outcomes(&c).0));
        }
        Err(o) => jobs.push(Box::new(move || vec![("context".into(), o.clone())])),
    }
    b.concurrent(jobs);
}
