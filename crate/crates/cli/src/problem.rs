//! Problem files: an `[algebra]` block of structure constants, an optional
//! `[r]` block of `r[h]` coefficients and an optional `[options]` block.
//! Indices are 1-based in the file and 0-based in memory. Rationals are
//! written `p/q`; a bare integer is accepted on input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ito_hopf::hseries::HSeries;
use ito_hopf::{AlgebraDef, AlgebraElt, LegTensor, LinearSpace, Scalar};
use thiserror::Error;

pub const EXAMPLE_SEC6: &str = include_str!("../fixtures/example_sec6.problem");

/// Names accepted by `--fixture`.
pub fn fixture(name: &str) -> Option<&'static str> {
    match name {
        "example_sec6" => Some(EXAMPLE_SEC6),
        _ => None,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub names: Vec<String>,
    /// `(i, j, k) -> c`: `e_i e_j` has coefficient `c` on `e_k`.
    pub products: BTreeMap<(usize, usize, usize), Scalar>,
    /// `(k, i, j) -> c`: `h^k` carries `c e_i (x) e_j`; `k >= 1`.
    pub r: BTreeMap<(usize, usize, usize), Scalar>,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}, field `{field}`: {msg}")]
    Field { line: usize, field: &'static str, msg: String },
    #[error("missing [algebra] block or its `dim`")]
    MissingAlgebra,
    #[error("validation failed: {0}")]
    Invalid(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Syntax { line, msg: msg.into() }
}

fn field(line: usize, field: &'static str, msg: impl Into<String>) -> ProblemError {
    ProblemError::Field { line, field, msg: msg.into() }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Algebra,
    R,
    Options,
}

struct Raw {
    line: usize,
    values: Vec<String>,
}

fn parse_index(line: usize, name: &'static str, s: &str) -> Result<usize, ProblemError> {
    match s.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i - 1),
        _ => Err(field(line, name, format!("expected a 1-based index, got `{s}`"))),
    }
}

fn parse_scalar(line: usize, s: &str) -> Result<Scalar, ProblemError> {
    s.parse::<Scalar>().map_err(|e| field(line, "coefficient", e.to_string()))
}

fn parse_num<T: std::str::FromStr>(line: usize, name: &'static str, s: &str) -> Result<T, ProblemError> {
    s.parse::<T>().map_err(|_| field(line, name, format!("expected a non-negative integer, got `{s}`")))
}

impl ProblemFile {
    /// Syntax and range checks only; see [`ProblemFile::algebra`] for
    /// validation of the structure constants.
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let mut section = Section::None;
        let mut dim: Option<(usize, usize)> = None;
        let mut basis: Option<(usize, Vec<String>)> = None;
        let mut products: Vec<Raw> = Vec::new();
        let mut entries: Vec<Raw> = Vec::new();
        let mut options = Options::default();
        let mut seen_sections = Vec::new();

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| syntax(line, "unterminated section header"))?;
                section = match name.trim() {
                    "algebra" => Section::Algebra,
                    "r" => Section::R,
                    "options" => Section::Options,
                    other => return Err(syntax(line, format!("unknown section `[{other}]`"))),
                };
                if seen_sections.contains(&name.trim().to_string()) {
                    return Err(syntax(line, format!("section `[{}]` repeated", name.trim())));
                }
                seen_sections.push(name.trim().to_string());
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| syntax(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let values: Vec<String> = value.split_whitespace().map(str::to_string).collect();
            let once = |slot_set: bool| if slot_set { Err(syntax(line, format!("`{key}` given twice"))) } else { Ok(()) };
            match (section, key) {
                (Section::Algebra, "dim") => {
                    once(dim.is_some())?;
                    dim = Some((line, parse_num(line, "dim", value)?));
                }
                (Section::Algebra, "basis") => {
                    once(basis.is_some())?;
                    basis = Some((line, values));
                }
                (Section::Algebra, "product") => products.push(Raw { line, values }),
                (Section::R, "entry") => entries.push(Raw { line, values }),
                (Section::Options, "order") => {
                    once(options.order.is_some())?;
                    options.order = Some(parse_num(line, "order", value)?);
                }
                (Section::Options, "seed") => {
                    once(options.seed.is_some())?;
                    options.seed = Some(parse_num(line, "seed", value)?);
                }
                (Section::Options, "trials") => {
                    once(options.trials.is_some())?;
                    options.trials = Some(parse_num(line, "trials", value)?);
                }
                (Section::None, _) => return Err(syntax(line, "entry outside any section")),
                _ => return Err(syntax(line, format!("unknown key `{key}` in this section"))),
            }
        }

        let (dim_line, dim) = dim.ok_or(ProblemError::MissingAlgebra)?;
        if dim == 0 {
            return Err(field(dim_line, "dim", "dimension must be positive"));
        }
        let names = match basis {
            Some((line, names)) => {
                if names.len() != dim {
                    return Err(field(line, "basis", format!("{} names for dimension {dim}", names.len())));
                }
                for (i, name) in names.iter().enumerate() {
                    if names[..i].contains(name) {
                        return Err(field(line, "basis", format!("name `{name}` repeated")));
                    }
                }
                names
            }
            None => (1..=dim).map(|i| format!("e{i}")).collect(),
        };

        let check_range = |line: usize, f: &'static str, i: usize| {
            if i < dim {
                Ok(i)
            } else {
                Err(field(line, f, format!("index {} exceeds dimension {dim}", i + 1)))
            }
        };
        let mut product_map = BTreeMap::new();
        for Raw { line, values } in products {
            let [i, j, k, c] = values.as_slice() else {
                return Err(field(line, "product", "expected `i j k p/q`"));
            };
            let key = (
                check_range(line, "i", parse_index(line, "i", i)?)?,
                check_range(line, "j", parse_index(line, "j", j)?)?,
                check_range(line, "k", parse_index(line, "k", k)?)?,
            );
            if product_map.insert(key, parse_scalar(line, c)?).is_some() {
                return Err(field(line, "product", format!("duplicate structure constant {i} {j} {k}")));
            }
        }
        let mut r = BTreeMap::new();
        for Raw { line, values } in entries {
            let [k, i, j, c] = values.as_slice() else {
                return Err(field(line, "entry", "expected `k i j p/q`"));
            };
            let order: usize = parse_num(line, "k", k)?;
            if order == 0 {
                return Err(field(line, "k", "h-orders start at 1"));
            }
            let key = (
                order,
                check_range(line, "i", parse_index(line, "i", i)?)?,
                check_range(line, "j", parse_index(line, "j", j)?)?,
            );
            if r.insert(key, parse_scalar(line, c)?).is_some() {
                return Err(field(line, "entry", format!("duplicate entry {k} {i} {j}")));
            }
        }
        Ok(Self { names, products: product_map, r, options })
    }

    /// Canonical text; `parse(render(p)) == p`.
    pub fn render(&self) -> String {
        let frac = |c: &Scalar| format!("{}/{}", c.numer(), c.denom());
        let mut out = String::from("[algebra]\n");
        let _ = writeln!(out, "dim = {}", self.names.len());
        let _ = writeln!(out, "basis = {}", self.names.join(" "));
        for ((i, j, k), c) in &self.products {
            let _ = writeln!(out, "product = {} {} {} {}", i + 1, j + 1, k + 1, frac(c));
        }
        out.push_str("\n[r]\n");
        for ((k, i, j), c) in &self.r {
            let _ = writeln!(out, "entry = {k} {} {} {}", i + 1, j + 1, frac(c));
        }
        let o = &self.options;
        if o != &Options::default() {
            out.push_str("\n[options]\n");
            if let Some(v) = o.order {
                let _ = writeln!(out, "order = {v}");
            }
            if let Some(v) = o.seed {
                let _ = writeln!(out, "seed = {v}");
            }
            if let Some(v) = o.trials {
                let _ = writeln!(out, "trials = {v}");
            }
        }
        out
    }

    /// The algebra, rejected unless associative; the error names the first
    /// failing triple by basis name.
    pub fn algebra(&self) -> Result<AlgebraDef, ProblemError> {
        let alg = self.unchecked_algebra()?;
        match alg.check_associativity().failures.first() {
            Some(&(i, j, k)) => Err(ProblemError::Invalid(format!(
                "not associative: ({a}{b}){c} != {a}({b}{c})",
                a = self.names[i],
                b = self.names[j],
                c = self.names[k]
            ))),
            None => Ok(alg),
        }
    }

    pub fn unchecked_algebra(&self) -> Result<AlgebraDef, ProblemError> {
        let consts = self.products.iter().map(|(&(i, j, k), c)| (i, j, k, c.clone()));
        AlgebraDef::new(self.names.clone(), consts).map_err(|e| ProblemError::Invalid(e.to_string()))
    }

    /// Highest `h`-order present in the `[r]` block (0 when empty).
    pub fn r_degree(&self) -> usize {
        self.r.keys().map(|&(k, _, _)| k).max().unwrap_or(0)
    }

    /// `r[h]` truncated at `order`; higher entries are dropped.
    pub fn r_series(&self, order: usize) -> HSeries<LegTensor> {
        let dim = self.names.len();
        let mut r = HSeries::zero(order, LegTensor::zero(2));
        for (&(k, i, j), c) in &self.r {
            if k > order {
                continue;
            }
            let t = LegTensor::two_leg(&AlgebraElt::basis(dim, i), &AlgebraElt::basis(dim, j)).scale(c);
            let sum = r.coeff(k).add(&t);
            r.set_coeff(k, sum);
        }
        r
    }

    /// Rebuilds the `[r]` block from a series.
    pub fn set_r(&mut self, r: &HSeries<LegTensor>) {
        self.r.clear();
        for k in 1..=r.order() {
            for (key, c) in r.coeff(k).terms() {
                let (i, j) = (key[0].index().expect("body"), key[1].index().expect("body"));
                self.r.insert((k, i, j), c.clone());
            }
        }
    }
}
