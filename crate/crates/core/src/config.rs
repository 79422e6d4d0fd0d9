//! Plain-text run configuration.
//!
//! ```text
//! # comment
//! [run]
//! experiment = escape
//! seed = 1
//! [inputs]
//! map = map veronese n=2
//! t = 6,3,3 8,4,4
//! [params]
//! eps = 0.4 0.2 0.1
//! ```
//!
//! Values are split on whitespace after `=`. The keys allowed in each section
//! depend on the experiment; anything else is rejected.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// First line of every output file.
pub const FORMAT_VERSION: &str = "dilab-report/1";
/// Environment variable naming the parent of default run directories.
pub const OUTPUT_DIR_ENV: &str = "DILAB_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Run,
    Inputs,
    Params,
}

impl Section {
    pub fn name(&self) -> &'static str {
        match self {
            Section::Run => "run",
            Section::Inputs => "inputs",
            Section::Params => "params",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "run" => Some(Section::Run),
            "inputs" => Some(Section::Inputs),
            "params" => Some(Section::Params),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyDefault {
    Required,
    Optional,
    Value(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub section: Section,
    pub key: &'static str,
    pub default: KeyDefault,
    pub help: &'static str,
}

const fn key(section: Section, key: &'static str, default: KeyDefault, help: &'static str) -> KeySpec {
    KeySpec { section, key, default, help }
}

use KeyDefault::{Optional, Required, Value};
use Section::{Inputs, Params, Run};

const COMMON: [KeySpec; 3] = [
    key(Run, "seed", Value("1"), "base seed; sample i uses stream (seed, i)"),
    key(Run, "margin", Value("1e-9"), "boundary margin for lambda_1 comparisons"),
    key(Run, "out", Optional, "run directory (default $DILAB_OUTPUT_DIR/<experiment> or dilab-runs/<experiment>)"),
];

const M: KeySpec = key(Inputs, "m", Value("1"), "number of linear forms");
const N: KeySpec = key(Inputs, "n", Value("1"), "number of variables");
const Y: KeySpec = key(
    Inputs,
    "Y",
    Required,
    "row-major entries of the m x n matrix, comma separated; 1 x 1 also accepts liouville(J), golden_ratio, rational(p/q), random(seed)",
);
const FAMILY: KeySpec = key(
    Inputs,
    "family",
    Required,
    "trajectory family: `ray central t=start:step:count`, `ray r=.. s=.. t=..`, `explicit t1 .. tk` or `drift base=..;.. floors=..`",
);
const MAP: KeySpec =
    key(Inputs, "map", Value("map veronese n=2"), "map declaration, e.g. `map poly d=1 n=2 f1=x, f2=2*x+1`");
const MEASURE: KeySpec = key(
    Inputs,
    "measure",
    Value("measure lebesgue d=1 box=0,1"),
    "measure declaration, e.g. `measure ifs ratios=1/3,1/3 trans=0,2/3 probs=1/2,1/2`",
);
const BALL: KeySpec = key(Inputs, "ball", Value("0.5 0.5"), "sup-norm ball: comma-separated center, then radius");
const T_LIST: KeySpec = key(Inputs, "t", Required, "weight vectors, each comma separated, e.g. `6,3,3 8,4,4`");
const EPS_LIST: KeySpec = key(Params, "eps", Required, "eps grid, each in (0, 1)");
const SAMPLES: KeySpec = key(Params, "samples", Value("20000"), "sample count");

/// One subcommand: its keys and the columns of its CSV output.
#[derive(Debug)]
pub struct ExperimentSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
    pub columns: &'static [&'static str],
}

const REPORT_COLUMNS: &[&str] =
    &["experiment", "seed", "t", "floor_t", "norm_t", "eps", "fraction", "ci", "n", "boundary_n"];

pub static EXPERIMENTS: &[ExperimentSpec] = &[
    ExperimentSpec {
        name: "check",
        about: "Single Dirichlet-system query; prints solvable, unsolvable or boundary",
        keys: &[
            M,
            N,
            Y,
            key(Inputs, "t", Required, "weight vector (t_1..t_m, t_{m+1}..t_k), comma separated"),
            key(Params, "eps", Required, "eps in (0, 1)"),
            key(Params, "weak_q", Value("false"), "also run the direct solver with |q_j| <= eps e^{t_j}"),
        ],
        columns: &["t", "eps", "lambda1", "lattice", "direct", "witness_p", "witness_q"],
    },
    ExperimentSpec {
        name: "trajectory",
        about: "lambda_1 profile along a trajectory family",
        keys: &[M, N, Y, FAMILY],
        columns: &["t", "norm", "lambda1", "dip"],
    },
    ExperimentSpec {
        name: "di",
        about: "Horizon-bounded Dirichlet-improvability classification",
        keys: &[
            M,
            N,
            Y,
            FAMILY,
            key(Params, "eps", Required, "eps in (0, 1)"),
            key(Params, "horizon", Optional, "largest ||t|| considered (default: end of the family)"),
            key(Params, "tail", Value("1/3"), "fraction of the horizon forming the tail window"),
        ],
        columns: &["t", "norm", "floor", "lambda1", "solvable", "witness_p", "witness_q"],
    },
    ExperimentSpec {
        name: "escape",
        about: "Escape fractions nu{x in B : g_t tau(f(x)) outside K_eps} per (t, eps)",
        keys: &[MAP, MEASURE, BALL, T_LIST, EPS_LIST, SAMPLES],
        columns: REPORT_COLUMNS,
    },
    ExperimentSpec {
        name: "decay",
        about: "Escape fractions plus power-law fits in eps and their spread over t",
        keys: &[MAP, MEASURE, BALL, T_LIST, EPS_LIST, SAMPLES],
        columns: REPORT_COLUMNS,
    },
    ExperimentSpec {
        name: "equidist",
        about: "K_eps mass of pushed horocycle pieces versus Haar measure (k = 2)",
        keys: &[
            key(Inputs, "interval", Value("0,1"), "interval B as lo,hi"),
            key(Inputs, "y0", Value("0"), "base points tau(y0) Z^2, one per value"),
            key(Inputs, "t", Required, "central-ray time s, giving t = (s, s)"),
            key(Params, "eps", Value("0.5"), "eps > 0"),
            key(Params, "samples", Value("100000"), "translate samples"),
            key(Params, "haar_samples", Value("100000"), "Haar-oracle samples"),
        ],
        columns: REPORT_COLUMNS,
    },
    ExperimentSpec {
        name: "counterexample",
        about: "Drifting family in M_{2,1} along which every Y is eps-improvable",
        keys: &[
            key(Params, "eps", Required, "eps in (2^{-1/3}, 1)"),
            key(Params, "e_u", Value("1.5"), "e^u, inside (1/eps^2, 2 eps)"),
            key(Params, "s", Value("3 4 5 6 7 8"), "values of s"),
            key(Params, "y_count", Value("100"), "number of random Y"),
        ],
        columns: &[
            "y",
            "s",
            "t",
            "primitive_coeffs",
            "primitive",
            "lambda1",
            "short_vector",
            "nearby_distance",
            "consistent",
            "pass",
        ],
    },
    ExperimentSpec {
        name: "good-test",
        about: "Empirical (C, alpha)-goodness of a polynomial on a measure",
        keys: &[
            key(Inputs, "f", Required, "polynomial in x (or x, y, z / x1..xd), e.g. `x^2 - 1/4`"),
            MEASURE,
            BALL,
            key(Params, "alpha", Value("1"), "exponent alpha"),
            key(Params, "eps", Value("0.01 0.02 0.05 0.1 0.2 0.5 1"), "grid of eps"),
            key(Params, "samples", Value("100000"), "sample count"),
        ],
        columns: &["eps", "fraction", "ci", "c_needed"],
    },
    ExperimentSpec {
        name: "federer-test",
        about: "Empirical Federer (doubling) ratio nu(3B)/nu(B) inside a ball U",
        keys: &[
            MEASURE,
            BALL,
            key(Params, "balls", Value("200"), "number of test centers"),
            key(Params, "samples", Value("200000"), "sample count"),
        ],
        columns: &["center", "radius", "inner", "outer", "ratio"],
    },
    ExperimentSpec {
        name: "nonplanar-test",
        about: "Smallest singular value of (1, f) sampled on the support",
        keys: &[
            key(Inputs, "map", Required, "map declaration"),
            MEASURE,
            BALL,
            key(Params, "samples", Value("10000"), "sample count"),
        ],
        columns: &["nonplanar", "smallest_singular_value", "samples_used"],
    },
    ExperimentSpec {
        name: "ba",
        about: "Badly-approximable quality min max|Yq - p|^{1/r} max|q|^{1/s} up to Qmax",
        keys: &[
            M,
            N,
            Y,
            key(Inputs, "r", Optional, "weights r_i, summing to 1 (default equal)"),
            key(Inputs, "s", Optional, "weights s_j, summing to 1 (default equal)"),
            key(Params, "qmax", Value("1000"), "one or more bounds Qmax"),
        ],
        columns: &["qmax", "quality"],
    },
    ExperimentSpec {
        name: "constants",
        about: "Table of known improvability thresholds eps_0",
        keys: &[key(Params, "n", Value("2"), "dimension used by n-dependent rows")],
        columns: &["key", "value", "formula", "statement"],
    },
];

pub fn experiment_spec(name: &str) -> Result<&'static ExperimentSpec> {
    EXPERIMENTS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::argument("experiment", format!("unknown experiment `{name}`")))
}

impl ExperimentSpec {
    /// Keys in display order: common run keys first.
    pub fn all_keys(&self) -> impl Iterator<Item = &KeySpec> {
        COMMON.iter().chain(self.keys.iter())
    }

    pub fn key_spec(&self, key: &str) -> Option<&KeySpec> {
        self.all_keys().find(|k| k.key == key)
    }
}

/// Accepts `1.5`, `-2e-3` and `a/b`.
pub fn parse_number(text: &str) -> Option<f64> {
    if let Some((a, b)) = text.split_once('/') {
        let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0.0).then_some(a / b);
    }
    text.trim().parse().ok()
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    spec: &'static ExperimentSpec,
    values: BTreeMap<&'static str, Vec<String>>,
}

impl RunConfig {
    pub fn new(experiment: &str) -> Result<Self> {
        Ok(RunConfig { spec: experiment_spec(experiment)?, values: BTreeMap::new() })
    }

    pub fn experiment(&self) -> &'static str {
        self.spec.name
    }

    pub fn spec(&self) -> &'static ExperimentSpec {
        self.spec
    }

    /// Sets `key` from whitespace-separated text.
    pub fn set(&mut self, key: &str, text: &str) -> Result<()> {
        self.set_tokens(key, text.split_whitespace().map(str::to_string).collect())
    }

    pub fn set_tokens(&mut self, key: &str, tokens: Vec<String>) -> Result<()> {
        let ks = self
            .spec
            .key_spec(key)
            .ok_or_else(|| Error::argument(key, format!("unknown key for experiment `{}`", self.spec.name)))?;
        if tokens.is_empty() || tokens.iter().any(|t| t.chars().any(char::is_whitespace)) {
            return Err(Error::argument(key, "needs a non-empty value"));
        }
        self.values.insert(ks.key, tokens);
        Ok(())
    }

    pub fn tokens(&self, key: &str) -> Option<&[String]> {
        self.values.get(key).map(Vec::as_slice)
    }

    /// Fills defaults and checks that required keys are present.
    pub fn resolved(&self) -> Result<RunConfig> {
        let mut out = self.clone();
        for ks in self.spec.all_keys() {
            if out.values.contains_key(ks.key) {
                continue;
            }
            match ks.default {
                KeyDefault::Required => return Err(Error::argument(ks.key, "required but not set")),
                KeyDefault::Optional => {}
                KeyDefault::Value(v) => out.set(ks.key, v)?,
            }
        }
        if !out.values.contains_key("out") {
            let parent = std::env::var(OUTPUT_DIR_ENV).unwrap_or_else(|_| "dilab-runs".into());
            let dir = std::path::Path::new(&parent).join(self.spec.name);
            out.set_tokens("out", vec![dir.to_string_lossy().into_owned()])?;
        }
        Ok(out)
    }

    /// Value as a single line of text.
    pub fn text(&self, key: &str) -> Result<String> {
        self.tokens(key).map(|t| t.join(" ")).ok_or_else(|| Error::argument(key, "not set"))
    }

    pub fn text_opt(&self, key: &str) -> Option<String> {
        self.tokens(key).map(|t| t.join(" "))
    }

    /// Every number in the value; tokens may also be comma separated.
    pub fn numbers(&self, key: &str) -> Result<Vec<f64>> {
        let toks = self.tokens(key).ok_or_else(|| Error::argument(key, "not set"))?;
        toks.iter()
            .flat_map(|t| t.split(','))
            .filter(|s| !s.is_empty())
            .map(|s| parse_number(s).ok_or_else(|| Error::argument(key, format!("`{s}` is not a number"))))
            .collect()
    }

    pub fn number(&self, key: &str) -> Result<f64> {
        match self.numbers(key)?.as_slice() {
            [x] => Ok(*x),
            _ => Err(Error::argument(key, "expected a single number")),
        }
    }

    /// One comma-separated vector per token.
    pub fn vectors(&self, key: &str) -> Result<Vec<Vec<f64>>> {
        let toks = self.tokens(key).ok_or_else(|| Error::argument(key, "not set"))?;
        toks.iter()
            .map(|t| {
                t.split(',')
                    .map(|s| parse_number(s).ok_or_else(|| Error::argument(key, format!("`{s}` is not a number"))))
                    .collect()
            })
            .collect()
    }

    pub fn integer(&self, key: &str) -> Result<u64> {
        self.text(key)?.parse().map_err(|_| Error::argument(key, "expected a non-negative integer"))
    }

    pub fn integers(&self, key: &str) -> Result<Vec<u64>> {
        let toks = self.tokens(key).ok_or_else(|| Error::argument(key, "not set"))?;
        toks.iter()
            .flat_map(|t| t.split(','))
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| Error::argument(key, format!("`{s}` is not a non-negative integer"))))
            .collect()
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.text(key)?.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(Error::argument(key, format!("expected true or false, got `{other}`"))),
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.integer("seed")
    }

    pub fn margin(&self) -> Result<f64> {
        let m = self.number("margin")?;
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::argument("margin", "must be finite and non-negative"));
        }
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section: Option<Section> = None;
        let mut entries: Vec<(usize, Section, String, Vec<String>)> = Vec::new();
        let mut experiment: Option<String> = None;
        for (no, raw) in text.lines().enumerate() {
            let lno = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::parse(lno, "unterminated section header"))?;
                section = Some(
                    Section::parse(name.trim())
                        .ok_or_else(|| Error::parse(lno, format!("unknown section `{name}`")))?,
                );
                continue;
            }
            let sec = section.ok_or_else(|| Error::parse(lno, "key outside of any section"))?;
            let (k, v) = line.split_once('=').ok_or_else(|| Error::parse(lno, "expected `key = value`"))?;
            let (k, tokens) = (k.trim().to_string(), v.split_whitespace().map(str::to_string).collect::<Vec<_>>());
            if sec == Section::Run && k == "experiment" {
                if experiment.is_some() {
                    return Err(Error::parse(lno, "experiment given twice"));
                }
                experiment = Some(tokens.join(" "));
                continue;
            }
            entries.push((lno, sec, k, tokens));
        }
        let experiment = experiment.ok_or_else(|| Error::parse(0, "missing `experiment` in [run]"))?;
        let mut cfg = RunConfig::new(&experiment).map_err(|e| Error::parse(0, e.to_string()))?;
        for (lno, sec, k, tokens) in entries {
            let ks = cfg
                .spec
                .key_spec(&k)
                .ok_or_else(|| Error::parse(lno, format!("unknown key `{k}` for experiment `{experiment}`")))?;
            if ks.section != sec {
                return Err(Error::parse(lno, format!("key `{k}` belongs in [{}]", ks.section.name())));
            }
            if cfg.values.contains_key(ks.key) {
                return Err(Error::parse(lno, format!("key `{k}` given twice")));
            }
            cfg.set_tokens(&k, tokens).map_err(|e| Error::parse(lno, e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for sec in [Section::Run, Section::Inputs, Section::Params] {
            let mut body = String::new();
            if sec == Section::Run {
                body.push_str(&format!("experiment = {}\n", self.spec.name));
            }
            for ks in self.spec.all_keys().filter(|k| k.section == sec) {
                if let Some(v) = self.values.get(ks.key) {
                    body.push_str(&format!("{} = {}\n", ks.key, v.join(" ")));
                }
            }
            if !body.is_empty() {
                out.push_str(&format!("[{}]\n{body}", sec.name()));
            }
        }
        out
    }

    /// `{experiment, run: {..}, inputs: {..}, params: {..}}` in display order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut root = serde_json::Map::new();
        root.insert("experiment".into(), self.spec.name.into());
        for sec in [Section::Run, Section::Inputs, Section::Params] {
            let mut m = serde_json::Map::new();
            for ks in self.spec.all_keys().filter(|k| k.section == sec) {
                if let Some(v) = self.values.get(ks.key) {
                    m.insert(ks.key.into(), v.join(" ").into());
                }
            }
            root.insert(sec.name().into(), m.into());
        }
        root.into()
    }
}

impl PartialEq for RunConfig {
    fn eq(&self, other: &Self) -> bool {
        self.spec.name == other.spec.name && self.values == other.values
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
