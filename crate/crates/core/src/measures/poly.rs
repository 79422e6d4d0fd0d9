use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A real polynomial in `d` variables, stored as exponent vector -> coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    d: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(d: usize) -> Self {
        Polynomial { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: f64) -> Self {
        let mut p = Self::zero(d);
        p.add_term(vec![0; d], c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        let mut p = Self::zero(d);
        p.add_term(e, 1.0);
        p
    }

    pub fn from_terms(d: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        let mut p = Self::zero(d);
        for (e, c) in terms {
            if e.len() != d {
                return Err(Error::argument("polynomial", format!("exponent vector {e:?} is not of length {d}")));
            }
            if !c.is_finite() {
                return Err(Error::argument("polynomial", "coefficients must be finite"));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.d);
        self.terms.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>()).sum()
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(self.d);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * e[i] as f64);
            }
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(self.d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Self::zero(self.d);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// `p(y)` where each variable `x_i` is replaced by the polynomial `subs[i]`.
    pub fn substitute(&self, subs: &[Polynomial]) -> Polynomial {
        let d2 = subs.first().map_or(0, |s| s.d);
        let mut out = Self::zero(d2);
        for (e, c) in &self.terms {
            let mut term = Self::constant(d2, *c);
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&subs[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Parses expressions like `x^2-0.3`, `2*x+1`, `x1*x2^3-1/2*x2`.
    /// Variables are `x1..xd`, or `x, y, z` for the first three.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let bad = |msg: String| Error::argument("polynomial", format!("'{text}': {msg}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty expression".into()));
        }
        let mut p = Self::zero(d);
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'^' | b'*' | b'/') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'-' => (-1.0, &term[1..]),
                b'+' => (1.0, &term[1..]),
                _ => (1.0, term),
            };
            if body.is_empty() {
                return Err(bad("dangling sign".into()));
            }
            let mut coef = sign;
            let mut e = vec![0u32; d];
            for factor in body.split('*') {
                if let Some(var) = parse_variable(factor, d) {
                    let (idx, pow) = var.map_err(bad)?;
                    e[idx] += pow;
                } else {
                    coef *= parse_number(factor).ok_or_else(|| bad(format!("cannot read factor '{factor}'")))?;
                }
            }
            p.add_term(e, coef);
        }
        Ok(p)
    }
}

fn parse_number(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.parse::<f64>().ok()?, b.parse::<f64>().ok()?);
            (b != 0.0).then_some(a / b)
        }
        None => s.parse().ok(),
    }
}

/// `Some(Ok((index, power)))` for a variable factor, `None` if the factor is
/// not a variable at all.
fn parse_variable(factor: &str, d: usize) -> Option<std::result::Result<(usize, u32), String>> {
    let (name, pow) = match factor.split_once('^') {
        Some((n, p)) => (n, Some(p)),
        None => (factor, None),
    };
    let idx = match name {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        _ => {
            let rest = name.strip_prefix('x')?;
            match rest.parse::<usize>() {
                Ok(i) if i >= 1 => i - 1,
                _ => return None,
            }
        }
    };
    if idx >= d {
        return Some(Err(format!("variable '{name}' out of range for d={d}")));
    }
    let pow = match pow {
        Some(p) => match p.parse::<u32>() {
            Ok(v) => v,
            Err(_) => return Some(Err(format!("bad exponent '{p}'"))),
        },
        None => 1,
    };
    Some(Ok((idx, pow)))
}

impl fmt::Display for Polynomial {
    /// Emits a form that [`Polynomial::parse`] reads back exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_const = e.iter().all(|&p| p == 0);
            let mut parts = Vec::new();
            if c.abs() != 1.0 || is_const {
                parts.push(format!("{}", c.abs()));
            }
            for (v, &p) in e.iter().enumerate() {
                let name = if self.d == 1 { "x".to_string() } else { format!("x{}", v + 1) };
                match p {
                    0 => {}
                    1 => parts.push(name),
                    _ => parts.push(format!("{name}^{p}")),
                }
            }
            let sign = match (i, *c < 0.0) {
                (_, true) => "-",
                (0, false) => "",
                (_, false) => "+",
            };
            write!(f, "{sign}{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A polynomial map `R^d -> R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    d: usize,
    components: Vec<Polynomial>,
    veronese: bool,
}

impl MapSpec {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let d = components.first().map_or(0, |p| p.d());
        if d == 0 || components.iter().any(|p| p.d() != d) {
            return Err(Error::argument("map", "need at least one component, all in the same d >= 1 variables"));
        }
        Ok(MapSpec { d, components, veronese: false })
    }

    /// `x -> (x, x^2, ..., x^n)`.
    pub fn veronese(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("n", "Veronese map needs n >= 1"));
        }
        let comps = (1..=n as u32).map(|p| Polynomial::from_terms(1, vec![(vec![p], 1.0)]).expect("valid")).collect();
        Ok(MapSpec { d: 1, components: comps, veronese: true })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Largest component degree.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|p| p.eval(x)).collect()
    }

    /// `x -> f(A x + b)` with `A` row-major `d x d`.
    pub fn compose_affine(&self, a: &[f64], b: &[f64]) -> Result<Self> {
        let d = self.d;
        if a.len() != d * d || b.len() != d {
            return Err(Error::argument("A", format!("expected a {d}x{d} matrix and a length-{d} shift")));
        }
        let subs: Vec<Polynomial> = (0..d)
            .map(|i| {
                let mut p = Polynomial::constant(d, b[i]);
                for j in 0..d {
                    p = p.add(&Polynomial::variable(d, j).scale(a[i * d + j]));
                }
                p
            })
            .collect();
        MapSpec::new(self.components.iter().map(|c| c.substitute(&subs)).collect())
    }

    /// `map veronese n=2` or `map poly d=1 n=2 f1=x f2=x^2`.
    pub fn parse(line: &str) -> Result<Self> {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("map") {
            return Err(Error::argument("map", format!("expected 'map ...', got '{line}'")));
        }
        let kind = toks.next().ok_or_else(|| Error::argument("map", "missing map kind"))?;
        let kv = key_values(toks)?;
        match kind {
            "veronese" => {
                check_keys(&kv, &["n"])?;
                MapSpec::veronese(get_parsed(&kv, "n")?)
            }
            "poly" => {
                let d: usize = get_parsed(&kv, "d")?;
                let n: usize = get_parsed(&kv, "n")?;
                let mut allowed = vec!["d".to_string(), "n".to_string()];
                allowed.extend((1..=n).map(|i| format!("f{i}")));
                let allowed_ref: Vec<&str> = allowed.iter().map(String::as_str).collect();
                check_keys(&kv, &allowed_ref)?;
                let comps = (1..=n)
                    .map(|i| {
                        let key = format!("f{i}");
                        let text = kv
                            .iter()
                            .find(|(k, _)| *k == key)
                            .map(|(_, v)| v.trim_end_matches(','))
                            .ok_or_else(|| Error::argument(&key, "missing component"))?;
                        Polynomial::parse(text, d)
                    })
                    .collect::<Result<Vec<_>>>()?;
                MapSpec::new(comps)
            }
            other => Err(Error::argument("map", format!("unknown map kind '{other}'"))),
        }
    }

    pub fn to_text(&self) -> String {
        if self.veronese {
            return format!("map veronese n={}", self.n());
        }
        let comps: Vec<String> = self.components.iter().enumerate().map(|(i, p)| format!("f{}={p}", i + 1)).collect();
        format!("map poly d={} n={} {}", self.d, self.n(), comps.join(" "))
    }
}

pub(crate) fn key_values<'a>(toks: impl Iterator<Item = &'a str>) -> Result<Vec<(&'a str, &'a str)>> {
    toks.map(|t| t.split_once('=').ok_or_else(|| Error::argument(t, "expected key=value"))).collect()
}

pub(crate) fn check_keys(kv: &[(&str, &str)], allowed: &[&str]) -> Result<()> {
    for (k, _) in kv {
        if !allowed.contains(k) {
            return Err(Error::argument(*k, format!("unknown key; expected one of {}", allowed.join(", "))));
        }
    }
    Ok(())
}

pub(crate) fn get_parsed<T: std::str::FromStr>(kv: &[(&str, &str)], key: &str) -> Result<T> {
    let raw = kv
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.trim_end_matches(','))
        .ok_or_else(|| Error::argument(key, "missing"))?;
    raw.parse().map_err(|_| Error::argument(key, format!("cannot parse '{raw}'")))
}
