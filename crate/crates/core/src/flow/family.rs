use super::WeightVector;
use crate::error::{Error, Result};

/// A finite, declared family of weight vectors along which Dirichlet's
/// theorem is tested.
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryFamily {
    /// `(s/m, ..., s/n)` for `s = start + i * step`, `i < count`.
    CentralRay {
        m: usize,
        n: usize,
        start: f64,
        step: f64,
        count: usize,
    },
    /// `(r_1 s, ..., r_m s, s_1 s, ..., s_n s)`; weights positive, each half summing to one.
    WeightedRay {
        r: Vec<f64>,
        s: Vec<f64>,
        start: f64,
        step: f64,
        count: usize,
    },
    ExplicitList(Vec<WeightVector>),
    /// Each base vector pushed along the central direction by a growing
    /// amount `f = start + i * step`, so the smallest coordinate grows too.
    DriftingGrid {
        base: Vec<WeightVector>,
        start: f64,
        step: f64,
        count: usize,
    },
}

/// Finite-horizon view of the drift condition.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub max_floor: f64,
    pub horizon: f64,
    /// Largest floor in the later half of the family exceeds every floor in
    /// the earlier half. Evidence up to the horizon only.
    pub drifts_up_to_horizon: bool,
}

fn check_weights(name: &str, w: &[f64]) -> Result<()> {
    if w.is_empty() || w.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::argument(name, "weights must be positive"));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::argument(name, format!("weights must sum to 1, got {s}")));
    }
    Ok(())
}

impl TrajectoryFamily {
    pub fn central(m: usize, n: usize, start: f64, step: f64, count: usize) -> Self {
        TrajectoryFamily::CentralRay { m, n, start, step, count }
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        match self {
            TrajectoryFamily::CentralRay { m, n, .. } => Some((*m, *n)),
            TrajectoryFamily::WeightedRay { r, s, .. } => Some((r.len(), s.len())),
            TrajectoryFamily::ExplicitList(v) | TrajectoryFamily::DriftingGrid { base: v, .. } => {
                v.first().map(|t| (t.m(), t.n()))
            }
        }
    }

    /// All weight vectors, in generation order.
    pub fn generate(&self) -> Result<Vec<WeightVector>> {
        let out = match self {
            TrajectoryFamily::CentralRay { m, n, start, step, count } => (0..*count)
                .map(|i| WeightVector::central(*m, *n, start + i as f64 * step))
                .collect::<Result<Vec<_>>>()?,
            TrajectoryFamily::WeightedRay { r, s, start, step, count } => {
                check_weights("r", r)?;
                check_weights("s", s)?;
                (0..*count)
                    .map(|i| WeightVector::weighted(r, s, start + i as f64 * step))
                    .collect::<Result<Vec<_>>>()?
            }
            TrajectoryFamily::ExplicitList(v) => v.clone(),
            TrajectoryFamily::DriftingGrid { base, start, step, count } => {
                let mut out = Vec::with_capacity(base.len() * count);
                for i in 0..*count {
                    let f = start + i as f64 * step;
                    for b in base {
                        let (m, n) = (b.m(), b.n());
                        let t = b
                            .as_slice()
                            .iter()
                            .enumerate()
                            .map(|(c, x)| x + if c < m { f / m as f64 } else { f / n as f64 })
                            .collect();
                        out.push(WeightVector::new(m, n, t)?);
                    }
                }
                out
            }
        };
        if out.is_empty() {
            return Err(Error::argument("family", "generates no weight vectors"));
        }
        if let Some((m, n)) = out.first().map(|t| (t.m(), t.n())) {
            if out.iter().any(|t| t.m() != m || t.n() != n) {
                return Err(Error::argument("family", "mixed dimensions"));
            }
        }
        Ok(out)
    }

    pub fn drift_report(&self) -> Result<DriftReport> {
        let ts = self.generate()?;
        let floors: Vec<f64> = ts.iter().map(|t| t.floor()).collect();
        let half = floors.len() / 2;
        let early = floors[..half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let late = floors[half..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(DriftReport {
            max_floor: early.max(late),
            horizon: ts.iter().map(|t| t.norm()).fold(0.0, f64::max),
            drifts_up_to_horizon: half > 0 && late > early,
        })
    }

    pub fn drifts_away_from_walls(&self) -> Result<bool> {
        Ok(self.drift_report()?.drifts_up_to_horizon)
    }

    /// Parses the line-oriented text form for an `m x n` system.
    ///
    /// ```text
    /// ray central t=<start>:<step>:<count>
    /// ray r=<r1,...> s=<s1,...> t=<start>:<step>:<count>
    /// explicit <t1> <t2> ... <tk>          (one line per vector)
    /// drift base=<t1,...,tk>;<...> floors=<start>:<step>:<count>
    /// ```
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self> {
        let mut explicit = Vec::new();
        let mut single: Option<TrajectoryFamily> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lno = no + 1;
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let rest: Vec<&str> = words.collect();
            let fam = match head {
                "explicit" => {
                    let t = rest
                        .iter()
                        .map(|w| w.parse::<f64>().map_err(|e| Error::parse(lno, e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    explicit.push(WeightVector::new(m, n, t).map_err(|e| Error::parse(lno, e.to_string()))?);
                    continue;
                }
                "ray" => parse_ray(&rest, m, n, lno)?,
                "drift" => parse_drift(&rest, m, n, lno)?,
                other => return Err(Error::parse(lno, format!("unknown record `{other}`"))),
            };
            if single.is_some() {
                return Err(Error::parse(lno, "only one ray or drift record allowed"));
            }
            single = Some(fam);
        }
        match (single, explicit.is_empty()) {
            (Some(f), true) => Ok(f),
            (None, false) => Ok(TrajectoryFamily::ExplicitList(explicit)),
            (Some(_), false) => Err(Error::parse(0, "cannot mix explicit records with a ray or drift")),
            (None, true) => Err(Error::parse(0, "empty trajectory family")),
        }
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        match self {
            TrajectoryFamily::CentralRay { start, step, count, .. } => {
                format!("ray central t={start}:{step}:{count}\n")
            }
            TrajectoryFamily::WeightedRay { r, s, start, step, count } => {
                format!("ray r={} s={} t={start}:{step}:{count}\n", join(r), join(s))
            }
            TrajectoryFamily::ExplicitList(v) => v
                .iter()
                .map(|t| {
                    let parts: Vec<String> = t.as_slice().iter().map(|x| format!("{x}")).collect();
                    format!("explicit {}\n", parts.join(" "))
                })
                .collect(),
            TrajectoryFamily::DriftingGrid { base, start, step, count } => {
                let b: Vec<String> = base.iter().map(|t| join(t.as_slice())).collect();
                format!("drift base={} floors={start}:{step}:{count}\n", b.join(";"))
            }
        }
    }
}

fn key<'a>(words: &[&'a str], k: &str) -> Option<&'a str> {
    words.iter().find_map(|w| w.strip_prefix(k).and_then(|r| r.strip_prefix('=')))
}

fn parse_list(s: &str, lno: usize) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| Error::parse(lno, format!("`{x}`: {e}")))).collect()
}

fn parse_range(s: &str, lno: usize) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::parse(lno, format!("expected <start>:<step>:<count>, got `{s}`")));
    }
    let f = |x: &str| x.parse::<f64>().map_err(|e| Error::parse(lno, e.to_string()));
    let count = parts[2].parse::<usize>().map_err(|e| Error::parse(lno, e.to_string()))?;
    Ok((f(parts[0])?, f(parts[1])?, count))
}

fn parse_ray(words: &[&str], m: usize, n: usize, lno: usize) -> Result<TrajectoryFamily> {
    let t = key(words, "t").ok_or_else(|| Error::parse(lno, "missing t=<start>:<step>:<count>"))?;
    let (start, step, count) = parse_range(t, lno)?;
    if words.first() == Some(&"central") {
        return Ok(TrajectoryFamily::CentralRay { m, n, start, step, count });
    }
    let r = parse_list(key(words, "r").ok_or_else(|| Error::parse(lno, "missing r="))?, lno)?;
    let s = parse_list(key(words, "s").ok_or_else(|| Error::parse(lno, "missing s="))?, lno)?;
    if r.len() != m || s.len() != n {
        return Err(Error::parse(lno, format!("expected {m} r-weights and {n} s-weights")));
    }
    check_weights("r", &r).map_err(|e| Error::parse(lno, e.to_string()))?;
    check_weights("s", &s).map_err(|e| Error::parse(lno, e.to_string()))?;
    Ok(TrajectoryFamily::WeightedRay { r, s, start, step, count })
}

fn parse_drift(words: &[&str], m: usize, n: usize, lno: usize) -> Result<TrajectoryFamily> {
    let base_text = key(words, "base").ok_or_else(|| Error::parse(lno, "missing base="))?;
    let base = base_text
        .split(';')
        .map(|b| WeightVector::new(m, n, parse_list(b, lno)?).map_err(|e| Error::parse(lno, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let floors = key(words, "floors").ok_or_else(|| Error::parse(lno, "missing floors="))?;
    let (start, step, count) = parse_range(floors, lno)?;
    Ok(TrajectoryFamily::DriftingGrid { base, start, step, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_ray_generation() {
        let f = TrajectoryFamily::central(1, 2, 6.0, 1.0, 3);
        let ts = f.generate().unwrap();
        assert_eq!(ts[0].as_slice(), &[6.0, 3.0, 3.0]);
        assert_eq!(ts[2].as_slice(), &[8.0, 4.0, 4.0]);
        assert!(f.drifts_away_from_walls().unwrap());
    }

    #[test]
    fn non_drifting_family_is_detected() {
        // first coordinate frozen: t = (u, s, s + u)
        let ts = (3..9).map(|s| WeightVector::new(2, 1, vec![0.4, s as f64, s as f64 + 0.4]).unwrap()).collect();
        let f = TrajectoryFamily::ExplicitList(ts);
        assert!(!f.drifts_away_from_walls().unwrap());
    }

    #[test]
    fn parse_and_print_round_trip() {
        let cases = [
            ("ray central t=1:0.5:10\n", 1, 1),
            ("ray r=0.25,0.75 s=1 t=2:1:4\n", 2, 1),
            ("explicit 1 2 3\nexplicit 2 2 4\n", 2, 1),
            ("drift base=1,1,2;0.5,1.5,2 floors=0:1:5\n", 2, 1),
        ];
        for (text, m, n) in cases {
            let f = TrajectoryFamily::parse(text, m, n).unwrap();
            assert_eq!(f.to_text(), text);
            let back = TrajectoryFamily::parse(&f.to_text(), m, n).unwrap();
            assert_eq!(f.generate().unwrap(), back.generate().unwrap());
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert!(matches!(TrajectoryFamily::parse("ray central\n", 1, 1), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(TrajectoryFamily::parse("\nspiral t=1\n", 1, 1), Err(Error::Parse { line: 2, .. })));
        assert!(TrajectoryFamily::parse("ray r=0.5,0.6 s=1 t=1:1:2", 2, 1).is_err());
        assert!(TrajectoryFamily::parse("", 1, 1).is_err());
    }

    #[test]
    fn weighted_ray_matches_weights() {
        let f = TrajectoryFamily::parse("ray r=0.25,0.75 s=1 t=4:1:2", 2, 1).unwrap();
        let ts = f.generate().unwrap();
        assert_eq!(ts[0].as_slice(), &[1.0, 3.0, 4.0]);
    }
}
