//! TOML experiment files.
//!
//! ```toml
//! mode = "exact"
//!
//! [device]
//! n = 3
//! r = "0+0.7071067811865476i"
//! t = "0.7071067811865476"
//! mirror = "1@4.71238898038469"     # magnitude@phase
//! edge_phase = 0.0
//!
//! [[device.vertex]]                  # per-vertex overrides
//! index = 1
//! mirror_phase = 0.3
//!
//! [[graph.vertex]]
//! kind = "physical"                  # or "ideal" with coin = "grover" | "three-port" | "identity" | rows
//! n = 3
//!
//! [[graph.edge]]
//! a = [0, 1]
//! b = [1, 2]
//!
//! [[schedule]]
//! step = 3
//! vertex = 0
//! coin = "identity"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::amplitude::{Matrix, NumericMode};
use crate::device::{grover_coin, three_port_closed_form, MultiportSpec, VertexParams};
use crate::error::{Error, Result};
use crate::walk::{EdgeSpec, GraphSpec, Schedule, VertexKind, VertexOverride, VertexPort};

/// Parse `re+im i`, `re`, `im i` or `mag@phase`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse complex number {s:?} (expected `re+im i` or `mag@phase`)"));
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((mag, phase)) = t.split_once('@') {
        return Ok(Complex64::from_polar(num(mag)?, num(phase)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x)?,
    };
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<NumericMode>,
    pub format: Option<String>,
    pub device: Option<DeviceConfig>,
    pub graph: Option<GraphConfig>,
    #[serde(default)]
    pub schedule: Vec<ScheduleEntry>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexConfig {
    pub index: Option<usize>,
    pub r: Option<String>,
    pub t: Option<String>,
    pub mirror: Option<String>,
    pub mirror_phase: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub n: Option<usize>,
    pub r: Option<String>,
    pub t: Option<String>,
    pub mirror: Option<String>,
    pub mirror_phase: Option<f64>,
    pub edge_phase: Option<f64>,
    pub edge_phases: Option<Vec<f64>>,
    pub max_steps: Option<usize>,
    #[serde(default)]
    pub vertex: Vec<VertexConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoinConfig {
    Named(String),
    Rows(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Deserialize)]
pub struct GraphVertexConfig {
    pub kind: String,
    pub n: usize,
    pub coin: Option<CoinConfig>,
    /// Remaining keys are read as a `[device]` section.
    #[serde(flatten)]
    pub device: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEdgeConfig {
    pub a: [usize; 2],
    pub b: [usize; 2],
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    #[serde(default)]
    pub allow_disconnected: bool,
    #[serde(default)]
    pub vertex: Vec<GraphVertexConfig>,
    #[serde(default)]
    pub edge: Vec<GraphEdgeConfig>,
    /// `[vertex, port]` pairs; when omitted every free port gets a lead.
    pub leads: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub step: usize,
    pub vertex: usize,
    pub coin: Option<CoinConfig>,
    pub mirror_phase: Option<f64>,
    pub edge_phase: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

fn field<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{path}: {m}")),
        other => other,
    })
}

fn parse_opt(s: &Option<String>, path: &str) -> Result<Option<Complex64>> {
    s.as_deref().map(|v| field(parse_complex(v), path)).transpose()
}

impl DeviceConfig {
    /// Build a spec; `n_override` wins over the file.
    pub fn to_spec(&self, n_override: Option<usize>) -> Result<MultiportSpec> {
        let n = n_override.or(self.n).unwrap_or(3);
        let mut base = VertexParams::default();
        if let Some(r) = parse_opt(&self.r, "device.r")? {
            base.r = r;
        }
        if let Some(t) = parse_opt(&self.t, "device.t")? {
            base.t = t;
        }
        if let Some(m) = parse_opt(&self.mirror, "device.mirror")? {
            base.mirror = m;
        }
        if let Some(p) = self.mirror_phase {
            base = base.with_mirror_phase(p);
        }
        let mut spec = MultiportSpec::uniform(n, base, self.edge_phase.unwrap_or(0.0));
        if let Some(phases) = &self.edge_phases {
            if phases.len() != n {
                return Err(Error::Config(format!("device.edge_phases: expected {n} entries, found {}", phases.len())));
            }
            spec.edge_phases = phases.clone();
        }
        if let Some(m) = self.max_steps {
            spec.max_steps = m;
        }
        for (k, v) in self.vertex.iter().enumerate() {
            let path = format!("device.vertex[{k}]");
            let idx = v.index.ok_or_else(|| Error::Config(format!("{path}.index is required")))?;
            let slot = spec
                .vertices
                .get_mut(idx)
                .ok_or_else(|| Error::Config(format!("{path}.index = {idx} is not a vertex of a {n}-port")))?;
            if let Some(r) = parse_opt(&v.r, &format!("{path}.r"))? {
                slot.r = r;
            }
            if let Some(t) = parse_opt(&v.t, &format!("{path}.t"))? {
                slot.t = t;
            }
            if let Some(m) = parse_opt(&v.mirror, &format!("{path}.mirror"))? {
                slot.mirror = m;
            }
            if let Some(p) = v.mirror_phase {
                *slot = slot.with_mirror_phase(p);
            }
        }
        Ok(spec)
    }
}

fn coin_matrix(c: &CoinConfig, n: usize, path: &str) -> Result<Matrix<Complex64>> {
    match c {
        CoinConfig::Named(name) => match name.as_str() {
            "grover" => grover_coin(n),
            "identity" => Ok(Matrix::identity(n)),
            "three-port" if n == 3 => Ok(three_port_closed_form()),
            other => Err(Error::Config(format!("{path}: unknown coin {other:?} for degree {n}"))),
        },
        CoinConfig::Rows(rows) => {
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| field(parse_complex(s), &format!("{path}[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let m = Matrix::from_rows(parsed).map_err(|e| Error::Config(format!("{path}: {e}")))?;
            if m.dim() != n {
                return Err(Error::Config(format!("{path}: coin has dimension {}, vertex degree is {n}", m.dim())));
            }
            Ok(m)
        }
    }
}

impl GraphConfig {
    pub fn to_graph(&self) -> Result<GraphSpec> {
        let mut g = GraphSpec { allow_disconnected: self.allow_disconnected, ..GraphSpec::default() };
        for (k, v) in self.vertex.iter().enumerate() {
            let path = format!("graph.vertex[{k}]");
            let kind = match v.kind.as_str() {
                "ideal" => {
                    let coin = v.coin.clone().unwrap_or(CoinConfig::Named("grover".into()));
                    VertexKind::Ideal { coin: coin_matrix(&coin, v.n, &format!("{path}.coin"))? }
                }
                "physical" => {
                    let table: toml::Table = v.device.clone().into_iter().collect();
                    let dev: DeviceConfig = toml::Value::Table(table)
                        .try_into()
                        .map_err(|e| Error::Config(format!("{path}: {e}")))?;
                    VertexKind::Physical { spec: dev.to_spec(Some(v.n))? }
                }
                other => return Err(Error::Config(format!("{path}.kind: unknown vertex kind {other:?}"))),
            };
            g.add_vertex(kind);
        }
        for e in &self.edge {
            g.add_edge(
                EdgeSpec::new(VertexPort::new(e.a[0], e.a[1]), VertexPort::new(e.b[0], e.b[1])).with_phase(e.phase),
            );
        }
        match &self.leads {
            Some(leads) => {
                for l in leads {
                    g.add_lead(VertexPort::new(l[0], l[1]));
                }
            }
            None => {
                let used: Vec<VertexPort> = g.edges.iter().flat_map(|e| [e.a, e.b]).collect();
                for v in 0..g.vertices.len() {
                    for p in 0..g.vertices[v].degree() {
                        let vp = VertexPort::new(v, p);
                        if !used.contains(&vp) {
                            g.add_lead(vp);
                        }
                    }
                }
            }
        }
        Ok(g)
    }
}

/// Schedule entries against the vertices of `graph`.
pub fn build_schedule(entries: &[ScheduleEntry], graph: &GraphSpec) -> Result<Schedule> {
    let mut s = Schedule::new();
    for (k, e) in entries.iter().enumerate() {
        let path = format!("schedule[{k}]");
        let vertex = graph
            .vertices
            .get(e.vertex)
            .ok_or_else(|| Error::Config(format!("{path}.vertex = {} does not exist", e.vertex)))?;
        let o = match vertex {
            VertexKind::Ideal { coin } => {
                let c = e.coin.as_ref().ok_or_else(|| Error::Config(format!("{path}: ideal vertex needs `coin`")))?;
                VertexOverride::Coin(coin_matrix(c, coin.dim(), &format!("{path}.coin"))?)
            }
            VertexKind::Physical { spec } => {
                let mut spec = spec.clone();
                if let Some(p) = e.mirror_phase {
                    spec = spec.with_mirror_phase(p);
                }
                if let Some(p) = e.edge_phase {
                    spec = spec.with_edge_phase(p);
                }
                VertexOverride::Device(spec)
            }
        };
        s.set(e.step, e.vertex, o);
    }
    Ok(s)
}
