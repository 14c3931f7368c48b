//! Command-line front end. Every command is a thin wrapper over library
//! calls; output is schema-versioned JSON (or CSV) on stdout.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::amplitude::{Amplitude, ExactComplex, NumericMode, PortLabel};
use crate::bell::{cnot_table, full_truth_table, group_table, HeraldKind};
use crate::device::{
    amplitude_series, enumerate_paths, exit_record, mirror_count_distribution, steady_state, symmetric_unitary,
    three_port_closed_form, transfer_matrix, MultiportSpec,
};
use crate::error::{Error, Result};
use crate::feasibility::{assess, FeasibilityInputs, Pulse};
use crate::walk::{build_network, run_walk_from_lead, GraphSpec, VertexKind};
use config::{build_schedule, DeviceConfig, RunConfig};
use output::{c64_cells, matrix_json, Output, Table};

pub use output::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "multiport", version, about = "Simulate directionally-unbiased linear-optical multiports")]
pub struct Cli {
    /// Numeric mode: exact rational/surd arithmetic or double precision.
    #[arg(long, global = true, env = "MULTIPORT_NUMERIC_MODE")]
    pub mode: Option<NumericMode>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// TOML experiment file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Device overrides on top of the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct DeviceArgs {
    /// Number of ports.
    #[arg(long)]
    pub n: Option<usize>,
    /// Beam-splitter reflection amplitude (`re+im i` or `mag@phase`).
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Beam-splitter transmission amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Mirror round-trip factor.
    #[arg(long, allow_hyphen_values = true)]
    pub mirror: Option<String>,
    /// Mirror round-trip phase in radians (overrides --mirror).
    #[arg(long, allow_hyphen_values = true)]
    pub mirror_phase: Option<f64>,
    /// Extra phase per inter-vertex traversal, radians.
    #[arg(long, allow_hyphen_values = true)]
    pub edge_phase: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exit amplitudes per beam-splitter encounter for one input port.
    Exits {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, default_value = "A")]
        input: PortLabel,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// All paths between two ports with a fixed number of encounters.
    Paths {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, default_value = "A")]
        input: PortLabel,
        #[arg(long, default_value = "A")]
        exit: PortLabel,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Partial sums of one transition amplitude and their geometric limit.
    Series {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, default_value = "A")]
        input: PortLabel,
        #[arg(long, default_value = "A")]
        output: PortLabel,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Steady-state transition matrix.
    Unitary {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Solve the summed series directly instead of stepping.
        #[arg(long)]
        direct: bool,
    },
    /// Sweep of the symmetric three-port family over the relative phase.
    Family {
        #[arg(long, default_value_t = -std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        phi_a: f64,
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Bell-state action of the three-port for all input/control pairs.
    BellTable {
        #[arg(long, default_value = "A")]
        herald: PortLabel,
    },
    /// Group table read from the gate under one heralding condition.
    GroupTable {
        #[arg(long, default_value = "s")]
        condition: HeraldKind,
        #[arg(long, default_value = "A")]
        herald: PortLabel,
    },
    /// Entangled-state CNOT truth table.
    Cnot {
        #[arg(long, default_value = "A")]
        herald: PortLabel,
    },
    /// Walk on the configured graph (or a single device).
    Walk {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, default_value_t = 0)]
        lead: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Timing and coherence budget.
    Feasibility {
        /// Segment length in meters.
        #[arg(long, default_value_t = 1e-4)]
        d: f64,
        #[arg(long, default_value_t = 1.0)]
        index: f64,
        /// Pulse duration in seconds.
        #[arg(long, conflicts_with = "delta_nu")]
        delta_t: Option<f64>,
        /// Pulse bandwidth in Hz.
        #[arg(long)]
        delta_nu: Option<f64>,
        /// Detector time in seconds.
        #[arg(long)]
        t_detector: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exits { .. } => "exits",
            Command::Paths { .. } => "paths",
            Command::Series { .. } => "series",
            Command::Unitary { .. } => "unitary",
            Command::Family { .. } => "family",
            Command::BellTable { .. } => "bell-table",
            Command::GroupTable { .. } => "group-table",
            Command::Cnot { .. } => "cnot",
            Command::Walk { .. } => "walk",
            Command::Feasibility { .. } => "feasibility",
        }
    }
}

struct Context {
    config: RunConfig,
}

impl Context {
    fn spec(&self, args: &DeviceArgs) -> Result<MultiportSpec> {
        let mut dev = self.config.device.clone().unwrap_or_default();
        if args.r.is_some() {
            dev.r = args.r.clone();
        }
        if args.t.is_some() {
            dev.t = args.t.clone();
        }
        if args.mirror.is_some() {
            dev.mirror = args.mirror.clone();
            dev.mirror_phase = None;
        }
        if args.mirror_phase.is_some() {
            dev.mirror_phase = args.mirror_phase;
        }
        if args.edge_phase.is_some() {
            dev.edge_phase = args.edge_phase;
            dev.edge_phases = None;
        }
        if args.max_steps.is_some() {
            dev.max_steps = args.max_steps;
        }
        let spec = DeviceConfig::to_spec(&dev, args.n)?;
        spec.validate()?;
        Ok(spec)
    }
}

macro_rules! dispatch {
    ($mode:expr, $f:ident($($arg:expr),*)) => {
        match $mode {
            NumericMode::Exact => $f::<ExactComplex>($($arg),*),
            NumericMode::Float => $f::<Complex64>($($arg),*),
        }
    };
}

fn exits<A: Amplitude>(spec: &MultiportSpec, input: PortLabel, steps: usize) -> Result<Output> {
    let rec = exit_record::<A>(spec, input, steps)?;
    let mut table = Table::new(["n", "port", "re", "im", "step_probability", "cumulative"]);
    for row in &rec.rows {
        for (p, a) in row.amplitudes.iter().enumerate() {
            let mut cells = vec![row.n.to_string(), PortLabel(p).to_string()];
            cells.extend(c64_cells(a.to_c64()));
            cells.push(row.step_probability.re_f64().to_string());
            cells.push(row.cumulative.re_f64().to_string());
            table.push(cells);
        }
    }
    let mut data = rec.to_json();
    data["conservation_defect"] = json!(rec.conservation_defect());
    Ok(Output::new(data, Some(table)))
}

fn paths<A: Amplitude>(spec: &MultiportSpec, input: PortLabel, exit: PortLabel, n: usize) -> Result<Output> {
    let paths = enumerate_paths::<A>(spec, input, exit, n)?;
    let mut total = A::zero();
    let mut table = Table::new(["index", "symbols", "re", "im", "mirrors"]);
    let list: Vec<Value> = paths
        .iter()
        .enumerate()
        .map(|(k, p)| {
            total += p.amplitude.clone();
            let mut cells = vec![k.to_string(), p.symbol_string()];
            cells.extend(c64_cells(p.amplitude.to_c64()));
            cells.push(p.mirror_count().to_string());
            table.push(cells);
            json!({ "symbols": p.symbol_string(), "amplitude": p.amplitude.to_json(), "mirrors": p.mirror_count() })
        })
        .collect();
    let dist: serde_json::Map<String, Value> =
        mirror_count_distribution(&paths).into_iter().map(|(m, c)| (m.to_string(), json!(c))).collect();
    let data = json!({
        "input": input.to_string(),
        "exit": exit.to_string(),
        "n": n,
        "count": paths.len(),
        "sum": total.to_json(),
        "mirror_count_distribution": dist,
        "paths": list,
    });
    Ok(Output::new(data, Some(table)))
}

fn series<A: Amplitude>(spec: &MultiportSpec, input: PortLabel, output: PortLabel, steps: usize) -> Result<Output> {
    let s = amplitude_series::<A>(spec, input, output, steps)?;
    let mut table = Table::new(["n", "term_re", "term_im", "partial_re", "partial_im"]);
    let rows: Vec<Value> = s
        .terms
        .iter()
        .zip(&s.partial_sums)
        .map(|((n, t), (_, p))| {
            let mut cells = vec![n.to_string()];
            cells.extend(c64_cells(t.to_c64()));
            cells.extend(c64_cells(p.to_c64()));
            table.push(cells);
            json!({ "n": n, "term": t.to_json(), "partial_sum": p.to_json() })
        })
        .collect();
    let data = json!({
        "input": input.to_string(),
        "output": output.to_string(),
        "terms": rows,
        "ratio": Amplitude::to_json(&s.ratio),
        "tail_start_n": s.terms[s.tail_start].0,
        "extrapolated": Amplitude::to_json(&s.extrapolated),
    });
    Ok(Output::new(data, Some(table)))
}

fn bell_table<A: Amplitude>(herald: PortLabel) -> Result<Output> {
    let t = full_truth_table(herald, &three_port_closed_form::<A>())?;
    let mut table = Table::new(["input", "control", "out_s", "out_o", "prob_s", "prob_o", "coherent_s", "rejected"]);
    let label = |k: Option<crate::bell::BellKind>| k.map_or("none".to_string(), |k| k.ascii().to_string());
    for r in &t.rows {
        table.push(vec![
            r.input.ascii().into(),
            r.control.ascii().into(),
            label(r.out_s),
            label(r.out_o),
            r.prob_s.re_f64().to_string(),
            r.prob_o.re_f64().to_string(),
            r.coherent_s.re_f64().to_string(),
            r.rejected.re_f64().to_string(),
        ]);
    }
    let mut out = Output::new(t.to_json(), Some(table));
    if !t.is_complete() {
        out.status = 4;
    }
    Ok(out)
}

fn group<A: Amplitude>(condition: HeraldKind, herald: PortLabel) -> Result<Output> {
    let t = full_truth_table(herald, &three_port_closed_form::<A>())?;
    let (g, report) = group_table(&t, condition);
    let (other, _) = group_table(&t, match condition {
        HeraldKind::S => HeraldKind::O,
        HeraldKind::O => HeraldKind::S,
    });
    let mut table = Table::new(["row", "col", "product"]);
    for x in crate::bell::BellKind::ALL {
        for y in crate::bell::BellKind::ALL {
            table.push(vec![
                x.ascii().into(),
                y.ascii().into(),
                g.mul(x, y).map_or("none".into(), |k| k.ascii().into()),
            ]);
        }
    }
    let mut data = g.to_json();
    data["axioms"] = serde_json::to_value(&report).expect("report serializes");
    data["family_swap_of_other_condition"] = json!(g.same_products(&other.family_swapped()));
    let mut out = Output::new(data, Some(table));
    if !report.holds() {
        out.status = 4;
    }
    Ok(out)
}

fn cnot<A: Amplitude>(herald: PortLabel) -> Result<Output> {
    let t = full_truth_table(herald, &three_port_closed_form::<A>())?;
    let rows = cnot_table(&t);
    let mut table = Table::new(["target", "control", "output", "target_bit", "control_bit", "output_bit"]);
    for r in &rows {
        table.push(vec![
            r.target.ascii().into(),
            r.control.ascii().into(),
            r.output.map_or("none".into(), |k| k.ascii().into()),
            r.target_bit.to_string(),
            r.control_bit.to_string(),
            r.output_bit.map_or("none".into(), |b| b.to_string()),
        ]);
    }
    let is_cnot = rows.iter().all(|r| r.is_correct());
    let mut out = Output::new(json!({ "rows": rows, "is_cnot": is_cnot }), Some(table));
    if !is_cnot {
        out.status = 4;
    }
    Ok(out)
}

fn walk<A: Amplitude>(ctx: &Context, device: &DeviceArgs, lead: usize, steps: usize) -> Result<Output> {
    let graph = match &ctx.config.graph {
        Some(g) => g.to_graph()?,
        None => GraphSpec::single(VertexKind::Physical { spec: ctx.spec(device)? }),
    };
    let schedule = build_schedule(&ctx.config.schedule, &graph)?;
    let engine = build_network::<A>(&graph)?;
    let run = run_walk_from_lead(&engine, lead, steps, (!schedule.steps.is_empty()).then_some(&schedule))?;
    let mut table = Table::new(["step", "lead", "re", "im", "probability", "cumulative"]);
    for s in &run.steps {
        for (l, a) in s.lead_amplitudes.iter().enumerate() {
            let mut cells = vec![s.step.to_string(), l.to_string()];
            cells.extend(c64_cells(a.to_c64()));
            cells.push(s.lead_probabilities[l].re_f64().to_string());
            cells.push(s.cumulative[l].re_f64().to_string());
            table.push(cells);
        }
    }
    let mut data = run.to_json();
    data["lead"] = json!(lead);
    data["leads"] = json!(graph.leads);
    data["inter_vertex_modes"] = json!(engine.inter_vertex_modes());
    data["internal_vertex_modes"] = json!(engine.internal_vertex_modes());
    data["max_conservation_defect"] = json!(run.max_conservation_defect());
    Ok(Output::new(data, Some(table)))
}

fn execute(cli: &Cli) -> Result<(Output, NumericMode)> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mode = cli.mode.or(config.mode).unwrap_or(NumericMode::Float);
    let ctx = Context { config };
    let float = NumericMode::Float;
    Ok(match &cli.command {
        Command::Exits { device, input, steps } => (dispatch!(mode, exits(&ctx.spec(device)?, *input, *steps))?, mode),
        Command::Paths { device, input, exit, steps } => {
            (dispatch!(mode, paths(&ctx.spec(device)?, *input, *exit, *steps))?, mode)
        }
        Command::Series { device, input, output, steps } => {
            (dispatch!(mode, series(&ctx.spec(device)?, *input, *output, *steps))?, mode)
        }
        Command::Unitary { device, tol, direct } => {
            let spec = ctx.spec(device)?;
            let mut table = Table::new(["row", "col", "re", "im"]);
            let (matrix, data, status) = if *direct {
                let m = transfer_matrix(&spec)?;
                let data = json!({ "method": "direct", "matrix": matrix_json(&m), "unitarity_deviation": m.unitarity_deviation() });
                (m, data, 0)
            } else {
                let r = steady_state(&spec, *tol)?;
                let data = json!({
                    "method": "stepping",
                    "matrix": matrix_json(&r.matrix),
                    "residual": r.residual,
                    "steps_used": r.steps_used,
                    "converged": r.converged,
                    "unitarity_deviation": r.matrix.unitarity_deviation(),
                });
                let status = if r.converged { 0 } else { Error::NonConvergence { steps: 0, residual: 0.0 }.exit_code() };
                (r.matrix, data, status)
            };
            for (i, row) in matrix.rows().enumerate() {
                for (j, z) in row.iter().enumerate() {
                    let mut cells = vec![i.to_string(), j.to_string()];
                    cells.extend(c64_cells(*z));
                    table.push(cells);
                }
            }
            let mut out = Output::new(data, Some(table));
            out.status = status;
            (out, float)
        }
        Command::Family { phi_a, samples } => {
            if *samples < 2 {
                return Err(Error::InvalidArgument("family sweep needs at least 2 samples".into()));
            }
            let mut table = Table::new(["phi", "row", "col", "re", "im"]);
            let members: Vec<Value> = (0..*samples)
                .map(|k| {
                    let phi = std::f64::consts::PI * k as f64 / (*samples - 1) as f64;
                    let m = symmetric_unitary(*phi_a, phi);
                    for (i, row) in m.rows().enumerate() {
                        for (j, z) in row.iter().enumerate() {
                            let mut cells = vec![phi.to_string(), i.to_string(), j.to_string()];
                            cells.extend(c64_cells(*z));
                            table.push(cells);
                        }
                    }
                    json!({ "phi": phi, "matrix": matrix_json(&m), "unitarity_deviation": m.unitarity_deviation() })
                })
                .collect();
            (Output::new(json!({ "phi_a": phi_a, "members": members }), Some(table)), float)
        }
        Command::BellTable { herald } => (dispatch!(mode, bell_table(*herald))?, mode),
        Command::GroupTable { condition, herald } => (dispatch!(mode, group(*condition, *herald))?, mode),
        Command::Cnot { herald } => (dispatch!(mode, cnot(*herald))?, mode),
        Command::Walk { device, lead, steps } => (dispatch!(mode, walk(&ctx, device, *lead, *steps))?, mode),
        Command::Feasibility { d, index, delta_t, delta_nu, t_detector } => {
            let pulse = match (delta_t, delta_nu) {
                (Some(dt), _) => Pulse::Duration(*dt),
                (None, Some(nu)) => Pulse::Bandwidth(*nu),
                (None, None) => Pulse::Monochromatic,
            };
            let mut inputs = FeasibilityInputs::new(*d).with_index(*index).with_pulse(pulse);
            if let Some(t) = t_detector {
                inputs = inputs.with_detector_time(*t);
            }
            let b = assess(&inputs)?;
            let budget = b.coherence_budget();
            let mut data = serde_json::to_value(&b).expect("budget serializes");
            data["coherence_budget"] = serde_json::to_value(budget).expect("budget serializes");
            let mut table = Table::new(["quantity", "value"]);
            if let Value::Object(map) = &data {
                for (k, v) in map {
                    if v.is_number() || v.is_boolean() {
                        table.push(vec![k.clone(), v.to_string()]);
                    }
                }
            }
            (Output::new(data, Some(table)), float)
        }
    })
}

/// Parse `args`, run the command and write the artifact. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    let format = cli.format.unwrap_or(Format::Json);
    match execute(&cli) {
        Ok((out, mode)) => {
            let text = match format {
                Format::Json => out.render_json(cli.command.name(), mode),
                Format::Csv => match out.render_csv() {
                    Some(t) => t,
                    None => {
                        let _ = writeln!(stderr, "error: `{}` has no CSV form", cli.command.name());
                        return 1;
                    }
                },
            };
            let _ = stdout.write_all(text.as_bytes());
            if out.status != 0 {
                let _ = writeln!(stderr, "warning: `{}` finished with status {}", cli.command.name(), out.status);
            }
            out.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
