//! `stellar`: Majorana constellations, entanglement measures and symmetric
//! dynamics from the command line.

mod input;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use stellar_core::composition::{random_antipodal_constellation, random_constellation, SeededRng};
use stellar_core::dynamics::{evolve_with, exponentiate, reduce, velocity, EvolveOptions, Trajectory};
use stellar_core::error::StellarError;
use stellar_core::geometric::{e_g, witness_star, EgOptions};
use stellar_core::hamspec::{hamiltonian, HermitianOperator};
use stellar_core::measures::{barycenter, e_b, rec_family_state, three_qubit_family, two_qubit_family};
use stellar_core::state::SymmetricState;
use stellar_core::stellar::{stars_to_state, state_to_stars, StarAngles};

use output::{dicke_rows, json, matrix_json, num, star_rows, ConstellationJson, Csv, StateJson};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(StellarError),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Core(StellarError::Parse { .. }) => 2,
            CliError::Core(StellarError::Domain { .. } | StellarError::Resource { .. }) => 3,
            CliError::Core(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<StellarError> for CliError {
    fn from(e: StellarError) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(name = "stellar", version, about = "Majorana constellations, entanglement measures and symmetric dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stars of a state, or the state of a constellation file
    Stars {
        #[command(flatten)]
        state: StateArgs,
        /// Constellation JSON to turn back into a state
        #[arg(long, value_name = "FILE", conflicts_with_all = ["state", "dicke", "input"])]
        constellation: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Barycentric and geometric entanglement of a state (all measures when none is selected)
    Measure {
        #[command(flatten)]
        state: StateArgs,
        /// Barycentric measure E_B
        #[arg(long)]
        eb: bool,
        /// Geometric measure E_G
        #[arg(long)]
        eg: bool,
        /// Star barycenter
        #[arg(long)]
        barycenter: bool,
        #[command(flatten)]
        eg_grid: EgGridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Composition of states: the union of their constellations
    Compose {
        /// Named states, one --state per factor (at least two); see `stars --help` for the forms
        #[arg(long = "state", value_name = "SPEC", num_args = 1.., allow_negative_numbers = true, required = true)]
        states: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// E_B and E_G over a parameter grid of a named family (CSV by default)
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        /// Parameter grid ROWSxCOLS; rec4 spans theta in [0, pi/2] by phi in [0, pi],
        /// the one-parameter families use ROWS points of theta in [0, pi]
        #[arg(long, default_value = "33x33")]
        grid: String,
        /// Also compute E_G
        #[arg(long)]
        eg: bool,
        #[command(flatten)]
        eg_grid: EgGridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random symmetric states from uniformly distributed stars
    Random {
        /// Number of qubits
        #[arg(long)]
        n: usize,
        /// Number of draws
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Draw antipodal star pairs (E_B = 1); n must be even
        #[arg(long)]
        antipodal: bool,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Star trajectories under exp(-i beta H) (CSV by default)
    Evolve {
        #[command(flatten)]
        run: DynamicsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Polar velocities d theta / d beta along a trajectory (CSV by default)
    Velocity {
        #[command(flatten)]
        run: DynamicsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// V (symmetric) and W (complement) blocks of exp(-i beta H)
    Reduce {
        /// Hamiltonian expression, e.g. 'sym(X Z P0)'
        #[arg(long, allow_hyphen_values = true)]
        hamiltonian: String,
        /// Evolution parameter (decimal or multiple of pi)
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Largest accepted off-block norm
        #[arg(long, default_value = "1e-10")]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// |0> composed with cos(theta/2)|0> + sin(theta/2)|1>
    TwoQubit,
    /// |0> composed with the stars (theta, 0) and (theta, pi)
    ThreeQubit,
    /// four qubits on a rectangle, parameters (theta, phi)
    Rec4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct StateArgs {
    /// Named state: ghz N | w N | dicke N K | bell psi+|psi-|phi+|phi- | tetra |
    /// rec4 THETA PHI | coherent N THETA PHI | bit string such as 000; angles
    /// are decimals or multiples of pi (2pi/3)
    #[arg(long, value_name = "SPEC", num_args = 1.., allow_negative_numbers = true, conflicts_with_all = ["dicke", "input"])]
    state: Option<Vec<String>>,
    /// Shorthand for --state dicke N K
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with = "input")]
    dicke: Option<Vec<String>>,
    /// State JSON file {"n": N, "dicke": [[re, im], ...]}
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

impl StateArgs {
    fn load(&self) -> Result<SymmetricState, CliError> {
        match (&self.state, &self.dicke, &self.input) {
            (Some(spec), _, _) => input::named_state(spec),
            (_, Some(nk), _) => {
                let spec: Vec<String> = std::iter::once("dicke".to_string()).chain(nk.iter().cloned()).collect();
                input::named_state(&spec)
            }
            (_, _, Some(path)) => input::state_file(path),
            _ => Err(CliError::Usage("a state is required: --state SPEC, --dicke N K or --input FILE".into())),
        }
    }
}

#[derive(Args)]
struct EgGridArgs {
    /// Husimi grid THETAxPHI seeding the E_G optimizer
    #[arg(long, default_value = "64x128")]
    eg_grid: String,
}

impl EgGridArgs {
    fn options(&self) -> Result<EgOptions, CliError> {
        let (grid_theta, grid_phi) = input::grid(&self.eg_grid)?;
        Ok(EgOptions { grid_theta, grid_phi, ..EgOptions::default() })
    }
}

#[derive(Args)]
struct SeedArgs {
    /// Random seed; without it and STELLAR_SEED a seed is drawn from the OS and echoed
    #[arg(long, env = "STELLAR_SEED")]
    seed: Option<u64>,
}

#[derive(Args)]
struct DynamicsArgs {
    /// Permutation-invariant Hamiltonian, e.g. '-0.5*X x Y + -0.5*Y x X'
    #[arg(long, allow_hyphen_values = true)]
    hamiltonian: String,
    #[command(flatten)]
    state: StateArgs,
    /// START:STOP:COUNT (COUNT points, both ends included) or a comma list
    #[arg(long, allow_hyphen_values = true)]
    betas: String,
    /// Largest geodesic move of a star between grid points before bisection, in radians
    #[arg(long, default_value_t = 0.2)]
    step_bound: f64,
    /// Maximum bisection depth below a grid step
    #[arg(long, default_value_t = 12)]
    max_depth: u32,
    /// Tolerance of the permutation-symmetry check on H
    #[arg(long, default_value = "1e-10")]
    symmetry_tol: f64,
}

impl DynamicsArgs {
    fn run(&self) -> Result<Trajectory, CliError> {
        positive("--step-bound", self.step_bound)?;
        positive("--symmetry-tol", self.symmetry_tol)?;
        let h = load_hamiltonian(&self.hamiltonian)?;
        let psi0 = self.state.load()?;
        let betas = input::betas(&self.betas)?;
        let opts =
            EvolveOptions { step_bound: self.step_bound, max_depth: self.max_depth, symmetry_tol: self.symmetry_tol };
        Ok(evolve_with(&h, &psi0, &betas, &opts)?)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format (default depends on the subcommand)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|()| stdout.flush())
                    .map_err(|e| CliError::Io(format!("stdout: {e}")))
            }
        }
    }
}

fn positive(flag: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{flag} must be positive, got {value}")))
    }
}

fn load_hamiltonian(src: &str) -> Result<HermitianOperator, CliError> {
    Ok(hamiltonian(src)?)
}

#[derive(Serialize)]
struct MeasureJson {
    n: usize,
    #[serde(rename = "E_B", skip_serializing_if = "Option::is_none")]
    e_b: Option<f64>,
    #[serde(rename = "E_G", skip_serializing_if = "Option::is_none")]
    e_g: Option<f64>,
    #[serde(rename = "EG_witness_theta", skip_serializing_if = "Option::is_none")]
    witness_theta: Option<f64>,
    #[serde(rename = "EG_witness_phi", skip_serializing_if = "Option::is_none")]
    witness_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    barycenter: Option<[f64; 3]>,
}

fn measure(state: &SymmetricState, eb: bool, eg: bool, bary: bool, opts: &EgOptions) -> Result<MeasureJson, CliError> {
    let all = !(eb || eg || bary);
    let mut m =
        MeasureJson { n: state.n(), e_b: None, e_g: None, witness_theta: None, witness_phi: None, barycenter: None };
    if all || eb {
        m.e_b = Some(e_b(state)?);
    }
    if all || eg {
        let r = e_g(state, opts)?;
        let w = witness_star(&r);
        (m.e_g, m.witness_theta, m.witness_phi) = (Some(r.value), Some(w.theta()), Some(w.phi()));
    }
    if all || bary {
        m.barycenter = Some(barycenter(&state_to_stars(state)?).vector);
    }
    Ok(m)
}

#[derive(Serialize)]
struct SweepRow {
    family: &'static str,
    param1: f64,
    param2: Option<f64>,
    #[serde(rename = "E_B")]
    e_b: f64,
    #[serde(rename = "E_G")]
    e_g: Option<f64>,
    #[serde(rename = "EG_witness_theta")]
    witness_theta: Option<f64>,
    #[serde(rename = "EG_witness_phi")]
    witness_phi: Option<f64>,
}

fn sweep(family: Family, grid: &str, with_eg: bool, opts: &EgOptions) -> Result<Vec<SweepRow>, CliError> {
    let (rows, cols) = input::grid(grid)?;
    let span = |count: usize, to: f64| move |i: usize| to * i as f64 / (count - 1) as f64;
    let points: Vec<(f64, Option<f64>)> = match family {
        Family::TwoQubit | Family::ThreeQubit => {
            (0..rows).map(span(rows, std::f64::consts::PI)).map(|t| (t, None)).collect()
        }
        Family::Rec4 => {
            let (theta, phi) = (span(rows, std::f64::consts::FRAC_PI_2), span(cols, std::f64::consts::PI));
            (0..rows).flat_map(|i| (0..cols).map(move |j| (theta(i), Some(phi(j))))).collect()
        }
    };
    let name = match family {
        Family::TwoQubit => "two-qubit",
        Family::ThreeQubit => "three-qubit",
        Family::Rec4 => "rec4",
    };
    // rayon's indexed collect keeps grid order
    points
        .par_iter()
        .map(|&(p1, p2)| {
            let state = match family {
                Family::TwoQubit => two_qubit_family(p1)?,
                Family::ThreeQubit => three_qubit_family(p1)?,
                Family::Rec4 => rec_family_state(p1, p2.unwrap_or(0.0))?,
            };
            let mut row = SweepRow {
                family: name,
                param1: p1,
                param2: p2,
                e_b: e_b(&state)?,
                e_g: None,
                witness_theta: None,
                witness_phi: None,
            };
            if with_eg {
                let r = e_g(&state, opts)?;
                let w = witness_star(&r);
                (row.e_g, row.witness_theta, row.witness_phi) = (Some(r.value), Some(w.theta()), Some(w.phi()));
            }
            Ok(row)
        })
        .collect()
}

#[derive(Serialize)]
struct RandomJson {
    seed: u64,
    n: usize,
    antipodal: bool,
    states: Vec<StateJson>,
}

#[derive(Serialize)]
struct TrajectoryJson {
    n: usize,
    betas: Vec<f64>,
    e_b: Vec<f64>,
    discontinuities: Vec<bool>,
    stars: Vec<Vec<StarAngles>>,
}

#[derive(Serialize)]
struct VelocityJson {
    betas: Vec<f64>,
    dtheta_dbeta: Vec<Vec<f64>>,
    flags: Vec<Vec<bool>>,
}

#[derive(Serialize)]
struct BlockJson {
    n: usize,
    offblock_norm: f64,
    #[serde(rename = "V")]
    v: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "W")]
    w: Vec<Vec<[f64; 2]>>,
}

fn state_document(state: &SymmetricState, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(&StateJson::from(state)),
        Format::Csv => {
            let mut csv = Csv::new(&["k", "re", "im"])?;
            dicke_rows(&mut csv, &[], state)?;
            csv.finish()
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Stars { state, constellation, out } => {
            let text = if let Some(path) = constellation {
                state_document(&stars_to_state(&input::constellation_file(&path)?)?, out.format_or(Format::Json))?
            } else {
                let c = state_to_stars(&state.load()?)?;
                match out.format_or(Format::Json) {
                    Format::Json => json(&ConstellationJson::from(&c))?,
                    Format::Csv => {
                        let mut csv = Csv::new(&["star_index", "theta", "phi", "x", "y", "z"])?;
                        star_rows(&mut csv, &[], &c)?;
                        csv.finish()?
                    }
                }
            };
            out.emit(&text)
        }
        Command::Measure { state, eb, eg, barycenter, eg_grid, out } => {
            let m = measure(&state.load()?, eb, eg, barycenter, &eg_grid.options()?)?;
            let text = match out.format_or(Format::Json) {
                Format::Json => json(&m)?,
                Format::Csv => {
                    let mut csv = Csv::new(&[
                        "n",
                        "E_B",
                        "E_G",
                        "EG_witness_theta",
                        "EG_witness_phi",
                        "barycenter_x",
                        "barycenter_y",
                        "barycenter_z",
                    ])?;
                    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
                    let b = m.barycenter.map(|v| v.map(Some)).unwrap_or([None; 3]);
                    let mut row = vec![m.n.to_string()];
                    row.extend([m.e_b, m.e_g, m.witness_theta, m.witness_phi, b[0], b[1], b[2]].map(opt));
                    csv.row(&row)?;
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
        Command::Compose { states, out } => {
            let specs = input::split_specs(&states)?;
            if specs.len() < 2 {
                return Err(CliError::Usage("compose needs at least two states".into()));
            }
            let mut stars = Vec::new();
            for spec in &specs {
                stars.extend(state_to_stars(&input::named_state(spec)?)?.into_stars());
            }
            let composed = stars_to_state(&stellar_core::stellar::Constellation::new(stars)?)?;
            out.emit(&state_document(&composed, out.format_or(Format::Json))?)
        }
        Command::Sweep { family, grid, eg, eg_grid, out } => {
            let rows = sweep(family, &grid, eg, &eg_grid.options()?)?;
            let text = match out.format_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut csv =
                        Csv::new(&["family", "param1", "param2", "E_B", "E_G", "EG_witness_theta", "EG_witness_phi"])?;
                    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
                    for r in &rows {
                        csv.row([
                            r.family.to_string(),
                            num(r.param1),
                            opt(r.param2),
                            num(r.e_b),
                            opt(r.e_g),
                            opt(r.witness_theta),
                            opt(r.witness_phi),
                        ])?;
                    }
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
        Command::Random { n, count, antipodal, seed, out } => {
            let seed = seed.seed.unwrap_or_else(|| {
                let drawn = rand::random::<u64>();
                eprintln!("stellar: seed {drawn}");
                drawn
            });
            let mut rng = SeededRng::new(seed);
            let mut states = Vec::with_capacity(count);
            for _ in 0..count {
                let c = if antipodal {
                    random_antipodal_constellation(n, &mut rng)?
                } else {
                    random_constellation(n, &mut rng)?
                };
                states.push(stars_to_state(&c)?);
            }
            let text = match out.format_or(Format::Json) {
                Format::Json => {
                    json(&RandomJson { seed, n, antipodal, states: states.iter().map(StateJson::from).collect() })?
                }
                Format::Csv => {
                    let mut csv = Csv::new(&["seed", "draw", "k", "re", "im"])?;
                    for (i, s) in states.iter().enumerate() {
                        dicke_rows(&mut csv, &[seed.to_string(), i.to_string()], s)?;
                    }
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
        Command::Evolve { run, out } => {
            let traj = run.run()?;
            let text = match out.format_or(Format::Csv) {
                Format::Json => json(&TrajectoryJson {
                    n: traj.n(),
                    betas: traj.betas.clone(),
                    e_b: traj.e_b.clone(),
                    discontinuities: traj.discontinuities.clone(),
                    stars: traj
                        .constellations
                        .iter()
                        .map(|c| c.stars().iter().map(StarAngles::from).collect())
                        .collect(),
                })?,
                Format::Csv => {
                    let mut csv = Csv::new(&["beta", "star_index", "theta", "phi", "x", "y", "z", "e_b"])?;
                    for t in 0..traj.len() {
                        for (i, s) in traj.constellations[t].stars().iter().enumerate() {
                            let [x, y, z] = s.vector();
                            let mut row = vec![num(traj.betas[t]), i.to_string()];
                            row.extend([s.theta(), s.phi(), x, y, z, traj.e_b[t]].map(num));
                            csv.row(&row)?;
                        }
                    }
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
        Command::Velocity { run, out } => {
            let v = velocity(&run.run()?)?;
            let text = match out.format_or(Format::Csv) {
                Format::Json => json(&VelocityJson {
                    betas: v.betas.clone(),
                    dtheta_dbeta: v.dtheta.clone(),
                    flags: v.flags.clone(),
                })?,
                Format::Csv => {
                    let mut csv = Csv::new(&["beta", "star_index", "dtheta_dbeta", "flag"])?;
                    for t in 0..v.betas.len() {
                        for (i, (d, f)) in v.dtheta[t].iter().zip(&v.flags[t]).enumerate() {
                            csv.row([num(v.betas[t]), i.to_string(), num(*d), u8::from(*f).to_string()])?;
                        }
                    }
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
        Command::Reduce { hamiltonian, beta, tol, out } => {
            positive("--tol", tol)?;
            let h = load_hamiltonian(&hamiltonian)?;
            let blocks = reduce(&exponentiate(&h, input::angle(&beta)?)?, tol)?;
            let text = match out.format_or(Format::Json) {
                Format::Json => json(&BlockJson {
                    n: blocks.n,
                    offblock_norm: blocks.offblock_norm,
                    v: matrix_json(&blocks.v),
                    w: matrix_json(&blocks.w),
                })?,
                Format::Csv => {
                    let mut csv = Csv::new(&["block", "row", "col", "re", "im"])?;
                    for (name, m) in [("V", &blocks.v), ("W", &blocks.w)] {
                        for r in 0..m.nrows() {
                            for c in 0..m.ncols() {
                                csv.row([
                                    name.to_string(),
                                    r.to_string(),
                                    c.to_string(),
                                    num(m[(r, c)].re),
                                    num(m[(r, c)].im),
                                ])?;
                            }
                        }
                    }
                    csv.finish()?
                }
            };
            out.emit(&text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stellar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
