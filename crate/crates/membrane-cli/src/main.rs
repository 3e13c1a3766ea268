//! Batch command-line interface over the membrane library.
//!
//! Every command is deterministic: identical inputs give byte-identical
//! output. Numbers print with 15 significant digits, locale-independent.
//! Exit codes: 0 success, 2 invalid flags, 3 numeric/runtime failure.
//!
//! A config file in `key = value` format can preset tolerances and solver
//! knobs; its path comes from the `MATHIEU_CONFIG` environment variable and
//! explicit flags override it.

use clap::{Args, Parser, Subcommand};
use membrane::angular::{charval_series, charval_shoot, AngularKind};
use membrane::coords::EllipseGeometry;
use membrane::error::Error;
use membrane::nodal;
use membrane::spectrum::{
    annulus_find_lambda, circle_modes, find_lambda, frequency, MembraneMaterial, MembraneMode,
};
use membrane::synthesis::{expand_velocity, GridData, VelocityField};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

mod config;
use config::Config;

#[derive(Parser)]
#[command(name = "membrane", version, about = "Vibrating elliptical membrane computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic constant R for one (order, kind, h)
    Charval(CharvalArgs),
    /// Eigenmode table as CSV, sorted by frequency
    Modes(ModesArgs),
    /// Nodal lines of one mode: CSV listing and SVG drawing
    Nodal(NodalArgs),
    /// Eigenvalues of the confocal annulus as CSV
    Annulus(AnnulusArgs),
    /// Expansion coefficients of a sampled initial-velocity grid as CSV
    Expand(ExpandArgs),
    /// Circular-membrane reference modes as CSV
    Circle(CircleArgs),
}

#[derive(Args)]
struct GeometryArgs {
    /// Focal half-distance c
    #[arg(long = "focal-c")]
    focal_c: Option<f64>,
    /// Boundary parameter theta (contour is beta = theta)
    #[arg(long)]
    theta: Option<f64>,
    /// Alternative geometry input: semi-axes "A,B"
    #[arg(long = "semi-axes", value_name = "A,B")]
    semi_axes: Option<String>,
}

impl GeometryArgs {
    fn resolve(&self) -> Result<EllipseGeometry, Error> {
        match (&self.semi_axes, self.focal_c, self.theta) {
            (Some(axes), None, None) => {
                let parts: Vec<&str> = axes.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::InvalidInput("--semi-axes wants \"A,B\"".into()));
                }
                let a: f64 = parts[0]
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad semi-axis A".into()))?;
                let b: f64 = parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad semi-axis B".into()))?;
                EllipseGeometry::from_semi_axes(a, b)
            }
            (None, Some(c), Some(theta)) => EllipseGeometry::new(c, theta),
            _ => Err(Error::InvalidInput(
                "give either --focal-c with --theta, or --semi-axes A,B".into(),
            )),
        }
    }
}

#[derive(Args)]
struct CharvalArgs {
    #[arg(long)]
    order: u32,
    #[arg(long, value_parser = parse_kind)]
    kind: AngularKind,
    #[arg(long)]
    h: f64,
    /// series | shooting | both
    #[arg(long, default_value = "shooting")]
    method: String,
    /// Shooting tolerance (overrides config)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ModesArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long = "max-order")]
    max_order: u32,
    #[arg(long = "max-index")]
    max_index: u32,
    #[arg(long = "wave-speed", default_value_t = 1.0)]
    wave_speed: f64,
    #[arg(long)]
    tol: Option<f64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NodalArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, value_parser = parse_kind)]
    kind: AngularKind,
    #[arg(long)]
    order: u32,
    #[arg(long)]
    index: u32,
    #[arg(long)]
    tol: Option<f64>,
    /// SVG output path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AnnulusArgs {
    #[arg(long = "focal-c")]
    focal_c: f64,
    #[arg(long = "theta-inner")]
    theta_inner: f64,
    #[arg(long = "theta-outer")]
    theta_outer: f64,
    #[arg(long, value_parser = parse_kind)]
    kind: AngularKind,
    #[arg(long)]
    order: u32,
    #[arg(long = "max-index")]
    max_index: u32,
    #[arg(long = "wave-speed", default_value_t = 1.0)]
    wave_speed: f64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// CSV of samples "alpha,beta,value" on a uniform grid, or a builtin
    /// field name prefixed with '@' (e.g. @bump)
    #[arg(long)]
    grid: String,
    #[arg(long = "max-order")]
    max_order: u32,
    #[arg(long = "max-index")]
    max_index: u32,
    #[arg(long = "wave-speed", default_value_t = 1.0)]
    wave_speed: f64,
    #[arg(long = "quad-order")]
    quad_order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CircleArgs {
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    order: u32,
    #[arg(long)]
    count: u32,
    #[arg(long = "wave-speed", default_value_t = 1.0)]
    wave_speed: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<AngularKind, String> {
    match s {
        "even" => Ok(AngularKind::Even),
        "odd" => Ok(AngularKind::Odd),
        other => Err(format!("kind must be 'even' or 'odd', got '{other}'")),
    }
}

/// 15 significant digits, locale-independent.
fn sig15(v: f64) -> String {
    format!("{v:.14e}")
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(content.as_bytes())?;
        }
        None => {
            print!("{content}");
        }
    }
    Ok(())
}

fn run_charval(args: &CharvalArgs, cfg: &Config) -> Result<String, Error> {
    let tol = args.tol.unwrap_or(cfg.tol);
    let name = match args.kind {
        AngularKind::Even => "R",
        AngularKind::Odd => "R'",
    };
    let mut out = String::new();
    let h2 = args.h * args.h;
    let mut values: Vec<(String, f64)> = Vec::new();
    match args.method.as_str() {
        "series" => {
            let cv = charval_series(args.order, args.kind, args.h)?;
            values.push(("series".into(), cv.r));
        }
        "shooting" => {
            let cv = charval_shoot(args.order, args.kind, args.h, tol)?;
            values.push(("shooting".into(), cv.r));
        }
        "both" => {
            let ser = charval_series(args.order, args.kind, args.h)?;
            let shot = charval_shoot(args.order, args.kind, args.h, tol)?;
            values.push(("series".into(), ser.r));
            values.push(("shooting".into(), shot.r));
            out.push_str(&format!(
                "# method disagreement |series - shooting| = {}\n",
                sig15((ser.r - shot.r).abs())
            ));
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "--method must be series|shooting|both, got '{other}'"
            )))
        }
    }
    out.push_str("method,constant,value,M\n");
    for (method, r) in values {
        out.push_str(&format!(
            "{method},{name},{},{}\n",
            sig15(r),
            sig15(r - 2.0 * h2)
        ));
    }
    Ok(out)
}

fn geometry_header(geometry: &EllipseGeometry) -> String {
    format!(
        "# geometry: c = {}, theta = {}, A = {}, B = {}, eccentricity = {}\n",
        sig15(geometry.c),
        sig15(geometry.theta),
        sig15(geometry.semi_major()),
        sig15(geometry.semi_minor()),
        sig15(geometry.eccentricity())
    )
}

fn mode_rows(
    geometry: &EllipseGeometry,
    max_order: u32,
    max_index: u32,
    tol: f64,
) -> Result<Vec<MembraneMode>, Error> {
    let mut modes = Vec::new();
    for g in 0..=max_order {
        for kind in [AngularKind::Even, AngularKind::Odd] {
            if kind.is_odd() && g == 0 {
                continue;
            }
            for i in 1..=max_index {
                modes.push(find_lambda(geometry, kind, g, i, tol)?);
            }
        }
    }
    Ok(modes)
}

fn run_modes(args: &ModesArgs, cfg: &Config) -> Result<String, Error> {
    let geometry = args.geometry.resolve()?;
    let tol = args.tol.unwrap_or(cfg.tol);
    let material = MembraneMaterial::new(args.wave_speed)?;
    let mut modes = mode_rows(&geometry, args.max_order, args.max_index, tol)?;
    modes.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then_with(|| a.spec.cmp(&b.spec))
    });
    let mut out = geometry_header(&geometry);
    out.push_str("kind,g,i,lambda,R,frequency\n");
    for m in &modes {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            m.spec.kind,
            m.spec.order,
            m.spec.index,
            sig15(m.lambda),
            sig15(m.cv.r),
            sig15(frequency(m.lambda, &material))
        ));
    }
    Ok(out)
}

fn run_nodal(args: &NodalArgs, cfg: &Config) -> Result<String, Error> {
    let geometry = args.geometry.resolve()?;
    let tol = args.tol.unwrap_or(cfg.tol);
    let mode = find_lambda(&geometry, args.kind, args.order, args.index, tol)?;
    let geo = nodal::nodal_geometry(&mode)?;
    if let Some(svg_path) = &args.svg {
        nodal::export_nodal_svg(&geometry, &geo, svg_path)?;
    }
    let mut out = geometry_header(&geometry);
    out.push_str(&format!(
        "# mode: kind = {}, g = {}, i = {}, lambda = {}, lines = {}\n",
        mode.spec.kind,
        mode.spec.order,
        mode.spec.index,
        sig15(mode.lambda),
        geo.counted_hyperbolic_lines
    ));
    out.push_str(&nodal::nodal_csv(&geo));
    Ok(out)
}

fn run_annulus(args: &AnnulusArgs, cfg: &Config) -> Result<String, Error> {
    let tol = args.tol.unwrap_or(cfg.tol);
    let material = MembraneMaterial::new(args.wave_speed)?;
    let mut out = format!(
        "# annulus: c = {}, theta_inner = {}, theta_outer = {}\n",
        sig15(args.focal_c),
        sig15(args.theta_inner),
        sig15(args.theta_outer)
    );
    out.push_str("kind,g,i,lambda,R,frequency\n");
    for i in 1..=args.max_index {
        let mode = annulus_find_lambda(
            args.focal_c,
            args.theta_inner,
            args.theta_outer,
            args.kind,
            args.order,
            i,
            tol,
        )?;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            mode.spec.kind,
            mode.spec.order,
            mode.spec.index,
            sig15(mode.lambda),
            sig15(mode.cv.r),
            sig15(frequency(mode.lambda, &material))
        ));
    }
    Ok(out)
}

fn parse_grid_csv(text: &str) -> Result<GridData, Error> {
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("alpha") {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "grid line {} needs alpha,beta,value",
                lineno + 1
            )));
        }
        let vals: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("bad number on grid line {}", lineno + 1)))?;
        rows.push((vals[0], vals[1], vals[2]));
    }
    let mut betas: Vec<f64> = rows.iter().map(|r| r.1).collect();
    betas.sort_by(f64::total_cmp);
    betas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let n_beta = betas.len();
    if n_beta < 4 || rows.len() % n_beta != 0 {
        return Err(Error::InvalidInput(format!(
            "grid is not rectangular: {} rows over {} beta levels",
            rows.len(),
            n_beta
        )));
    }
    let n_alpha = rows.len() / n_beta;
    // rows are expected alpha-major (all beta for alpha_0, then alpha_1, ...)
    let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let beta_max = betas.last().copied().unwrap();
    Ok(GridData { n_alpha, n_beta, beta_max, values })
}

fn run_expand(args: &ExpandArgs, cfg: &Config) -> Result<String, Error> {
    let geometry = args.geometry.resolve()?;
    let tol = args.tol.unwrap_or(cfg.tol);
    let quad_order = args.quad_order.unwrap_or(cfg.quad_order);
    let material = MembraneMaterial::new(args.wave_speed)?;
    let field = if let Some(name) = args.grid.strip_prefix('@') {
        VelocityField::builtin(name, geometry)?
    } else {
        let text = std::fs::read_to_string(&args.grid)?;
        VelocityField::from_grid(geometry, parse_grid_csv(&text)?)?
    };
    let modes: Vec<Arc<MembraneMode>> = mode_rows(&geometry, args.max_order, args.max_index, tol)?
        .into_iter()
        .map(Arc::new)
        .collect();
    let expansion = expand_velocity(&field, &modes, &material, quad_order)?;
    let mut out = geometry_header(&geometry);
    out.push_str(&format!("# residual_norm = {}\n", sig15(expansion.residual_norm)));
    out.push_str("kind,g,i,lambda,coefficient\n");
    for mode in &modes {
        let c = expansion
            .odd_coeffs
            .get(&mode.spec)
            .or_else(|| expansion.even_coeffs.get(&mode.spec))
            .copied()
            .unwrap_or(0.0);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            mode.spec.kind,
            mode.spec.order,
            mode.spec.index,
            sig15(mode.lambda),
            sig15(c)
        ));
    }
    Ok(out)
}

fn run_circle(args: &CircleArgs) -> Result<String, Error> {
    let material = MembraneMaterial::new(args.wave_speed)?;
    let modes = circle_modes(args.radius, args.order, args.count)?;
    let mut out = format!("# circle: radius = {}\n", sig15(args.radius));
    out.push_str("n,s,tau,lambda,frequency\n");
    for m in &modes {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            m.order,
            m.index,
            sig15(m.tau),
            sig15(m.lambda),
            sig15(frequency(m.lambda, &material))
        ));
    }
    Ok(out)
}

fn main() {
    let cli = Cli::parse();
    let cfg = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    };
    let result = match &cli.command {
        Command::Charval(args) => run_charval(args, &cfg).map(|s| (s, None)),
        Command::Modes(args) => run_modes(args, &cfg).map(|s| (s, args.out.clone())),
        Command::Nodal(args) => run_nodal(args, &cfg).map(|s| (s, args.csv.clone())),
        Command::Annulus(args) => run_annulus(args, &cfg).map(|s| (s, args.out.clone())),
        Command::Expand(args) => run_expand(args, &cfg).map(|s| (s, args.out.clone())),
        Command::Circle(args) => run_circle(args).map(|s| (s, args.out.clone())),
    };
    match result {
        Ok((content, path)) => {
            if let Err(e) = write_out(&path, &content) {
                eprintln!("error: {e}");
                std::process::exit(3);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}
