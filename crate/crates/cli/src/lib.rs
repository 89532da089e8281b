//! Command-line front end for the `rootforms` library.

pub mod error;
pub mod grid;
pub mod number;
pub mod output;
pub mod records;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rootforms::{
    accumulate_density, dc7_distance, find_dc7_collisions, project_root_form, root_metric, BaseDistance, DensityGrid,
    Invariants, TriangleKind, DEFAULT_REL_TOL,
};

use crate::error::{CliError, CliResult};
use crate::grid::{write_grid, GridFormat};
use crate::output::{Cell, Table};
use crate::records::{parse_records, Format, LatticeRecord, BASIS_FIELDS, FORM_FIELDS};
use crate::report::{point_cells, report_table, InvariantReport};

#[derive(Debug, Parser)]
#[command(name = "rootforms", version, about = "Isometry invariants of 3D lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Records file (`-` reads stdin): cells, bases or root forms.
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    input_format: Option<Format>,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce each lattice to an obtuse superbase.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Relative tolerance for negative conorms.
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
    },
    /// Root forms, sign, special flags, DC7 and projections per record.
    Rootform {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Put the oriented root form in the leading columns.
        #[arg(long)]
        oriented: bool,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
    },
    /// Root metric between all pairs of records.
    Dist {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Compare every record of INPUT with every record of this file instead.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Exponent of the L_q base distance: a number >= 1 or `inf`.
        #[arg(long, default_value = "inf", value_parser = parse_q)]
        q: f64,
        /// Use oriented root forms and the 12 even relabellings.
        #[arg(long)]
        oriented: bool,
    },
    /// DC7 vectors, or their pairwise distances.
    Dc7 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Print distances between all pairs instead of the vectors.
        #[arg(long)]
        distances: bool,
    },
    /// Search integer coforms for lattices that DC7 cannot distinguish.
    Collide {
        #[command(flatten)]
        output: Output,
        /// Largest conorm in the search box.
        #[arg(long, default_value_t = 6)]
        max_conorm: i64,
    },
    /// Rebuild a basis from each root form.
    Synth {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Quotient- and full-triangle coordinates per record.
    Project {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Population density of projected root forms.
    Density {
        #[command(flatten)]
        input: Input,
        /// Bins per axis.
        #[arg(long, default_value_t = rootforms::projection::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_enum, default_value = "qt")]
        triangle: Triangle,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        /// Write the grid here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Triangle {
    Qt,
    Ft,
}

fn parse_q(raw: &str) -> Result<f64, String> {
    let q = match raw.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "max" => f64::INFINITY,
        other => other.parse::<f64>().map_err(|e| format!("{raw:?}: {e}"))?,
    };
    if q >= 1.0 {
        Ok(q)
    } else {
        Err(format!("q must be at least 1, got {raw}"))
    }
}

/// Runs the CLI and returns the exit status: 0 on success, 1 for input
/// errors, 2 for numerical failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match run_command(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(input: &Input) -> CliResult<Vec<LatticeRecord>> {
    load_path(&input.input, input.input_format)
}

fn load_path(path: &Path, format: Option<Format>) -> CliResult<Vec<LatticeRecord>> {
    let guessed = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    };
    let format = format.unwrap_or(guessed);
    let name = path.display();
    let mut reader: Box<dyn Read> = if path == Path::new("-") {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(path).map_err(|e| CliError::Input(format!("{name}: {e}")))?)
    };
    parse_records(&mut reader, format).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{name}: {msg}")),
        other => other,
    })
}

/// Applies `f` to every record in parallel; results keep the input order and
/// the first failure in that order is reported.
fn per_record<T: Send>(
    records: &[LatticeRecord],
    f: impl Fn(&LatticeRecord) -> rootforms::Result<T> + Sync,
) -> CliResult<Vec<T>> {
    records
        .par_iter()
        .map(|r| f(r).map_err(|e| CliError::from_core(&format!("record {}", r.id), e)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn invariants(records: &[LatticeRecord], tol: f64) -> CliResult<Vec<Invariants>> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Input(format!("--tol must lie in (0, 1), got {tol}")));
    }
    per_record(records, |r| Invariants::from_superbase(&r.superbase()?, tol))
}

fn vector_header(prefix: &str, count: usize) -> Vec<String> {
    (0..count).flat_map(|i| ["x", "y", "z"].map(|c| format!("{prefix}{i}_{c}"))).collect()
}

fn run_command(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Reduce { input, output, tol } => {
            let records = load(&input)?;
            let reduced = invariants(&records, tol)?;
            let mut header = vec!["id".to_string()];
            header.extend(vector_header("v", 4));
            header.extend((1..=3).flat_map(|r| (1..=3).map(move |c| format!("u{r}{c}"))));
            header.extend(["steps", "vonorm_sum_before", "vonorm_sum_after", "orientation"].map(String::from));
            let mut table = Table::new(header);
            for (rec, inv) in records.iter().zip(&reduced) {
                let red = &inv.reduced;
                let before = red.trace.steps.first().map_or(red.superbase.vonorm_sum(), |s| s.vonorm_sum_before);
                let mut row = vec![Cell::Text(rec.id.clone())];
                row.extend(red.superbase.vectors().iter().flat_map(|v| [v.x, v.y, v.z]).map(Cell::Num));
                row.extend((0..3).flat_map(|r| (0..3).map(move |c| (r, c))).map(|(r, c)| Cell::Int(red.transform[(r, c)])));
                row.push(Cell::Int(red.trace.iterations() as i64));
                row.push(Cell::Num(before));
                row.push(Cell::Num(red.superbase.vonorm_sum()));
                row.push(Cell::Int(red.superbase.orientation() as i64));
                table.push(row);
            }
            table.write(output.format, stdout)
        }
        Command::Rootform { input, output, oriented, tol } => {
            let records = load(&input)?;
            let invs = invariants(&records, tol)?;
            let mut table = report_table();
            for (rec, inv) in records.iter().zip(&invs) {
                let report = InvariantReport::new(&rec.id, inv).map_err(|e| CliError::from_core(&rec.id, e))?;
                table.push(report.row(oriented));
            }
            table.write(output.format, stdout)
        }
        Command::Dist { input, output, against, q, oriented } => {
            let left = load(&input)?;
            let right = against.as_deref().map(|p| load_path(p, input.input_format)).transpose()?;
            let form = |inv: &Invariants| if oriented { inv.oriented_root_form } else { inv.root_form };
            let a: Vec<_> = invariants(&left, DEFAULT_REL_TOL)?.iter().map(form).collect();
            let pairs: Vec<(usize, usize)> = match &right {
                Some(r) => (0..left.len()).flat_map(|i| (0..r.len()).map(move |j| (i, j))).collect(),
                None => (0..left.len()).flat_map(|i| (i + 1..left.len()).map(move |j| (i, j))).collect(),
            };
            let (b, right_ids): (Vec<_>, Vec<&str>) = match &right {
                Some(r) => (invariants(r, DEFAULT_REL_TOL)?.iter().map(form).collect(), r.iter().map(|x| x.id.as_str()).collect()),
                None => (a.clone(), left.iter().map(|x| x.id.as_str()).collect()),
            };
            let d = BaseDistance::Minkowski(q);
            let mut table = Table::new(["id_a", "id_b", "distance"]);
            for (i, j) in pairs {
                let dist = root_metric(&a[i], &b[j], &d, oriented).map_err(|e| CliError::from_core(&left[i].id, e))?;
                table.push(vec![left[i].id.as_str().into(), right_ids[j].into(), dist.into()]);
            }
            table.write(output.format, stdout)
        }
        Command::Dc7 { input, output, distances } => {
            let records = load(&input)?;
            let invs = invariants(&records, DEFAULT_REL_TOL)?;
            let table = if distances {
                let mut t = Table::new(["id_a", "id_b", "distance"]);
                for i in 0..records.len() {
                    for j in i + 1..records.len() {
                        let d = dc7_distance(&invs[i].dc7, &invs[j].dc7);
                        t.push(vec![records[i].id.as_str().into(), records[j].id.as_str().into(), d.into()]);
                    }
                }
                t
            } else {
                let mut header = vec!["id".to_string()];
                header.extend((1..=7).map(|k| format!("d{k}")));
                let mut t = Table::new(header);
                for (rec, inv) in records.iter().zip(&invs) {
                    let mut row = vec![Cell::Text(rec.id.clone())];
                    row.extend(inv.dc7.0.map(Cell::Num));
                    t.push(row);
                }
                t
            };
            table.write(output.format, stdout)
        }
        Command::Collide { output, max_conorm } => {
            if !(1..=40).contains(&max_conorm) {
                return Err(CliError::Input(format!("--max-conorm must lie in 1..=40, got {max_conorm}")));
            }
            let mut header: Vec<String> = FORM_FIELDS.map(|f| format!("a_p{}", &f[1..])).to_vec();
            header.extend(FORM_FIELDS.map(|f| format!("b_p{}", &f[1..])));
            header.extend((1..=7).map(|k| format!("vonorm_{k}")));
            let mut table = Table::new(header);
            for pair in find_dc7_collisions(max_conorm) {
                let mut row: Vec<Cell> = pair.first.iter().chain(&pair.second).map(|&p| Cell::Int(p)).collect();
                row.extend(pair.vonorms.map(Cell::Int));
                table.push(row);
            }
            let _ = writeln!(stderr, "{} colliding pairs", table.rows.len());
            table.write(output.format, stdout)
        }
        Command::Synth { input, output } => {
            let records = load(&input)?;
            let bases = per_record(&records, |r| Ok(r.superbase()?.basis()))?;
            let mut table = Table::new(std::iter::once("id").chain(BASIS_FIELDS));
            for (rec, b) in records.iter().zip(&bases) {
                let mut row = vec![Cell::Text(rec.id.clone())];
                row.extend(b.to_rows().map(Cell::Num));
                table.push(row);
            }
            table.write(output.format, stdout)
        }
        Command::Project { input, output } => {
            let records = load(&input)?;
            let invs = invariants(&records, DEFAULT_REL_TOL)?;
            let mut table = Table::new(["id", "qt_x", "qt_y", "ft_x", "ft_y"]);
            for (rec, inv) in records.iter().zip(&invs) {
                let p = project_root_form(&inv.root_form).map_err(|e| CliError::from_core(&rec.id, e))?;
                let mut row = vec![Cell::Text(rec.id.clone())];
                row.extend(point_cells(p.qt));
                row.extend(point_cells(p.ft));
                table.push(row);
            }
            table.write(output.format, stdout)
        }
        Command::Density { input, resolution, triangle, format, output } => {
            if resolution == 0 {
                return Err(CliError::Input("--resolution must be at least 1".into()));
            }
            let records = load(&input)?;
            let invs = invariants(&records, DEFAULT_REL_TOL)?;
            let mut points = Vec::with_capacity(invs.len());
            for (rec, inv) in records.iter().zip(&invs) {
                let p = project_root_form(&inv.root_form).map_err(|e| CliError::from_core(&rec.id, e))?;
                points.push(match triangle {
                    Triangle::Qt => p.qt,
                    Triangle::Ft => p.ft,
                });
            }
            let kept: Vec<_> = points.iter().flatten().copied().collect();
            let skipped = points.len() - kept.len();
            let grid = if kept.is_empty() {
                let kind = if triangle == Triangle::Qt { TriangleKind::Quotient } else { TriangleKind::Full };
                DensityGrid::new(kind, resolution)
            } else {
                accumulate_density(&kept, resolution).map_err(|e| CliError::from_core("density", e))?
            };
            let _ = writeln!(stderr, "binned {} of {} records, skipped {skipped} degenerate", kept.len(), points.len());
            match output {
                Some(path) => {
                    let mut file = File::create(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    write_grid(&grid, format, &mut file)?;
                }
                None => write_grid(&grid, format, stdout)?,
            }
            Ok(())
        }
    }
}
