//! Density grid exports: `row,col,count` CSV, plain PGM and an SVG heat map.
//!
//! Row 0 is the lowest y bin in CSV. Images put the highest y bin on top.

use std::fmt::Write as _;
use std::io::Write;

use clap::ValueEnum;
use rootforms::DensityGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    Csv,
    Pgm,
    Svg,
}

/// Largest grey level a plain PGM can hold.
const PGM_MAX: u64 = 65535;

pub fn write_grid(grid: &DensityGrid, format: GridFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        GridFormat::Csv => write_csv(grid, out),
        GridFormat::Pgm => out.write_all(pgm(grid).as_bytes()),
        GridFormat::Svg => out.write_all(svg(grid).as_bytes()),
    }
}

fn write_csv(grid: &DensityGrid, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "row,col,count")?;
    let n = grid.resolution;
    for row in 0..n {
        for col in 0..n {
            writeln!(out, "{row},{col},{}", grid.count_at(col, row))?;
        }
    }
    Ok(())
}

/// Grey levels are the counts themselves, unless the maximum count
/// exceeds what the format allows.
pub fn pgm(grid: &DensityGrid) -> String {
    let n = grid.resolution;
    let max = grid.max_count().max(1);
    let maxval = max.min(PGM_MAX);
    let level = |c: u64| if max <= PGM_MAX { c } else { (c as u128 * PGM_MAX as u128 / max as u128) as u64 };
    let mut s = format!("P2\n{n} {n}\n{maxval}\n");
    for row in (0..n).rev() {
        let line: Vec<String> = (0..n).map(|col| level(grid.count_at(col, row)).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn svg(grid: &DensityGrid) -> String {
    let n = grid.resolution;
    let max = grid.max_count().max(1) as f64;
    let cell = (800 / n).max(1);
    let side = cell * n;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n"
    );
    let _ = writeln!(s, "<rect width=\"{side}\" height=\"{side}\" fill=\"white\"/>");
    for row in 0..n {
        for col in 0..n {
            let count = grid.count_at(col, row);
            if count == 0 {
                continue;
            }
            // Dark means dense.
            let shade = 255 - (255.0 * count as f64 / max).round() as u8;
            let y = (n - 1 - row) * cell;
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({shade},{shade},{shade})\"><title>{count}</title></rect>",
                col * cell
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
