//! Output emission: CSV tables (comma-separated, header row, '.' decimal,
//! UTF-8), JSON manifests, and static SVG line plots. All writers format
//! floats with Rust's shortest round-trip representation, so identical
//! results produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::sweep::{SweepCell, SweepFlag};
use crate::validation::{BoundRow, InexactRow};

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

pub fn sweep_csv(cells: &[SweepCell], seed: u64, mc_samples: usize) -> String {
    let mut out = String::from(
        "zeta,alpha,beta,delta,delta_ci_low,delta_ci_high,delta0,diff,diff_ci_low,diff_ci_high,mode,mc_samples,seed\n",
    );
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(c.zeta),
            fmt_f64(c.alpha),
            fmt_f64(c.beta),
            fmt_f64(c.delta),
            fmt_f64(c.delta_ci_low),
            fmt_f64(c.delta_ci_high),
            fmt_f64(c.delta0),
            fmt_f64(c.diff),
            fmt_f64(c.diff_ci_low),
            fmt_f64(c.diff_ci_high),
            c.mode.label(),
            mc_samples,
            seed
        );
    }
    out
}

pub fn flags_csv(flags: &[SweepFlag], seed: u64, mc_samples: usize) -> String {
    let mut out = String::from("zeta,beta,dashed,mode,mc_samples,seed\n");
    for f in flags {
        let _ = writeln!(
            out,
            "{},{},{},mixed,{},{}",
            fmt_f64(f.zeta),
            fmt_f64(f.beta),
            f.dashed,
            mc_samples,
            seed
        );
    }
    out
}

pub fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(
        "scenario,zeta,actual_zeta,balls,tau,bound_tau,alpha,beta,delta,delta_ci_low,delta_ci_high,bound,margin,violation,mode,mc_samples,seed\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            fmt_f64(r.zeta),
            fmt_f64(r.actual_zeta),
            r.balls,
            fmt_f64(r.tau),
            fmt_f64(r.bound_tau),
            fmt_f64(r.alpha),
            fmt_f64(r.beta),
            fmt_f64(r.delta),
            fmt_f64(r.delta_ci_low),
            fmt_f64(r.delta_ci_high),
            fmt_f64(r.bound),
            fmt_f64(r.margin),
            r.violation,
            r.mode.label(),
            r.mc_samples,
            r.seed
        );
    }
    out
}

pub fn inexact_csv(rows: &[InexactRow]) -> String {
    let mut out = String::from(
        "scenario,eta,tau,alpha,beta,actual_zeta,balls,delta_g,sigma,lower,upper,sandwich_ok,general_bound,general_ok,mode,mc_samples,seed\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            fmt_f64(r.eta),
            fmt_f64(r.tau),
            fmt_f64(r.alpha),
            fmt_f64(r.beta),
            fmt_f64(r.actual_zeta),
            r.balls,
            fmt_f64(r.delta_g),
            fmt_f64(r.sigma),
            fmt_f64(r.lower),
            fmt_f64(r.upper),
            r.sandwich_ok,
            fmt_f64(r.general_bound),
            r.general_ok,
            r.mode.label(),
            r.mc_samples,
            r.seed
        );
    }
    out
}

pub fn write_manifest<T: Serialize>(path: &Path, manifest: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    write_text(path, &text)
}

/// One plotted series: the diff curve of a single interference distance.
pub struct SvgSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// A minimal line plot: one series per interference distance, dashed stroke
/// when the flag says augmentation helps somewhere on that row.
pub fn line_plot_svg(title: &str, x_label: &str, y_label: &str, series: &[SvgSeries]) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 55.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_min, x_max) = bounds_with_pad(&xs, 0.0);
    let (y_min, y_max) = bounds_with_pad(&ys, 0.08);
    let sx = move |x: f64| ml + (x - x_min) / (x_max - x_min) * pw;
    let sy = move |y: f64| mt + (y_max - y) / (y_max - y_min) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        title
    );

    // Axes and ticks.
    let _ = writeln!(
        svg,
        r##"<rect x="{ml:.1}" y="{mt:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    for k in 0..=5 {
        let xv = x_min + (x_max - x_min) * k as f64 / 5.0;
        let yv = y_min + (y_max - y_min) * k as f64 / 5.0;
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
            x = sx(xv),
            y0 = mt,
            y1 = mt + ph
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sx(xv),
            mt + ph + 16.0,
            trim_tick(xv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#bbb" stroke-width="0.5"/>"##,
            x0 = ml,
            x1 = ml + pw,
            y = sy(yv)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            ml - 6.0,
            sy(yv) + 4.0,
            trim_tick(yv)
        );
    }
    if y_min < 0.0 && y_max > 0.0 {
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#444" stroke-width="1" stroke-dasharray="2,3"/>"##,
            x0 = ml,
            x1 = ml + pw,
            y = sy(0.0)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        h - 12.0,
        x_label
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        y_label
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if s.dashed {
            r#" stroke-dasharray="7,5""#
        } else {
            ""
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            pts.join(" ")
        );
        for (x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.2" fill="{color}"/>"#,
                sx(*x),
                sy(*y)
            );
        }
        // Legend entry.
        let ly = mt + 14.0 + 16.0 * i as f64;
        let lx = ml + pw - 120.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            lx,
            lx + 24.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds_with_pad(vals: &[f64], pad_frac: f64) -> (f64, f64) {
    let mut lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = (hi - lo) * pad_frac;
    (lo - pad, hi + pad)
}

fn trim_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Output file naming for per-beta sweep plots.
pub fn sweep_svg_path(dir: &Path, beta: f64) -> PathBuf {
    dir.join(format!(
        "sweep_beta_{}.svg",
        fmt_f64(beta).replace('.', "_")
    ))
}
