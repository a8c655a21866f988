//! Minimal SVG plots for the sharpness sweeps: quotient against the family
//! parameter, with the sharp constant drawn as a horizontal reference line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::suites::NamedSweep;

const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 30.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        let t = (v - self.lo) / (self.hi - self.lo);
        self.px_lo + t * (self.px_hi - self.px_lo)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = (hi - lo).max(1e-12);
    (lo - 0.06 * span, hi + 0.06 * span)
}

/// Renders one sweep as a standalone SVG document.
pub fn sweep_plot(sweep: &NamedSweep) -> String {
    let res = &sweep.result;
    let xs: Vec<f64> = res.points.iter().map(|p| p.alpha).collect();
    let ys: Vec<f64> = res.points.iter().map(|p| p.quotient).collect();
    let (xmin, xmax) = padded(
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (ymin, ymax) = padded(
        ys.iter()
            .copied()
            .fold(res.sharp_constant, f64::min),
        ys.iter()
            .copied()
            .fold(res.sharp_constant, f64::max),
    );
    let sx = Scale {
        lo: xmin,
        hi: xmax,
        px_lo: ML,
        px_hi: W - MR,
    };
    let sy = Scale {
        lo: ymin,
        hi: ymax,
        px_lo: H - MB,
        px_hi: MT,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "  <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{} sweep</text>",
        W / 2.0,
        sweep.label
    );

    // Axes.
    let _ = writeln!(
        s,
        "  <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>",
        H - MB
    );
    let _ = writeln!(
        s,
        "  <line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    for k in 0..5 {
        let t = k as f64 / 4.0;
        let xv = xmin + t * (xmax - xmin);
        let yv = ymin + t * (ymax - ymin);
        let px = sx.map(xv);
        let py = sy.map(yv);
        let _ = writeln!(
            s,
            "  <line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"11\">{xv:.3}</text>",
            H - MB + 18.0
        );
        let _ = writeln!(
            s,
            "  <line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{ML}\" y2=\"{py:.1}\" stroke=\"black\"/>",
            ML - 5.0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" \
             font-family=\"sans-serif\" font-size=\"11\">{yv:.4}</text>",
            ML - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">family parameter</text>",
        ML + (W - ML - MR) / 2.0,
        H - 14.0
    );
    let _ = writeln!(
        s,
        "  <text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 18 {:.1})\">quotient</text>",
        MT + (H - MT - MB) / 2.0,
        MT + (H - MT - MB) / 2.0
    );

    // Sharp constant reference line.
    let py = sy.map(res.sharp_constant);
    let _ = writeln!(
        s,
        "  <line x1=\"{ML}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" stroke=\"crimson\" \
         stroke-dasharray=\"6 4\"/>",
        W - MR
    );
    let _ = writeln!(
        s,
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" \
         font-size=\"11\" fill=\"crimson\">sharp constant {:.6}</text>",
        W - MR - 4.0,
        py - 6.0,
        res.sharp_constant
    );

    // Sweep polyline and markers.
    let mut path = String::new();
    for (i, p) in res.points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.2} {:.2} ", sx.map(p.alpha), sy.map(p.quotient));
    }
    let _ = writeln!(
        s,
        "  <path d=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>",
        path.trim_end()
    );
    for p in &res.points {
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>",
            sx.map(p.alpha),
            sy.map(p.quotient)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes one SVG per sweep into `dir`; returns the paths written.
pub fn write_plots(sweeps: &[NamedSweep], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(sweeps.len());
    for sweep in sweeps {
        let path = dir.join(format!("sweep-{}.svg", sweep.label));
        std::fs::write(&path, sweep_plot(sweep))
            .with_context(|| format!("cannot write plot {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
