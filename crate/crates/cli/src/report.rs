//! JSON, CSV and SVG outputs over a list of dossiers.

use crate::{FieldDossier, PipelineOutput};
use serde::Serialize;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(format!("unknown format {}", s)),
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    version: &'a str,
    status: &'a str,
    fields: usize,
    shortlist: &'a [String],
    shortlist_undecided: &'a [String],
    per_field: Vec<FieldLine>,
}

#[derive(Serialize)]
struct FieldLine {
    disc_k: String,
    status: String,
    good_reduction: Option<bool>,
    error: Option<String>,
}

pub const SUMMARY_COLUMNS: [&str; 17] = [
    "disc_K",
    "disc_F",
    "conductor_f",
    "h_K",
    "class_group",
    "points",
    "prec",
    "min_det_y",
    "min_slack_a",
    "min_slack_c",
    "min_slack_d",
    "faltings_height",
    "height_lower_bound",
    "good_reduction",
    "status",
    "error",
    "timing_ms",
];

fn min_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |m, v| Some(m.map_or(v, |m: f64| m.min(v))))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{:.6e}", x)).unwrap_or_default()
}

fn points(d: &FieldDossier) -> impl Iterator<Item = &crate::PointInfo> {
    d.types.iter().flat_map(|t| t.points.iter())
}

fn summary_row(d: &FieldDossier) -> Vec<String> {
    let r = &d.field.record;
    let cg = d.class_group.as_ref();
    vec![
        r.disc_k.to_string(),
        r.disc_f.to_string(),
        r.conductor_f.to_string(),
        cg.map(|c| c.h.to_string()).unwrap_or_default(),
        cg.map(|c| c.divisors.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("x")).unwrap_or_default(),
        points(d).count().to_string(),
        d.types.iter().map(|t| t.prec).max().unwrap_or(0).to_string(),
        // det Y >= 9/16 slack plus 9/16
        opt(min_of(points(d).map(|p| p.inequalities.b_det_9_16.slack + 0.5625))),
        opt(min_of(points(d).map(|p| p.inequalities.a_y1y2.slack))),
        opt(min_of(points(d).map(|p| p.inequalities.c_z12.slack))),
        opt(min_of(points(d).map(|p| p.inequalities.d_trace.slack))),
        opt(d.heights.as_ref().map(|h| h.faltings.to_f64())),
        opt(d.heights.as_ref().map(|h| h.lower_bound.to_f64())),
        d.good_reduction.map(|b| b.to_string()).unwrap_or_default(),
        d.status().as_str().to_string(),
        d.error.clone().unwrap_or_default(),
        d.timing_ms.to_string(),
    ]
}

/// One CSV row per field.
pub fn summary_csv(ds: &[FieldDossier]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_COLUMNS)?;
    for d in ds {
        w.write_record(summary_row(d))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| io::Error::other(e.to_string()))?).map_err(io::Error::other)
}

/// Per point: |chi10| in both normalizations against the lower bound.
pub fn normalization_csv(ds: &[FieldDossier]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "disc_K",
        "cm_type",
        "point",
        "abs_chi10",
        "abs_chi10_literature",
        "lower_bound",
        "holds",
        "holds_literature",
    ])?;
    for d in ds {
        for t in &d.types {
            for (i, p) in t.points.iter().enumerate() {
                let lit = p.chi10_abs.to_f64() / 4096.0;
                w.write_record([
                    d.disc().to_string(),
                    format!("{}{}", t.cm_type.0[0], t.cm_type.0[1]),
                    i.to_string(),
                    format!("{:.6e}", p.chi10_abs.to_f64()),
                    format!("{:.6e}", lit),
                    format!("{:.6e}", p.chi10_lower.to_f64()),
                    crate::Status::of(&p.chi10_check).as_str().into(),
                    crate::Status::of(&p.chi10_literature_check).as_str().into(),
                ])?;
            }
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| io::Error::other(e.to_string()))?).map_err(io::Error::other)
}

/// Slackness series plotted against disc_K.
pub fn slack_series(ds: &[FieldDossier]) -> Vec<(&'static str, Vec<(f64, f64)>)> {
    let mut out: Vec<(&'static str, Vec<(f64, f64)>)> = Vec::new();
    type Get = fn(&FieldDossier) -> Option<f64>;
    let series: [(&'static str, Get); 6] = [
        ("ineq_a_y1y2", |d| min_of(points(d).map(|p| p.inequalities.a_y1y2.slack))),
        ("ineq_b_det_9_16", |d| min_of(points(d).map(|p| p.inequalities.b_det_9_16.slack))),
        ("ineq_c_z12", |d| min_of(points(d).map(|p| p.inequalities.c_z12.slack))),
        ("ineq_d_trace", |d| min_of(points(d).map(|p| p.inequalities.d_trace.slack))),
        ("chi10_log10_ratio", |d| {
            min_of(points(d).map(|p| {
                (p.chi10_abs.log().map(|b| b.to_f64()).unwrap_or(f64::NAN)
                    - p.chi10_lower.log().map(|b| b.to_f64()).unwrap_or(f64::NAN))
                    / std::f64::consts::LN_10
            }))
        }),
        ("height_minus_lower_bound", |d| d.heights.as_ref().map(|h| h.faltings.to_f64() - h.lower_bound.to_f64())),
    ];
    for (name, f) in series {
        let pts = ds.iter().filter_map(|d| f(d).filter(|v| v.is_finite()).map(|v| (d.disc().to_f64(), v))).collect();
        out.push((name, pts));
    }
    out
}

/// Scatter plot with log10 disc_K on the x axis.
pub fn svg_plot(title: &str, pts: &[(f64, f64)]) -> String {
    let (w, h, m) = (640.0, 400.0, 50.0);
    let xs: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let range = |v: &[f64], lo: f64, hi: f64| {
        let a = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let b = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if a.is_finite() && b > a {
            (a, b)
        } else if a.is_finite() {
            (a - 1.0, a + 1.0)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(&xs, 2.0, 7.0);
    let (y0, y1) = range(&ys, 0.0, 1.0);
    let y0 = y0.min(0.0);
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    s += &format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    s += &format!("<title>{}</title>\n", title);
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += &format!(
        "<line x1=\"{m}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - m,
        w - m,
        h - m
    );
    s += &format!("<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{}\" stroke=\"black\"/>\n", h - m);
    // zero slack
    s += &format!(
        "<line x1=\"{m}\" y1=\"{:.2}\" x2=\"{}\" y2=\"{:.2}\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n",
        py(0.0),
        w - m,
        py(0.0)
    );
    s += &format!("<text x=\"{}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n", w / 2.0, title);
    s += &format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">log10 disc_K</text>\n",
        w / 2.0,
        h - 12.0
    );
    for (x, lab) in [(x0, x0), (x1, x1)] {
        s += &format!(
            "<text x=\"{:.2}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{:.2}</text>\n",
            px(x),
            h - m + 14.0,
            lab
        );
    }
    for (y, lab) in [(y0, y0), (y1, y1)] {
        s += &format!(
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"end\">{:.3e}</text>\n",
            m - 4.0,
            py(y),
            lab
        );
    }
    for (x, y) in xs.iter().zip(&ys) {
        s += &format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n", px(*x), py(*y));
    }
    s += "</svg>\n";
    s
}

fn write(dir: &Path, name: &str, body: &str, out: &mut Vec<PathBuf>) -> io::Result<()> {
    let p = dir.join(name);
    if let Some(parent) = p.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(&p, body)?;
    out.push(p);
    Ok(())
}

pub fn summary_json(o: &PipelineOutput) -> String {
    let s = Summary {
        version: crate::CODE_VERSION,
        status: o.status.as_str(),
        fields: o.dossiers.len(),
        shortlist: &o.shortlist,
        shortlist_undecided: &o.shortlist_undecided,
        per_field: o
            .dossiers
            .iter()
            .map(|d| FieldLine {
                disc_k: d.disc().to_string(),
                status: d.status().as_str().into(),
                good_reduction: d.good_reduction,
                error: d.error.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&s).expect("summary serializes")
}

/// Writes the report files for one format into `dir`; returns their paths.
pub fn emit_report(o: &PipelineOutput, format: Format, dir: &Path) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    match format {
        Format::Json => {
            for d in &o.dossiers {
                let body = serde_json::to_string_pretty(d).map_err(io::Error::other)?;
                write(dir, &format!("fields/{}.json", d.disc()), &body, &mut out)?;
            }
            write(dir, "summary.json", &summary_json(o), &mut out)?;
        }
        Format::Csv => {
            write(dir, "summary.csv", &summary_csv(&o.dossiers)?, &mut out)?;
            write(dir, "chi10_normalization.csv", &normalization_csv(&o.dossiers)?, &mut out)?;
        }
        Format::Svg => {
            for (name, pts) in slack_series(&o.dossiers) {
                write(dir, &format!("slack_{}.svg", name), &svg_plot(name, &pts), &mut out)?;
            }
        }
    }
    Ok(out)
}
