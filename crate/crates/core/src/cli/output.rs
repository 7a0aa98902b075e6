//! Serialization of results: numbers with 15 significant digits, JSON,
//! CSV (LF line endings, `.` decimal separator) and a static SVG diagram.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::config::SweptParameter;
use crate::cycle::{CycleResult, PlSample};
use crate::processes::StrokeKind;

/// Formats `x` like C's `%.15g`: 15 significant digits, trailing zeros
/// dropped, exponent form outside `1e-5 <= |x| < 1e15`. Negative zero prints
/// as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (14 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty JSON layout with [`format_number`] for every float.
struct SignificantDigits<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_number(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Pretty-printed JSON with a trailing newline. Non-finite floats become
/// `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let formatter = SignificantDigits { inner: PrettyFormatter::with_indent(b"  ") };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn cycle_csv(r: &CycleResult) -> String {
    let mut out = String::from(
        "l1,l2,l3,l4,work_12,work_23,work_34,work_41,work_total,heat_input,e_h,e_c,efficiency,mode\n",
    );
    let nums = [r.l1, r.l2, r.l3, r.l4]
        .into_iter()
        .chain(r.work_per_stroke)
        .chain([r.work_total, r.heat_input, r.e_h, r.e_c, r.efficiency])
        .map(format_number)
        .collect::<Vec<_>>();
    let _ = writeln!(out, "{},{}", nums.join(","), r.mode);
    out
}

pub fn diagram_csv(samples: &[PlSample]) -> String {
    let mut out = String::from("stroke,L,pressure,energy,w1\n");
    for s in samples {
        let w1 = s.w1.map(format_number).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.stroke,
            format_number(s.l),
            format_number(s.pressure),
            format_number(s.energy),
            w1
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub work_total: f64,
    pub heat_input: f64,
    pub efficiency: f64,
}

pub fn sweep_csv(parameter: SweptParameter, rows: &[SweepRow]) -> String {
    let mut out = format!("{},work_total,heat_input,efficiency\n", parameter.key());
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_number(r.value),
            format_number(r.work_total),
            format_number(r.heat_input),
            format_number(r.efficiency)
        );
    }
    out
}

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn stroke_colour(kind: StrokeKind) -> &'static str {
    match kind {
        StrokeKind::IsothermalExpansion => "#c0392b",
        StrokeKind::AdiabaticExpansion => "#2c3e50",
        StrokeKind::IsothermalCompression => "#2980b9",
        StrokeKind::AdiabaticCompression => "#7f8c8d",
    }
}

/// Static pressure-width diagram: axes, one polyline per stroke and labelled
/// markers at the four corners.
pub fn diagram_svg(samples: &[PlSample]) -> String {
    let bounds = |f: fn(&PlSample) -> f64| {
        samples.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
    };
    let (l_min, l_max) = bounds(|s| s.l);
    let (p_min, p_max) = bounds(|s| s.pressure);
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (l_span, p_span) = (span(l_min, l_max), span(p_min, p_max));
    let x = |l: f64| MARGIN + (l - l_min) / l_span * (SVG_WIDTH - 2.0 * MARGIN);
    let y = |p: f64| SVG_HEIGHT - MARGIN - (p - p_min) / p_span * (SVG_HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0) = (MARGIN, SVG_HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        x1 = SVG_WIDTH - MARGIN
    );
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">L</text>"#,
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{:.1}" font-size="14" text-anchor="middle">P</text>"#,
        SVG_HEIGHT / 2.0
    );
    for (label, tx, ty, anchor) in [
        (format_number(l_min), x(l_min), y0 + 18.0, "middle"),
        (format_number(l_max), x(l_max), y0 + 18.0, "middle"),
        (format_number(p_min), x0 - 6.0, y(p_min), "end"),
        (format_number(p_max), x0 - 6.0, y(p_max), "end"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{tx:.1}" y="{ty:.1}" font-size="10" text-anchor="{anchor}">{label}</text>"#
        );
    }

    let mut corners = Vec::new();
    for kind in StrokeKind::CYCLE {
        let pts: Vec<&PlSample> = samples.iter().filter(|s| s.stroke == kind).collect();
        if let Some(first) = pts.first() {
            corners.push((first.l, first.pressure));
        }
        let coords =
            pts.iter().map(|s| format!("{:.2},{:.2}", x(s.l), y(s.pressure))).collect::<Vec<_>>();
        let _ = writeln!(
            out,
            r#"<polyline class="{kind}" fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            stroke_colour(kind),
            coords.join(" ")
        );
    }
    for (i, (l, p)) in corners.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/><text x="{:.2}" y="{:.2}" font-size="12">L{}</text>"#,
            x(*l),
            y(*p),
            x(*l) + 6.0,
            y(*p) - 6.0,
            i + 1
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_number(0.75), "0.75");
        assert_eq!(format_number(-1.5f64.ln()), "-0.405465108108164");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1234.5), "1234.5");
        assert_eq!(format_number(1e-7), "1e-07");
        assert_eq!(format_number(-2.5e20), "-2.5e+20");
        assert_eq!(format_number(0.000123), "0.000123");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn csv_leaves_adiabatic_weight_empty() {
        let rows = [
            PlSample { stroke: StrokeKind::IsothermalExpansion, l: 1.0, pressure: -1.0, energy: -0.5, w1: Some(1.0) },
            PlSample { stroke: StrokeKind::AdiabaticExpansion, l: 1.5, pressure: -0.6, energy: -0.5, w1: None },
        ];
        let csv = diagram_csv(&rows);
        assert_eq!(
            csv,
            "stroke,L,pressure,energy,w1\nIsothermalExpansion,1,-1,-0.5,1\nAdiabaticExpansion,1.5,-0.6,-0.5,\n"
        );
    }

    proptest! {
        #[test]
        fn fifteen_digits_round_trip(x in proptest::num::f64::NORMAL) {
            let s = format_number(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(format_number(back), s);
            prop_assert!(((back - x) / x).abs() < 1e-14);
        }
    }
}
