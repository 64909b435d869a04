//! Record and aggregate serialization: CSV, a streamed JSON array, and a
//! self-contained SVG scatter plot.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::analysis::ComparisonRecord;
use crate::montecarlo::{AggregateRow, Axis, RecordSink};

pub const RECORD_HEADER: &str = "a1,a2,a3,ub1,ub2,gap,sum,prod12,prod123,frobenius";
pub const AGGREGATE_HEADER: &str = "axis,bucket,count,min_gap,max_gap,mean_gap,variance";

pub fn record_csv_line(r: &ComparisonRecord) -> String {
    let f = r.frobenius.map(|f| f.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{:.6},{:.6},{:.6},{},{},{},{}",
        r.triple.a1, r.triple.a2, r.triple.a3, r.ub1, r.ub2, r.gap, r.sum, r.prod12, r.prod123, f
    )
}

fn record_json_object(r: &ComparisonRecord) -> String {
    let f = r
        .frobenius
        .map(|f| f.to_string())
        .unwrap_or_else(|| "null".into());
    format!(
        "{{\"a1\":{},\"a2\":{},\"a3\":{},\"ub1\":{:.6},\"ub2\":{:.6},\"gap\":{:.6},\
         \"sum\":{},\"prod12\":{},\"prod123\":{},\"frobenius\":{}}}",
        r.triple.a1, r.triple.a2, r.triple.a3, r.ub1, r.ub2, r.gap, r.sum, r.prod12, r.prod123, f
    )
}

/// Writes one CSV row per record after a header.
pub struct CsvSink<W: Write> {
    out: W,
    header_written: bool,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> Self {
        CsvSink {
            out,
            header_written: false,
        }
    }

    pub fn into_inner(self) -> W {
        self.out
    }

    fn header(&mut self) -> io::Result<()> {
        if !self.header_written {
            writeln!(self.out, "{RECORD_HEADER}")?;
            self.header_written = true;
        }
        Ok(())
    }
}

impl<W: Write> RecordSink for CsvSink<W> {
    fn accept(&mut self, r: &ComparisonRecord) -> io::Result<()> {
        self.header()?;
        writeln!(self.out, "{}", record_csv_line(r))
    }

    fn finish(&mut self) -> io::Result<()> {
        self.header()?;
        self.out.flush()
    }
}

/// Streams a JSON array of flat record objects.
pub struct JsonSink<W: Write> {
    out: W,
    count: u64,
}

impl<W: Write> JsonSink<W> {
    pub fn new(out: W) -> Self {
        JsonSink { out, count: 0 }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> RecordSink for JsonSink<W> {
    fn accept(&mut self, r: &ComparisonRecord) -> io::Result<()> {
        let lead = if self.count == 0 { "[\n" } else { ",\n" };
        write!(self.out, "{lead}{}", record_json_object(r))?;
        self.count += 1;
        Ok(())
    }

    fn finish(&mut self) -> io::Result<()> {
        if self.count == 0 {
            writeln!(self.out, "[]")?;
        } else {
            writeln!(self.out, "\n]")?;
        }
        self.out.flush()
    }
}

pub fn write_aggregate_csv<W: Write>(mut out: W, rows: &[AggregateRow]) -> io::Result<()> {
    writeln!(out, "{AGGREGATE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.axis, r.bucket, r.count, r.min_gap, r.max_gap, r.mean_gap, r.variance
        )?;
    }
    out.flush()
}

pub fn write_aggregate_json<W: Write>(mut out: W, rows: &[AggregateRow]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    out.flush()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScatterOptions {
    pub axis: Axis,
    pub log_x: bool,
    /// Keep at most this many points, evenly strided.
    pub max_points: Option<usize>,
}

impl ScatterOptions {
    pub fn new(axis: Axis) -> Self {
        ScatterOptions {
            axis,
            log_x: false,
            max_points: None,
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Gap against the chosen key as an 800×600 SVG. Records whose key is zero
/// cannot appear on a log axis and are dropped.
pub fn scatter_svg(records: &[ComparisonRecord], opts: &ScatterOptions) -> String {
    let x_of = |r: &ComparisonRecord| {
        let k = opts.axis.key(r) as f64;
        if opts.log_x {
            k.log10()
        } else {
            k
        }
    };
    let usable: Vec<&ComparisonRecord> = records
        .iter()
        .filter(|r| !opts.log_x || opts.axis.key(r) > 0)
        .collect();
    let stride = match opts.max_points {
        Some(m) if m > 0 && usable.len() > m => usable.len().div_ceil(m),
        _ => 1,
    };
    let points: Vec<(f64, f64)> = usable
        .iter()
        .step_by(stride)
        .map(|r| (x_of(r), r.gap))
        .collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    if stride > 1 {
        let _ = writeln!(
            s,
            "<metadata>downsampled: every {stride}th of {} records, {} plotted</metadata>",
            usable.len(),
            points.len()
        );
    }
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<g stroke=\"black\" fill=\"none\"><line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\"/>\
         <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\"/></g>",
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        t = MARGIN_TOP,
        b = HEIGHT - MARGIN_BOTTOM
    );
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{z:.2}\" x2=\"{}\" y2=\"{z:.2}\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>",
            MARGIN_LEFT,
            WIDTH - MARGIN_RIGHT,
            z = py(0.0)
        );
    }
    let _ = writeln!(s, "<g font-family=\"sans-serif\" font-size=\"12\">");
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let xl = if opts.log_x {
            format!("{:.3}", 10f64.powf(xv))
        } else {
            format!("{xv:.0}")
        };
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xl}</text>",
            px(xv),
            HEIGHT - MARGIN_BOTTOM + 18.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.3}</text>",
            MARGIN_LEFT - 6.0,
            py(yv) + 4.0
        );
    }
    let x_label = if opts.log_x {
        format!("{} (log scale)", opts.axis.label())
    } else {
        opts.axis.label().to_string()
    };
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x_label}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">UB2 - UB1</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "<g fill=\"steelblue\" fill-opacity=\"0.5\">");
    for (x, y) in points {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\"/>",
            px(x),
            py(y)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
