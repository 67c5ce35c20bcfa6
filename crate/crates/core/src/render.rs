//! SVG views of the construction, its partitions and the structure graph,
//! and the full set of build outputs.
//!
//! Coordinates are grid units with `y` flipped so that up is up.

use std::fmt::Write;

use thiserror::Error;

use crate::construction::{ConstructionResult, Trace};
use crate::geometry::{GeometryError, Point2};
use crate::graph::{count_diagnostics, GraphError, LabeledGraph};
use crate::label::NodeKind;
use crate::partition::{
    enumerate_partitions, partition_blocks, PartitionError, PartitionTable, Resolution, Side,
};
use crate::rational::{pq, to_f64};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Every file a build writes besides its config, as `(file name, contents)`.
pub fn build_artifacts(
    result: &ConstructionResult,
    trace: &Trace,
    theta: &Resolution,
) -> Result<Vec<(&'static str, String)>, RenderError> {
    let arr = result.arrangement()?;
    let graph = LabeledGraph::from_construction(&arr, &result.labeled_points, &result.rays)?;
    let table = enumerate_partitions(&arr, &result.labeled_points)?;
    Ok(vec![
        ("trace.txt", trace.to_text()),
        ("graph.txt", graph.to_text()),
        ("partitions.txt", table.to_text(theta)),
        ("counts.txt", count_diagnostics(result)?.to_text()),
        ("construction.svg", construction(result)),
        ("partitions.svg", partitions(result, &table, theta)),
        ("graph.svg", graph_view(result, &graph)),
    ])
}

const MARGIN: f64 = 2.0;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn xy(p: &Point2) -> (f64, f64) {
    (to_f64(&p.x), -to_f64(&p.y))
}

struct Canvas {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        Canvas {
            body: String::new(),
            min,
            max,
        }
    }

    fn finish(self, style: &str) -> String {
        let (x, y) = (self.min.0 - MARGIN, self.min.1 - MARGIN);
        let (w, h) = (
            self.max.0 - self.min.0 + 2.0 * MARGIN,
            self.max.1 - self.min.1 + 2.0 * MARGIN,
        );
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" font-family=\"sans-serif\">\n<style>{}</style>\n{}</svg>\n",
            num(x),
            num(y),
            num(w),
            num(h),
            style,
            self.body
        )
    }

    fn line(&mut self, class: &str, a: &Point2, b: &Point2, extra: &str) {
        let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{extra}/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    fn text(&mut self, class: &str, at: (f64, f64), s: &str) {
        let _ = writeln!(
            self.body,
            "<text class=\"{class}\" x=\"{}\" y=\"{}\">{s}</text>",
            num(at.0),
            num(at.1)
        );
    }
}

pub fn construction(r: &ConstructionResult) -> String {
    let mut c = Canvas::new(r.labeled_points.values().map(xy));
    for string in &r.strings {
        for s in string {
            c.line("string", s.a(), s.b(), "");
        }
    }
    for ray in &r.rays {
        c.line("ray", ray.segment.a(), ray.segment.b(), "");
    }
    for circle in &r.circles {
        let (x, y) = xy(&circle.center);
        let _ = writeln!(
            c.body,
            "<circle class=\"compass\" cx=\"{}\" cy=\"{}\" r=\"{}\" data-theta=\"{}\"/>",
            num(x),
            num(y),
            num(to_f64(&circle.diameter) / 2.0),
            pq(&circle.theta)
        );
    }
    for (l, p) in &r.labeled_points {
        let (x, y) = xy(p);
        c.text("label", (x + 0.4, y - 0.4), l.as_str());
    }
    c.finish(
        ".string{stroke:#222;stroke-width:0.12}.ray{stroke:#b33;stroke-width:0.08;stroke-dasharray:0.4 0.2}\
         .compass{fill:#9cf;fill-opacity:0.4;stroke:#369;stroke-width:0.05}.label{font-size:1.2px}",
    )
}

pub fn partitions(r: &ConstructionResult, table: &PartitionTable, theta: &Resolution) -> String {
    let mut c = Canvas::new(r.labeled_points.values().map(xy));
    for p in table.partitions() {
        let pts: Vec<String> = p
            .polygon
            .iter()
            .map(|q| {
                let (x, y) = xy(q);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let side = match p.side {
            Side::Left => "left",
            Side::Right => "right",
            Side::Axis => "axis",
        };
        let _ = writeln!(
            c.body,
            "<polygon class=\"face {side}\" points=\"{}\"><title>{}</title></polygon>",
            pts.join(" "),
            p.name
        );
    }
    for p in table.partitions() {
        let (x, y) = xy(&p.centroid);
        let total = partition_blocks(p, theta).total;
        c.text("name", (x, y), &format!("{{{}}}", p.name));
        c.text("total", (x, y + 0.8), &total.to_string());
    }
    for (l, p) in &r.labeled_points {
        let (x, y) = xy(p);
        c.text("label", (x + 0.4, y - 0.4), l.as_str());
    }
    c.finish(
        ".face{stroke:#222;stroke-width:0.08}.left{fill:#fdd}.right{fill:#ddf}.axis{fill:#dfd}\
         .name{font-size:0.7px;text-anchor:middle}.total{font-size:0.6px;text-anchor:middle;fill:#555}\
         .label{font-size:1.2px}",
    )
}

pub fn graph_view(r: &ConstructionResult, g: &LabeledGraph) -> String {
    let mut c = Canvas::new(r.labeled_points.values().map(xy));
    let _ = writeln!(
        c.body,
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>"
    );
    for u in g.nodes() {
        for v in g.nodes() {
            let (uv, vu) = (
                g.has_edge(u.as_str(), v.as_str()).unwrap_or(false),
                g.has_edge(v.as_str(), u.as_str()).unwrap_or(false),
            );
            let (pu, pv) = (r.point(u.as_str()), r.point(v.as_str()));
            if uv && vu && u < v {
                c.line("edge", pu, pv, "");
            } else if uv && !vu {
                c.line("edge directed", pu, pv, " marker-end=\"url(#arrow)\"");
            }
        }
    }
    for u in g.nodes() {
        let (x, y) = xy(r.point(u.as_str()));
        match u.kind() {
            NodeKind::Diamond => {
                let _ = writeln!(
                    c.body,
                    "<polygon class=\"diamond\" points=\"{},{} {},{} {},{} {},{}\"/>",
                    num(x),
                    num(y - 0.7),
                    num(x + 0.7),
                    num(y),
                    num(x),
                    num(y + 0.7),
                    num(x - 0.7),
                    num(y)
                );
            }
            NodeKind::Circle => {
                let _ = writeln!(
                    c.body,
                    "<circle class=\"node\" cx=\"{}\" cy=\"{}\" r=\"0.6\"/>",
                    num(x),
                    num(y)
                );
            }
        }
        c.text("label", (x, y + 0.3), u.as_str());
    }
    c.finish(
        ".edge{stroke:#444;stroke-width:0.1}.directed{stroke:#b33}.diamond{fill:#fe9;stroke:#222;stroke-width:0.06}\
         .node{fill:#fff;stroke:#222;stroke-width:0.06}.label{font-size:0.8px;text-anchor:middle}",
    )
}
