//! Text and structured (JSON) renderings of results.
//!
//! Both forms are deterministic: maps are ordered and nothing depends on
//! hashing or timing.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cy::{CyReport, Verdict};
use crate::resolution::{ExtTable, HomDims};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Something that can be printed in either output format.
pub trait Report: Serialize {
    fn text(&self) -> String;
}

pub fn emit_report<R: Report>(report: &R, format: Format) -> String {
    match format {
        Format::Text => report.text(),
        Format::Structured => {
            let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
            out.push('\n');
            out
        }
    }
}

fn roman(id: &str) -> String {
    format!("({id})")
}

impl Report for CyReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let scope = match self.truncation {
            Some(n) => format!("necessary conditions, certified up to degree {n}"),
            None => "exact characterization".to_string(),
        };
        let _ = writeln!(out, "CY-{} check: {} ({scope})", self.dim, self.verdict.as_str());
        let width = self.conditions.iter().map(|c| c.id.len() + 2).max().unwrap_or(0);
        for c in &self.conditions {
            let _ = writeln!(
                out,
                "  {:<width$}  {:<12}  {}",
                roman(&c.id),
                c.verdict.as_str(),
                c.statement
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "  {:<width$}  witness: {w}", "");
            }
        }
        if let Some(c) = &self.correspondence {
            let _ = writeln!(out, "correspondence:");
            for (a, r) in &c.nu {
                let _ = writeln!(out, "  nu({a}) = {r}");
            }
            for (u, row) in &c.l {
                let entries: Vec<String> = row.iter().map(|(w, x)| format!("l({u},{w}) = {x}")).collect();
                let _ = writeln!(out, "  {}", entries.join(", "));
            }
            for (block, x) in &c.rho {
                let _ = writeln!(out, "  rho({block}) = {x}");
            }
            for (v, x) in &c.lambda {
                let _ = writeln!(out, "  lambda({v}) = {x}");
            }
        }
        for (k, comp) in self.components.iter().enumerate() {
            let _ = writeln!(
                out,
                "component {} [{}]: {}",
                k + 1,
                comp.vertices.join(", "),
                comp.report.verdict.as_str()
            );
            for line in comp.report.text().lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// An Ext table together with both readings of the relation counts.
#[derive(Clone, Debug, Serialize)]
pub struct ExtReport {
    pub vertices: Vec<String>,
    /// `ext[k][j][i] = dim Ext^k(S_j, S_i)`.
    pub ext: Vec<Vec<Vec<usize>>>,
    /// `Ext^2` with the opposite variance convention.
    pub ext2_transposed: Vec<Vec<usize>>,
    pub convention: String,
}

impl ExtReport {
    pub fn new(table: &ExtTable) -> ExtReport {
        ExtReport {
            vertices: table.vertices.clone(),
            ext: table.dims.clone(),
            ext2_transposed: table.transposed(2),
            convention: "ext[k][j][i] = dim Ext^k(S_j, S_i), read from socles of the resolution of S_i; \
                         ext2_transposed is the other reading of relation counts"
                .to_string(),
        }
    }
}

/// Aligned matrix with vertex labels; rows are `j`, columns `i`.
pub fn matrix_text(vertices: &[String], m: &[Vec<usize>]) -> String {
    let width = vertices
        .iter()
        .map(String::len)
        .chain(m.iter().flatten().map(|x| x.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let _ = write!(out, "{:>width$}", "");
    for v in vertices {
        let _ = write!(out, "  {v:>width$}");
    }
    out.push('\n');
    for (v, row) in vertices.iter().zip(m) {
        let _ = write!(out, "{v:>width$}");
        for x in row {
            let _ = write!(out, "  {x:>width$}");
        }
        out.push('\n');
    }
    out
}

impl Report for ExtReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for (k, m) in self.ext.iter().enumerate() {
            let _ = writeln!(out, "Ext^{k}(S_j, S_i), rows j, columns i:");
            out.push_str(&matrix_text(&self.vertices, m));
            out.push('\n');
        }
        let _ = writeln!(out, "Ext^2 under the transposed reading:");
        out.push_str(&matrix_text(&self.vertices, &self.ext2_transposed));
        out
    }
}

impl Report for HomDims {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Hom(e_{} C, e_{} C) per degree, up to degree {}{}:",
            self.from,
            self.to,
            self.truncation,
            if self.approximate { " (approximate mode)" } else { "" }
        );
        for (d, n) in &self.dims {
            let _ = writeln!(out, "  {d}: {n}");
        }
        out
    }
}

/// One summand of a resolution term.
#[derive(Clone, Debug, Serialize)]
pub struct SummandView {
    pub index: String,
    pub comodule: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeView {
    pub degree: usize,
    pub term_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolveReport {
    pub vertex: String,
    pub side: String,
    pub truncation: usize,
    pub term0: String,
    pub term1: Vec<SummandView>,
    pub term2: Vec<SummandView>,
    pub complex: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex_witness: Option<String>,
    pub exactness: Verdict,
    pub exactness_degrees: Vec<DegreeView>,
    pub kernel_f: Vec<usize>,
    pub notes: Vec<String>,
}

impl ResolveReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::combine([self.complex, self.exactness])
    }
}

impl Report for ResolveReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} resolution fragment of S_{} up to degree {}", self.side, self.vertex, self.truncation);
        let _ = writeln!(out, "term0: {}", self.term0);
        let _ = writeln!(out, "term1:");
        for s in &self.term1 {
            let _ = writeln!(out, "  [{}] {}", s.index, s.comodule);
        }
        let _ = writeln!(out, "term2:");
        for s in &self.term2 {
            let _ = writeln!(out, "  [{}] {}", s.index, s.comodule);
        }
        let _ = writeln!(out, "g.f = 0: {}", self.complex.as_str());
        if let Some(w) = &self.complex_witness {
            let _ = writeln!(out, "  witness: {w}");
        }
        let _ = writeln!(out, "exactness at term1: {}", self.exactness.as_str());
        for d in &self.exactness_degrees {
            let _ = writeln!(
                out,
                "  degree {}: dim {}, im f {}, ker g {}{}",
                d.degree,
                d.term_dim,
                d.image_dim,
                d.kernel_dim,
                if d.exact { "" } else { "  MISMATCH" }
            );
        }
        if !self.kernel_f.is_empty() {
            let dims: Vec<String> = self.kernel_f.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "dim ker f per degree: {}", dims.join(" "));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// Summary of a parsed document.
#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub homogeneous: bool,
    pub max_relation_degree: usize,
    pub potential: bool,
}

impl Report for ValidateReport {
    fn text(&self) -> String {
        format!(
            "ok: {} vertices, {} arrows, {} relations ({}, max degree {}){}\n",
            self.vertices,
            self.arrows,
            self.relations,
            if self.homogeneous { "homogeneous" } else { "inhomogeneous" },
            self.max_relation_degree,
            if self.potential { ", potential present" } else { "" }
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationView {
    pub name: String,
    pub degree: usize,
    pub element: String,
}

/// A relation list that renders as input-language declarations.
#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub truncation: usize,
    pub approximate: bool,
    /// The full document in input syntax.
    pub document: String,
    pub relations: Vec<RelationView>,
}

impl Report for RelationsReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if self.approximate {
            let _ = writeln!(out, "# approximate mode: filtered ideal up to degree {}", self.truncation);
        }
        out.push_str(&self.document);
        out
    }
}

/// Error record for the structured format.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub error: String,
}

impl Report for ErrorReport {
    fn text(&self) -> String {
        format!("error: {}\n", self.error)
    }
}
