//! Command-line front end: subcommands, option defaults and exit statuses.
//!
//! Exit statuses: 0 success or pass, 1 check failed, 2 input error,
//! 3 undetermined at the truncation degree.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cy::{check_component_sum, check_cy, Verdict};
use crate::error::{Error, Result};
use crate::input::{parse, InputDocument};
use crate::quiver::Quiver;
use crate::relations::{minimal_relations, RelationSet, TruncationMode};
use crate::report::{
    emit_report, DegreeView, ErrorReport, ExtReport, Format, RelationView, RelationsReport, Report, ResolveReport,
    SummandView, ValidateReport,
};
use crate::resolution::{
    build_resolution_fragment, build_right_fragment, ext_dims, hom_injectives, verify_complex,
    verify_exactness_middle, Side,
};
use crate::superpotential::derive_relations;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cyquiver", version, about = "Quivers with relations: resolutions, Ext tables and Calabi-Yau checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Print a minimal relation set generating the same ideal.
    Minrel {
        file: PathBuf,
        /// Truncation degree N; defaults to max(4, twice the top relation degree).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Build and verify the resolution fragment of a simple comodule.
    Resolve {
        file: PathBuf,
        /// Vertex whose simple comodule is resolved.
        #[arg(long)]
        vertex: String,
        /// Truncation degree N; defaults to max(4, twice the top relation degree).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Use right comodules.
        #[arg(long)]
        right: bool,
    },
    /// Ext dimensions between simple comodules.
    Ext { file: PathBuf },
    /// Graded dimensions of Hom(e_from C, e_to C).
    Hom {
        file: PathBuf,
        /// Source vertex.
        #[arg(long)]
        from: String,
        /// Target vertex.
        #[arg(long)]
        to: String,
        /// Truncation degree N; defaults to max(4, twice the top relation degree).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Check the Calabi-Yau conditions in dimension 0 to 3.
    Check {
        file: PathBuf,
        /// Calabi-Yau dimension, 0 to 3.
        #[arg(long)]
        dim: Option<u8>,
        /// Truncation degree N; defaults to max(4, twice the top relation degree).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Check every connected component separately.
        #[arg(long)]
        per_component: bool,
        /// Skip minimization of the relations.
        #[arg(long)]
        assume_minimal: bool,
    },
    /// Show the potential, or its cyclic derivatives as relation declarations.
    Potential {
        file: PathBuf,
        /// Print the cyclic derivatives as `rel` lines.
        #[arg(long)]
        derive: bool,
    },
}

impl Command {
    pub fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Minrel { file, .. }
            | Command::Resolve { file, .. }
            | Command::Ext { file }
            | Command::Hom { file, .. }
            | Command::Check { file, .. }
            | Command::Potential { file, .. } => file,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

fn status_for(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    }
}

/// `max(4, 2 * max relation degree)`.
pub fn default_truncation(rels: &RelationSet) -> usize {
    4.max(2 * rels.max_degree())
}

fn truncation(flag: Option<usize>, doc: &InputDocument, rels: &RelationSet) -> usize {
    flag.or(doc.options.truncation).unwrap_or_else(|| default_truncation(rels))
}

fn minimize(q: &Quiver, rels: &RelationSet, n: usize) -> Result<RelationSet> {
    let mode = if rels.is_homogeneous() {
        TruncationMode::Exact
    } else {
        TruncationMode::Filtered
    };
    minimal_relations(q, rels, n, mode)
}

fn with_relations(doc: &InputDocument, rels: &RelationSet) -> InputDocument {
    InputDocument {
        relations: rels.relations().to_vec(),
        ..doc.clone()
    }
}

fn relations_report(doc: &InputDocument, rels: &RelationSet, n: usize) -> RelationsReport {
    RelationsReport {
        truncation: n,
        approximate: rels.is_approximate(),
        document: with_relations(doc, rels).render(),
        relations: rels
            .relations()
            .iter()
            .map(|r| RelationView {
                name: r.name.clone(),
                degree: r.degree(),
                element: r.element.display(&doc.quiver).to_string(),
            })
            .collect(),
    }
}

fn ok<R: Report>(report: &R, format: Format, status: i32) -> Result<Outcome> {
    Ok(Outcome {
        output: emit_report(report, format),
        status,
    })
}

fn execute(command: &Command, doc: &InputDocument, format: Format) -> Result<Outcome> {
    let q = &doc.quiver;
    let rels = doc.relation_set()?;
    match command {
        Command::Validate { .. } => ok(
            &ValidateReport {
                vertices: q.vertex_count(),
                arrows: q.arrow_count(),
                relations: rels.len(),
                homogeneous: rels.is_homogeneous(),
                max_relation_degree: rels.max_degree(),
                potential: doc.potential.is_some(),
            },
            format,
            EXIT_OK,
        ),
        Command::Minrel { max_degree, .. } => {
            let n = truncation(*max_degree, doc, &rels);
            let minimal = minimize(q, &rels, n)?;
            ok(&relations_report(doc, &minimal, n), format, EXIT_OK)
        }
        Command::Resolve {
            vertex,
            max_degree,
            right,
            ..
        } => {
            let n = truncation(*max_degree, doc, &rels);
            let minimal = minimize(q, &rels, n)?;
            let frag = if *right {
                build_right_fragment(q, vertex, &minimal, n)?
            } else {
                build_resolution_fragment(q, vertex, &minimal, n)?
            };
            let comodule = |v| match frag.side() {
                Side::Left => format!("e_{}C", q.vertex_name(v)),
                Side::Right => format!("Ce_{}", q.vertex_name(v)),
            };
            let complex = verify_complex(&frag);
            let mut notes = Vec::new();
            let (exactness, degrees, kernel_f) = match verify_exactness_middle(&frag) {
                Ok(ex) => {
                    let verdict = if ex.passed() { Verdict::Pass } else { Verdict::Fail };
                    let degrees = ex
                        .degrees
                        .iter()
                        .map(|d| DegreeView {
                            degree: d.degree,
                            term_dim: d.term_dim,
                            image_dim: d.image_dim,
                            kernel_dim: d.kernel_dim,
                            exact: d.exact,
                        })
                        .collect();
                    (verdict, degrees, ex.kernel_f)
                }
                Err(Error::ApproximateMode) => {
                    notes.push(format!(
                        "approximate mode: relations are inhomogeneous, exactness is not certified (N = {n})"
                    ));
                    (Verdict::Undetermined, Vec::new(), Vec::new())
                }
                Err(e) => return Err(e),
            };
            let report = ResolveReport {
                vertex: vertex.clone(),
                side: if *right { "right" } else { "left" }.to_string(),
                truncation: n,
                term0: comodule(frag.vertex()),
                term1: frag
                    .term1()
                    .iter()
                    .map(|s| SummandView {
                        index: q.arrow_name(s.arrow).to_string(),
                        comodule: comodule(s.vertex),
                    })
                    .collect(),
                term2: frag
                    .term2()
                    .iter()
                    .map(|s| SummandView {
                        index: format!("{} = {}", s.relation.name, s.relation.element.display(q)),
                        comodule: comodule(s.vertex),
                    })
                    .collect(),
                complex: match (complex.passed(), frag.is_approximate()) {
                    (true, _) => Verdict::Pass,
                    // The truncated coalgebra is only an approximation here.
                    (false, true) => Verdict::Undetermined,
                    (false, false) => Verdict::Fail,
                },
                complex_witness: complex
                    .witness
                    .map(|w| format!("degree {}: g(f({})) = {}", w.degree, w.element, w.image)),
                exactness,
                exactness_degrees: degrees,
                kernel_f,
                notes,
            };
            let status = status_for(report.verdict());
            ok(&report, format, status)
        }
        Command::Ext { .. } => {
            let n = truncation(None, doc, &rels);
            let minimal = minimize(q, &rels, n)?;
            let table = ext_dims(q, &minimal)?;
            ok(&ExtReport::new(&table), format, EXIT_OK)
        }
        Command::Hom {
            from, to, max_degree, ..
        } => {
            let n = truncation(*max_degree, doc, &rels);
            let dims = hom_injectives(q, &rels, to, from, n)?;
            ok(&dims, format, EXIT_OK)
        }
        Command::Check {
            dim,
            max_degree,
            per_component,
            assume_minimal,
            ..
        } => {
            let dim = dim
                .or(doc.options.dimension)
                .ok_or_else(|| Error::InvalidInput("check needs --dim".into()))?;
            let n = truncation(*max_degree, doc, &rels);
            let rels = if *assume_minimal {
                rels.assume_minimal()
            } else {
                minimize(q, &rels, n)?
            };
            let report = if *per_component {
                check_component_sum(q, &rels, dim, n)?
            } else {
                check_cy(q, &rels, dim, n)?
            };
            ok(&report, format, status_for(report.verdict))
        }
        Command::Potential { derive, .. } => {
            let (name, w) = doc
                .potential
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("document has no potential".into()))?;
            if *derive {
                let derived = RelationSet::new(q, derive_relations(q, w))?;
                let n = truncation(None, doc, &derived);
                ok(&relations_report(doc, &derived, n), format, EXIT_OK)
            } else {
                let doc = InputDocument {
                    relations: Vec::new(),
                    potential: Some((name.clone(), w.symmetrized(q))),
                    ..doc.clone()
                };
                ok(&relations_report(&doc, &RelationSet::empty(), 0), format, EXIT_OK)
            }
        }
    }
}

/// Runs a command on a parsed document.
pub fn run(command: &Command, doc: &InputDocument, format: Format) -> Outcome {
    execute(command, doc, format).unwrap_or_else(|e| error_outcome(&e, format))
}

/// Parses `source` and runs the command; parse errors give status 2.
pub fn run_source(command: &Command, source: &str, format: Format) -> Outcome {
    match parse(source) {
        Ok(doc) => run(command, &doc, format),
        Err(e) => error_outcome(&e, format),
    }
}

pub fn error_outcome(e: &Error, format: Format) -> Outcome {
    Outcome {
        output: emit_report(&ErrorReport { error: e.to_string() }, format),
        status: EXIT_INPUT,
    }
}
