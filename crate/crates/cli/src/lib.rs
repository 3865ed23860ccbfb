//! Command-line front end: every library capability behind one binary.
//!
//! Exit status contract: 0 on success or a passing verification, 1 when a
//! verification suite fails or a collision expectation is missed, 2 on input
//! errors (bad flags, unreadable files, malformed diagrams).

use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};

use stringlink::{
    applicable_slides, conway_weight, find_adjacency_collisions, homfly_weight, normal_form,
    run_suite, ChordDiagram, Gf2Matrix, IntersectionGraph, SUITE_NAMES,
};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "sld",
    version,
    about = "Chord diagrams on string links: graphs, weights, rewriting, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a diagram file and report its shape
    Validate { file: String },
    /// Print the intersection graph (graph text, or DOT with --dot)
    Graph {
        file: String,
        /// Emit DOT instead of graph text
        #[arg(long)]
        dot: bool,
    },
    /// Print the adjacency matrix, rank, and determinant
    Adj { file: String },
    /// Print the Conway weight (0 or 1)
    Conway { file: String },
    /// Print the Homfly weight monomial
    Homfly { file: String },
    /// Rewrite a diagram to normal form
    #[command(name = "normal-form")]
    NormalForm {
        file: String,
        /// Also print the elementary slide trace
        #[arg(long)]
        trace: bool,
    },
    /// Stack the second diagram on top of the first
    Product { file1: String, file2: String },
    /// Print the coproduct as a formal sum
    Coproduct { file: String },
    /// List every diagram with the given strand and chord counts
    Enumerate {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        chords: usize,
        /// Keep only connected diagrams
        #[arg(long)]
        connected: bool,
    },
    /// Run a verification suite
    Verify {
        /// One of: conway2, knot-conway, homfly2, parity, congruence,
        /// semisymmetry, slides, fourterm, hom, bialgebra, normalform, all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        strands: usize,
        #[arg(long = "max-chords", default_value_t = 4)]
        max_chords: usize,
    },
    /// Group diagrams by adjacency class and report Conway collisions
    Collide {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        chords: usize,
        /// Matrix file of 0/1 rows; report the diagrams matching this class
        #[arg(long)]
        matrix: Option<String>,
    },
}

/// Runs the CLI against `args` (including the program name), writing normal
/// output to `out`. Returns the exit status.
pub fn run<W: Write>(args: &[String], out: &mut W) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, everything else is an
            // input error.
            let _ = write!(out, "{e}");
            return if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(cli, out) {
        Ok(status) => status,
        Err(msg) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn load_diagram(path: &str) -> Result<ChordDiagram, String> {
    let text = read_input(path)?;
    ChordDiagram::parse(&text).map_err(|e| format!("{path}: {e}"))
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<u8, String> {
    let w = |e: std::io::Error| format!("writing output: {e}");
    match cli.command {
        Command::Validate { file } => {
            let d = load_diagram(&file)?;
            writeln!(out, "strands={} chords={}", d.strand_count(), d.chord_count()).map_err(w)?;
            for s in 0..d.strand_count() {
                writeln!(out, "strand {}: {} endpoints", s + 1, d.strand(s).len()).map_err(w)?;
            }
            let parts = d.connected_components();
            writeln!(out, "components={}", parts.blocks.len()).map_err(w)?;
            writeln!(out, "slides={}", applicable_slides(&d).len()).map_err(w)?;
            writeln!(out, "ok").map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Graph { file, dot } => {
            let d = load_diagram(&file)?;
            let g = IntersectionGraph::from_diagram(&d);
            if dot {
                writeln!(out, "{}", g.to_dot()).map_err(w)?;
            } else {
                write!(out, "{}", g.text()).map_err(w)?;
            }
            Ok(EXIT_OK)
        }
        Command::Adj { file } => {
            let d = load_diagram(&file)?;
            let m = Gf2Matrix::adjacency(&IntersectionGraph::from_diagram(&d));
            if m.order() > 0 {
                writeln!(out, "{m}").map_err(w)?;
            }
            writeln!(out, "rank={}", m.rank()).map_err(w)?;
            writeln!(out, "det={}", m.det()).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Conway { file } => {
            let d = load_diagram(&file)?;
            writeln!(out, "{}", conway_weight(&d)).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Homfly { file } => {
            let d = load_diagram(&file)?;
            writeln!(out, "{}", homfly_weight(&d)).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::NormalForm { file, trace } => {
            let d = load_diagram(&file)?;
            let (nf, moves, summary) = normal_form(&d).map_err(|e| e.to_string())?;
            writeln!(out, "{}", nf.canonical_text()).map_err(w)?;
            writeln!(out, "{summary}").map_err(w)?;
            if trace {
                for step in &moves.steps {
                    writeln!(out, "{}", step.mv).map_err(w)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Product { file1, file2 } => {
            if file1 == "-" && file2 == "-" {
                return Err("at most one operand may read standard input".into());
            }
            let d1 = load_diagram(&file1)?;
            let d2 = load_diagram(&file2)?;
            let p = d1.stack_product(&d2).map_err(|e| e.to_string())?;
            writeln!(out, "{}", p.canonical_text()).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Coproduct { file } => {
            let d = load_diagram(&file)?;
            writeln!(out, "{}", d.coproduct()).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            strands,
            chords,
            connected,
        } => {
            if strands == 0 {
                return Err("--strands must be at least 1".into());
            }
            stringlink::enumerate::for_each_diagram(strands, chords, connected, |d| {
                let _ = writeln!(out, "{}", d.canonical_key());
            });
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            strands,
            max_chords,
        } => {
            if !SUITE_NAMES.contains(&suite.as_str()) {
                return Err(format!(
                    "unknown suite {suite:?}; expected one of {}",
                    SUITE_NAMES.join(", ")
                ));
            }
            let report = run_suite(&suite, strands, max_chords).map_err(|e| e.to_string())?;
            writeln!(out, "{report}").map_err(w)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Collide {
            strands,
            chords,
            matrix,
        } => {
            if strands == 0 {
                return Err("--strands must be at least 1".into());
            }
            if chords > 6 {
                return Err("--chords above 6 is not supported by the permutation scan".into());
            }
            let target = match &matrix {
                Some(path) => {
                    let text = read_input(path)?;
                    Some(Gf2Matrix::parse(&text).map_err(|e| format!("{path}: {e}"))?)
                }
                None => None,
            };
            let report = find_adjacency_collisions(strands, chords, target.as_ref());
            writeln!(
                out,
                "scan k={} n<={} diagrams={}",
                report.k, report.n_max, report.scanned
            )
            .map_err(w)?;
            if let Some(class) = &report.target {
                writeln!(
                    out,
                    "target class: conway=1 count={} conway=0 count={}",
                    class.count_one, class.count_zero
                )
                .map_err(w)?;
                for key in &class.conway_one {
                    writeln!(out, "conway=1 {key}").map_err(w)?;
                }
                for key in &class.conway_zero {
                    writeln!(out, "conway=0 {key}").map_err(w)?;
                }
                let hit = class.count_one > 0 && class.count_zero > 0;
                writeln!(out, "collision={}", if hit { "yes" } else { "no" }).map_err(w)?;
                Ok(if hit { EXIT_OK } else { EXIT_CHECK_FAILED })
            } else {
                writeln!(out, "collision classes={}", report.collisions.len()).map_err(w)?;
                for class in &report.collisions {
                    writeln!(
                        out,
                        "class (conway=1 count={}, conway=0 count={}):",
                        class.count_one, class.count_zero
                    )
                    .map_err(w)?;
                    for row in class.matrix.to_string().lines() {
                        writeln!(out, "  {row}").map_err(w)?;
                    }
                    for key in class.conway_one.iter().take(1) {
                        writeln!(out, "  conway=1 {key}").map_err(w)?;
                    }
                    for key in class.conway_zero.iter().take(1) {
                        writeln!(out, "  conway=0 {key}").map_err(w)?;
                    }
                }
                Ok(if report.collisions.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                })
            }
        }
    }
}
