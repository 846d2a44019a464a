//! The `rdfe` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostic::Diagnostic;
use crate::diagram::{build_model, emit_dot, DotOptions};
use crate::graph::{merge, Dataset, Graph};
use crate::layers::extract_layer;
use crate::model::{Iri, TermError};
use crate::potential::{extract_profiles, lint, ExtensionVocabulary};
use crate::reasoner::{closure, RuleSet};
use crate::skos::{annotate_subclass_strategy, detect_owl_full, inventory, skosify};
use crate::turtle::{serialize, serialize_graph, TurtleParser};
use crate::vocab::{skos, RDFE_DEFAULT_BASE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rdfe",
    version,
    about = "Turtle toolkit for potential relations, layers, diagrams and OWL/SKOS bridging"
)]
struct Cli {
    /// How diagnostics are written to standard error.
    #[arg(long, value_enum, default_value_t = DiagFormat::Text, global = true)]
    diag_format: DiagFormat,

    /// Namespace of the rdfe vocabulary.
    #[arg(long, env = "RDFE_BASE", global = true, value_parser = parse_iri)]
    vocab_base: Option<Iri>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagFormat {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagramFormat {
    Dot,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Turtle or TriG files, merged in order; `-` reads standard input.
    #[arg(required = true)]
    inputs: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the inputs and print them as canonical Turtle.
    Validate(Inputs),
    /// Print the RDFS closure of the inputs.
    Infer {
        /// Comma-separated rule names, or `all`.
        #[arg(long, default_value = "all")]
        rules: RuleSet,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Check data against potential relations.
    Lint {
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print the triples at or above a fundamentality level.
    Layer {
        #[arg(long, allow_negative_numbers = true)]
        min: f64,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Turn an OWL class hierarchy into a SKOS concept scheme.
    Skosify {
        #[arg(long, value_parser = parse_iri)]
        scheme: Iri,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Type every named class as a skos:Concept too.
    AnnotateSkosSubclass(Inputs),
    /// Report terms used both as classes and as individuals.
    CheckOwlFull(Inputs),
    /// Draw the inputs as a DOT diagram.
    Diagram {
        #[arg(long, value_enum, default_value_t = DiagramFormat::Dot)]
        format: DiagramFormat,
        /// Append a legend of the arrow styles.
        #[arg(long)]
        legend: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        inputs: Inputs,
    },
}

fn parse_iri(s: &str) -> Result<Iri, TermError> {
    Iri::new(s)
}

/// Fatal problems that stop a run with exit code 2.
#[derive(Debug)]
struct Failure(String);

struct Session<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    parser: TurtleParser,
    diagnostics: Vec<Diagnostic>,
}

impl Session<'_> {
    fn read(&mut self, input: &str) -> Result<(String, Option<Iri>), Failure> {
        if input == "-" {
            if self.stdin_used {
                return Err(Failure("standard input given more than once".to_owned()));
            }
            self.stdin_used = true;
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure(format!("-: {e}")))?;
            return Ok((text, None));
        }
        let text = std::fs::read_to_string(input).map_err(|e| Failure(format!("{input}: {e}")))?;
        Ok((text, file_base(Path::new(input))))
    }

    fn load_one(&mut self, input: &str) -> Result<Dataset, Failure> {
        let (text, base) = self.read(input)?;
        self.parser
            .clone()
            .with_base(base)
            .parse(&text)
            .map_err(|e| Failure(format!("{input}: {e}")))
    }

    fn load(&mut self, inputs: &[String]) -> Result<Dataset, Failure> {
        let mut dataset = Dataset::new();
        for input in inputs {
            let next = self.load_one(input)?;
            let merged = merge(&dataset, &next);
            self.diagnostics.extend(merged.warnings);
            dataset = merged.dataset;
        }
        Ok(dataset)
    }
}

fn file_base(path: &Path) -> Option<Iri> {
    let absolute = std::fs::canonicalize(path).ok()?;
    let url = url::Url::from_file_path(absolute).ok()?;
    Iri::new(url.as_str()).ok()
}

fn with_skos(prefixes: &BTreeMap<String, Iri>) -> BTreeMap<String, Iri> {
    let mut out = prefixes.clone();
    if !out.values().any(|ns| ns.as_str() == skos::NS) {
        out.entry("skos".to_owned())
            .or_insert_with(|| Iri::new(skos::NS).expect("namespace"));
    }
    out
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let base = cli
        .vocab_base
        .clone()
        .unwrap_or_else(|| Iri::new(RDFE_DEFAULT_BASE).expect("default base"));
    let vocab = ExtensionVocabulary::new(base.clone());
    let mut session = Session {
        stdin,
        stdin_used: false,
        parser: TurtleParser::new().with_builtin_prefix("rdfe", base),
        diagnostics: Vec::new(),
    };

    let outcome = execute(&cli.command, &vocab, &mut session);
    let mut output = match outcome {
        Ok(output) => output,
        Err(Failure(message)) => {
            write_diagnostics(stderr, &session.diagnostics, cli.diag_format);
            let _ = writeln!(stderr, "error: {message}");
            return EXIT_USAGE;
        }
    };
    if let Command::Diagram {
        output: Some(path), ..
    } = &cli.command
    {
        if let Err(e) = std::fs::write(path, &output) {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
        output.clear();
    }
    let _ = stdout.write_all(output.as_bytes());
    let _ = stdout.flush();
    write_diagnostics(stderr, &session.diagnostics, cli.diag_format);
    if session.diagnostics.iter().any(Diagnostic::is_error) {
        EXIT_DIAGNOSTICS
    } else {
        EXIT_OK
    }
}

fn write_diagnostics(stderr: &mut dyn Write, diagnostics: &[Diagnostic], format: DiagFormat) {
    for d in diagnostics {
        let line = match format {
            DiagFormat::Text => d.to_text(),
            DiagFormat::Records => d.to_record(),
        };
        let _ = writeln!(stderr, "{line}");
    }
}

fn execute(
    command: &Command,
    vocab: &ExtensionVocabulary,
    session: &mut Session,
) -> Result<String, Failure> {
    match command {
        Command::Validate(i) => {
            let dataset = session.load(&i.inputs)?;
            Ok(serialize(&dataset))
        }
        Command::Infer { rules, inputs } => {
            let dataset = session.load(&inputs.inputs)?;
            Ok(serialize_graph(
                &closure(&dataset.flatten(), rules),
                &dataset.prefixes,
            ))
        }
        Command::Lint { ontology, inputs } => {
            let dataset = session.load(&inputs.inputs)?;
            let ontology = match ontology {
                Some(path) => session.load_one(&path.to_string_lossy())?.flatten(),
                None => Graph::new(),
            };
            session
                .diagnostics
                .extend(lint(&dataset.flatten(), &ontology, vocab));
            Ok(String::new())
        }
        Command::Layer { min, inputs } => {
            let dataset = session.load(&inputs.inputs)?;
            match extract_layer(&dataset, *min, vocab) {
                Ok(view) => {
                    let mut out = serialize_graph(&view.kept, &dataset.prefixes);
                    out.push_str(&format!("# {}\n", view.summary()));
                    Ok(out)
                }
                Err(e) => {
                    session.diagnostics.extend(e.diagnostics);
                    Ok(String::new())
                }
            }
        }
        Command::Skosify { scheme, inputs } => {
            let dataset = session.load(&inputs.inputs)?;
            Ok(serialize_graph(
                &skosify(&dataset.flatten(), scheme),
                &with_skos(&dataset.prefixes),
            ))
        }
        Command::AnnotateSkosSubclass(i) => {
            let dataset = session.load(&i.inputs)?;
            let (graph, diagnostics) = annotate_subclass_strategy(&dataset.flatten());
            session.diagnostics.extend(diagnostics);
            Ok(serialize_graph(&graph, &with_skos(&dataset.prefixes)))
        }
        Command::CheckOwlFull(i) => {
            let dataset = session.load(&i.inputs)?;
            let report = detect_owl_full(&dataset.flatten());
            let mut out = String::new();
            for f in &report.findings {
                let class: Vec<_> = f.class_evidence.iter().map(|e| e.tag()).collect();
                let individual: Vec<_> = f.individual_evidence.iter().map(Iri::to_string).collect();
                out.push_str(&format!(
                    "{}\tclass-evidence={}\tinstance-of={}\tvia-skos-entailment={}\n",
                    f.term,
                    class.join(","),
                    individual.join(","),
                    f.via_skos_entailment
                ));
            }
            session.diagnostics.extend(report.diagnostics);
            Ok(out)
        }
        Command::Diagram {
            format: DiagramFormat::Dot,
            legend,
            inputs,
            ..
        } => {
            let dataset = session.load(&inputs.inputs)?;
            let flat = dataset.flatten();
            let model = build_model(&dataset, &extract_profiles(&flat, vocab), &inventory(&flat));
            session
                .diagnostics
                .extend(model.diagnostics.iter().cloned());
            Ok(emit_dot(&model, DotOptions { legend: *legend }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["rdfe"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    const DOG: &str = "@prefix ex: <http://example.org/> .\n\
                       ex:Dog a owl:Class . ex:rex a ex:Dog . ex:Fido a ex:Dog .";

    #[test]
    fn validate_from_stdin() {
        let (code, out, err) = invoke(&["validate", "-"], DOG);
        assert_eq!(code, 0, "{err}");
        assert!(out.starts_with("@prefix ex: <http://example.org/> .\n"));
        assert!(err.is_empty());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(invoke(&["frobnicate", "-"], "").0, 2);
        assert_eq!(invoke(&["validate"], "").0, 2);
        assert_eq!(invoke(&["validate", "--bogus", "-"], "").0, 2);
        assert_eq!(invoke(&["infer", "--rules", "nope", "-"], "").0, 2);
        assert_eq!(invoke(&["skosify", "-"], DOG).0, 2);
        assert_eq!(invoke(&["--help"], "").0, 0);
    }

    #[test]
    fn parse_failure() {
        let (code, out, err) = invoke(&["validate", "-"], "ex:a ex:b");
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("line 1"));
    }

    #[test]
    fn infer_with_selected_rules() {
        let src = "@prefix ex: <http://example.org/> .\n\
                   ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C . ex:x a ex:A .";
        let (code, out, _) = invoke(&["infer", "--rules", "subclass-transitivity", "-"], src);
        assert_eq!(code, 0);
        assert!(out.contains("rdfs:subClassOf ex:B , ex:C") || out.contains("ex:C"));
        assert!(!out.contains("ex:x a ex:A , ex:B"));
        let (_, all, _) = invoke(&["infer", "-"], src);
        assert!(all.contains("ex:x a ex:A , ex:B , ex:C"));
    }

    #[test]
    fn layer_above_everything() {
        let src = "@prefix ex: <http://example.org/> .\nex:a rdfe:fundamental 5 . ex:a ex:p ex:b .";
        let (code, out, _) = invoke(&["layer", "--min", "999999", "-"], src);
        assert_eq!(code, 0);
        assert!(out.ends_with("# kept=0 dropped=2 dangling=0\n"));
        let (code, _, err) = invoke(
            &["layer", "--min", "-3", "-"],
            "<http://e/a> rdfe:fundamental \"x\" .",
        );
        assert_eq!(code, 1);
        assert!(err.contains("LAYER001"));
    }

    #[test]
    fn check_owl_full_reports_in_both_formats() {
        let src = format!("{DOG}\nex:rex a owl:Class .");
        let (code, out, err) = invoke(&["check-owl-full", "-"], &src);
        assert_eq!(code, 1);
        assert_eq!(out.lines().count(), 1);
        assert_eq!(err.lines().count(), 1);
        assert!(!out.contains("OWLFULL"));
        let (code, _, records) = invoke(&["--diag-format", "records", "check-owl-full", "-"], &src);
        assert_eq!(code, 1);
        let record: serde_json::Value = serde_json::from_str(records.trim()).unwrap();
        assert_eq!(record["code"], "OWLFULL001");
    }

    #[test]
    fn vocab_base_rebinds_prefix() {
        let src = "<http://e/p> rdfe:potentialDomain <http://e/C> . <http://e/x> <http://e/p> <http://e/y> .";
        let (_, _, default) = invoke(&["lint", "-"], src);
        assert!(default.contains("RDFE003"));
        let (_, _, custom) = invoke(&["--vocab-base", "http://other.org/v#", "lint", "-"], src);
        assert!(custom.contains("RDFE003"));
        let (code, out, _) = invoke(
            &["--vocab-base", "http://other.org/v#", "validate", "-"],
            src,
        );
        assert_eq!(code, 0);
        assert!(out.contains("<http://other.org/v#potentialDomain>"));
    }

    #[test]
    fn diagram_to_stdout() {
        let (code, out, _) = invoke(&["diagram", "--format", "dot", "--legend", "-"], DOG);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph {"));
        assert!(out.contains("cluster_legend"));
        assert_eq!(invoke(&["diagram", "--format", "svg", "-"], DOG).0, 2);
    }
}
