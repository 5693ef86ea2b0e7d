//! Command-line front end. `run` renders a report; `main` only prints it.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{format_table, AlgebraSpec, FrobeniusAlgebra};
use crate::canonical::verify_basis;
use crate::cube::build_complex;
use crate::diagram::{Coloring, LinkDiagram, Orientation};
use crate::error::{invalid, violation, Result};
use crate::homology::homology;
use crate::poset::enhance;
use crate::ring::RingSpec;

#[derive(Debug, Parser)]
#[command(name = "khdegen", version, about = "Khovanov-type homology over rank-2 Frobenius algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the diagram's complex, per degree.
    Homology(RunConfig),
    /// Split the enhanced-state poset into Boolean components.
    Decompose(RunConfig),
    /// Canonical generators, one per orientation.
    Generators(RunConfig),
    /// Dump the chain groups and differential matrices.
    Complex(RunConfig),
    /// List faces and the checkerboard colouring.
    Faces(RunConfig),
    /// Check the Frobenius axioms of the algebra.
    Validate(AlgebraArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Algebra file (`key = values` lines).
    #[arg(long, conflicts_with = "preset")]
    pub algebra: Option<PathBuf>,

    /// Built-in algebra: lee, barnatan, split, khovanov.
    #[arg(long)]
    pub preset: Option<String>,

    /// Z, Q or Fp; defaults to the algebra's own ring, then Q.
    #[arg(long)]
    pub ring: Option<String>,

    /// Prime modulus for --ring Fp.
    #[arg(long)]
    pub modulus: Option<u64>,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    /// PD file.
    pub pd: PathBuf,

    #[command(flatten)]
    pub algebra: AlgebraArgs,

    /// Face id to treat as unbounded.
    #[arg(long)]
    pub outer_face: Option<usize>,

    /// One bit per component, `1` reverses it.
    #[arg(long)]
    pub base_orientation: Option<String>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl AlgebraArgs {
    pub fn load(&self) -> Result<(String, FrobeniusAlgebra)> {
        let (name, spec) = match (&self.algebra, &self.preset) {
            (Some(path), _) => (path.display().to_string(), AlgebraSpec::parse(&std::fs::read_to_string(path)?)?),
            (None, Some(p)) => (p.clone(), AlgebraSpec::preset(p)?),
            (None, None) => return Err(invalid!("one of --algebra or --preset is required")),
        };
        let ring = match &self.ring {
            Some(r) => RingSpec::from_name(r, self.modulus)?,
            None if self.modulus.is_some() => return Err(invalid!("--modulus needs --ring Fp")),
            None => spec.ring.unwrap_or(RingSpec::Rationals),
        };
        Ok((name, spec.instantiate(ring)?))
    }
}

struct Loaded {
    diagram: LinkDiagram,
    algebra_name: String,
    algebra: FrobeniusAlgebra,
    coloring: Coloring,
    base: Orientation,
}

impl RunConfig {
    fn load(&self) -> Result<Loaded> {
        let diagram = LinkDiagram::from_file(&self.pd)?;
        let (algebra_name, algebra) = self.algebra.load()?;
        let coloring = diagram.checkerboard(self.outer_face)?;
        let base = match &self.base_orientation {
            None => Orientation::forward(diagram.component_count()),
            Some(bits) => {
                let o = Orientation::from_bits(bits).ok_or_else(|| invalid!("malformed orientation '{bits}'"))?;
                if o.0.len() != diagram.component_count() {
                    return Err(invalid!(
                        "orientation '{bits}' has {} bits, diagram has {} components",
                        o.0.len(),
                        diagram.component_count()
                    ));
                }
                o
            }
        };
        Ok(Loaded { diagram, algebra_name, algebra, coloring, base })
    }

    fn header(&self, l: &Loaded) -> String {
        format!(
            "diagram: {}\nalgebra: {}\nring: {}\ncrossings: {}\ncomponents: {}\nbase orientation: {}\n",
            self.pd.display(),
            l.algebra_name,
            l.algebra.ring.name(),
            l.diagram.crossing_count(),
            l.diagram.component_count(),
            l.base
        )
    }

    fn text_only(&self, what: &str) -> Result<()> {
        if self.format == Format::Dot {
            return Err(invalid!("--format dot is only available for decompose, not {what}"));
        }
        Ok(())
    }
}

pub fn cmd_homology(cfg: &RunConfig) -> Result<String> {
    cfg.text_only("homology")?;
    let l = cfg.load()?;
    let c = build_complex(&l.diagram, &l.algebra, Some(&l.base))?;
    let h = homology(&c.complex)?;
    Ok(format!("{}{h}\n", cfg.header(&l)))
}

pub fn cmd_decompose(cfg: &RunConfig) -> Result<String> {
    let l = cfg.load()?;
    let p = enhance(&l.diagram, &l.algebra, Some(&l.base))?;
    let dec = p.decompose()?;
    p.check_block_diagonal(&dec)?;
    for comp in &dec.components {
        p.component_homology(comp)?;
    }
    let generators = p.degenerate_generators()?;
    let h = homology(&p.complex.complex)?;
    if h.total_free() != generators.len() || h.has_torsion() {
        return Err(violation!(
            "{} rank-0 components but homology has free rank {} (torsion: {})",
            generators.len(),
            h.total_free(),
            h.has_torsion()
        ));
    }
    if cfg.format == Format::Dot {
        return Ok(p.to_dot(&dec));
    }
    let mut out = cfg.header(&l);
    let lattice_nodes: usize = dec.components.iter().map(|c| 1usize << c.rank).sum();
    writeln!(out, "nodes: {}", p.nodes.len()).unwrap();
    writeln!(out, "edges: {}", p.edges.len()).unwrap();
    writeln!(out, "census: {}", dec.census_string()).unwrap();
    writeln!(out, "sum of 2^rank: {lattice_nodes}").unwrap();
    writeln!(out, "positive-rank components acyclic: yes").unwrap();
    writeln!(out, "homology free rank: {}", h.total_free()).unwrap();
    writeln!(out, "components:").unwrap();
    for (k, comp) in dec.components.iter().enumerate() {
        let base = &p.nodes[comp.base];
        let crossings: Vec<String> =
            (0..p.crossings()).filter(|c| comp.arc_set >> c & 1 == 1).map(|c| (c + 1).to_string()).collect();
        writeln!(
            out,
            "  {k}: rank={} base={} degree={} arc-set={{{}}}",
            comp.rank,
            p.name(base),
            p.complex.degree_of(base),
            crossings.join(",")
        )
        .unwrap();
    }
    Ok(out)
}

pub fn cmd_generators(cfg: &RunConfig) -> Result<String> {
    cfg.text_only("generators")?;
    let l = cfg.load()?;
    let report = verify_basis(&l.diagram, &l.algebra, &l.coloring, &l.base)?;
    let mut out = cfg.header(&l);
    for g in &report.generators {
        writeln!(out, "{}", g.report_line(&l.diagram)).unwrap();
    }
    writeln!(out, "generators: {}", report.generators.len()).unwrap();
    writeln!(out, "homology free rank: {}", report.homology.total_free()).unwrap();
    writeln!(out, "cycles: yes").unwrap();
    writeln!(out, "independent in homology: yes").unwrap();
    Ok(out)
}

pub fn cmd_complex(cfg: &RunConfig) -> Result<String> {
    cfg.text_only("complex")?;
    let l = cfg.load()?;
    let c = build_complex(&l.diagram, &l.algebra, Some(&l.base))?;
    let mut out = cfg.header(&l);
    for degree in c.complex.degrees() {
        let names: Vec<String> = c.basis(degree).iter().map(|e| c.name(e)).collect();
        writeln!(out, "C^{degree} ({}): {}", names.len(), names.join(" ")).unwrap();
    }
    for degree in c.complex.degrees() {
        if let Some(d) = c.differential(degree) {
            writeln!(out, "d^{degree} ({}x{}):", d.rows(), d.cols()).unwrap();
            out.push_str(&d.to_string());
        }
    }
    Ok(out)
}

pub fn cmd_faces(cfg: &RunConfig) -> Result<String> {
    cfg.text_only("faces")?;
    let diagram = LinkDiagram::from_file(&cfg.pd)?;
    let col = diagram.checkerboard(cfg.outer_face)?;
    let mut out = String::new();
    writeln!(out, "faces: {}", col.faces.len()).unwrap();
    writeln!(out, "outer: {}", col.outer).unwrap();
    for f in &col.faces {
        let arcs: Vec<String> =
            f.darts.iter().map(|d| format!("{}{}", if d.rev { "-" } else { "+" }, diagram.arc_id(d.arc))).collect();
        writeln!(out, "face {}: piece={} shade={} boundary={}", f.id, f.piece + 1, col.shade[f.id], arcs.join(" "))
            .unwrap();
    }
    Ok(out)
}

pub fn cmd_validate(args: &AlgebraArgs) -> Result<String> {
    let (name, alg) = args.load()?;
    let report = alg.validate();
    let mut out = format!("algebra: {name}\nring: {}\nbasis: {} {}\n", alg.ring.name(), alg.basis[0], alg.basis[1]);
    writeln!(out, "{report}").unwrap();
    writeln!(out, "diagonal: {}", if alg.is_diagonal() { "yes" } else { "no" }).unwrap();
    if report.passed() {
        let comult = if alg.is_diagonal() { alg.derive_comultiplication()? } else { alg.comult_table()? };
        writeln!(out, "comultiplication: {}", format_table(&comult)).unwrap();
    }
    report.into_result()?;
    Ok(out)
}

/// Runs one command and writes its report to `--output` or returns it.
pub fn run(cli: &Cli) -> Result<Option<String>> {
    let (text, output) = match &cli.command {
        Command::Homology(c) => (cmd_homology(c)?, &c.algebra.output),
        Command::Decompose(c) => (cmd_decompose(c)?, &c.algebra.output),
        Command::Generators(c) => (cmd_generators(c)?, &c.algebra.output),
        Command::Complex(c) => (cmd_complex(c)?, &c.algebra.output),
        Command::Faces(c) => (cmd_faces(c)?, &c.algebra.output),
        Command::Validate(a) => (cmd_validate(a)?, &a.output),
    };
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
