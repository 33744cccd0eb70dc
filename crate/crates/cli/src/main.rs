mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use petalknot::invariants::{alexander, fingerprint, Fingerprint};
use petalknot::resolve::{resolve, reverse_petal_diagram, PerturbationSchedule};
use petalknot::simplify::{diagram_pd, reduction_stages};
use petalknot::tablekit::{classify, classify_checkpointed, enumerate_classes, KnotTable};
use petalknot::unknot::{unknotting_bound, unknotting_sequence, UnknottingCertificate};
use petalknot::{Error, PetalPermutation, PlanarDiagram, Result, UbercrossingDiagram};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "petalknot", version, about = "Petal diagrams, übercrossing diagrams and knot invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Seed for the perturbation schedule used when resolving diagrams.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Recompute under three seeds and fail with exit code 4 on disagreement.
    #[arg(long, global = true)]
    self_check: bool,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Identify the knot of a petal permutation.
    Identify { perm: String },
    /// Invariants of the resolved diagram of a permutation or diagram file.
    Invariants {
        perm: Option<String>,
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Crossing counts through the reduction of a petal diagram.
    Reduce { perm: String },
    /// Greedy unknotting certificate, or replay of a saved one.
    Unknot {
        perm: Option<String>,
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Connected sum of the pre-petal diagrams of two or more permutations.
    Compose {
        #[arg(num_args = 2.., required = true)]
        perms: Vec<String>,
    },
    /// One representative per equivalence class at petal number `p`.
    Enumerate { p: usize },
    /// Knot census over all classes at petal number `p`.
    Classify {
        p: usize,
        /// Largest p run without --long.
        #[arg(long, default_value_t = 7)]
        p_cap: usize,
        /// Allow p above the cap.
        #[arg(long)]
        long: bool,
        #[arg(long, default_value_t = 24)]
        budget: usize,
        /// Directory for resumable shard results.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        shards: usize,
    },
    /// PD from the sideways drawing of a petal diagram.
    ReversePetal { perm: String },
    /// Diagram of a permutation or diagram file as SVG or JSON.
    Export {
        perm: Option<String>,
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// Export the pre-petal diagram (top strand unfolded).
        #[arg(long)]
        unfold: bool,
    },
}

impl Command {
    fn formats(&self) -> &'static [Format] {
        use Format::*;
        match self {
            Command::Enumerate { .. } | Command::Classify { .. } => &[Json, Csv, Text],
            Command::Export { .. } => &[Svg, Json],
            _ => &[Json, Text],
        }
    }
}

/// A command's result in every format it supports.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    svg: Option<String>,
}

impl Report {
    fn new(mut json: Value, text: String) -> Self {
        if let Value::Object(map) = &mut json {
            map.insert("schema".into(), json!(1));
        }
        Report { json, text, csv: None, svg: None }
    }
}

fn perm(text: &str) -> Result<PetalPermutation> {
    PetalPermutation::parse(text)
}

fn one_input(perm_arg: &Option<String>, file: &Option<PathBuf>) -> Result<UbercrossingDiagram> {
    match (perm_arg, file) {
        (Some(p), None) => Ok(UbercrossingDiagram::from_petal(&perm(p)?)),
        (None, Some(f)) => UbercrossingDiagram::from_json(&std::fs::read_to_string(f)?),
        _ => Err(Error::Parse("give exactly one of a permutation or --diagram".into())),
    }
}

fn fingerprint_json(f: &Fingerprint) -> Value {
    serde_json::to_value(f.to_json()).expect("fingerprints serialize")
}

fn fingerprint_text(f: &Fingerprint) -> String {
    format!(
        "determinant  {}\nalexander    {}\njones        {}\n",
        f.determinant,
        f.alexander.display_with("t", 1),
        f.jones.display_with("t", 2)
    )
}

/// Fingerprints of `d` resolved under `seed`, `seed + 1` and `seed + 2`
/// must equal `want`.
fn self_check(d: &UbercrossingDiagram, seed: u64, want: &Fingerprint) -> Result<()> {
    for s in seed..seed + 3 {
        let pd = resolve(d, &PerturbationSchedule::seeded(d.n(), s))?;
        let same = match fingerprint(&pd) {
            Ok(f) => &f == want,
            // Jones is out of budget on the raw resolution; compare Alexander
            Err(Error::BudgetExceeded { .. }) => alexander(&pd)? == want.alexander,
            Err(e) => return Err(e),
        };
        if !same {
            return Err(Error::Verification(format!("seed {s} gives a different fingerprint")));
        }
    }
    Ok(())
}

fn identify(cli: &Cli, text: &str) -> Result<Report> {
    let sigma = perm(text)?;
    let table = KnotTable::load()?;
    let d = UbercrossingDiagram::from_petal(&sigma);
    let pd = petalknot::petal_reduced_diagram(&sigma)?;
    let f = fingerprint(&pd)?;
    if cli.self_check {
        self_check(&d, cli.seed, &f)?;
    }
    let cert = unknotting_sequence(&sigma);
    cert.verify()?;
    let id = table.identify(&f);
    let name = id.as_ref().map(|i| i.name());
    let json = json!({
        "permutation": sigma,
        "knot": name,
        "mirrored": id.as_ref().map(|i| i.mirrored),
        "fingerprint": fingerprint_json(&f),
        "strands": d.n(),
        "reduced_crossings": pd.crossing_count(),
        "unknotting_cost": cert.total_cost,
        "unknotting_bound": unknotting_bound(sigma.p())?,
    });
    let text = format!(
        "permutation  {sigma}\nknot         {}\nstrands      {}\ncrossings    {}\nunknot cost  {} (bound {})\n{}",
        name.as_deref().unwrap_or("not in table"),
        d.n(),
        pd.crossing_count(),
        cert.total_cost,
        unknotting_bound(sigma.p())?,
        fingerprint_text(&f)
    );
    Ok(Report::new(json, text))
}

fn invariants(cli: &Cli, p: &Option<String>, file: &Option<PathBuf>) -> Result<Report> {
    let d = one_input(p, file)?;
    let pd = resolve(&d, &PerturbationSchedule::seeded(d.n(), cli.seed))?;
    let f = fingerprint(&pd)?;
    if cli.self_check {
        self_check(&d, cli.seed, &f)?;
    }
    let json = json!({
        "strands": d.n(),
        "crossings": pd.crossing_count(),
        "writhe": pd.writhe(),
        "fingerprint": fingerprint_json(&f),
        "pd": pd,
    });
    let text = format!("strands      {}\ncrossings    {}\nwrithe       {}\n{}", d.n(), pd.crossing_count(), pd.writhe(), fingerprint_text(&f));
    Ok(Report::new(json, text))
}

fn reduce(cli: &Cli, text: &str) -> Result<Report> {
    let sigma = perm(text)?;
    let stages = reduction_stages(&sigma)?;
    let counts: Vec<usize> = stages.iter().map(PlanarDiagram::crossing_count).collect();
    let last = stages.last().expect("at least two stages");
    if cli.self_check {
        let f = fingerprint(last)?;
        self_check(&UbercrossingDiagram::from_petal(&sigma), cli.seed, &f)?;
    }
    let json = json!({
        "permutation": sigma,
        "counts": counts,
        "pd": last,
        "gauss": last.gauss_code().to_text(),
    });
    let text = format!(
        "permutation  {sigma}\ncrossings    {}\ngauss        {}\n",
        counts.iter().map(usize::to_string).collect::<Vec<_>>().join(" -> "),
        last.gauss_code().to_text()
    );
    Ok(Report::new(json, text))
}

fn unknot(p: &Option<String>, replay: &Option<PathBuf>) -> Result<Report> {
    let cert = match (p, replay) {
        (Some(p), None) => unknotting_sequence(&perm(p)?),
        (None, Some(f)) => UnknottingCertificate::from_json(&std::fs::read_to_string(f)?)?,
        _ => return Err(Error::Parse("give exactly one of a permutation or --replay".into())),
    };
    cert.verify()?;
    let bound = unknotting_bound(cert.initial.p())?;
    let mut json = cert.to_json();
    json["bound"] = json!(bound);
    json["verified"] = json!(true);
    let moves: Vec<String> = cert.moves.iter().map(|m| format!("  {m:?}")).collect();
    let text = format!(
        "permutation  {}\ncost         {} (bound {bound})\nfinal        {}\nmoves\n{}\n",
        cert.initial,
        cert.total_cost,
        cert.final_perm,
        moves.join("\n")
    );
    Ok(Report::new(json, text))
}

fn compose(perms: &[String]) -> Result<Report> {
    let sigmas = perms.iter().map(|p| perm(p)).collect::<Result<Vec<_>>>()?;
    let parts = sigmas
        .iter()
        .map(|s| UbercrossingDiagram::from_petal(s).unfold_top())
        .collect::<Result<Vec<_>>>()?;
    let mut acc = parts[0].clone();
    for part in &parts[1..] {
        acc = acc.compose_simple(part)?;
    }
    let f = fingerprint(&diagram_pd(&acc)?)?;
    let mut product = Fingerprint::unknot();
    for part in &parts {
        product = product.compose(&fingerprint(&diagram_pd(part)?)?);
    }
    if f != product {
        return Err(Error::Verification("composite fingerprint is not the product of the summands".into()));
    }
    let json = json!({
        "permutations": sigmas,
        "strands": acc.n(),
        "fingerprint": fingerprint_json(&f),
        "diagram": acc.to_json(),
    });
    let text = format!("strands      {}\n{}", acc.n(), fingerprint_text(&f));
    Ok(Report::new(json, text))
}

fn enumerate(p: usize) -> Result<Report> {
    let reps = enumerate_classes(p)?;
    let json = json!({ "p": p, "count": reps.len(), "representatives": reps });
    let lines: Vec<String> = reps.iter().map(ToString::to_string).collect();
    let mut report = Report::new(json, lines.join("\n") + "\n");
    report.csv = Some(format!("representative\n{}\n", lines.iter().map(|l| format!("\"{l}\"")).collect::<Vec<_>>().join("\n")));
    Ok(report)
}

fn run_classify(cli: &Cli, p: usize, cap: usize, long: bool, budget: usize, dir: &Option<PathBuf>, shards: usize) -> Result<Report> {
    if p > cap && !long {
        return Err(Error::Unsupported(format!("p = {p} is above the cap {cap}; pass --long to run it")));
    }
    let table = KnotTable::load()?;
    if cli.verbose {
        eprintln!("classifying p = {p}");
    }
    let c = match dir {
        Some(d) => classify_checkpointed(p, budget, &table, d, shards)?,
        None => classify(p, budget, &table)?,
    };
    let mut json = c.to_json();
    json["schema"] = json!(1);
    let lines: Vec<String> = c
        .rows
        .iter()
        .map(|r| {
            let name = r.knot.clone().or_else(|| r.flag.clone().map(|f| format!("flagged: {f}"))).unwrap_or_else(|| "unidentified".into());
            format!("{:<14} {:>6}  {}", name, r.class_count, r.example)
        })
        .collect();
    let text = format!("p = {p}, {} classes\n{}\n", c.total_classes, lines.join("\n"));
    let mut report = Report { json, text, csv: None, svg: None };
    report.csv = Some(c.to_csv()?);
    Ok(report)
}

fn reverse_petal(cli: &Cli, text: &str) -> Result<Report> {
    let sigma = perm(text)?;
    let pd = reverse_petal_diagram(&sigma)?;
    let f = fingerprint(&pd)?;
    if cli.self_check {
        self_check(&UbercrossingDiagram::from_petal(&sigma), cli.seed, &f)?;
    }
    let json = json!({ "permutation": sigma, "crossings": pd.crossing_count(), "pd": pd, "fingerprint": fingerprint_json(&f) });
    let text = format!("crossings    {}\ngauss        {}\n{}", pd.crossing_count(), pd.gauss_code().to_text(), fingerprint_text(&f));
    Ok(Report::new(json, text))
}

fn export(p: &Option<String>, file: &Option<PathBuf>, unfold: bool) -> Result<Report> {
    let mut d = one_input(p, file)?;
    if unfold {
        d = d.unfold_top()?;
    }
    let mut report = Report::new(json!({ "diagram": d.to_json() }), String::new());
    report.svg = Some(svg::render(&d));
    Ok(report)
}

fn run(cli: &Cli) -> Result<Report> {
    if !cli.command.formats().contains(&cli.format) {
        let name = format!("{:?}", cli.format).to_lowercase();
        return Err(Error::Unsupported(format!("format {name} is not available for this command")));
    }
    match &cli.command {
        Command::Identify { perm } => identify(cli, perm),
        Command::Invariants { perm, diagram } => invariants(cli, perm, diagram),
        Command::Reduce { perm } => reduce(cli, perm),
        Command::Unknot { perm, replay } => unknot(perm, replay),
        Command::Compose { perms } => compose(perms),
        Command::Enumerate { p } => enumerate(*p),
        Command::Classify { p, p_cap, long, budget, checkpoint, shards } => {
            run_classify(cli, *p, *p_cap, *long, *budget, checkpoint, *shards)
        }
        Command::ReversePetal { perm } => reverse_petal(cli, perm),
        Command::Export { perm, diagram, unfold } => export(perm, diagram, *unfold),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("json") + "\n",
                Format::Text => r.text,
                Format::Csv => r.csv.unwrap_or_default(),
                Format::Svg => r.svg.unwrap_or_default(),
            };
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.format == Format::Json {
                println!("{}", json!({ "schema": 1, "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
