use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbiseif::batch::{self, Execution};
use orbiseif::classify::{canonical_class, invariant_profile};
use orbiseif::euclid::{induced_fibration, invariant_directions, parse_generators, CrystGroup, InvariantDirections};
use orbiseif::notation::{parse_base, parse_fibration};
use orbiseif::orbifold2::geometry_class;
use orbiseif::seifert::{check_invariant_relation, enumerate_fibrations, geometry_of_fibration, normalize, RelationCheck};
use orbiseif::singular::{singular_census, singular_graph};
use orbiseif::{Error, Orbifold2Symbol, SeifertSymbol, Style};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "orbiseif", version, about = "Seifert fibered 3-orbifolds: notation, enumeration and classification")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_enum, default_value_t = StyleArg::Conway)]
    style: StyleArg,
    /// Largest family parameter listed for infinite classes.
    #[arg(long, global = true, env = "ORBISEIF_BOUND", default_value_t = 12,
          value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Conway,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum AtlasGeometry {
    Flat,
    Spherical,
    Bad,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a fibration (or, with --base, a base orbifold) and print it back.
    Parse {
        symbol: String,
        #[arg(long)]
        base: bool,
    },
    /// Check the invariant relation and the holonomy representation.
    Validate { symbol: String },
    /// Reduce local invariants into 0 <= m < n.
    Normalize { symbol: String },
    /// All fibrations with zero Euler number over a base.
    Enumerate { base: String },
    /// Canonical diffeomorphism class.
    Classify { symbol: String },
    /// Every fibration of the same orbifold, families cut at --bound.
    Aliases { symbol: String },
    /// Geometry of a fibration, or of a base orbifold.
    Geometry { symbol: String },
    /// Singular locus and the invariants computed from it.
    Singular { symbol: String },
    /// Fibration induced by a space group along an invariant direction.
    Induce {
        #[arg(long)]
        group: PathBuf,
        /// e1, e2, e3 or three integers such as "1,0,0". All invariant
        /// directions are tried when omitted.
        #[arg(long, value_parser = parse_direction)]
        direction: Option<[i64; 3]>,
    },
    /// Enumerate and classify every base of one kind.
    Atlas {
        #[arg(long, value_enum)]
        geometry: AtlasGeometry,
        /// Largest cone or corner order in the spherical and bad lists.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_direction(text: &str) -> Result<[i64; 3], String> {
    match text {
        "e1" => return Ok([1, 0, 0]),
        "e2" => return Ok([0, 1, 0]),
        "e3" => return Ok([0, 0, 1]),
        _ => {}
    }
    let parts: Vec<i64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let v: [i64; 3] = parts.try_into().map_err(|_| "expected e1, e2, e3 or three integers".to_string())?;
    if v == [0, 0, 0] {
        return Err("the zero vector is not a direction".into());
    }
    Ok(v)
}

/// Failure of a command: a library error, or a file that could not be read.
enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Domain(e) => e.code(),
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

/// What a command prints: the JSON value, and the text rendering of it.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into(), ok: true }
    }
}

struct Ctx {
    style: Style,
    bound: u32,
}

impl Ctx {
    fn show(&self, s: &SeifertSymbol) -> String {
        s.print(self.style)
    }

    fn show_all(&self, xs: &[SeifertSymbol]) -> Vec<String> {
        xs.iter().map(|s| self.show(s)).collect()
    }
}

fn lines(xs: &[String]) -> String {
    xs.join("\n")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ctx = Ctx {
        style: match cli.style {
            StyleArg::Conway => Style::Conway,
            StyleArg::Standard => Style::Standard,
        },
        bound: cli.bound,
    };
    match &cli.command {
        Command::Parse { symbol, base: true } => {
            let b = parse_base(symbol)?;
            let text = b.print(ctx.style);
            Ok(Output::new(json!({ "kind": "base", "symbol": b, "text": text }), text))
        }
        Command::Parse { symbol, base: false } => {
            let s = parse_fibration(symbol)?;
            let text = ctx.show(&s);
            Ok(Output::new(json!({ "kind": "fibration", "symbol": s, "text": text }), text))
        }
        Command::Validate { symbol } => validate(&ctx, &parse_fibration(symbol)?),
        Command::Normalize { symbol } => {
            let s = normalize(&parse_fibration(symbol)?);
            let text = ctx.show(&s);
            Ok(Output::new(json!({ "symbol": s, "text": text }), text))
        }
        Command::Enumerate { base } => {
            let b = parse_base(base)?;
            let all = ctx.show_all(&enumerate_fibrations(&b)?);
            let text = lines(&all);
            Ok(Output::new(json!({ "base": b.to_string(), "count": all.len(), "fibrations": all }), text))
        }
        Command::Classify { symbol } => {
            let s = parse_fibration(symbol)?;
            let class = canonical_class(&s)?;
            let report = class.report(ctx.bound);
            let mut text = format!("{}\ngeometry: {}", ctx.show(&class.canonical), class.geometry);
            let members = ctx.show_all(&class.aliases(ctx.bound));
            match &report.family {
                Some(f) => text += &format!("\nfamily: {} {:?}, members up to {}: {}", f.id, f.params, f.bound, members.join(" ")),
                None => text += &format!("\naliases: {}", members.join(" ")),
            }
            Ok(Output::new(serde_json::to_value(report).expect("serializable"), text))
        }
        Command::Aliases { symbol } => {
            let s = parse_fibration(symbol)?;
            let class = canonical_class(&s)?;
            let all = ctx.show_all(&class.aliases(ctx.bound));
            let text = lines(&all);
            Ok(Output::new(json!({ "infinite": class.is_infinite(), "bound": ctx.bound, "aliases": all }), text))
        }
        Command::Geometry { symbol } => geometry(symbol),
        Command::Singular { symbol } => singular(&ctx, &parse_fibration(symbol)?),
        Command::Induce { group, direction } => induce(&ctx, group, *direction),
        Command::Atlas { geometry, max_n, sequential } => {
            let bases: Vec<Orbifold2Symbol> = match geometry {
                AtlasGeometry::Flat => batch::flat_bases(),
                AtlasGeometry::Spherical => batch::spherical_bases(*max_n),
                AtlasGeometry::Bad => batch::bad_bases(*max_n),
            };
            let exec = if *sequential { Execution::Sequential } else { Execution::Parallel };
            let atlas = batch::atlas(&bases, exec)?;
            let per_base: Vec<Value> = atlas
                .bases
                .iter()
                .map(|b| json!({ "base": b.base.to_string(), "fibrations": ctx.show_all(&b.fibrations) }))
                .collect();
            let classes: Vec<Vec<String>> = atlas.multi_alias_classes.iter().map(|c| ctx.show_all(c)).collect();
            let total: usize = atlas.bases.iter().map(|b| b.fibrations.len()).sum();
            let mut text = format!("{} bases, {total} fibrations", atlas.bases.len());
            for b in &atlas.bases {
                text += &format!("\n{}: {}", b.base, ctx.show_all(&b.fibrations).join(" "));
            }
            text += &format!("\n{} classes with several fibrations", classes.len());
            for c in &classes {
                text += &format!("\n  {}", c.join(" = "));
            }
            Ok(Output::new(json!({ "bases": per_base, "fibrations": total, "multi_alias_classes": classes }), text))
        }
    }
}

fn validate(ctx: &Ctx, s: &SeifertSymbol) -> Result<Output, Failure> {
    let relation = check_invariant_relation(s);
    let mut json = json!({ "symbol": ctx.show(s), "relation": relation });
    let mut text = match relation {
        RelationCheck::Valid => "invariant relation: holds".to_string(),
        RelationCheck::Violated { .. } => format!("invariant relation: violated ({})", serde_json::to_string(&relation).expect("serializable")),
    };
    let mut ok = relation.is_valid();
    if ok {
        let psi = batch::verify_psi(s)?;
        ok = psi.is_ok();
        text += &format!("\nholonomy: {}", if ok { "consistent" } else { "inconsistent" });
        json["holonomy"] = serde_json::to_value(&psi).expect("serializable");
    }
    json["valid"] = ok.into();
    Ok(Output { json, text, ok })
}

fn geometry(symbol: &str) -> Result<Output, Failure> {
    match parse_fibration(symbol) {
        Ok(s) => {
            let g = geometry_of_fibration(&normalize(&s));
            Ok(Output::new(json!({ "kind": "fibration", "geometry": g }), g.to_string()))
        }
        Err(fib_err) => match parse_base(symbol) {
            Ok(b) => {
                let g = geometry_class(&b);
                Ok(Output::new(json!({ "kind": "base", "geometry": g }), g.to_string()))
            }
            Err(_) => Err(fib_err.into()),
        },
    }
}

fn singular(ctx: &Ctx, s: &SeifertSymbol) -> Result<Output, Failure> {
    let s = normalize(s);
    let census = singular_census(&s);
    let mut json = json!({ "symbol": ctx.show(&s), "census": census });
    let mut text = format!(
        "cone circles by index: {:?}\nstruts by index: {:?}\nvertices: {}",
        census.circles_by_index(),
        census.struts_by_index(),
        census.vertex_count
    );
    match singular_graph(&s) {
        Ok(g) => {
            text += &format!("\ncomponents: {}\nvertices per component: {:?}", g.component_count(), g.vertex_distribution());
            json["graph"] = serde_json::to_value(&g).expect("serializable");
        }
        Err(e) => text += &format!("\ngraph: {e}"),
    }
    if let Ok(profile) = invariant_profile(&s) {
        json["profile"] = serde_json::to_value(&profile).expect("serializable");
    }
    Ok(Output::new(json, text))
}

fn induce(ctx: &Ctx, path: &PathBuf, direction: Option<[i64; 3]>) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let group = CrystGroup::from_isometries(&parse_generators(&text)?)?;
    if let Some(v) = direction {
        let s = induced_fibration(&group, &v)?;
        let text = ctx.show(&s);
        return Ok(Output::new(json!({ "direction": v, "fibration": text }), text));
    }
    let dirs = invariant_directions(&group);
    if let InvariantDirections::All = dirs {
        return Err(Error::Semantic("every direction is invariant; pass --direction".into()).into());
    }
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for v in dirs.sample() {
        let s = induced_fibration(&group, &v)?;
        rows.push(format!("{v:?} {}", ctx.show(&s)));
        out.push(json!({ "direction": v, "fibration": ctx.show(&s) }));
    }
    Ok(Output::new(json!({ "directions": dirs, "fibrations": out }), lines(&rows)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            if cli.json {
                let v = json!({ "error": { "code": f.code(), "message": f.message() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                eprintln!("error [{}]: {}", f.code(), f.message());
            }
            ExitCode::from(1)
        }
    }
}
