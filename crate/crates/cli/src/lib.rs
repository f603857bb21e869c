//! Command-line front end for `cycalc-core`.
//!
//! [`dispatch`] parses an argument vector and returns a [`CommandResult`];
//! the binary only prints it. JSON payloads carry `"schema": "cycalc/1"`,
//! keys come out sorted and rationals are strings, so identical
//! invocations print identical bytes.

use clap::{Parser, Subcommand, ValueEnum};
use cycalc_core::fermat::{self, FermatSystem};
use cycalc_core::intersection::{self, CoverDiagram, SpaceModel};
use cycalc_core::invariants::{self, CartierRatio, QuotientData};
use cycalc_core::poly::Polynomial;
use cycalc_core::rational::{self, qi, Q};
use cycalc_core::riemann_roch;
use cycalc_core::tables::{self, Dataset, Family, Filter, IntRange};
use cycalc_core::weighted::{self, InvolutionSpec, PointCoords, WeightedPoint, WeightedSpace};
use cycalc_core::Error;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

pub const SCHEMA: &str = "cycalc/1";

/// Environment variable naming a replacement table fixture.
pub const DATASET_ENV: &str = "CYCALC_DATASET";

/// Owning subcommand of every core operation: `(module, operation, subcommand)`.
pub const ROUTES: &[(&str, &str, &str)] = &[
    ("intersection", "triple_product", "theorem sixteen"),
    ("intersection", "pullback", "theorem sixteen"),
    ("intersection", "pushforward_cover", "theorem sixteen"),
    ("intersection", "canonical_chain", "theorem sixteen"),
    ("riemann_roch", "c2_restriction", "theorem sixteen"),
    ("riemann_roch", "chi_of_resolution", "theorem sixteen"),
    ("riemann_roch", "solve_isolated_count", "theorem sixteen"),
    ("riemann_roch", "minus_K_dot_c2", "invariants compute"),
    ("invariants", "h3_of_cover", "invariants compute"),
    ("invariants", "hc2_of_cover", "invariants compute"),
    ("invariants", "surface_euler", "invariants compute"),
    ("invariants", "euler_of_cover", "invariants compute"),
    ("invariants", "s_from_fano_index", "invariants compute"),
    ("weighted", "fixed_locus", "fixlocus wps"),
    ("weighted", "singularity_type", "fixlocus wps"),
    ("weighted", "hypersurface_fixed_locus", "fixlocus wps"),
    ("weighted", "verify_quotient_projection", "fixlocus wps"),
    ("fermat", "count_fixed_points", "fermat count"),
    ("fermat", "list_fixed_points", "fermat count"),
    ("tables", "load_dataset", "tables query"),
    ("tables", "validate_all", "tables validate"),
    ("tables", "query", "tables query"),
];

/// Every subcommand path.
pub const SUBCOMMANDS: &[&str] = &[
    "tables validate",
    "tables query",
    "invariants compute",
    "fixlocus wps",
    "fermat count",
    "theorem sixteen",
];

/// `OPERATIONS` of each core module.
pub fn module_operations() -> Vec<(&'static str, &'static [&'static str])> {
    vec![
        ("intersection", intersection::OPERATIONS),
        ("riemann_roch", riemann_roch::OPERATIONS),
        ("invariants", invariants::OPERATIONS),
        ("weighted", weighted::OPERATIONS),
        ("fermat", fermat::OPERATIONS),
        ("tables", tables::OPERATIONS),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: Value,
    pub human_text: Option<String>,
    pub format: Format,
}

impl CommandResult {
    fn ok(format: Format, payload: Value, human: String) -> Self {
        Self {
            exit_code: 0,
            payload: with_schema(payload),
            human_text: Some(human),
            format,
        }
    }

    fn error(format: Format, err: &Error) -> Self {
        Self {
            exit_code: 1,
            payload: with_schema(json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            })),
            human_text: Some(format!("error ({}): {err}", err.kind())),
            format,
        }
    }

    fn usage(text: String) -> Self {
        Self {
            exit_code: 2,
            payload: with_schema(json!({
                "error": { "kind": "usage", "message": text.lines().next().unwrap_or("").to_string() }
            })),
            human_text: Some(text),
            format: Format::Text,
        }
    }

    /// What the binary prints on stdout.
    pub fn stdout(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.payload).expect("JSON value");
                s.push('\n');
                s
            }
            Format::Text | Format::Tsv => self.human_text.clone().unwrap_or_default(),
        }
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "cycalc", version, about = "Invariants and fixed loci of Calabi-Yau double covers")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classification tables.
    #[command(subcommand)]
    Tables(TablesCmd),
    /// Invariants of the cover from quotient data.
    #[command(subcommand)]
    Invariants(InvariantsCmd),
    /// Fixed loci of sign involutions.
    #[command(subcommand)]
    Fixlocus(FixlocusCmd),
    /// Fixed points on Fermat complete intersections.
    #[command(subcommand)]
    Fermat(FermatCmd),
    /// Derivations.
    #[command(subcommand)]
    Theorem(TheoremCmd),
}

#[derive(Debug, Subcommand)]
enum TablesCmd {
    /// Run every dataset check.
    Validate,
    /// Filter rows.
    Query {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        /// Range such as `10..20`, `>44`, `<=8` or `12`.
        #[arg(long, allow_hyphen_values = true)]
        h3: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        hc2: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum InvariantsCmd {
    /// `H³`, `H·c₂` and (given `e(Y)`) `e` of the cover.
    Compute {
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        n: u32,
        /// `|H'³|` as `p/q`.
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        euler_y: Option<String>,
        /// Overrides the computed `e(S)`.
        #[arg(long, allow_hyphen_values = true)]
        euler_s: Option<String>,
        /// Fano index `r_Y/2`; determines `s` when `--s` is absent.
        #[arg(long)]
        fano_index: Option<String>,
        /// `same` if `H_Y = H'`, `double` if `H_Y = 2H'`.
        #[arg(long)]
        cartier: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum FixlocusCmd {
    /// Hypersurface in a weighted projective space.
    Wps {
        /// Comma-separated weights, e.g. `1,1,1,2,5`.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        degree: u64,
        /// Equation in `x,y,z,w,t` (five coordinates), `x,y,z,w` (four) or `x0,x1,…`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Signs such as `+,+,+,+,-`.
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
        /// Extra points to test, `;`-separated, e.g. `0,0,0,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        check_point: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum FermatCmd {
    /// Count and certify isolated fixed points.
    Count {
        #[arg(long)]
        ambient: usize,
        /// `degree:c0,…,cn` equations separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        eqs: String,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
    },
}

#[derive(Debug, Subcommand)]
enum TheoremCmd {
    /// Number of fixed points when the fixed locus is zero-dimensional.
    Sixteen,
}

/// Parses `argv` (program name first) and runs the command, reading
/// [`DATASET_ENV`] for the table fixture.
pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let dataset = std::env::var_os(DATASET_ENV).map(PathBuf::from);
    dispatch_with_dataset(argv, dataset)
}

/// [`dispatch`] with an explicit dataset override.
pub fn dispatch_with_dataset<I, T>(argv: I, dataset: Option<PathBuf>) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    exit_code: 0,
                    payload: with_schema(json!({})),
                    human_text: Some(text),
                    format: Format::Text,
                },
                _ => CommandResult::usage(text),
            };
        }
    };
    let format = cli.format;
    let out = match cli.command {
        Command::Tables(TablesCmd::Validate) => tables_validate(dataset),
        Command::Tables(TablesCmd::Query {
            n,
            s,
            h3,
            hc2,
            family,
        }) => tables_query(dataset, n, s, h3, hc2, family),
        Command::Invariants(InvariantsCmd::Compute {
            s,
            n,
            d,
            euler_y,
            euler_s,
            fano_index,
            cartier,
        }) => invariants_compute(s, n, &d, euler_y, euler_s, fano_index, cartier),
        Command::Fixlocus(FixlocusCmd::Wps {
            weights,
            degree,
            poly,
            signs,
            check_point,
        }) => fixlocus_wps(&weights, degree, &poly, &signs, check_point.as_deref()),
        Command::Fermat(FermatCmd::Count { ambient, eqs, signs }) => fermat_count(ambient, &eqs, &signs),
        Command::Theorem(TheoremCmd::Sixteen) => theorem_sixteen(),
    };
    match out {
        Ok(Outcome {
            payload,
            human,
            passed,
        }) => {
            let mut r = CommandResult::ok(format, payload, human);
            if !passed {
                r.exit_code = 1;
            }
            r
        }
        Err(e) => CommandResult::error(format, &e),
    }
}

struct Outcome {
    payload: Value,
    human: String,
    passed: bool,
}

impl Outcome {
    fn new(payload: Value, human: String) -> Self {
        Self {
            payload,
            human,
            passed: true,
        }
    }
}

type CmdResult = Result<Outcome, Error>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn parse_q_arg(name: &str, s: &str) -> Result<Q, Error> {
    rational::parse_q(s).map_err(|e| Error::Usage(format!("--{name}: {e}")))
}

fn load(dataset: Option<PathBuf>) -> Result<(Dataset, Value), Error> {
    match dataset {
        Some(path) => {
            let ds = tables::load_dataset_from(&path)?;
            let src = json!({ "source": path.display().to_string(), "rows": ds.rows.len() });
            Ok((ds, src))
        }
        None => {
            let ds = tables::load_dataset()?;
            let src = json!({
                "source": "embedded",
                "rows": ds.rows.len(),
                "sha256": tables::TABLES_SHA256,
            });
            Ok((ds, src))
        }
    }
}

fn tables_validate(dataset: Option<PathBuf>) -> CmdResult {
    let (ds, src) = load(dataset)?;
    let report = tables::validate_all(&ds);
    let mut human = String::new();
    for c in &report.checks {
        human.push_str(&format!("{} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
        for f in &c.failures {
            human.push_str(&format!("  failure: {f}\n"));
        }
        for n in &c.notes {
            human.push_str(&format!("  note: {n}\n"));
        }
    }
    human.push_str(if report.passed { "all checks passed\n" } else { "some checks failed\n" });
    let mut out = Outcome::new(
        json!({ "command": "tables validate", "dataset": src, "passed": report.passed, "checks": to_value(&report.checks) }),
        human,
    );
    out.passed = report.passed;
    Ok(out)
}

fn tables_query(
    dataset: Option<PathBuf>,
    n: Option<u32>,
    s: Option<u32>,
    h3: Option<String>,
    hc2: Option<String>,
    family: Option<String>,
) -> CmdResult {
    let filter = Filter {
        n,
        s,
        h3: h3.map(|r| r.parse::<IntRange>()).transpose()?,
        hc2: hc2.map(|r| r.parse::<IntRange>()).transpose()?,
        family: family.map(|f| f.parse::<Family>()).transpose()?,
    };
    let (ds, src) = load(dataset)?;
    let rows = tables::query(&ds, &filter);
    let human = tables::to_tsv(&rows);
    Ok(Outcome::new(
        json!({
            "command": "tables query",
            "dataset": src,
            "filter": to_value(&filter),
            "count": rows.len(),
            "rows": to_value(&rows),
        }),
        human,
    ))
}

fn invariants_compute(
    s: Option<u32>,
    n: u32,
    d: &str,
    euler_y: Option<String>,
    euler_s: Option<String>,
    fano_index: Option<String>,
    cartier: Option<String>,
) -> CmdResult {
    let d = parse_q_arg("d", d)?;
    let ratio = match cartier.as_deref() {
        None => None,
        Some("same") => Some(CartierRatio::Same),
        Some("double") => Some(CartierRatio::Double),
        Some(other) => return Err(Error::Usage(format!("--cartier: expected same or double, got {other}"))),
    };
    let from_index = fano_index
        .as_deref()
        .map(|f| -> Result<u32, Error> {
            Ok(invariants::s_from_fano_index(&parse_q_arg("fano-index", f)?, ratio)?)
        })
        .transpose()?;
    let s = match (s, from_index) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Usage(format!("--s {a} disagrees with the Fano index, which gives s = {b}")))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::Usage("one of --s or --fano-index is required".into())),
    };
    let mut data = QuotientData::new(d.clone(), s, n)?;
    if let Some(ey) = &euler_y {
        data = data.with_euler(parse_q_arg("euler-y", ey)?);
    }
    let mut inv = data.invariants()?;
    if let Some(es) = &euler_s {
        let es = parse_q_arg("euler-s", es)?;
        inv.euler = data
            .euler_y
            .as_ref()
            .map(|ey| invariants::euler_of_cover(ey, &es, n));
        inv.euler_s = Some(es);
    }
    let r = rational::render;
    let mut human = format!("H^3 = {}\nH·c2 = {}\n", r(&inv.h3), r(&inv.hc2));
    if let Some(es) = &inv.euler_s {
        human.push_str(&format!("e(S) = {}\n", r(es)));
    }
    if let Some(e) = &inv.euler {
        human.push_str(&format!("e = {}\n", r(e)));
    }
    Ok(Outcome::new(
        json!({
            "command": "invariants compute",
            "input": {
                "d": r(&d),
                "s": s,
                "n": n,
                "euler_y": data.euler_y.as_ref().map(r),
                "c2_dot_hprime": r(&data.c2_dot_hprime),
                "minus_k_dot_c2": r(&riemann_roch::minus_k_dot_c2(n)),
            },
            "h3": r(&inv.h3),
            "hc2": r(&inv.hc2),
            "euler_s": inv.euler_s.as_ref().map(r),
            "e": inv.euler.as_ref().map(r),
            "integral": inv.all_integral(),
        }),
        human,
    ))
}

fn render_point(p: &PointCoords) -> String {
    match p {
        PointCoords::Exact { coords } => WeightedPoint(coords.clone()).to_string(),
        PointCoords::Numeric { re, im, .. } => {
            let c: Vec<String> = re
                .iter()
                .zip(im)
                .map(|(a, b)| if *b == 0.0 { format!("{a:.9}") } else { format!("{a:.9}{b:+.9}i") })
                .collect();
            format!("({})", c.join(","))
        }
    }
}

fn fixlocus_wps(weights: &str, degree: u64, poly: &str, signs: &str, check: Option<&str>) -> CmdResult {
    let weights = weights
        .split(',')
        .map(|w| w.trim().parse::<u32>())
        .collect::<Result<Vec<u32>, _>>()
        .map_err(|_| Error::Usage(format!("--weights: bad list {weights:?}")))?;
    let space = WeightedSpace::with_default_names(weights)?;
    let inv = InvolutionSpec::parse(signs)?;
    let f = Polynomial::parse(poly, &space.coordinate_names).map_err(weighted::WeightedError::from)?;
    let locus = weighted::fixed_locus(&space, &inv)?;
    let hyp = weighted::hypersurface_fixed_locus(&space, &inv, degree, &f)?;

    let mut isolated = Vec::new();
    for p in &hyp.isolated_points {
        let sing = p
            .exact()
            .and_then(|wp| weighted::singularity_at(&space, &wp).ok())
            .map(|t| t.to_string());
        isolated.push(json!({ "point": to_value(p), "rendered": render_point(p), "ambient_singularity": sing }));
    }
    // the projection is only defined for the double-cover shape t² = f
    let quotient = match weighted::verify_quotient_projection(&space, &inv, degree, &f) {
        Ok(rep) => to_value(&rep),
        Err(e @ weighted::WeightedError::NotDoubleCoverForm(_)) => json!({ "skipped": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    let mut checked = Vec::new();
    if let Some(text) = check {
        for pt in text.split(';').filter(|s| !s.trim().is_empty()) {
            let coords = pt
                .split(',')
                .map(|c| rational::parse_q(c.trim()))
                .collect::<Result<Vec<Q>, _>>()
                .map_err(|e| Error::Usage(format!("--check-point: {e}")))?;
            if coords.len() != space.len() {
                return Err(Error::Usage(format!("--check-point: {pt:?} needs {} coordinates", space.len())));
            }
            let wp = WeightedPoint(coords);
            let on = weighted::on_hypersurface(&f, &wp);
            let fixed = !wp.is_origin() && inv.apply(&wp).projectively_equal(&wp, &space.weights);
            let value = f.eval(&wp.0);
            let matches = hyp
                .isolated_points
                .iter()
                .filter_map(PointCoords::exact)
                .any(|q| q.projectively_equal(&wp, &space.weights));
            checked.push(json!({
                "point": wp.to_string(),
                "equation_value": rational::render(&value),
                "on_hypersurface": on,
                "fixed": fixed,
                "is_isolated_fixed_point": matches,
            }));
        }
    }

    let mut human = format!("{space} degree {degree}: {f}\ninvolution {inv}\n");
    for s in &hyp.strata {
        let names: Vec<&str> = s.stratum.support.iter().map(|&i| space.coordinate_names[i].as_str()).collect();
        human.push_str(&format!(
            "stratum {{{}}} (λ = {}): restricted {} -> {:?}\n",
            names.join(","),
            s.stratum.lambda,
            s.restricted,
            s.kind
        ));
    }
    for j in &locus.junctions {
        let names: Vec<&str> = j.iter().map(|&i| space.coordinate_names[i].as_str()).collect();
        human.push_str(&format!("junction {{{}}}\n", names.join(",")));
    }
    human.push_str(&format!("surfaces: {}\n", hyp.surfaces));
    for p in &isolated {
        human.push_str(&format!(
            "isolated point {} ({})\n",
            p["rendered"].as_str().unwrap_or(""),
            p["ambient_singularity"].as_str().unwrap_or("numeric")
        ));
    }
    for c in &checked {
        human.push_str(&format!(
            "point {}: f = {}, on X: {}, isolated fixed: {}\n",
            c["point"].as_str().unwrap_or(""),
            c["equation_value"].as_str().unwrap_or(""),
            c["on_hypersurface"],
            c["is_isolated_fixed_point"]
        ));
    }
    if let Some(ok) = quotient.get("all_passed") {
        human.push_str(&format!("quotient projection verified: {ok}\n"));
    }
    Ok(Outcome::new(
        json!({
            "command": "fixlocus wps",
            "space": to_value(&space),
            "signs": inv.to_string(),
            "degree": degree,
            "polynomial": f.to_string(),
            "ambient": to_value(&locus),
            "hypersurface": to_value(&hyp),
            "isolated_points": isolated,
            "quotient": quotient,
            "checked_points": checked,
        }),
        human,
    ))
}

fn fermat_count(ambient: usize, eqs: &str, signs: &str) -> CmdResult {
    let sys = FermatSystem::parse(ambient, eqs, signs)?;
    let c = fermat::count_fixed_points(&sys)?;
    let mut human = format!("count = {}\n", c.count);
    for s in &c.strata {
        human.push_str(&format!(
            "stratum {:?}: {} points (symbolic {}, enumerated {}, Bezout {})\n",
            s.support,
            s.count,
            s.symbolic_count,
            s.enumerated_count.map_or("-".into(), |v| v.to_string()),
            s.bezout.map_or("-".into(), |v| v.to_string()),
        ));
    }
    for p in &c.certificates {
        human.push_str(&format!(
            "  [{}] ({}) minor {} on rows {:?} cols {:?}\n",
            p.stratum,
            p.coords.join(", "),
            p.certificate.minor,
            p.certificate.rows,
            p.certificate.cols
        ));
    }
    Ok(Outcome::new(
        json!({
            "command": "fermat count",
            "count": c.count,
            "strata": to_value(&c.strata),
            "certificates": to_value(&c.certificates),
        }),
        human,
    ))
}

fn theorem_sixteen() -> CmdResult {
    let d = riemann_roch::derive_sixteen()?;
    // the relation itself on a diagram with sixteen exceptional planes
    let mut y = SpaceModel::new("Y", &["H'"])?;
    y.set_triple("H'", "H'", "H'", qi(1))?;
    let dia = CoverDiagram::over_quotient(y, d.k, 0)?;
    let chain = intersection::canonical_chain(&dia)?;
    let trace: Vec<String> = d.trace.iter().map(ToString::to_string).collect();
    let mut human = trace.join("\n");
    human.push('\n');
    Ok(Outcome::new(
        json!({
            "command": "theorem sixteen",
            "trace": trace,
            "slope": rational::render(&d.slope),
            "intercept": rational::render(&d.intercept),
            "k": d.k,
            "relation": {
                "lhs": chain.lhs.to_string(),
                "rhs": chain.rhs.to_string(),
                "holds": chain.holds,
            },
        }),
        human,
    ))
}
