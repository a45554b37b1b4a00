//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{load_catalog, parse_catalog, Catalog, Filter, MultiplicityModel, C_UPPER};
use crate::crossed::{bc_relation_check, normalize, parse_word};
use crate::error::{Error, Result};
use crate::kms::{
    bc_high_temperature, bc_low_temperature, gibbs_monomial, psi_product_state, psi_pushforward, ratio_witness,
    toeplitz_eigenlist, AdelicUnit, Monomial, PsiContext, SupportedFunction,
};
use crate::knotgroups::{
    abelianization, alexander_from_seifert, alexander_poly_fox, amalgamate, derham_direct_sum, derham_solve,
    presentation_for, Branch, IntMatrix, Presentation,
};
use crate::partition::{
    figure_f, figure_h, qstar_partition, thresholds, z_alternating, z_grothendieck, z_tau, PrimeSource,
};
use crate::qmodz::QmodZ;
use crate::semigroup::{enumerate_group_elements, f_weight, GroupElement, Knot, WeightFunction};

const BUNDLED_CATALOG: &str = include_str!("../data/knots.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

/// Shared parameters; every flag also reads a `KNOTSTAT_*` variable.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Base q ≥ 2 of the weight q^{-β(Cr+g)}.
    #[arg(long, global = true, default_value_t = 2, env = "KNOTSTAT_Q")]
    pub q: u64,
    /// Knot catalog CSV; the bundled table is used when absent.
    #[arg(long, global = true, env = "KNOTSTAT_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// Catalog filter: all, alternating or torus-free.
    #[arg(long, global = true, default_value = "all", env = "KNOTSTAT_FILTER")]
    pub filter: String,
    /// Constant C of the asymptotic multiplicity model.
    #[arg(long = "multiplicity-c", global = true, default_value_t = C_UPPER, env = "KNOTSTAT_MULTIPLICITY_C")]
    pub multiplicity_c: f64,
    /// Order n_ρ of the representation.
    #[arg(long = "n-rho", global = true, default_value_t = 1, env = "KNOTSTAT_N_RHO")]
    pub n_rho: u64,
    /// Convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-12, env = "KNOTSTAT_TOLERANCE")]
    pub tolerance: f64,
    /// Output format for scalar results; grids are always CSV.
    #[arg(long, global = true, value_enum, default_value = "json", env = "KNOTSTAT_OUTPUT")]
    pub output: Output,
}

#[derive(Debug, Parser)]
#[command(name = "knotstat", version, about = "Statistical mechanics of knots: partition functions, KMS states, knot groups")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    Catalog,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    F,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Principal,
    Negative,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, env = "KNOTSTAT_BETA")]
    pub beta: f64,
    /// Prime factors from the catalog or from the asymptotic model.
    #[arg(long, value_enum, default_value = "catalog")]
    pub source: SourceKind,
    /// Genus cut-off of the model.
    #[arg(long, default_value_t = 3)]
    pub g_max: u32,
    /// Crossing-number cut-off of the model.
    #[arg(long, default_value_t = 40)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct KnotInput {
    /// Catalog knot name, e.g. 3_1.
    #[arg(long, conflicts_with_all = ["file", "braid"])]
    pub knot: Option<String>,
    /// Presentation file.
    #[arg(long, conflicts_with = "braid")]
    pub file: Option<PathBuf>,
    /// Braid word, e.g. "1 1 1" or "1 -2 1 -2".
    #[arg(long, allow_hyphen_values = true)]
    pub braid: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a knot catalog.
    Ingest,
    /// Z_a(β) over the alternating-knot semigroup.
    ZAlt(SourceArgs),
    /// Z_G(β) over the Grothendieck group.
    ZGroth(SourceArgs),
    /// ζ²(β)/ζ(2β) for the ℚ*₊ system with its sieve check.
    ZQstar {
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
    },
    /// Z_τ(β) over group elements of bounded weight.
    ZTau {
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
        #[arg(long, default_value_t = 12)]
        max_weight: u64,
        /// Exponent scale s in f(g) = q^{s·weight}; defaults to ⌈β₊⌉.
        #[arg(long)]
        scale: Option<u32>,
    },
    /// β₊, β₋(q), β̃₋(q) and related constants.
    Thresholds,
    /// Figure data as CSV.
    Figures {
        #[arg(long, value_enum)]
        which: Which,
        /// Lower β for f; `auto` starts just above ln2/ln q.
        #[arg(long, default_value = "auto")]
        beta_min: String,
        #[arg(long, default_value_t = 20.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 2.0)]
        q_min: f64,
        #[arg(long, default_value_t = 100.0)]
        q_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Gibbs eigenvalue list of a prime knot.
    KmsToeplitz {
        #[arg(long)]
        knot: String,
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
        #[arg(long, default_value_t = 5)]
        entries: u32,
    },
    /// Bost–Connes state on e(r).
    KmsBc {
        #[arg(long)]
        r: String,
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
        /// Residues of u as n:u pairs, e.g. "5:2,4:3".
        #[arg(long, default_value = "")]
        u: String,
    },
    /// Ψ_{β,u,f}(F) for a finitely supported F.
    KmsPsi {
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
        /// Entries `element=e:a/b` or `element=mu:n[^a]`, e.g. "3_1 -- 4_1=mu:2".
        #[arg(long = "entry")]
        entries: Vec<String>,
        #[arg(long, default_value = "")]
        u: String,
        /// Exponent scale of f; defaults to ⌈β₊⌉.
        #[arg(long)]
        scale: Option<u32>,
        /// Also compare Ψ(α_h F) with Ψ_{α_{h⁻¹} f}(F).
        #[arg(long)]
        push: Option<String>,
    },
    /// λ_{K,0}λ_{K′,1}/(λ_{K,1}λ_{K′,0}) = q^{−β}.
    RatioWitness {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "big-n", default_value_t = 20)]
        big_n: u32,
        #[arg(long, env = "KNOTSTAT_BETA")]
        beta: f64,
    },
    /// Wirtinger presentation of a knot.
    Wirtinger {
        #[command(flatten)]
        input: KnotInput,
        /// Write the presentation file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alexander polynomial by Fox calculus or from a Seifert matrix.
    Alexander {
        #[command(flatten)]
        input: KnotInput,
        /// Connected sum with this catalog knot.
        #[arg(long)]
        sum: Option<String>,
        /// Seifert matrix rows separated by `;`, e.g. "-1 1; 0 -1".
        #[arg(long, allow_hyphen_values = true)]
        seifert: Option<String>,
    },
    /// de Rham representation at a root of Δ.
    Derham {
        #[command(flatten)]
        input: KnotInput,
        /// Root as "re,im"; the first root of Δ when absent.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        #[arg(long, value_enum, default_value = "principal")]
        branch: BranchArg,
        /// Direct sum with this catalog knot on the connected sum.
        #[arg(long)]
        with: Option<String>,
    },
    /// Normal form of a word in μₙ, μₙ*, e(r).
    BcNormalize {
        #[arg(long)]
        word: String,
        /// Compare with this word.
        #[arg(long)]
        equals: Option<String>,
    },
}

/// Runs the CLI with stdout and stderr.
pub fn run<I: IntoIterator<Item = OsString>>(argv: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams; returns the exit code.
pub fn run_with<I: IntoIterator<Item = OsString>>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(Emit::Json(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            0
        }
        Ok(Emit::Csv(s)) => {
            let _ = write!(out, "{s}");
            0
        }
        Err(e) => {
            let body = json!({ "error": e.kind(), "message": e.to_string() });
            match cli.config.output {
                Output::Json => {
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"));
                }
                Output::Csv => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            1
        }
    }
}

enum Emit {
    Json(Value),
    Csv(String),
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn scalar_output(cfg: &Config, v: Value) -> Result<Emit> {
    match cfg.output {
        Output::Json => Ok(Emit::Json(v)),
        Output::Csv => {
            let obj = v.as_object().ok_or_else(|| Error::domain("output", "not a flat record"))?;
            let mut w = csv::Writer::from_writer(vec![]);
            let flat: Vec<(&String, &Value)> = obj.iter().filter(|(_, x)| !x.is_object() && !x.is_array()).collect();
            let csv_err = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(flat.iter().map(|(k, _)| k.as_str())).map_err(csv_err)?;
            w.write_record(flat.iter().map(|(_, x)| match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))
            .map_err(csv_err)?;
            Ok(Emit::Csv(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf8")))
        }
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn catalog(cfg: &Config) -> Result<Catalog> {
    let filter: Filter = cfg.filter.parse()?;
    match &cfg.catalog {
        Some(p) => load_catalog(p, filter),
        None => parse_catalog(BUNDLED_CATALOG, filter, None),
    }
}

fn check_config(cfg: &Config) -> Result<()> {
    if cfg.q < 2 {
        return Err(Error::domain("config", format!("q = {} must be at least 2", cfg.q)));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(Error::domain("config", "tolerance must be positive"));
    }
    if cfg.n_rho == 0 {
        return Err(Error::domain("config", "n_rho must be at least 1"));
    }
    Ok(())
}

fn prime_source(cfg: &Config, a: &SourceArgs) -> Result<PrimeSource> {
    Ok(match a.source {
        SourceKind::Catalog => PrimeSource::from_catalog(&catalog(cfg)?),
        SourceKind::Model => {
            PrimeSource::from_model(&MultiplicityModel::asymptotic(cfg.multiplicity_c, a.g_max, a.n_max)?)
        }
    })
}

fn parse_unit(s: &str) -> Result<AdelicUnit> {
    let pairs = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (n, u) = p.split_once(':').ok_or_else(|| Error::Parse { line: 0, msg: format!("bad residue {p:?}") })?;
            let num = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad residue {p:?}") });
            Ok((num(n)?, num(u)?))
        })
        .collect::<Result<Vec<_>>>()?;
    AdelicUnit::new(&pairs)
}

fn parse_entry(s: &str) -> Result<(GroupElement, Monomial)> {
    let bad = || Error::Parse { line: 0, msg: format!("bad entry {s:?}; expected element=e:a/b or element=mu:n[^a]") };
    let (g, m) = s.rsplit_once('=').ok_or_else(bad)?;
    let g: GroupElement = g.trim().parse()?;
    let m = m.trim();
    let mono = if let Some(r) = m.strip_prefix("e:") {
        Monomial::E(r.parse()?)
    } else if let Some(rest) = m.strip_prefix("mu:") {
        let (n, a) = rest.split_once('^').unwrap_or((rest, "1"));
        Monomial::Mu { n: n.parse().map_err(|_| bad())?, a: a.parse().map_err(|_| bad())? }
    } else {
        return Err(bad());
    };
    Ok((g, mono))
}

fn load_input(cfg: &Config, input: &KnotInput) -> Result<(String, Presentation)> {
    if let Some(name) = &input.knot {
        let cat = catalog(cfg)?;
        return Ok((name.clone(), presentation_for(cat.require(name)?)?));
    }
    if let Some(f) = &input.file {
        return Ok((f.display().to_string(), Presentation::read(f)?));
    }
    if let Some(b) = &input.braid {
        let word = b
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| Error::Parse { line: 0, msg: format!("bad braid letter {t:?}") }))
            .collect::<Result<Vec<_>>>()?;
        return Ok((format!("braid {b}"), Presentation::from_braid(&word)?));
    }
    Err(Error::Precondition("one of --knot, --file or --braid is required".into()))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse { line: 0, msg: format!("bad complex number {s:?}; expected re,im") };
    let (a, b) = s.split_once(',').unwrap_or((s, "0"));
    Ok(Complex64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_seifert(s: &str) -> Result<IntMatrix> {
    let rows = s
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad entry {t:?}") }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(&rows)
}

fn weight_fn(q: u64, scale: Option<u32>) -> Result<WeightFunction> {
    match scale {
        Some(s) => WeightFunction::with_scale(q, s),
        None => WeightFunction::new(q),
    }
}

fn branch(b: BranchArg) -> Branch {
    match b {
        BranchArg::Principal => Branch::Principal,
        BranchArg::Negative => Branch::Negative,
    }
}

fn execute(cli: &Cli) -> Result<Emit> {
    let cfg = &cli.config;
    check_config(cfg)?;
    let q = cfg.q;
    match &cli.command {
        Command::Ingest => {
            let cat = catalog(cfg)?;
            let records: Vec<Value> = cat
                .records()
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "crossings": r.crossing_number,
                        "genus": r.genus,
                        "weight": r.weight(),
                        "alternating": r.alternating,
                        "torus": r.torus,
                        "alexander": r.alexander_coeffs,
                        "wirtinger": r.wirtinger.as_ref().map(|p| p.display().to_string()),
                    })
                })
                .collect();
            match cfg.output {
                Output::Json => Ok(Emit::Json(json!({ "count": cat.len(), "filter": cfg.filter, "records": records }))),
                Output::Csv => {
                    let mut s = String::from("name,crossings,genus,weight,alternating,torus\n");
                    for r in cat.records() {
                        s += &format!(
                            "{},{},{},{},{},{}\n",
                            r.name,
                            r.crossing_number,
                            r.genus,
                            r.weight(),
                            r.alternating,
                            r.torus
                        );
                    }
                    Ok(Emit::Csv(s))
                }
            }
        }
        Command::ZAlt(a) => {
            let r = z_alternating(a.beta, q, &prime_source(cfg, a)?, cfg.tolerance)?;
            scalar_output(cfg, to_value(&r))
        }
        Command::ZGroth(a) => {
            let r = z_grothendieck(a.beta, q, &prime_source(cfg, a)?, cfg.tolerance)?;
            scalar_output(cfg, to_value(&r))
        }
        Command::ZQstar { beta, n_max } => scalar_output(cfg, to_value(&qstar_partition(*beta, *n_max)?)),
        Command::ZTau { beta, max_weight, scale } => {
            let cat = catalog(cfg)?;
            let w = weight_fn(q, *scale)?;
            let elems = enumerate_group_elements(&cat, *max_weight);
            let fs = elems.iter().map(|g| f_weight(g, &w, &cat)).collect::<Result<Vec<_>>>()?;
            let r = z_tau(*beta, &fs, cfg.n_rho, cfg.tolerance)?;
            let mut v = to_value(&r);
            v["elements"] = json!(elems.len());
            v["exponent_scale"] = json!(w.exponent_scale);
            scalar_output(cfg, v)
        }
        Command::Thresholds => scalar_output(cfg, to_value(&thresholds(q)?)),
        Command::Figures { which, beta_min, beta_max, q_min, q_max, points } => {
            let mut s = String::new();
            match which {
                Which::F => {
                    let lo = match beta_min.as_str() {
                        "auto" => None,
                        x => Some(x.parse::<f64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad --beta-min {x:?}") })?),
                    };
                    s.push_str("beta,f\n");
                    for (b, f) in figure_f(q, lo, *beta_max, *points)? {
                        s += &format!("{b},{f}\n");
                    }
                }
                Which::H => {
                    if !(q_min >= &2.0 && q_max > q_min) || *points < 2 {
                        return Err(Error::domain("figures", "need 2 ≤ q_min < q_max and at least 2 points"));
                    }
                    let grid: Vec<f64> =
                        (0..*points).map(|i| q_min + (q_max - q_min) * i as f64 / (*points - 1) as f64).collect();
                    s.push_str("q,h\n");
                    for (x, h) in figure_h(&grid)? {
                        s += &format!("{x},{h}\n");
                    }
                }
            }
            Ok(Emit::Csv(s))
        }
        Command::KmsToeplitz { knot, beta, entries } => {
            let cat = catalog(cfg)?;
            let k: Knot = knot.parse()?;
            let l = toeplitz_eigenlist(&k, *beta, q, &cat)?;
            let list: Vec<f64> = (0..*entries).map(|n| l.entry(n)).collect();
            scalar_output(
                cfg,
                json!({
                    "knot": knot,
                    "lambda1": l.lambda1,
                    "generator_ratio": l.generator_ratio,
                    "entries": list,
                    "tail_after_entries": l.tail(*entries),
                    "gibbs_mu_mustar": gibbs_monomial(&k, 1, *beta, q, &cat)?,
                }),
            )
        }
        Command::KmsBc { r, beta, u } => {
            let r: QmodZ = r.parse()?;
            if *beta <= 1.0 {
                let v = bc_high_temperature(&r, *beta)?;
                scalar_output(cfg, json!({ "r": r.to_string(), "beta": beta, "regime": "high", "re": v, "im": 0.0 }))
            } else {
                let v = bc_low_temperature(&r, *beta, &parse_unit(u)?)?;
                scalar_output(cfg, json!({ "r": r.to_string(), "beta": beta, "regime": "low", "re": v.re, "im": v.im }))
            }
        }
        Command::KmsPsi { beta, entries, u, scale, push } => {
            let cat = catalog(cfg)?;
            let mut f = SupportedFunction::new();
            for e in entries {
                let (g, m) = parse_entry(e)?;
                g.weight(&cat)?;
                f.insert(g, m);
            }
            let ctx = PsiContext { beta: *beta, u: parse_unit(u)?, weight: weight_fn(q, *scale)?, n_rho: cfg.n_rho, catalog: &cat };
            let value = psi_product_state(&f, &ctx)?;
            let mut v = json!({ "value": complex_json(value), "support": f.support().len() });
            if let Some(h) = push {
                let h: GroupElement = h.parse()?;
                let p = psi_pushforward(&h, &f, &ctx)?;
                v["pushforward"] = json!({
                    "translated": complex_json(p.translated),
                    "reweighted": complex_json(p.reweighted),
                    "difference": p.difference,
                });
            }
            Ok(Emit::Json(v))
        }
        Command::RatioWitness { n, big_n, beta } => {
            let model = MultiplicityModel::asymptotic(cfg.multiplicity_c, 1, 1)?;
            scalar_output(cfg, to_value(&ratio_witness(*n, *big_n, *beta, q, &model)?))
        }
        Command::Wirtinger { input, out } => {
            let (name, p) = load_input(cfg, input)?;
            if let Some(path) = out {
                p.write(path)?;
            }
            let rels: Vec<String> = p.relators().iter().map(|r| p.word_to_string(r)).collect();
            Ok(Emit::Json(json!({
                "source": name,
                "generators": p.generators(),
                "relators": rels,
                "basepoint": p.basepoint(),
                "wirtinger_form": p.is_wirtinger(),
                "abelianization": to_value(&abelianization(&p)),
            })))
        }
        Command::Alexander { input, sum, seifert } => {
            if let Some(v) = seifert {
                let d = alexander_from_seifert(&parse_seifert(v)?)?;
                return Ok(Emit::Json(json!({ "source": "seifert", "polynomial": d.to_string(), "coeffs": d.normalized_coeffs() })));
            }
            let cat = catalog(cfg)?;
            let (name, mut p) = load_input(cfg, input)?;
            let mut label = name.clone();
            if let Some(other) = sum {
                p = amalgamate(&p, &presentation_for(cat.require(other)?)?)?;
                label = format!("{name} # {other}");
            }
            let d = alexander_poly_fox(&p)?;
            let coeffs = d.normalized_coeffs();
            let expected = match (&input.knot, sum) {
                (Some(k), None) => Some(cat.require(k)?.alexander_coeffs.clone()),
                (Some(k), Some(o)) => {
                    let a = crate::knotgroups::LaurentPoly::from_coeffs(0, &cat.require(k)?.alexander_coeffs);
                    let b = crate::knotgroups::LaurentPoly::from_coeffs(0, &cat.require(o)?.alexander_coeffs);
                    Some(a.mul(&b).normalized_coeffs())
                }
                _ => None,
            };
            Ok(Emit::Json(json!({
                "source": label,
                "polynomial": d.to_string(),
                "coeffs": coeffs,
                "catalog_match": expected.map(|e| e == coeffs),
            })))
        }
        Command::Derham { input, root, branch: b, with } => {
            let (name, p) = load_input(cfg, input)?;
            let pick_root = |p: &Presentation, given: Option<&String>| -> Result<Complex64> {
                match given {
                    Some(s) => parse_complex(s),
                    None => alexander_poly_fox(p)?
                        .roots()
                        .first()
                        .copied()
                        .ok_or_else(|| Error::domain("derham", "Δ has no roots")),
                }
            };
            let r = pick_root(&p, root.as_ref())?;
            let rep = derham_solve(&p, r, branch(*b))?;
            let xs: Vec<Value> = rep.x_values.iter().map(|&z| complex_json(z)).collect();
            let mut v = json!({
                "source": name,
                "root": complex_json(rep.root),
                "sqrt_root": complex_json(rep.sqrt_root),
                "x_values": xs,
                "kernel_dim": rep.kernel_dim,
                "max_residual": rep.max_residual,
            });
            if let Some(other) = with {
                let cat = catalog(cfg)?;
                let p2 = presentation_for(cat.require(other)?)?;
                let r2 = pick_root(&p2, None)?;
                let rep2 = derham_solve(&p2, r2, branch(*b))?;
                let ds = derham_direct_sum(&p, &rep, &p2, &rep2)?;
                v["direct_sum"] = json!({
                    "with": other,
                    "root": complex_json(r2),
                    "generators": ds.presentation.num_generators(),
                    "relators": ds.presentation.relators().len(),
                    "max_residual": ds.max_residual,
                });
            }
            Ok(Emit::Json(v))
        }
        Command::BcNormalize { word, equals } => {
            let w = parse_word(word)?;
            let nf = normalize(&w);
            let mut v = json!({ "word": word, "normal_form": nf.to_string(), "terms": nf.terms().len() });
            if let Some(other) = equals {
                let check = bc_relation_check(&w, &parse_word(other)?);
                v["other_normal_form"] = json!(check.right.to_string());
                v["equal"] = json!(check.equal);
            }
            Ok(Emit::Json(v))
        }
    }
}
