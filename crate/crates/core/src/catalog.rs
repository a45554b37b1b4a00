//! Prime knot tables and multiplicity counts.
//!
//! CSV schema: `name,crossings,genus,alternating,torus,alexander[,wirtinger]`,
//! where `alexander` lists symmetric coefficients lowest degree first separated
//! by spaces, and the optional `wirtinger` column is a presentation file path
//! relative to the CSV file.
//!
//! Chiral pairs are not doubled: each row counts once.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotRecord {
    pub name: String,
    pub crossing_number: u32,
    pub genus: u32,
    pub alternating: bool,
    pub torus: bool,
    pub alexander_coeffs: Vec<i64>,
    pub wirtinger: Option<PathBuf>,
}

impl KnotRecord {
    /// Cr(K) + g(K), the exponent of q^{-β} in the Hamiltonian.
    pub fn weight(&self) -> u32 {
        self.crossing_number + self.genus
    }

    pub fn alexander_at_one(&self) -> i64 {
        self.alexander_coeffs.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRecord { record: self.name.clone(), msg });
        if self.name.is_empty() {
            return bad("empty name".into());
        }
        if self.crossing_number < 3 {
            return bad(format!("crossing number {} < 3", self.crossing_number));
        }
        if self.genus < 1 {
            return bad("genus must be at least 1".into());
        }
        if self.alexander_coeffs.is_empty() {
            return bad("empty Alexander polynomial".into());
        }
        let rev: Vec<i64> = self.alexander_coeffs.iter().rev().copied().collect();
        if rev != self.alexander_coeffs {
            return bad("Alexander coefficients are not palindromic".into());
        }
        let d1 = self.alexander_at_one();
        if d1.abs() != 1 {
            return bad(format!("Δ(1) = {d1}, expected ±1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    All,
    Alternating,
    TorusFree,
}

impl Filter {
    pub fn keeps(self, r: &KnotRecord) -> bool {
        match self {
            Filter::All => true,
            Filter::Alternating => r.alternating,
            Filter::TorusFree => !r.torus,
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "alternating" => Ok(Filter::Alternating),
            "torus-free" => Ok(Filter::TorusFree),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown filter {s:?}") }),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    records: Vec<KnotRecord>,
    index: HashMap<String, usize>,
}

impl Catalog {
    /// Builds a catalog after validating every record and name uniqueness.
    pub fn from_records(records: Vec<KnotRecord>) -> Result<Self> {
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            r.validate()?;
            if index.insert(r.name.clone(), i).is_some() {
                return Err(Error::InvalidRecord { record: r.name.clone(), msg: "duplicate name".into() });
            }
        }
        Ok(Catalog { records, index })
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.index.get(name).map(|&i| &self.records[i])
    }

    pub fn require(&self, name: &str) -> Result<&KnotRecord> {
        self.get(name).ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn filtered(&self, filter: Filter) -> Catalog {
        let recs = self.records.iter().filter(|r| filter.keeps(r)).cloned().collect();
        Catalog::from_records(recs).expect("subset of a valid catalog")
    }

    /// Sub-catalog with the given names, in the order given.
    pub fn subset(&self, names: &[&str]) -> Result<Catalog> {
        let recs = names
            .iter()
            .map(|n| self.require(n).cloned())
            .collect::<Result<Vec<_>>>()?;
        Catalog::from_records(recs)
    }

    /// Number of prime records with Cr = n and g = g.
    pub fn count_exact(&self, n: u32, g: u32) -> u64 {
        self.records
            .iter()
            .filter(|r| r.crossing_number == n && r.genus == g)
            .count() as u64
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" => Some(true),
        "false" | "0" | "no" | "n" => Some(false),
        _ => None,
    }
}

/// Parses catalog CSV text. `base` resolves relative Wirtinger paths.
pub fn parse_catalog(text: &str, filter: Filter, base: Option<&Path>) -> Result<Catalog> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
        .clone();
    let expected = ["name", "crossings", "genus", "alternating", "torus", "alexander"];
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() < 6 || cols[..6] != expected || (cols.len() == 7 && cols[6] != "wirtinger") || cols.len() > 7 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}[,wirtinger], got {}", expected.join(","), cols.join(",")),
        });
    }

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let perr = |msg: String| Error::Parse { line, msg };
        if row.len() < 6 || row.len() > cols.len() {
            return Err(perr(format!("expected {} fields, found {}", cols.len(), row.len())));
        }
        let num = |i: usize, what: &str| -> Result<u32> {
            row[i].parse().map_err(|_| perr(format!("bad {what} {:?}", &row[i])))
        };
        let flag = |i: usize, what: &str| -> Result<bool> {
            parse_bool(&row[i]).ok_or_else(|| perr(format!("bad {what} flag {:?}", &row[i])))
        };
        let alexander = row[5]
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| perr(format!("bad Alexander coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let wirtinger = row
            .get(6)
            .filter(|s| !s.is_empty())
            .map(|s| match base {
                Some(b) => b.join(s),
                None => PathBuf::from(s),
            });
        let rec = KnotRecord {
            name: row[0].to_string(),
            crossing_number: num(1, "crossings")?,
            genus: num(2, "genus")?,
            alternating: flag(3, "alternating")?,
            torus: flag(4, "torus")?,
            alexander_coeffs: alexander,
            wirtinger,
        };
        rec.validate()?;
        if filter.keeps(&rec) {
            records.push(rec);
        }
    }
    Catalog::from_records(records)
}

pub fn load_catalog(path: impl AsRef<Path>, filter: Filter) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_catalog(&text, filter, path.parent())
}

/// Upper constant 2^20/3^6 for C_g.
pub const C_UPPER: f64 = 1_048_576.0 / 729.0;
/// Lower constant for C_g.
pub const C_LOWER: f64 = 400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelMode {
    Exact,
    Asymptotic,
}

/// N_{n,g} ≈ C_g n^{6g−4} with C_g = C^g/(6g)!.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplicityModel {
    pub mode: ModelMode,
    pub c: f64,
    pub g_max: u32,
    pub n_max: u32,
}

impl MultiplicityModel {
    pub fn asymptotic(c: f64, g_max: u32, n_max: u32) -> Result<Self> {
        if !(C_LOWER..=C_UPPER).contains(&c) {
            return Err(Error::domain("multiplicity model", format!("C = {c} outside [400, 2^20/3^6]")));
        }
        Ok(MultiplicityModel { mode: ModelMode::Asymptotic, c, g_max, n_max })
    }

    /// C_g = C^g/(6g)!, zero for g = 0.
    pub fn c_g(&self, g: u32) -> f64 {
        if g == 0 {
            return 0.0;
        }
        (g as f64 * self.c.ln() - statrs::function::gamma::ln_gamma(6.0 * g as f64 + 1.0)).exp()
    }

    /// The model count C_g n^{6g−4}; zero outside the truncation box and for g = 0.
    pub fn count(&self, n: u32, g: u32) -> f64 {
        if g == 0 || g > self.g_max || n > self.n_max {
            return 0.0;
        }
        self.c_g(g) * (n as f64).powi(6 * g as i32 - 4)
    }

    /// Σ_{g=1}^{n} C_g (n − g + 1)^{6g−4}, the nested count of knots with Cr + g = n.
    pub fn nested_count(&self, n: u32) -> f64 {
        (1..=n.min(self.g_max))
            .map(|g| self.c_g(g) * ((n - g + 1) as f64).powi(6 * g as i32 - 4))
            .sum()
    }
}

/// Anything that reports N_{n,g}.
pub trait MultiplicitySource {
    fn count(&self, n: u32, g: u32) -> f64;

    /// Σ_g count(n − g, g).
    fn count_weight(&self, n: u32) -> f64 {
        (1..=n).map(|g| self.count(n - g, g)).sum()
    }
}

impl MultiplicitySource for Catalog {
    fn count(&self, n: u32, g: u32) -> f64 {
        self.count_exact(n, g) as f64
    }
}

impl MultiplicitySource for MultiplicityModel {
    fn count(&self, n: u32, g: u32) -> f64 {
        MultiplicityModel::count(self, n, g)
    }
}

/// Free-function form of [`MultiplicityModel::count`].
pub fn count_asymptotic(model: &MultiplicityModel, n: u32, g: u32) -> f64 {
    model.count(n, g)
}

pub fn count_weight(source: &dyn MultiplicitySource, n: u32) -> f64 {
    source.count_weight(n)
}
