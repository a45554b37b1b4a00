use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

use super::smith::{abelianization, IntMatrix};

/// A group word as signed 1-based generator indices: `k` is xₖ and `-k` is xₖ⁻¹.
pub type Word = Vec<i32>;

/// Cancels adjacent inverse letters.
pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse_word(w: &[i32]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn exponent_sum(w: &[i32]) -> i64 {
    w.iter().map(|&l| l.signum() as i64).sum()
}

/// A finite group presentation with a distinguished basepoint generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    basepoint: usize,
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_lowercase())
        && s.chars().all(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '_')
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>, basepoint: usize) -> Result<Self> {
        let n = generators.len() as i32;
        if n == 0 {
            return Err(Error::domain("presentation", "no generators"));
        }
        if basepoint >= generators.len() {
            return Err(Error::domain("presentation", format!("basepoint {basepoint} out of range")));
        }
        for g in &generators {
            if !valid_name(g) {
                return Err(Error::domain("presentation", format!("bad generator name {g:?}")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(Error::domain("presentation", format!("duplicate generator {g}")));
            }
        }
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(&bad) = r.iter().find(|&&l| l == 0 || l.abs() > n) {
                return Err(Error::domain("presentation", format!("letter {bad} out of range")));
            }
            rels.push(free_reduce(&r));
        }
        Ok(Presentation { generators, relators: rels, basepoint })
    }

    /// ⟨a | ⟩, the unknot group.
    pub fn unknot() -> Self {
        Presentation { generators: vec!["a".into()], relators: vec![], basepoint: 0 }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn with_basepoint(mut self, basepoint: usize) -> Result<Self> {
        if basepoint >= self.generators.len() {
            return Err(Error::domain("presentation", format!("basepoint {basepoint} out of range")));
        }
        self.basepoint = basepoint;
        Ok(self)
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let n = self.generators.len();
        let mut m = IntMatrix::zeros(self.relators.len(), n);
        for (i, r) in self.relators.iter().enumerate() {
            for &l in r {
                let j = l.unsigned_abs() as usize - 1;
                m.add_to(i, j, l.signum() as i64);
            }
        }
        m
    }

    /// Wirtinger shape: at most one relator per generator, each a conjugation
    /// relation x·y^ε·z⁻¹·y^{−ε} or a collapsed form of one.
    pub fn is_wirtinger(&self) -> bool {
        if self.relators.len() > self.generators.len() {
            return false;
        }
        self.relators.iter().all(|r| match r.len() {
            0 => true,
            2 => r[0].signum() != r[1].signum(),
            4 => {
                // some rotation has the form x y z⁻¹ y⁻¹ or x y⁻¹ z⁻¹ y
                (0..4).any(|k| {
                    let w: Vec<i32> = (0..4).map(|i| r[(i + k) % 4]).collect();
                    w[0] > 0 && w[2] < 0 && w[1] == -w[3]
                })
            }
            _ => false,
        })
    }

    /// Every relator has exponent sum 0 and H₁ = ℤ, so each generator is a meridian.
    pub fn is_knot_like(&self) -> bool {
        self.relators.iter().all(|r| exponent_sum(r) == 0) && abelianization(self).is_infinite_cyclic()
    }

    /// Parses the text format: the first non-comment line lists generators, every
    /// further line is a relator; an uppercase token is the inverse generator.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (gl, gline) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty presentation".into() })?;
        let generators: Vec<String> = gline.split_whitespace().map(str::to_string).collect();
        for g in &generators {
            if !valid_name(g) {
                return Err(Error::Parse { line: gl, msg: format!("bad generator name {g:?}") });
            }
        }
        let mut relators = Vec::new();
        for (ln, l) in lines {
            let mut w = Vec::new();
            for tok in l.split_whitespace() {
                let lower = tok.to_ascii_lowercase();
                let idx = generators
                    .iter()
                    .position(|g| *g == lower)
                    .ok_or_else(|| Error::Parse { line: ln, msg: format!("unknown generator {tok:?}") })?;
                let inverse = tok.chars().next().is_some_and(|c| c.is_ascii_uppercase());
                let letter = idx as i32 + 1;
                w.push(if inverse { -letter } else { letter });
            }
            relators.push(w);
        }
        Presentation::new(generators, relators, 0).map_err(|e| Error::Parse { line: gl, msg: e.to_string() })
    }

    pub fn word_to_string(&self, w: &[i32]) -> String {
        w.iter()
            .map(|&l| {
                let g = &self.generators[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    g.clone()
                } else {
                    g.to_ascii_uppercase()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let mut s = self.generators.join(" ");
        s.push('\n');
        for r in &self.relators {
            s.push_str(&self.word_to_string(r));
            s.push('\n');
        }
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Wirtinger presentation of the closure of a braid word (`k` is σₖ, `-k` its inverse).
    ///
    /// Strands run downward. At σᵢ the strand at position i passes over to i+1 and the
    /// under-arc b becomes a b a⁻¹; at σᵢ⁻¹ the strand at i+1 passes over to i and the
    /// under-arc a becomes b⁻¹ a b.
    pub fn from_braid(word: &[i32]) -> Result<Self> {
        if word.is_empty() || word.contains(&0) {
            return Err(Error::domain("from_braid", "braid word must be non-empty with non-zero letters"));
        }
        let strands = word.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0) + 1;
        let mut pos: Vec<usize> = (0..strands).collect();
        let mut perm: Vec<usize> = (0..strands).collect();
        let mut arcs = strands;
        let mut raw: Vec<[(usize, i32); 4]> = Vec::new();
        for &s in word {
            let i = s.unsigned_abs() as usize - 1;
            let (a, b) = (pos[i], pos[i + 1]);
            let c = arcs;
            arcs += 1;
            if s > 0 {
                raw.push([(c, 1), (a, 1), (b, -1), (a, -1)]);
                pos[i] = c;
                pos[i + 1] = a;
            } else {
                raw.push([(c, 1), (b, -1), (a, -1), (b, 1)]);
                pos[i] = b;
                pos[i + 1] = c;
            }
            perm.swap(i, i + 1);
        }
        // a knot needs the strand permutation to be one cycle
        let mut k = 0;
        for step in 1..=strands {
            k = perm[k];
            if k == 0 && step < strands {
                return Err(Error::domain("from_braid", "closure has more than one component"));
            }
        }

        let mut parent: Vec<usize> = (0..arcs).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (k, &bottom) in pos.iter().enumerate() {
            let (x, y) = (find(&mut parent, bottom), find(&mut parent, k));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        let mut index = vec![usize::MAX; arcs];
        let mut count = 0;
        for a in 0..arcs {
            let r = find(&mut parent, a);
            if index[r] == usize::MAX {
                index[r] = count;
                count += 1;
            }
        }
        let relators: Vec<Word> = raw
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|&(a, e)| (index[find(&mut parent, a)] as i32 + 1) * e)
                    .collect()
            })
            .collect();
        let generators = (1..=count).map(|i| format!("x{i}")).collect();
        Presentation::new(generators, relators, 0)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | ", self.generators.join(", "))?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        write!(f, "{}⟩", rels.join(", "))
    }
}

/// π₁ of a connected sum: the disjoint union of both presentations plus a₁b₁⁻¹
/// identifying the two basepoint meridians. Generators are renamed g1, g2, …
pub fn amalgamate(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    for (i, p) in [p1, p2].into_iter().enumerate() {
        if !p.is_knot_like() {
            return Err(Error::Precondition(format!(
                "presentation {} is not a knot group presentation (needs meridian generators and H1 = Z)",
                i + 1
            )));
        }
    }
    let n1 = p1.num_generators() as i32;
    let total = p1.num_generators() + p2.num_generators();
    let generators = (1..=total).map(|i| format!("g{i}")).collect();
    let mut relators: Vec<Word> = p1.relators.clone();
    relators.extend(p2.relators.iter().map(|r| r.iter().map(|&l| l + l.signum() * n1).collect()));
    let a = p1.basepoint as i32 + 1;
    let b = p2.basepoint as i32 + 1 + n1;
    relators.push(vec![a, -b]);
    Presentation::new(generators, relators, p1.basepoint)
}
