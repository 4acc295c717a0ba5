//! Basis set data: `element <symbol>` headers followed by shells written as
//! `S <nprim>` / `P <nprim>` and `nprim` lines of `<exponent> <coefficient>`.
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularMomentum {
    S,
    P,
}

impl AngularMomentum {
    pub fn l(self) -> u32 {
        match self {
            AngularMomentum::S => 0,
            AngularMomentum::P => 1,
        }
    }

    /// Cartesian exponents of each component, in `x, y, z` order for p.
    pub fn cartesians(self) -> &'static [[u32; 3]] {
        match self {
            AngularMomentum::S => &[[0, 0, 0]],
            AngularMomentum::P => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub angular: AngularMomentum,
    /// `(exponent, contraction coefficient)` pairs.
    pub primitives: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BasisSet {
    pub name: String,
    shells: BTreeMap<String, Vec<Shell>>,
}

const BUNDLED: [(&str, &str); 3] = [
    ("sto-3g", include_str!("../../data/basis/sto-3g.basis")),
    ("6-31g", include_str!("../../data/basis/6-31g.basis")),
    ("cc-pvdz", include_str!("../../data/basis/cc-pvdz.basis")),
];

impl BasisSet {
    /// One of the bundled sets: `sto-3g`, `6-31g`, `cc-pvdz` (case-insensitive).
    pub fn named(name: &str) -> Result<Self> {
        let key = name.to_ascii_lowercase();
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == key)
            .ok_or_else(|| Error::Domain(format!("no bundled basis set named {name}")))?;
        let mut b = Self::parse(text)?;
        b.name = key;
        Ok(b)
    }

    pub fn bundled_names() -> Vec<&'static str> {
        BUNDLED.iter().map(|(n, _)| *n).collect()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut b = Self::parse(&text)?;
        b.name = path.as_ref().display().to_string();
        Ok(b)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut shells: BTreeMap<String, Vec<Shell>> = BTreeMap::new();
        let mut element: Option<String> = None;
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        while let Some((lineno, line)) = lines.next() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0].to_ascii_lowercase().as_str() {
                "element" => {
                    let sym = fields
                        .get(1)
                        .ok_or_else(|| Error::parse(lineno, "element header without symbol"))?;
                    let sym = normalize_symbol(sym);
                    shells.entry(sym.clone()).or_default();
                    element = Some(sym);
                }
                kind @ ("s" | "p" | "d" | "f" | "g") => {
                    let el = element
                        .as_ref()
                        .ok_or_else(|| Error::parse(lineno, "shell before any element header"))?;
                    let angular = match kind {
                        "s" => AngularMomentum::S,
                        "p" => AngularMomentum::P,
                        other => {
                            return Err(Error::Unsupported(format!(
                                "angular momentum {} at line {lineno}",
                                other.to_uppercase()
                            )))
                        }
                    };
                    let nprim: usize = fields
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .filter(|&n| n > 0)
                        .ok_or_else(|| {
                            Error::parse(lineno, "shell line needs a positive primitive count")
                        })?;
                    let mut primitives = Vec::with_capacity(nprim);
                    for _ in 0..nprim {
                        let (ln, l) = lines
                            .next()
                            .ok_or_else(|| Error::parse(lineno, "unexpected end of shell"))?;
                        let vals: Vec<f64> = l
                            .split_whitespace()
                            .map(|s| s.replace(['D', 'd'], "e").parse::<f64>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|e| Error::parse(ln, e.to_string()))?;
                        if vals.len() != 2 {
                            return Err(Error::parse(ln, "expected `<exponent> <coefficient>`"));
                        }
                        if !(vals[0] > 0.0) {
                            return Err(Error::parse(ln, "exponent must be positive"));
                        }
                        primitives.push((vals[0], vals[1]));
                    }
                    shells.get_mut(el).unwrap().push(Shell {
                        angular,
                        primitives,
                    });
                }
                other => return Err(Error::parse(lineno, format!("unexpected token `{other}`"))),
            }
        }
        Ok(BasisSet {
            name: String::new(),
            shells,
        })
    }

    pub fn shells_for(&self, symbol: &str) -> Result<&[Shell]> {
        self.shells
            .get(&normalize_symbol(symbol))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Domain(format!("basis {} has no shells for {symbol}", self.name)))
    }

    /// Insert or replace the shells of one element.
    pub fn set_shells(&mut self, symbol: &str, shells: Vec<Shell>) {
        self.shells.insert(normalize_symbol(symbol), shells);
    }
}

fn normalize_symbol(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_ascii_uppercase().to_string() + &c.as_str().to_ascii_lowercase(),
        None => String::new(),
    }
}
