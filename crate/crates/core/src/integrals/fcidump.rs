//! FCIDUMP reader/writer.
//!
//! Header: `&FCI NORB=<n>,NELEC=<ne>,MS2=<ms>,` … `&END` (or `/`). Body lines
//! are `<value> i j k l` with 1-based chemist-notation indices; `k = l = 0`
//! marks a one-body element and `i = j = k = l = 0` the scalar energy.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::{Eri, MolecularIntegrals};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FcidumpHeader {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i32,
}

fn is_terminator(line: &str) -> bool {
    let l = line.trim().to_ascii_uppercase();
    l.contains("&END") || l == "/" || l.ends_with('/')
}

fn parse_header(text: &str, first_line: usize) -> Result<FcidumpHeader> {
    let upper = text.to_ascii_uppercase();
    let mut body = upper
        .replace("&FCI", " ")
        .replace("&END", " ")
        .replace('/', " ");
    while body.contains("= ") || body.contains(" =") {
        body = body.replace("= ", "=").replace(" =", "=");
    }
    let mut norb = None;
    let mut nelec = None;
    let mut ms2 = 0;
    for token in body.split([',', '\n', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            let value = value.trim();
            let parse_int = |v: &str| -> Result<i64> {
                v.parse::<i64>()
                    .map_err(|_| Error::parse(first_line, format!("bad value `{v}` for {key}")))
            };
            match key.trim() {
                "NORB" => norb = Some(parse_int(value)?),
                "NELEC" => nelec = Some(parse_int(value)?),
                "MS2" => ms2 = parse_int(value)? as i32,
                _ => {}
            }
        }
    }
    let norb = norb.ok_or_else(|| Error::parse(first_line, "header lacks NORB"))?;
    let nelec = nelec.ok_or_else(|| Error::parse(first_line, "header lacks NELEC"))?;
    if norb < 0 || nelec < 0 {
        return Err(Error::parse(first_line, "negative NORB or NELEC"));
    }
    Ok(FcidumpHeader {
        norb: norb as usize,
        nelec: nelec as usize,
        ms2,
    })
}

/// Parses FCIDUMP text. Returns the integrals and the header.
pub fn read_fcidump_str(text: &str) -> Result<(MolecularIntegrals, FcidumpHeader)> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.trim_start().to_ascii_uppercase().starts_with("&FCI"))
        .ok_or_else(|| Error::parse(1, "missing &FCI header"))?;
    let end = (start..lines.len())
        .find(|&i| is_terminator(lines[i]))
        .ok_or_else(|| Error::parse(start + 1, "header is not terminated by &END or /"))?;
    let header = parse_header(&lines[start..=end].join("\n"), start + 1)?;
    let n = header.norb;

    let mut h1 = DMatrix::zeros(n, n);
    let mut eri = Eri::zeros(n);
    let mut scalar = 0.0;
    for (k, line) in lines.iter().enumerate().skip(end + 1) {
        let lineno = k + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::parse(
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad value `{}`", fields[0])))?;
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad index `{f}`")))?;
            if *slot > n {
                return Err(Error::parse(
                    lineno,
                    format!("index {} exceeds NORB={n}", *slot),
                ));
            }
        }
        match idx {
            [0, 0, 0, 0] => scalar += value,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h1[(i - 1, j - 1)] = value;
                h1[(j - 1, i - 1)] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                eri.set_sym(i - 1, j - 1, k - 1, l - 1, value)
            }
            // orbital energies: `e i 0 0 0`
            [_, 0, 0, 0] => {}
            _ => return Err(Error::parse(lineno, "unrecognised index pattern")),
        }
    }
    let ints = MolecularIntegrals::new(scalar, h1, eri)?;
    Ok((ints, header))
}

/// Reads an FCIDUMP file: `(integrals, n_electrons, ms2)`.
pub fn read_fcidump(path: impl AsRef<Path>) -> Result<(MolecularIntegrals, usize, i32)> {
    let text = std::fs::read_to_string(path)?;
    let (ints, h) = read_fcidump_str(&text)?;
    Ok((ints, h.nelec, h.ms2))
}

pub fn write_fcidump_string(ints: &MolecularIntegrals, n_electrons: usize, ms2: i32) -> String {
    let n = ints.n_spatial;
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={n_electrons},MS2={ms2},");
    let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, " &END");
    let line = |out: &mut String, v: f64, i: usize, j: usize, k: usize, l: usize| {
        let _ = writeln!(out, "{v:>26.17e} {i:>4} {j:>4} {k:>4} {l:>4}");
    };
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let v = ints.eri.get(i, j, k, l);
                    if v != 0.0 {
                        line(&mut out, v, i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = ints.h1[(i, j)];
            if v != 0.0 {
                line(&mut out, v, i + 1, j + 1, 0, 0);
            }
        }
    }
    line(&mut out, ints.scalar_energy(), 0, 0, 0, 0);
    out
}

pub fn write_fcidump(
    ints: &MolecularIntegrals,
    n_electrons: usize,
    ms2: i32,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, write_fcidump_string(ints, n_electrons, ms2))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_only() {
        let text = "&FCI NORB=0,NELEC=0,MS2=0,\n&END\n0.0 0 0 0 0\n";
        let (ints, h) = read_fcidump_str(text).unwrap();
        assert_eq!(h.norb, 0);
        assert_eq!(ints.scalar_energy(), 0.0);
        let text = "&FCI NORB=1,NELEC=2,\n/\n 1.25 0 0 0 0\n";
        let (ints, h) = read_fcidump_str(text).unwrap();
        assert_eq!((h.norb, h.nelec, h.ms2), (1, 2, 0));
        assert_eq!(ints.scalar_energy(), 1.25);
        assert_eq!(ints.h1[(0, 0)], 0.0);
    }

    #[test]
    fn index_out_of_range_reports_line() {
        let text =
            "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n0.5 1 1 1 1\n0.1 3 1 1 1\n";
        match read_fcidump_str(text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 6),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_header() {
        assert!(matches!(
            read_fcidump_str("0.1 1 1 1 1\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(read_fcidump_str("&FCI NELEC=2,\n&END\n").is_err());
    }
}
