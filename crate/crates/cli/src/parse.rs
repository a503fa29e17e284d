use std::fs;
use std::path::Path;

use spinmcg::{CurveClassTable, Genus, Vector, Z2Matrix, Z2Vec};

use crate::Failure;

pub fn ints(input: &str) -> Result<Vec<i64>, Failure> {
    let toks: Vec<&str> = input.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
    if toks.is_empty() {
        return Err(Failure::input("empty vector"));
    }
    toks.iter()
        .map(|t| t.parse::<i64>().map_err(|_| Failure::input(format!("cannot parse `{t}` as an integer"))))
        .collect()
}

pub fn bits(input: &str) -> Result<Vec<u8>, Failure> {
    let vals = ints(input)?;
    vals.iter()
        .map(|&v| match v {
            0 | 1 => Ok(v as u8),
            _ => Err(Failure::input(format!("`{v}` is not a bit"))),
        })
        .collect()
}

fn check_len(genus: Genus, n: usize) -> Result<(), Failure> {
    if n != genus.dim() {
        return Err(Failure::input(format!("expected {} coordinates for genus {}, got {n}", genus.dim(), genus.get())));
    }
    Ok(())
}

pub fn int_vector(genus: Genus, input: &str) -> Result<Vector<i64>, Failure> {
    let v = ints(input)?;
    check_len(genus, v.len())?;
    Ok(Vector::from_i64s(genus, &v)?)
}

pub fn z2_vector(genus: Genus, input: &str) -> Result<Z2Vec, Failure> {
    let v = ints(input)?;
    check_len(genus, v.len())?;
    let reduced: Vec<u8> = v.iter().map(|x| x.rem_euclid(2) as u8).collect();
    Ok(Z2Vec::from_coords(genus, &reduced)?)
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

pub fn json(path: &Path) -> Result<serde_json::Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A matrix file holds either a JSON array of rows or one row of bits per line.
pub fn z2_matrix(path: &Path, genus: Genus) -> Result<Z2Matrix, Failure> {
    let text = read(path)?;
    let rows: Vec<Vec<u8>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    } else {
        text.lines().filter(|l| !l.trim().is_empty()).map(bits).collect::<Result<_, _>>()?
    };
    if rows.len() != genus.dim() {
        return Err(Failure::input(format!(
            "expected {} rows for genus {}, got {}",
            genus.dim(),
            genus.get(),
            rows.len()
        )));
    }
    for (k, r) in rows.iter().enumerate() {
        if r.len() != genus.dim() {
            return Err(Failure::input(format!("row {} has {} entries, expected {}", k + 1, r.len(), genus.dim())));
        }
        if let Some(b) = r.iter().find(|&&b| b > 1) {
            return Err(Failure::input(format!("row {}: `{b}` is not a bit", k + 1)));
        }
    }
    Ok(Z2Matrix::from_rows(genus, &rows)?)
}

/// Loads a curve-class table; tables failing the chain checks are accepted
/// with a warning so that perturbed tables can be tried.
pub fn classes(path: Option<&Path>, genus: Genus) -> Result<CurveClassTable, Failure> {
    let Some(path) = path else {
        return Ok(CurveClassTable::canonical(genus));
    };
    let t = CurveClassTable::from_json_unvalidated(&json(path)?)?;
    if t.genus() != genus {
        return Err(Failure::input(format!(
            "classes in {} are for genus {}, not {}",
            path.display(),
            t.genus().get(),
            genus.get()
        )));
    }
    if let Err(e) = t.validate() {
        eprintln!("warning: {}: {e}", path.display());
    }
    Ok(t)
}
