//! Text format for [`PairingParams`]:
//!
//! ```text
//! # comment
//! q = 43
//! beta = 3
//! Q.y = 5,0,1
//! ```
//!
//! One `key = value` per line, decimal integers, extension elements as
//! comma-separated little-endian coefficients. `Q.y`/`Q.z` with `k/2`
//! coefficients describe `(1 : y : z·α)`; with `k` coefficients they
//! describe a general `(1 : y : z)` over `F_{q^k}`. The subfield modulus is
//! not stored since it is rebuilt deterministically from `(q, k)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::fields::{Field, FieldError, PrimeField, Tower};
use crate::huff::HuffPoint;
use crate::pairing::{EvalPoint, SpecialPoint};
use crate::paramgen::{ParamError, PairingParams};

const KEYS: [&str; 12] = ["q", "a", "b", "n", "r", "k", "beta", "P.X", "P.Y", "P.Z", "Q.y", "Q.z"];

fn join(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn to_text(p: &PairingParams) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# generalized Huff curve x(ay^2 - 1) = y(bx^2 - 1) over F_q");
    for (key, v) in [("q", p.q), ("a", p.a), ("b", p.b), ("n", p.n), ("r", p.r), ("k", p.k)] {
        let _ = writeln!(s, "{key} = {v}");
    }
    let _ = writeln!(s, "beta = {}", join(&p.beta));
    let _ = writeln!(s, "P.X = {}", p.p.x.value());
    let _ = writeln!(s, "P.Y = {}", p.p.y.value());
    let _ = writeln!(s, "P.Z = {}", p.p.z.value());
    match &p.q_point {
        EvalPoint::Special(sp) => {
            let _ = writeln!(s, "Q.y = {}", join(sp.y.coeffs()));
            let _ = writeln!(s, "Q.z = {}", join(sp.z.coeffs()));
        }
        EvalPoint::General(g) => {
            let tower = p.tower().expect("validated parameters");
            let ext = tower.ext();
            let x_inv = ext.inv(&g.x, &crate::fields::OpCounter::new()).expect("X != 0");
            let ctr = crate::fields::OpCounter::new();
            let _ = writeln!(s, "Q.y = {}", join(&ext.coeffs(&ext.mul(&g.y, &x_inv, &ctr))));
            let _ = writeln!(s, "Q.z = {}", join(&ext.coeffs(&ext.mul(&g.z, &x_inv, &ctr))));
        }
    }
    s
}

fn malformed(line: usize, msg: impl Into<String>) -> ParamError {
    ParamError::Malformed { line, msg: msg.into() }
}

fn parse_int(line: usize, key: &str, v: &str) -> Result<u64, ParamError> {
    v.trim()
        .parse::<u64>()
        .map_err(|_| malformed(line, format!("{key}: '{}' is not a decimal integer", v.trim())))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<u64>, ParamError> {
    v.split(',').map(|c| parse_int(line, key, c)).collect()
}

/// Parses and fully validates a parameter file.
pub fn from_text(text: &str) -> Result<PairingParams, ParamError> {
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| malformed(line_no, "expected 'key = value'"))?;
        let key = key.trim();
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(malformed(line_no, format!("unknown key '{key}'")));
        };
        if fields.insert(key, (line_no, value.trim())).is_some() {
            return Err(malformed(line_no, format!("duplicate key '{key}'")));
        }
    }
    let get = |key: &'static str| -> Result<(usize, &str), ParamError> {
        fields.get(key).copied().ok_or(ParamError::Invalid {
            field: key,
            check: "missing".into(),
        })
    };
    let int = |key: &'static str| -> Result<u64, ParamError> {
        let (l, v) = get(key)?;
        parse_int(l, key, v)
    };
    let list = |key: &'static str| -> Result<Vec<u64>, ParamError> {
        let (l, v) = get(key)?;
        parse_list(l, key, v)
    };

    let q = int("q")?;
    let field = PrimeField::new(q).map_err(|e| ParamError::Invalid {
        field: "q",
        check: e.to_string(),
    })?;
    let reduced = |key: &'static str, v: u64| -> Result<u64, ParamError> {
        if v >= q {
            return Err(ParamError::Invalid {
                field: key,
                check: FieldError::Unreduced { value: v, q }.to_string(),
            });
        }
        Ok(v)
    };
    let a = reduced("a", int("a")?)?;
    let b = reduced("b", int("b")?)?;
    let k = int("k")?;
    let beta = list("beta")?;
    let p = HuffPoint::new(
        field.elem(reduced("P.X", int("P.X")?)?),
        field.elem(reduced("P.Y", int("P.Y")?)?),
        field.elem(reduced("P.Z", int("P.Z")?)?),
    );
    let qy = list("Q.y")?;
    let qz = list("Q.z")?;
    if k % 2 != 0 || k == 0 {
        return Err(ParamError::Invalid {
            field: "k",
            check: "k is odd".into(),
        });
    }
    let tower = Tower::with_beta(q, k as usize, &beta).map_err(|e| ParamError::Invalid {
        field: "beta",
        check: e.to_string(),
    })?;
    let bad_q = |e: FieldError| ParamError::Invalid {
        field: "Q",
        check: e.to_string(),
    };
    let d = (k / 2) as usize;
    let q_point = if qy.len() == d && qz.len() == d {
        EvalPoint::Special(SpecialPoint {
            y: tower.sub().from_coeffs(&qy).map_err(bad_q)?,
            z: tower.sub().from_coeffs(&qz).map_err(bad_q)?,
        })
    } else {
        let ext = tower.ext();
        EvalPoint::General(HuffPoint::new(
            ext.one(),
            ext.from_coeffs(&qy).map_err(bad_q)?,
            ext.from_coeffs(&qz).map_err(bad_q)?,
        ))
    };
    let params = PairingParams {
        q,
        a,
        b,
        n: int("n")?,
        r: int("r")?,
        k,
        beta,
        p,
        q_point,
    };
    params.validate()?;
    Ok(params)
}
