//! CSV tables with a fixed numeric format and list/range argument parsing.

use std::io::Write;

use crate::error::{CliError, CliResult};

/// Significant digits written for every float.
pub const SIG_DIGITS: usize = 12;

/// `%.{digits}g`: shortest of fixed and scientific, trailing zeros removed.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries such as 9.99.. -> 10.0.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_g(*x, SIG_DIGITS),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Header plus rows; rendering is the only place numbers become text.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(self.render().as_bytes())
    }
}

/// Parses `a,b,c`, `lin:start:stop:count` or `log:start:stop:count`.
pub fn parse_f64_list(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |what: &str| CliError::Config(format!("cannot parse `{spec}`: {what}"));
    let values = if let Some(rest) = spec.strip_prefix("lin:").or_else(|| spec.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("ranges are kind:start:stop:count"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("stop"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count"))?;
        if count == 0 {
            return Err(bad("empty range"));
        }
        let log = spec.starts_with("log:");
        if log && (a <= 0.0 || b <= 0.0) {
            return Err(bad("log ranges need positive endpoints"));
        }
        (0..count)
            .map(|k| {
                let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                if log {
                    (a.ln() + t * (b.ln() - a.ln())).exp()
                } else {
                    a + t * (b - a)
                }
            })
            .collect()
    } else {
        spec.split(',')
            .map(|s| parse_f64(s.trim()).ok_or_else(|| bad(s)))
            .collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() || values.iter().any(|x| !x.is_finite()) {
        return Err(bad("values must be finite and non-empty"));
    }
    Ok(values)
}

/// Accepts plain numbers plus `pi`, `pi/k` and `k*pi`.
pub fn parse_f64(s: &str) -> Option<f64> {
    use std::f64::consts::PI;
    let s = s.trim().to_ascii_lowercase();
    if let Ok(x) = s.parse() {
        return Some(x);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.as_str()),
    };
    let v = if body == "pi" {
        PI
    } else if let Some(d) = body.strip_prefix("pi/") {
        PI / d.parse::<f64>().ok()?
    } else if let Some(k) = body.strip_suffix("*pi") {
        k.parse::<f64>().ok()? * PI
    } else {
        return None;
    };
    Some(if neg { -v } else { v })
}

pub fn parse_usize_list(spec: &str) -> CliResult<Vec<usize>> {
    let out = spec
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("`{s}` is not a non-negative integer"))))
        .collect::<CliResult<Vec<usize>>>()?;
    if out.is_empty() {
        return Err(CliError::Config("empty integer list".into()));
    }
    Ok(out)
}
