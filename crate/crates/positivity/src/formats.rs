//! JSON problem and certificate files.
//!
//! Rationals are always strings, `"a"` or `"a/b"`, so that no value passes
//! through floating point. The radius `r` is a rational string or `"inf"`.

use std::fmt;

use positivity_core::recurrence::MatrixRecurrence;
use positivity_core::{Certificate, Matrix, Poly, Radius, Rational, RationalFunction, Recurrence};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn at(path: &str, msg: impl fmt::Display) -> FormatError {
    FormatError(format!("{path}: {msg}"))
}

pub fn parse_rational(s: &str, path: &str) -> Result<Rational, FormatError> {
    let t = s.trim();
    let valid = !t.is_empty() && t.split('/').count() <= 2;
    match t.parse::<Rational>() {
        Ok(q) if valid => Ok(q),
        _ => Err(at(path, format_args!("expected a rational \"a\" or \"a/b\", found {s:?}"))),
    }
}

pub fn emit_rational(q: &Rational) -> String {
    q.to_string()
}

fn parse_list(items: &[String], path: &str) -> Result<Vec<Rational>, FormatError> {
    items.iter().enumerate().map(|(i, s)| parse_rational(s, &format!("{path}[{i}]"))).collect()
}

fn emit_list(items: &[Rational]) -> Vec<String> {
    items.iter().map(emit_rational).collect()
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    // serde_json reports line and column
    serde_json::from_str(text).map_err(|e| FormatError(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemFile {
    Scalar(ScalarProblem),
    Matrix(MatrixProblem),
}

/// `p_d(n) u_{n+d} = p_{d-1}(n) u_{n+d-1} + ... + p_0(n) u_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    /// `p_0, ..., p_d`, each as ascending coefficients in `n`.
    pub coefficients: Vec<Vec<String>>,
    /// `u_0, ..., u_{d-1}`.
    pub initial: Vec<String>,
    /// `u_d, u_{d+1}, ...` where the leading coefficient vanishes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<String>,
}

/// `U_{n+1} = A(n) U_n` with rational-function entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub entries: Vec<Vec<EntryFile>>,
    pub initial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFile {
    pub num: Vec<String>,
    #[serde(default = "one")]
    pub den: Vec<String>,
}

fn one() -> Vec<String> {
    vec!["1".into()]
}

#[derive(Clone, Debug)]
pub enum Problem {
    Scalar { recurrence: Recurrence, prefix: Vec<Rational> },
    Matrix { recurrence: MatrixRecurrence, initial: Vec<Rational> },
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        from_json(text)
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            ProblemFile::Scalar(p) => p.name.as_deref(),
            ProblemFile::Matrix(p) => p.name.as_deref(),
        }
    }

    pub fn to_problem(&self) -> Result<Problem, FormatError> {
        match self {
            ProblemFile::Scalar(p) => p.to_problem(),
            ProblemFile::Matrix(p) => p.to_problem(),
        }
    }

    pub fn from_recurrence(name: Option<String>, rec: &Recurrence, prefix: &[Rational]) -> Self {
        ProblemFile::Scalar(ScalarProblem {
            name,
            order: rec.order(),
            coefficients: rec.coeffs().iter().map(|p| emit_list(p.coeffs())).collect(),
            initial: emit_list(rec.initial()),
            prefix: emit_list(prefix),
        })
    }
}

impl ScalarProblem {
    fn to_problem(&self) -> Result<Problem, FormatError> {
        if self.coefficients.len() != self.order + 1 {
            return Err(at(
                "coefficients",
                format_args!("expected {} polynomials p_0..p_{}, found {}", self.order + 1, self.order, self.coefficients.len()),
            ));
        }
        if self.initial.len() != self.order {
            return Err(at("initial", format_args!("expected {} values, found {}", self.order, self.initial.len())));
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| parse_list(c, &format!("coefficients[{i}]")).map(Poly::new))
            .collect::<Result<Vec<_>, _>>()?;
        let initial = parse_list(&self.initial, "initial")?;
        let prefix = parse_list(&self.prefix, "prefix")?;
        let recurrence = Recurrence::new(coeffs, initial).map_err(|e| at("coefficients", e))?;
        Ok(Problem::Scalar { recurrence, prefix })
    }
}

impl MatrixProblem {
    fn to_problem(&self) -> Result<Problem, FormatError> {
        let d = self.dimension;
        if self.entries.len() != d || self.entries.iter().any(|r| r.len() != d) {
            return Err(at("entries", format_args!("expected a {d}x{d} matrix")));
        }
        if self.initial.len() != d {
            return Err(at("initial", format_args!("expected {d} values, found {}", self.initial.len())));
        }
        let mut rows = Vec::with_capacity(d);
        for (i, row) in self.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(d);
            for (j, e) in row.iter().enumerate() {
                let path = format!("entries[{i}][{j}]");
                let num = Poly::new(parse_list(&e.num, &format!("{path}.num"))?);
                let den = Poly::new(parse_list(&e.den, &format!("{path}.den"))?);
                out.push(RationalFunction::new(num, den).map_err(|err| at(&path, err))?);
            }
            rows.push(out);
        }
        let recurrence = MatrixRecurrence::new(rows).map_err(|e| at("entries", e))?;
        let initial = parse_list(&self.initial, "initial")?;
        Ok(Problem::Matrix { recurrence, initial })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    pub r: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    /// Exponents `k` of the tolerances `2^-k` tried when rounding `T`.
    pub tolerance_schedule: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Index from which the induction conditions hold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// The certificate refers to `u'_n = u_{n+shift}`.
    #[serde(default)]
    pub shift: usize,
    pub elapsed_ms: u64,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        from_json(text)
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_certificate(cert: &Certificate, metadata: Option<Metadata>) -> Self {
        CertificateFile {
            t: cert.t.to_rows().iter().map(|r| emit_list(r)).collect(),
            r: cert.r.to_string(),
            n: cert.n,
            m: cert.m,
            metadata,
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate, FormatError> {
        let rows = self
            .t
            .iter()
            .enumerate()
            .map(|(i, r)| parse_list(r, &format!("T[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
            return Err(at("T", "expected a nonempty square matrix"));
        }
        let t = Matrix::from_rows(rows).map_err(|e| at("T", e))?;
        let r = match self.r.trim() {
            "inf" => Radius::Infinite,
            s => Radius::Finite(parse_rational(s, "r")?),
        };
        Ok(Certificate { t, r, n: self.n, m: self.m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6", "x").unwrap().to_string(), "-1/2");
        assert_eq!(parse_rational(" 7 ", "x").unwrap().to_string(), "7");
        for bad in ["", "1/0", "1.5", "1/2/3", "inf", "a"] {
            assert!(parse_rational(bad, "x").is_err(), "{bad}");
        }
    }

    #[test]
    fn json_errors_carry_position() {
        let err = ProblemFile::parse("{\n  \"kind\": \"scalar\",\n  \"order\": }").unwrap_err();
        assert!(err.0.contains("line 3"), "{err}");
        let bad = r#"{"kind": "scalar", "order": 1, "coefficients": [["1"], ["x"]], "initial": ["1"]}"#;
        let err = ProblemFile::parse(bad).unwrap().to_problem().unwrap_err();
        assert!(err.0.starts_with("coefficients[1][0]"), "{err}");
    }

    #[test]
    fn certificate_round_trip() {
        let text = r#"{"T": [["1", "0"], ["-1/2", "3"]], "r": "inf", "N": 4, "m": 2}"#;
        let file = CertificateFile::parse(text).unwrap();
        let cert = file.to_certificate().unwrap();
        let again = CertificateFile::from_certificate(&cert, None);
        assert_eq!(again, file);
        assert_eq!(CertificateFile::parse(&again.emit()).unwrap(), file);
        let finite = CertificateFile { r: "5/3".into(), ..file };
        assert_eq!(finite.to_certificate().unwrap().r, Radius::Finite(parse_rational("5/3", "r").unwrap()));
    }
}
