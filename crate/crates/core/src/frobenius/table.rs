//! Coefficient tables: CSV ingestion, normalization and exact identity checks.
//!
//! CSV layout (UTF-8, `\n` line endings):
//!
//! ```text
//! #D=<square-free int>      optional, default 1 (rational coefficients)
//! #N=<level>                optional
//! p,ax,ay,eps_num,eps_ord[,class][,norm]
//! 5,1/2,-1,1,4
//! ```
//!
//! A row means `a_p = ax + ay·√D` and `ε(p) = ζ_{eps_ord}^{eps_num}`.

use std::io::{BufRead, Write};
use std::path::Path;

use num::complex::Complex64;
use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use super::curve::is_prime;
use super::quadratic::{is_square_free, QuadFieldElem};
use crate::error::{Error, Result};
use crate::finite_group::{Cyclotomic, RootOfUnity};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub a_p: QuadFieldElem,
    pub eps: RootOfUnity,
    pub class_label: Option<usize>,
    /// Absolute norm of the prime; `p` itself over Q.
    pub norm: Option<u64>,
}

impl PrimeRecord {
    pub fn rational(p: u64, a_p: i64) -> PrimeRecord {
        PrimeRecord {
            p,
            a_p: QuadFieldElem::from_integer(a_p),
            eps: RootOfUnity::one(),
            class_label: None,
            norm: None,
        }
    }

    pub fn norm_value(&self) -> u64 {
        self.norm.unwrap_or(self.p)
    }

    /// Normalized traces, one per embedding of the coefficient field.
    pub fn traces(&self) -> Vec<Complex64> {
        let emb = self.a_p.embeddings();
        let s = (self.norm_value() as f64).sqrt();
        if self.a_p.d() == 1 {
            vec![emb[0] / s]
        } else {
            vec![emb[0] / s, emb[1] / s]
        }
    }

    fn weil_bound_holds(&self) -> bool {
        self.a_p
            .abs_sq_at_most(&BigRational::from_integer((4 * self.norm_value()).into()))
    }
}

/// `σ(a_p)/√Nm(p)` for `embedding ∈ {1, 2}`; a rational `a_p` gives the same
/// value for both.
pub fn normalize(record: &PrimeRecord, embedding: usize) -> Complex64 {
    let emb = record.a_p.embeddings();
    let s = (record.norm_value() as f64).sqrt();
    match embedding {
        1 => emb[0] / s,
        2 => emb[1] / s,
        _ => panic!("embedding index must be 1 or 2"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub level: Option<u64>,
    /// Coefficient field `Q(√D)`; 1 for Q.
    pub d: i64,
    pub records: Vec<PrimeRecord>,
}

impl CoefficientTable {
    pub fn new(level: Option<u64>, d: i64, records: Vec<PrimeRecord>) -> Result<CoefficientTable> {
        let t = CoefficientTable { level, d, records };
        t.validate()?;
        Ok(t)
    }

    /// Rational table from `(p, a_p)` pairs.
    pub fn from_traces(level: Option<u64>, aps: &[(u64, i64)]) -> Result<CoefficientTable> {
        CoefficientTable::new(
            level,
            1,
            aps.iter().map(|&(p, a)| PrimeRecord::rational(p, a)).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !is_square_free(self.d) {
            return Err(Error::InvalidSpec(format!("D = {} is not square-free", self.d)));
        }
        let mut last = 0;
        for r in &self.records {
            if r.p <= last {
                return Err(Error::InvariantViolation {
                    p: r.p,
                    msg: "records are not strictly increasing in p".into(),
                });
            }
            last = r.p;
            if !is_prime(r.p) {
                return Err(Error::InvariantViolation {
                    p: r.p,
                    msg: "not a prime".into(),
                });
            }
            if matches!(self.level, Some(n) if n % r.p == 0) {
                return Err(Error::InvariantViolation {
                    p: r.p,
                    msg: "prime divides the level".into(),
                });
            }
            if r.a_p.d() != self.d && !r.a_p.is_rational() {
                return Err(Error::InvariantViolation {
                    p: r.p,
                    msg: "a_p lies outside the coefficient field".into(),
                });
            }
            if !r.weil_bound_holds() {
                return Err(Error::InvariantViolation {
                    p: r.p,
                    msg: format!("a_p = {} violates |σ(a_p)| ≤ 2√p", r.a_p),
                });
            }
        }
        Ok(())
    }

    pub fn has_class_labels(&self) -> bool {
        self.records.iter().all(|r| r.class_label.is_some())
    }

    pub fn load(path: &Path) -> Result<CoefficientTable> {
        let f = std::fs::File::open(path)?;
        CoefficientTable::read_csv(std::io::BufReader::new(f))
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<CoefficientTable> {
        let mut d = 1i64;
        let mut level = None;
        let mut columns: Option<Vec<String>> = None;
        let mut records = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            if line.trim().is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if columns.is_some() {
                    return Err(perr("metadata after the header".into()));
                }
                let (k, v) = meta
                    .split_once('=')
                    .ok_or_else(|| perr(format!("malformed metadata {line:?}")))?;
                match k.trim() {
                    "D" => {
                        d = v.trim().parse().map_err(|e| perr(format!("D: {e}")))?;
                        if !is_square_free(d) {
                            return Err(perr(format!("D = {d} is not square-free")));
                        }
                    }
                    "N" => level = Some(v.trim().parse().map_err(|e| perr(format!("N: {e}")))?),
                    other => return Err(perr(format!("unknown metadata key {other:?}"))),
                }
                continue;
            }
            let Some(cols) = &columns else {
                let header: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
                let base = ["p", "ax", "ay", "eps_num", "eps_ord"];
                if header.len() < 5 || header[..5] != base {
                    return Err(perr(format!("expected header starting {}", base.join(","))));
                }
                for extra in &header[5..] {
                    if extra != "class" && extra != "norm" {
                        return Err(perr(format!("unknown column {extra:?}")));
                    }
                }
                columns = Some(header);
                continue;
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != cols.len() {
                return Err(perr(format!("expected {} fields, found {}", cols.len(), fields.len())));
            }
            let p: u64 = fields[0].parse().map_err(|e| perr(format!("p: {e}")))?;
            let ax: BigRational = fields[1].parse().map_err(|e| perr(format!("ax: {e:?}")))?;
            let ay: BigRational = fields[2].parse().map_err(|e| perr(format!("ay: {e:?}")))?;
            let eps_num: i64 = fields[3].parse().map_err(|e| perr(format!("eps_num: {e}")))?;
            let eps_ord: u32 = fields[4].parse().map_err(|e| perr(format!("eps_ord: {e}")))?;
            if eps_ord == 0 {
                return Err(perr("eps_ord must be positive".into()));
            }
            if d == 1 && !ay.is_zero() {
                return Err(perr("ay must be 0 without a #D line".into()));
            }
            let mut rec = PrimeRecord {
                p,
                a_p: QuadFieldElem::new(d, ax, ay).map_err(|e| perr(e.to_string()))?,
                eps: RootOfUnity::new(eps_num, eps_ord),
                class_label: None,
                norm: None,
            };
            for (name, v) in cols[5..].iter().zip(&fields[5..]) {
                if v.is_empty() {
                    continue;
                }
                match name.as_str() {
                    "class" => rec.class_label = Some(v.parse().map_err(|e| perr(format!("class: {e}")))?),
                    _ => rec.norm = Some(v.parse().map_err(|e| perr(format!("norm: {e}")))?),
                }
            }
            records.push(rec);
        }
        if columns.is_none() {
            return Err(Error::Parse {
                line: 0,
                msg: "missing header".into(),
            });
        }
        CoefficientTable::new(level, d, records)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#D={}", self.d)?;
        if let Some(n) = self.level {
            writeln!(w, "#N={n}")?;
        }
        let with_class = self.records.iter().any(|r| r.class_label.is_some());
        let with_norm = self.records.iter().any(|r| r.norm.is_some());
        write!(w, "p,ax,ay,eps_num,eps_ord")?;
        if with_class {
            write!(w, ",class")?;
        }
        if with_norm {
            write!(w, ",norm")?;
        }
        writeln!(w)?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.records {
            write!(
                w,
                "{},{},{},{},{}",
                r.p,
                r.a_p.x(),
                r.a_p.y(),
                r.eps.exp(),
                r.eps.order()
            )?;
            if with_class {
                write!(w, ",{}", opt(r.class_label.map(|c| c.to_string())))?;
            }
            if with_norm {
                write!(w, ",{}", opt(r.norm.map(|c| c.to_string())))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeFailure {
    pub p: u64,
    pub reason: String,
}

/// Per-prime outcome of an exact identity check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<PrimeFailure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, p: u64, reason: impl Into<String>) {
        self.failures.push(PrimeFailure {
            p,
            reason: reason.into(),
        });
    }
}

/// For each prime: `a_p²/ε_p = a_p·ā_p` exactly, with the common value in the
/// real subfield `M` of `Q(√D)`; for `D > 1` also that `a_p·ā_p = a_p²` is
/// totally positive (or `a_p = 0`).
pub fn ribet_identity_check(table: &CoefficientTable) -> CheckReport {
    let mut report = CheckReport::default();
    for r in &table.records {
        report.checked += 1;
        let a = r.a_p.to_cyclotomic();
        let lhs = &(&a * &a) * &r.eps.inv().to_cyclotomic();
        let rhs = &a * &a.conj();
        if lhs != rhs {
            report.fail(r.p, format!("a_p^2/eps_p = {lhs} differs from a_p*conj(a_p) = {rhs}"));
            continue;
        }
        // a·ā inside the quadratic model: the norm when D < 0, a² when D > 0
        let in_m = if r.a_p.d() < 0 {
            QuadFieldElem::rational(r.a_p.norm())
        } else {
            &r.a_p * &r.a_p
        };
        if in_m.to_cyclotomic() != rhs {
            report.fail(r.p, "a_p*conj(a_p) does not lie in the real subfield");
            continue;
        }
        if r.a_p.d() > 1 && !r.a_p.is_zero() && !in_m.is_totally_positive() {
            report.fail(r.p, format!("a_p*conj(a_p) = {in_m} is not totally positive"));
        }
    }
    report
}

/// `c_p = Tr_{M/M₀}(a_p·b_p)` per prime; the trace is the identity when the
/// `a` table is rational and `x ↦ x + x̄` otherwise.
pub fn tensor_trace_check(a: &CoefficientTable, b: &CoefficientTable, c: &CoefficientTable) -> Result<CheckReport> {
    let support = |t: &CoefficientTable| t.records.iter().map(|r| r.p).collect::<Vec<_>>();
    if support(a) != support(b) || support(a) != support(c) {
        return Err(Error::Config("tables do not share the same primes".into()));
    }
    let quadratic = a.d != 1;
    let mut report = CheckReport::default();
    for ((ra, rb), rc) in a.records.iter().zip(&b.records).zip(&c.records) {
        report.checked += 1;
        let Some(prod) = ra.a_p.checked_mul(&rb.a_p) else {
            report.fail(ra.p, "a_p and b_p lie in different quadratic fields");
            continue;
        };
        let expect = if quadratic {
            QuadFieldElem::rational(prod.trace())
        } else {
            prod
        };
        let got = &rc.a_p;
        if expect.to_cyclotomic() != got.to_cyclotomic() {
            report.fail(ra.p, format!("c_p = {got}, expected {expect}"));
        }
    }
    Ok(report)
}

/// `a_p` as an exact cyclotomic number.
pub fn ap_cyclotomic(r: &PrimeRecord) -> Cyclotomic {
    r.a_p.to_cyclotomic()
}
