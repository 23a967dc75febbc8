//! Verification reports with per-identity residuals.

use std::fmt;

use serde_json::{json, Value};

use crate::scalar::Ring;
use crate::tensor::Element;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// Max-norm of `lhs - rhs`.
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    /// Exact modes pass only on a structurally zero difference.
    pub fn compare<R: Ring>(
        &mut self,
        name: impl Into<String>,
        lhs: &Element<R>,
        rhs: &Element<R>,
        tol: f64,
    ) -> Result<()> {
        let (residual, zero) = lhs.residual(rhs)?;
        let passed = if R::MODE.is_exact() { zero } else { residual <= tol };
        self.push(name, residual, passed);
        Ok(())
    }

    /// Worst case over a family of comparisons, recorded as one check.
    pub fn compare_all<R: Ring>(
        &mut self,
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = Result<(Element<R>, Element<R>)>>,
        tol: f64,
    ) -> Result<()> {
        let mut worst = 0.0f64;
        let mut passed = true;
        for pair in pairs {
            let (l, r) = pair?;
            let (res, zero) = l.residual(&r)?;
            worst = worst.max(res);
            passed &= if R::MODE.is_exact() { zero } else { res <= tol };
        }
        self.push(name, worst, passed);
        Ok(())
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            passed,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "title": self.title,
            "passed": self.passed(),
            "max_residual": self.max_residual(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "residual": c.residual,
                "passed": c.passed,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {:<40} {:.3e}", c.name, c.residual)?;
        }
        Ok(())
    }
}
