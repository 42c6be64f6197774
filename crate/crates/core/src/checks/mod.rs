//! Named identity checks, registered behind a common trait and selected by
//! name at run time.

mod builtin;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poincare::CurveMarking;
use crate::resolution::{Minimality, ResolutionModel};
use crate::semigroup::SemigroupHandle;

/// Everything a check may look at.
#[derive(Debug, Clone)]
pub struct CheckContext {
    pub handle: SemigroupHandle,
    pub marking: CurveMarking,
    /// Truncation box for series and membership sweeps.
    pub bound: Vec<u64>,
    pub kmax: usize,
    pub minimality: Minimality,
}

impl CheckContext {
    pub fn new(model: ResolutionModel, marked: &[usize], bound: Vec<u64>, kmax: usize) -> Result<Self> {
        if bound.len() != marked.len() {
            return Err(Error::ArityMismatch { expected: marked.len(), found: bound.len() });
        }
        let minimality = model.validate_minimality(marked);
        let marking = CurveMarking::new(model.clone(), marked)?;
        let handle = SemigroupHandle::new(model, marked)?;
        Ok(CheckContext { handle, marking, bound, kmax, minimality })
    }

    pub fn model(&self) -> &ResolutionModel {
        self.handle.model()
    }

    pub fn r(&self) -> usize {
        self.handle.r()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_discrepancy: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// What a check reports before the registry attaches its name.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass(Option<String>),
    Fail(Value),
    Skipped(String),
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict::Pass(None)
    }

    pub fn fail(v: impl Serialize) -> Self {
        Verdict::Fail(serde_json::to_value(v).unwrap_or(Value::Null))
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &CheckContext) -> Result<Verdict>;
}

/// Checks in registration order, looked up by name.
pub struct Registry {
    checks: Vec<Box<dyn Check>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut reg = Registry::empty();
        builtin::register_all(&mut reg);
        reg
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry { checks: Vec::new() }
    }

    /// Adds a check, replacing any check with the same name.
    pub fn register(&mut self, check: Box<dyn Check>) {
        match self.checks.iter().position(|c| c.name() == check.name()) {
            Some(i) => self.checks[i] = check,
            None => self.checks.push(check),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.checks.iter().map(|c| (c.name(), c.description())).collect()
    }

    pub fn run_one(&self, name: &str, ctx: &CheckContext) -> Option<CheckOutcome> {
        self.get(name).map(|c| outcome(c, ctx))
    }

    pub fn run_all(&self, ctx: &CheckContext) -> Vec<CheckOutcome> {
        self.checks.iter().map(|c| outcome(c.as_ref(), ctx)).collect()
    }
}

fn outcome(check: &dyn Check, ctx: &CheckContext) -> CheckOutcome {
    let name = check.name().to_string();
    let (status, first_discrepancy, detail) = match check.run(ctx) {
        Ok(Verdict::Pass(detail)) => (Status::Pass, None, detail),
        Ok(Verdict::Fail(v)) => (Status::Fail, Some(v), None),
        Ok(Verdict::Skipped(why)) => (Status::Skipped, None, Some(why)),
        Err(e @ Error::BoxTooLarge { .. }) => (Status::Skipped, None, Some(e.to_string())),
        Err(e) => (Status::Fail, Some(Value::String(e.to_string())), None),
    };
    CheckOutcome { name, status, first_discrepancy, detail }
}
