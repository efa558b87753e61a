//! Verdicts with witnesses, shared by every verifier.

use std::time::Instant;

use serde::Serialize;

/// Witnesses kept per check. Failures past this count are still counted.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Arrow names, basis labels or element names locating the failure.
    pub tuple: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl PartialEq for AxiomReport {
    fn eq(&self, other: &Self) -> bool {
        self.subject == other.subject && self.checks == other.checks
    }
}

impl AxiomReport {
    pub fn new(subject: impl Into<String>) -> Self {
        AxiomReport { subject: subject.into(), checks: Vec::new(), elapsed_ms: 0.0, started: Some(Instant::now()) }
    }

    fn entry(&mut self, name: &str) -> &mut Check {
        if let Some(i) = self.checks.iter().position(|c| c.name == name) {
            return &mut self.checks[i];
        }
        self.checks.push(Check { name: name.to_string(), evaluated: 0, failures: 0, witnesses: Vec::new() });
        self.checks.last_mut().expect("just pushed")
    }

    /// Registers a check so that it shows up even if nothing is evaluated.
    pub fn declare(&mut self, name: &str) {
        self.entry(name);
    }

    /// Records one evaluation of `name`. A witness is kept when `ok` is false.
    pub fn record<T, D>(&mut self, name: &str, ok: bool, tuple: T, detail: D)
    where
        T: IntoIterator,
        T::Item: ToString,
        D: FnOnce() -> String,
    {
        let c = self.entry(name);
        c.evaluated += 1;
        if !ok {
            c.failures += 1;
            if c.witnesses.len() < MAX_WITNESSES {
                c.witnesses
                    .push(Witness { tuple: tuple.into_iter().map(|t| t.to_string()).collect(), detail: detail() });
            }
        }
    }

    /// Shorthand for a single pass/fail fact without a tuple.
    pub fn fact(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.record(name, ok, Vec::<String>::new(), move || detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True if the named check exists and passed.
    pub fn check_passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(Check::passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn first_witness(&self, name: &str) -> Option<&Witness> {
        self.check(name).and_then(|c| c.witnesses.first())
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: AxiomReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            let e = self.entry(&c.name);
            e.evaluated += c.evaluated;
            e.failures += c.failures;
            let room = MAX_WITNESSES.saturating_sub(e.witnesses.len());
            e.witnesses.extend(c.witnesses.into_iter().take(room));
        }
    }

    pub fn finish(mut self) -> Self {
        if let Some(s) = self.started {
            self.elapsed_ms = s.elapsed().as_secs_f64() * 1000.0;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_matches_witnesses() {
        let mut r = AxiomReport::new("t");
        r.declare("empty");
        r.record("a", true, ["x"], String::new);
        assert!(r.passed());
        r.record("a", false, ["y", "z"], || "bad".into());
        assert!(!r.passed());
        assert!(r.check_passed("empty"));
        let w = r.first_witness("a").unwrap();
        assert_eq!(w.tuple, vec!["y", "z"]);
        assert_eq!(r.check("a").unwrap().evaluated, 2);
    }

    #[test]
    fn witnesses_are_capped_but_counted() {
        let mut r = AxiomReport::new("t");
        for i in 0..40 {
            r.record("c", false, [i], || "no".into());
        }
        let c = r.check("c").unwrap();
        assert_eq!(c.failures, 40);
        assert_eq!(c.witnesses.len(), MAX_WITNESSES);
    }
}
