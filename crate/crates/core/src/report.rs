use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    pub fn new(case: usize, inputs: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Self { case, inputs: inputs.into(), expected: expected.into(), got: got.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one checked case, adding a failure when `ok` is false.
    pub fn check(&mut self, ok: bool, inputs: impl FnOnce() -> String, expected: &str, got: impl FnOnce() -> String) {
        let case = self.cases;
        self.cases += 1;
        if !ok {
            self.failures.push(Failure::new(case, inputs(), expected, got()));
        }
    }

    pub fn absorb(&mut self, other: Report) {
        let offset = self.cases;
        self.cases += other.cases;
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.case += offset;
            f
        }));
    }

    /// Builds a report from per-case failure lists computed in any order.
    pub fn from_cases(suite: impl Into<String>, per_case: Vec<Vec<Failure>>) -> Self {
        let cases = per_case.len();
        let mut failures: Vec<Failure> = per_case.into_iter().flatten().collect();
        failures.sort_by_key(|f| f.case);
        Self { suite: suite.into(), cases, failures }
    }
}
