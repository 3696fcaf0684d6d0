//! One line per verified case:
//! `CASE <name> <params> expected=<...> got=<...> PASS|FAIL`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub params: String,
    pub expected: String,
    pub got: String,
    pub passed: bool,
}

impl CaseResult {
    pub fn new(
        name: impl Into<String>,
        params: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        let expected = expected.into();
        let got = got.into();
        CaseResult {
            name: name.into(),
            params: params.into(),
            passed: expected == got,
            expected,
            got,
        }
    }

    /// A case whose verdict is not a plain string comparison.
    pub fn judged(
        name: impl Into<String>,
        params: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        passed: bool,
    ) -> Self {
        CaseResult {
            name: name.into(),
            params: params.into(),
            expected: expected.into(),
            got: got.into(),
            passed,
        }
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CASE {} {} expected={} got={} {}",
            self.name,
            self.params,
            self.expected,
            self.got,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

impl Summary {
    pub fn of(cases: &[CaseResult]) -> Summary {
        Summary {
            total: cases.len(),
            passed: cases.iter().filter(|c| c.passed).count(),
        }
    }

    pub fn failed(&self) -> usize {
        self.total - self.passed
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SUMMARY total={} passed={} failed={}",
            self.total,
            self.passed,
            self.failed()
        )
    }
}
