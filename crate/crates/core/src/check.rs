use serde::Serialize;

/// Outcome of one identity evaluated at one input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub identity: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

impl Check {
    pub fn new(
        identity: impl Into<String>,
        inputs: impl Into<String>,
        lhs: impl ToString,
        rhs: impl ToString,
        passed: bool,
    ) -> Self {
        Check {
            identity: identity.into(),
            inputs: inputs.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            passed,
        }
    }

    /// Exact comparison of two displayable values.
    pub fn equal<T: PartialEq + ToString>(
        identity: impl Into<String>,
        inputs: impl Into<String>,
        lhs: T,
        rhs: T,
    ) -> Self {
        let passed = lhs == rhs;
        Self::new(identity, inputs, lhs, rhs, passed)
    }
}
