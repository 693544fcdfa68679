use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Problems building or reading an [`Instance`](crate::Instance).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance needs at least one machine and one job")]
    Empty,
    #[error("job {job}: machine index {machine} out of range")]
    MachineOutOfRange { job: usize, machine: usize },
    #[error("job {job}: processing time on machine {machine} must be positive")]
    NonPositive { job: usize, machine: usize },
    #[error("job {job}: machine {machine} listed twice")]
    DuplicateEntry { job: usize, machine: usize },
    #[error("job {0} has no machine with finite processing time")]
    NoEligibleMachine(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl InstanceError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        InstanceError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// An assignment that does not fit its instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("assignment covers {got} jobs, instance has {expected}")]
    JobCount { expected: usize, got: usize },
    #[error("job {job} placed on machine {machine} where it is ineligible")]
    Ineligible { job: usize, machine: usize },
    #[error("job {job}: weights sum to {sum}, expected 1")]
    Coverage { job: usize, sum: String },
    #[error("job {job}: weight {weight} on machine {machine} outside [0, 1]")]
    WeightRange {
        job: usize,
        machine: usize,
        weight: String,
    },
}
