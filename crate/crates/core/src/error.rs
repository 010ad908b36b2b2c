use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element {id} is outside the ground set of size {n}")]
    ElementOutOfRange { id: usize, n: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_ids(set: &[usize], n: usize) -> Result<()> {
    match set.iter().find(|&&id| id >= n) {
        Some(&id) => Err(Error::ElementOutOfRange { id, n }),
        None => Ok(()),
    }
}
