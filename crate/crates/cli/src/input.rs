use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::CliError;

/// Reads and validates a JSON file; the error names the file and the first violated invariant.
pub fn load<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid {what} in {}: {e}", path.display())))
}
