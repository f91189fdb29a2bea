/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: slrcov::Error,
    },

    #[error("{}: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] slrcov::Error),
}

impl CliError {
    /// 0 success, 1 usage or validation, 2 I/O, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 1,
            CliError::Io { .. } => 2,
            CliError::Input { source, .. } | CliError::Core(source) => {
                if source.is_numerical() {
                    3
                } else if source.is_io() {
                    2
                } else {
                    1
                }
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let io = || std::io::Error::other("denied");
        assert_eq!(
            CliError::Io {
                path: "a".into(),
                source: io()
            }
            .exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(slrcov::Error::NotPsd {
                min_eigenvalue: -1.0
            })
            .exit_code(),
            3
        );
        let failed_run = slrcov::Error::RunFailed {
            run: 3,
            source: Box::new(slrcov::Error::NonFiniteIterate { iteration: 2 }),
        };
        assert_eq!(CliError::Core(failed_run).exit_code(), 3);
        let parse = slrcov::Error::Parse {
            line: 2,
            message: "bad".into(),
        };
        let err = CliError::Input {
            path: "m.csv".into(),
            source: parse,
        };
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().starts_with("m.csv: "));
        assert_eq!(CliError::Core(slrcov::Error::Io(io())).exit_code(), 2);
    }
}
