use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use geoquant::{Category, Error};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_QUANTIZABLE: u8 = 3;
pub const EXIT_GEOMETRY: u8 = 4;
pub const EXIT_VERIFICATION: u8 = 5;

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_VERIFICATION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e.category() {
            Category::Input => EXIT_INPUT,
            Category::NotQuantizable => EXIT_NOT_QUANTIZABLE,
            Category::Geometry => EXIT_GEOMETRY,
        };
        Failure { code, message: e.to_string() }
    }
}

/// JSON payload and human-readable rendering of a successful command.
pub type Outcome = Result<(Value, String), Failure>;

pub struct Report {
    name: String,
    args: BTreeMap<String, Value>,
    digest: String,
    outcome: Outcome,
}

/// SHA-256 of the command, its arguments and the chart document.
fn digest(name: &str, args: &BTreeMap<String, Value>, chart: Option<&str>) -> String {
    let input = json!({"name": name, "args": args, "chart": chart});
    let bytes = Sha256::digest(input.to_string().as_bytes());
    bytes.iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").expect("writing to a String");
        s
    })
}

impl Report {
    pub fn new(name: String, args: BTreeMap<String, Value>, chart: Option<&str>, outcome: Outcome) -> Report {
        let digest = digest(&name, &args, chart);
        Report { name, args, digest, outcome }
    }

    pub fn to_json(&self) -> Value {
        let (status, payload, error) = match &self.outcome {
            Ok((payload, _)) => ("ok", payload.clone(), Value::Null),
            Err(f) => ("error", Value::Null, json!({"code": f.code, "message": f.message})),
        };
        json!({
            "status": status,
            "command": {"name": self.name, "args": self.args, "inputDigest": self.digest},
            "payload": payload,
            "error": error,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    /// Prints the report and returns the process exit code.
    pub fn emit(&self, as_json: bool) -> ExitCode {
        if as_json {
            let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
            // A closed stdout is not worth a panic.
            let _ = writeln!(std::io::stdout(), "{text}");
        } else {
            match &self.outcome {
                Ok((_, text)) => {
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
                Err(f) => eprintln!("error: {}", f.message),
            }
        }
        match &self.outcome {
            Ok(_) => ExitCode::SUCCESS,
            Err(f) => ExitCode::from(f.code),
        }
    }
}
