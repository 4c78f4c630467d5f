use matro_core::bergman::BergmanError;
use matro_core::lattice::LatticeError;
use matro_core::MatroidError;
use serde_json::{json, Value};

/// Everything that can stop a command. Each variant maps to a stable
/// machine-readable code and a process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Io { path: String, message: String },
    Parse { message: String, line: usize, column: usize },
    Rational(String),
    Validation { code: &'static str, message: String },
    Precondition { code: &'static str, message: String, details: Value },
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

impl CliError {
    pub fn validation(code: &'static str, message: String) -> Self {
        CliError::Validation { code, message }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Parse { .. } => "ParseError",
            CliError::Rational(_) => "RationalParseError",
            CliError::Validation { code, .. } | CliError::Precondition { code, .. } => code,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Rational(_) => EXIT_PARSE,
            CliError::Validation { .. } => EXIT_VALIDATION,
            CliError::Precondition { .. } => EXIT_PRECONDITION,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Io { path, message } => format!("cannot read {path}: {message}"),
            CliError::Parse { message, .. } => message.clone(),
            CliError::Rational(m) => m.clone(),
            CliError::Validation { message, .. } | CliError::Precondition { message, .. } => {
                message.clone()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "error": {
                "code": self.code(),
                "message": self.message(),
                "exit_code": self.exit_code(),
            }
        });
        let extra = match self {
            CliError::Parse { line, column, .. } => json!({ "line": line, "column": column }),
            CliError::Precondition { details, .. } => details.clone(),
            _ => Value::Null,
        };
        if let (Value::Object(fields), Value::Object(err)) = (extra, &mut doc["error"]) {
            err.extend(fields);
        }
        doc
    }
}

impl From<MatroidError> for CliError {
    fn from(e: MatroidError) -> Self {
        let code = match e {
            MatroidError::TooLarge(_) => "TooLarge",
            MatroidError::EmptyBases => "EmptyBases",
            MatroidError::WrongCardinality { .. } => "WrongCardinality",
            MatroidError::ElementOutOfRange { .. } => "ElementOutOfRange",
            MatroidError::ExchangeAxiomViolated { .. } => "ExchangeAxiomViolated",
            MatroidError::NotAnAntichain { .. } => "NotAnAntichain",
            MatroidError::EmptyCircuit => "EmptyCircuit",
            MatroidError::DisconnectedGraph => "DisconnectedGraph",
            MatroidError::GraphLoopEdge { .. } => "GraphLoopEdge",
            MatroidError::VertexOutOfRange { .. } => "VertexOutOfRange",
            MatroidError::ZeroMatrix => "ZeroMatrix",
            MatroidError::BadParameters { .. } => "BadParameters",
            MatroidError::NotAFlat(_) => "NotAFlat",
            MatroidError::NotNested { .. } => "NotNested",
            MatroidError::LengthMismatch { .. } => "LengthMismatch",
        };
        CliError::validation(code, e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        BergmanError::from(e).into()
    }
}

fn labels_json(blocks: &[matro_core::SubsetMask]) -> Value {
    blocks.iter().map(|b| b.labels()).collect()
}

impl From<BergmanError> for CliError {
    fn from(e: BergmanError) -> Self {
        let message = e.to_string();
        match e {
            BergmanError::HasLoops(l) => CliError::Precondition {
                code: "HasLoops",
                message,
                details: json!({ "loops": l.labels() }),
            },
            BergmanError::NotConnected(components) => CliError::Precondition {
                code: "NotConnected",
                message,
                details: json!({ "components": labels_json(&components) }),
            },
            BergmanError::LengthMismatch { .. } => CliError::validation("LengthMismatch", message),
            BergmanError::InvalidBuildingSet { .. } => {
                CliError::validation("InvalidBuildingSet", message)
            }
            BergmanError::NotABasis(_) => CliError::validation("NotABasis", message),
            BergmanError::NotAFacet(_) => CliError::validation("NotAFacet", message),
            BergmanError::NotNested(_) => CliError::validation("NotNested", message),
            BergmanError::NotAFlat(_) => CliError::validation("NotAFlat", message),
            BergmanError::ThreadPool(_) => CliError::validation("ThreadPool", message),
        }
    }
}
