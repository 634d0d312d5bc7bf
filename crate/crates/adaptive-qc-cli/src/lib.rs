//! Command-line front end for `adaptive-qc`: graph files, evaluation, Born
//! probabilities, conversion, standard forms and contextuality reports.

pub mod commands;
pub mod data;
pub mod graph_file;

use std::fmt;
use std::io::{self, Read, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Errors of the command-line tool, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid input or a violated invariant; exit code 2.
    Input(String),
    /// Any other failure; exit code 1.
    Internal(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<adaptive_qc::Error> for CliError {
    fn from(e: adaptive_qc::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Input(format!("invalid JSON: {e}"))
    }
}

/// Pretty JSON formatter that writes every float with 17 significant digits.
struct FullPrecision(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(writer $(, $arg)*)
        })*
    };
}

impl Formatter for FullPrecision {
    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Pretty JSON text with floats at full double precision and a trailing newline.
pub fn to_json(value: &impl Serialize) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| CliError::Internal(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    }
}

/// Writes to a file, or standard output for `-`.
pub fn write_output(path: &str, text: &str) -> Result<(), CliError> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| CliError::Internal(format!("cannot write {path}: {e}")))
    }
}
