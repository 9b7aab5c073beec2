//! Documents produced from a session: the replace script, the transformed
//! column and the program itself.

use reshape_core::program::{eval_tokenized, Program, RowStatus};
use reshape_core::profile::tokenize;
use reshape_core::synth::SynthesisResult;

use crate::error::ServiceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Script,
    TransformedData,
    ProgramJson,
}

impl std::str::FromStr for ExportFormat {
    type Err = ServiceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "script" => Ok(ExportFormat::Script),
            "transformed-data" => Ok(ExportFormat::TransformedData),
            "program-json" => Ok(ExportFormat::ProgramJson),
            other => Err(ServiceError::UnknownFormat(other.to_string())),
        }
    }
}

impl ExportFormat {
    pub fn content_type(&self) -> &'static str {
        match self {
            ExportFormat::Script => "text/plain; charset=utf-8",
            ExportFormat::TransformedData => "text/csv; charset=utf-8",
            ExportFormat::ProgramJson => "application/json",
        }
    }
}

/// One replace operation per line.
pub fn script_text(result: &SynthesisResult, column: &str) -> String {
    result.script(column).iter().map(|l| format!("{l}\n")).collect()
}

/// Output value and status of every row, in row order.
pub fn transform_rows(rows: &[String], program: &Program) -> Vec<(String, RowStatus)> {
    rows.iter().map(|r| eval_tokenized(program, &tokenize(r))).collect()
}

/// CSV with the transformed column and a status column beside it.
pub fn transformed_csv(rows: &[String], program: &Program, column: &str) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([column, "status"]).expect("writing to memory");
    for (value, status) in transform_rows(rows, program) {
        writer.write_record([value.as_str(), status.as_str()]).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("rows are UTF-8")
}

pub fn program_json(program: &Program) -> String {
    serde_json::to_string_pretty(program).expect("programs serialize")
}
