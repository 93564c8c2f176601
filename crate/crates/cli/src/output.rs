//! Self-describing output helpers.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

use crate::Failure;

/// Writes `content` to `path`, or to stdout when the path is `-`.
pub fn write_out(path: &str, content: &str) -> Result<(), Failure> {
    if path == "-" {
        print!("{content}");
        std::io::stdout().flush()?;
    } else {
        if let Some(dir) = Path::new(path).parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, content)?;
    }
    Ok(())
}

/// A CSV document headed by its embedded config line.
pub fn csv_document<C: Serialize>(config: &C, header: &str, rows: &[String]) -> Result<String, Failure> {
    let mut s = format!("# config: {}\n{header}\n", serde_json::to_string(config)?);
    for row in rows {
        s.push_str(row);
        s.push('\n');
    }
    Ok(s)
}

/// A JSON report with the config embedded under `config`.
pub fn json_report<C: Serialize, R: Serialize>(config: &C, report: &R) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Doc<'a, C: Serialize, R: Serialize> {
        config: &'a C,
        report: &'a R,
    }
    let mut s = serde_json::to_string_pretty(&Doc { config, report })?;
    s.push('\n');
    Ok(s)
}

/// Loads the full config from a JSON file when `--config` is given,
/// replacing the flag-built one.
pub fn maybe_load_config<C: serde::de::DeserializeOwned>(
    config_path: &Option<String>,
    flags: C,
) -> Result<C, Failure> {
    match config_path {
        None => Ok(flags),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}
