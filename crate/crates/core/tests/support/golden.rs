//! Golden-file cases for the command-line tool. Each case runs the binary in
//! `tests/golden` and compares stdout, stderr and the exit code byte for byte.
//! Set `RELCON_BLESS=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "classify_gamma_similarity", args: &["classify", "gamma_similarity.json"], exit: 0 },
    Case { name: "classify_gamma_strict", args: &["classify", "gamma_strict.json"], exit: 0 },
    Case { name: "consistent_gamma", args: &["consistent", "gamma_pair.json"], exit: 1 },
    Case { name: "consistent_ordered", args: &["consistent", "ordered_pair.json"], exit: 0 },
    Case { name: "complete_gamma", args: &["complete", "gamma_pair.json"], exit: 3 },
    Case { name: "complete_ordered", args: &["complete", "ordered_pair.json"], exit: 0 },
    Case { name: "complete_ordered_text", args: &["--format", "text", "complete", "ordered_pair.json"], exit: 0 },
    Case { name: "arbitrage_gamma", args: &["arbitrage", "gamma_market.json"], exit: 1 },
    Case { name: "arbitrage_two_goods", args: &["arbitrage", "two_goods_market.json"], exit: 1 },
    Case { name: "arbitrage_ordered", args: &["arbitrage", "ordered_market.json"], exit: 0 },
    Case { name: "cone_check_halfplanes", args: &["cone", "check", "halfplanes.json"], exit: 1 },
    Case { name: "cone_check_axis_rays", args: &["cone", "check", "axis_rays.json"], exit: 0 },
    Case { name: "cone_complete_halfplanes", args: &["cone", "complete", "halfplanes.json"], exit: 3 },
    Case { name: "cone_complete_axis_rays", args: &["cone", "complete", "axis_rays.json"], exit: 0 },
    Case { name: "cone_describe_upper", args: &["cone", "describe", "upper_halfplane.json"], exit: 0 },
    Case { name: "pareto_halfplanes", args: &["pareto", "halfplanes.json"], exit: 0 },
    Case { name: "pareto_axis_rays", args: &["pareto", "axis_rays.json"], exit: 0 },
    Case { name: "bad_rational", args: &["cone", "check", "bad_rational.json"], exit: 2 },
    Case { name: "malformed_relation", args: &["classify", "malformed_relation.json"], exit: 2 },
    Case { name: "missing_file", args: &["classify", "no_such_file.json"], exit: 2 },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs one case; `Err` describes the first mismatch.
pub fn check(case: &Case) -> Result<(), String> {
    let dir = golden_dir();
    let output = Command::new(env!("CARGO_BIN_EXE_relcon"))
        .args(case.args)
        .current_dir(&dir)
        .output()
        .map_err(|e| format!("{}: cannot run binary: {e}", case.name))?;
    let code = output.status.code().unwrap_or(-1);
    let stdout_path = dir.join(format!("{}.stdout", case.name));
    let stderr_path = dir.join(format!("{}.stderr", case.name));
    if std::env::var_os("RELCON_BLESS").is_some() {
        std::fs::write(&stdout_path, &output.stdout).map_err(|e| e.to_string())?;
        std::fs::write(&stderr_path, &output.stderr).map_err(|e| e.to_string())?;
    }
    if code != case.exit {
        return Err(format!("{}: exit code {code}, expected {}", case.name, case.exit));
    }
    for (path, actual) in [(&stdout_path, &output.stdout), (&stderr_path, &output.stderr)] {
        let expected = std::fs::read(path).map_err(|e| format!("{}: {}: {e}", case.name, path.display()))?;
        if &expected != actual {
            return Err(format!(
                "{}: output differs from {}\n--- expected\n{}\n--- actual\n{}",
                case.name,
                path.display(),
                String::from_utf8_lossy(&expected),
                String::from_utf8_lossy(actual)
            ));
        }
    }
    Ok(())
}
