//! CSV and JSON emission. Floats use Rust's shortest round-trip `Debug`
//! form, which switches to exponent notation below 1e-4 and from 1e16.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pbe_core::dynamics::Trajectory;
use pbe_core::epsilon_lab::EpsilonScanRow;
use pbe_core::pbe::PbeSolution;
use serde::Serialize;

use crate::error::{CliError, Result};

fn header(fixed_front: &[&str], dim: usize, fixed_back: &[&str]) -> String {
    let mut cols: Vec<String> = fixed_front.iter().map(|s| s.to_string()).collect();
    cols.extend((0..dim).map(|i| format!("theta_{i}")));
    cols.extend(fixed_back.iter().map(|s| s.to_string()));
    cols.join(",")
}

fn push_numbers(line: &mut String, xs: &[f64]) {
    for x in xs {
        write!(line, ",{x:?}").unwrap();
    }
}

pub fn solutions_csv(solutions: &[PbeSolution], dim: usize) -> String {
    let mut out = header(&["policy_index"], dim, &["residual_inf", "snrdd_margin", "hurwitz"]);
    out.push('\n');
    for s in solutions {
        let mut line = s.policy_index.to_string();
        push_numbers(&mut line, &s.theta);
        writeln!(line, ",{:?},{:?},{}", s.residual_inf, s.snrdd_margin, s.hurwitz).unwrap();
        out.push_str(&line);
    }
    out
}

/// One row per recorded iterate; the verdict is filled on the last row.
pub fn trajectory_csv(traj: &Trajectory, dim: usize) -> String {
    let mut out = header(&["k"], dim, &["residual_inf", "policy_index", "verdict"]);
    out.push('\n');
    let last = traj.steps.len().saturating_sub(1);
    for (i, k) in traj.steps.iter().enumerate() {
        let mut line = k.to_string();
        push_numbers(&mut line, &traj.thetas[i]);
        let verdict = if i == last { traj.verdict.label() } else { "" };
        writeln!(line, ",{:?},{},{verdict}", traj.residual_inf[i], traj.policy_index[i]).unwrap();
        out.push_str(&line);
    }
    out
}

/// Per solution: policy index, θ and stability, padded to the widest row.
pub fn epsilon_scan_csv(rows: &[EpsilonScanRow], dim: usize) -> String {
    let width = rows.iter().map(|r| r.count).max().unwrap_or(0);
    let mut cols = vec!["epsilon".to_string(), "count".into(), "stable_count".into()];
    for j in 0..width {
        cols.push(format!("policy_{j}"));
        cols.extend((0..dim).map(|i| format!("theta_{j}_{i}")));
        cols.push(format!("stable_{j}"));
    }
    let mut out = cols.join(",");
    out.push('\n');
    for r in rows {
        let mut line = format!("{:?},{},{}", r.epsilon, r.count, r.stable_count);
        for j in 0..width {
            match r.solutions.get(j) {
                Some(s) => {
                    write!(line, ",{}", s.policy_index).unwrap();
                    push_numbers(&mut line, &s.theta);
                    write!(line, ",{}", s.hurwitz).unwrap();
                }
                None => line.push_str(&",".repeat(dim + 2)),
            }
        }
        line.push('\n');
        out.push_str(&line);
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents).map_err(io(&tmp))?;
    std::fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}
