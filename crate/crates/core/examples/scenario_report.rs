//! Run a scenario from JSON and write its report directory.
//!
//! cargo run --release --example scenario_report [out-dir]

use std::path::{Path, PathBuf};

use coxl2::harness::{run, summary_text, write_report_dir, Scenario};

const SCENARIO: &str = r#"{
    "name": "pentagon",
    "complex": "cycle(5)",
    "q": ["1/4", "1"],
    "radii": [11],
    "bcs": ["neumann"],
    "expect": [
        {"statement": "b^0 = 1/W(1/4)", "q": "1/4", "degree": 0, "target": "1/5", "tolerance": 0.02},
        {"statement": "b^1 = -χ at q = 1", "q": "1", "degree": 1, "target": "1/4", "tolerance": 0.02}
    ],
    "checks": {"cone": ["0"]}
}"#;

fn main() -> coxl2::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("coxl2-pentagon"));
    let scenario = Scenario::from_json(SCENARIO)?;
    let complex = scenario.build(Path::new("."))?;
    let report = run(&scenario, Path::new("."))?;
    write_report_dir(&out, &report, &complex)?;
    print!("{}", summary_text(&report));
    println!("report written to {}", out.display());
    Ok(())
}
