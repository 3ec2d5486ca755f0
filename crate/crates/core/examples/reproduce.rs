//! Runs one experiment and writes its CSV files.
//!
//! ```text
//! cargo run --release --example reproduce -- table3 results
//! ```

use std::path::PathBuf;

use specpoly::bench::{run_experiment, ExperimentConfig, ExperimentId};

fn main() -> specpoly::Result<()> {
    let mut args = std::env::args().skip(1);
    let id: ExperimentId = args.next().as_deref().unwrap_or("table2").parse()?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "results".into()));

    let cfg = ExperimentConfig::new(id);
    for table in run_experiment(&cfg)? {
        let path = table.write_to(&out)?;
        println!("{} ({} rows)", path.display(), table.rows.len());
        if table.rows.len() <= 12 {
            print!("{}", table.to_csv_string()?);
        }
    }
    Ok(())
}
