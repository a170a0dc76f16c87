//! Scan the speed, then bisect the stability boundary, for Boussinesq waves.

use wavestab::verify::{bisect_threshold, boussinesq_threshold, threshold_scan, ScanConfig};
use wavestab::{GridSpec, Model};

fn main() -> wavestab::Result<()> {
    let cfg = ScanConfig { grid: GridSpec::new(256), with_roots: false, jobs: 2, ..ScanConfig::default() };
    for p in [2.0, 3.0, 4.0] {
        let table = threshold_scan(Model::Boussinesq, p, 0.1, 0.95, 0.05, &cfg)?;
        let marks: String = table.rows.iter().map(|r| if r.stable { 'S' } else { 'u' }).collect();
        print!("p={p}: {marks}");
        if let Some((lo, hi)) = table.bracket() {
            let c = bisect_threshold(Model::Boussinesq, p, lo, hi, 1e-5, &cfg)?;
            print!("  threshold {c:.5} (closed form {:.5})", boussinesq_threshold(p).unwrap_or(f64::NAN));
        }
        println!();
    }
    Ok(())
}
