//! Write hedgehog-plot samples (`x1,x2,v1,v2,inside`) of the four basis
//! fields and a rotated copy into a directory.
//!
//! Usage: `cargo run --example hedgehog_csv -- [out_dir] [n]`

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use geocorr::{AnalyticField, LinearField, SampledField, SymmetricDomain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "hedgehogs".into()));
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);
    fs::create_dir_all(&dir)?;

    let sq = SymmetricDomain::unit_square();
    let fields = [
        (
            "saddle_a",
            AnalyticField::from_linear(LinearField::saddle_a(sq)),
        ),
        (
            "saddle_b",
            AnalyticField::from_linear(LinearField::saddle_b(sq)),
        ),
        (
            "source_c",
            AnalyticField::from_linear(LinearField::source_c(sq)),
        ),
        (
            "vortex_d",
            AnalyticField::from_linear(LinearField::vortex_d(sq)),
        ),
        (
            "saddle_a_rotated",
            AnalyticField::from_linear(LinearField::saddle_a(sq).total_rotate(0.5)),
        ),
        ("counterexample", AnalyticField::counterexample()),
    ];
    for (name, field) in fields {
        let path = dir.join(format!("{name}.csv"));
        SampledField::sample(&field, n)?.write_csv(BufWriter::new(File::create(&path)?))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
