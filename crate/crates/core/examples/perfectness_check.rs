//! Exhaustive entropy check of a small instance, next to a broken scheme
//! that shares pairwise XORs.

use gruppen::analysis::{verify_perfectness, SchemeModel};
use gruppen::scheme::{LayoutId, Params, PointLayout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = "gf2=3".parse()?;
    let layout = PointLayout::new(Params::new(3, 2, spec)?, LayoutId::ParticipantMajor);
    for model in [SchemeModel::gruppen(&layout), SchemeModel::xor_sabotage(spec)] {
        let report = verify_perfectness(&model)?;
        let worst = report.checks.iter().map(|c| c.bits).fold(f64::INFINITY, f64::min);
        println!(
            "{}: {} (min conditional entropy {worst:.6} bits, expected {:.6})",
            report.model,
            if report.pass { "perfect" } else { "leaks" },
            report.expected_bits
        );
    }
    Ok(())
}
