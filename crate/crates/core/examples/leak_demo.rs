//! Why naive recovery must be one-shot: Alice's partial sums expose a
//! combination of Bob's and Cecil's secrets.

use gruppen::analysis::{rank_report, View};
use gruppen::recovery::{demo_leak, RecoveryMode, RecoverySession};
use gruppen::scheme::{deal_random, LayoutId, Params, PointLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let layout = PointLayout::new(Params::new(3, 2, "p=13".parse()?)?, LayoutId::SecretsFirst);
    let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(2));
    let demo = demo_leak(&dealing)?;
    println!("t_b = {}, t_c = {}", demo.t_b.to_hex(), demo.t_c.to_hex());
    println!("extracted {} = r(2) - r(1) = {}", demo.extracted.to_hex(), demo.expected.to_hex());
    assert!(demo.holds());

    // The same fact from ranks alone, without any concrete values.
    let mut view = View::new(&layout);
    view.add_session(0, RecoverySession::new(&layout, 1, &[2, 3], RecoveryMode::Naive)?);
    view.push_shares(1);
    for from in [2, 3] {
        view.push(gruppen::analysis::ViewItem::Contribution { session: 0, from, slot: 0 });
    }
    let report = rank_report(&view)?;
    println!(
        "Alice's view: rank {} of {}, leaked combination {:?}",
        report.rank, report.dim, report.leaked_combination
    );
    Ok(())
}
