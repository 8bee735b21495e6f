//! Masked recovery repeated across different requesters, with the gate
//! shutting out a requester who used the naive protocol.

use gruppen::harness::{DeliveryOrder, Simulation};
use gruppen::recovery::RecoveryMode;
use gruppen::scheme::{deal_random, LayoutId, Params, PointLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(4, 2, "p=13".parse()?)?;
    let layout = PointLayout::new(params, LayoutId::ParticipantMajor);
    let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(7));
    let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default())?;

    for (seed, (requester, quorum)) in [(1, [2, 3]), (2, [3, 4]), (3, [1, 4]), (1, [2, 3])].into_iter().enumerate() {
        sim.forget(requester, false)?;
        let got = sim.run_recovery(requester, &quorum, RecoveryMode::Masked, seed as u64)?;
        let want = dealing.bundle(requester).secret.unwrap();
        println!("masked: participant {requester} via {quorum:?} -> {} (dealt {})", got.secret.to_hex(), want.to_hex());
        assert_eq!(got.secret, want);
    }

    sim.forget(2, false)?;
    let got = sim.run_recovery(2, &[1, 3], RecoveryMode::Naive, 9)?;
    println!("naive:  participant 2 via [1, 3] -> {}", got.secret.to_hex());
    match sim.run_recovery(4, &[2, 3], RecoveryMode::Masked, 10) {
        Err(e) => println!("next session with participant 2 in the quorum: {e}"),
        Ok(_) => unreachable!("the gate should refuse"),
    }
    println!("{} messages on the bus", sim.transcript().messages.len());
    Ok(())
}
