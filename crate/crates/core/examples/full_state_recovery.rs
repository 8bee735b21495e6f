//! A participant that lost its whole bundle gets back its secret and all
//! of its share values.

use gruppen::harness::{DeliveryOrder, Simulation};
use gruppen::recovery::RecoveryMode;
use gruppen::scheme::{deal_random, LayoutId, Params, PointLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(5, 2, "gf2=8".parse()?)?;
    let layout = PointLayout::new(params, LayoutId::ParticipantMajor);
    let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(3));
    let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::Shuffled(11))?;

    sim.forget(5, true)?;
    let got = sim.run_recovery(5, &[1, 3], RecoveryMode::FullState, 4)?;
    let hex = |v: &[gruppen::field::FieldElement]| v.iter().map(|x| x.to_hex()).collect::<Vec<_>>().join(" ");
    println!("recovered secret {} share [{}]", got.secret.to_hex(), hex(&got.share));
    let original = dealing.bundle(5);
    println!("dealt     secret {} share [{}]", original.secret.unwrap().to_hex(), hex(&original.share));
    assert_eq!(Some(got.secret), original.secret);
    assert_eq!(got.share, original.share);
    assert_eq!(sim.bundles()[4].as_ref(), Some(original));
    Ok(())
}
