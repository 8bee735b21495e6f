//! Deal five secrets with k = 3, then rebuild everything from three bundles.

use gruppen::scheme::{deal_with_secrets, reconstruct_all, LayoutId, Params, PointLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(5, 3, "p=101".parse()?)?;
    let layout = PointLayout::new(params, LayoutId::ParticipantMajor);
    let f = params.spec();
    let secrets: Vec<_> = [42, 7, 0, 99, 13].iter().map(|&v| f.from_integer(v)).collect();

    let dealing = deal_with_secrets(&layout, &secrets, &mut ChaCha20Rng::seed_from_u64(1))?;
    for b in &dealing.bundles {
        let share: Vec<String> = b.share.iter().map(|v| v.to_hex()).collect();
        println!("participant {}: secret {} share [{}]", b.participant, b.secret.unwrap().to_hex(), share.join(" "));
    }

    let quorum: Vec<_> = [1, 3, 4].iter().map(|&i| dealing.bundle(i).clone()).collect();
    let rec = reconstruct_all(&layout, &quorum)?;
    let shown: Vec<String> = rec.secrets.iter().map(|s| s.to_hex()).collect();
    println!("quorum 1,3,4 recovers: {}", shown.join(" "));
    assert_eq!(rec.secrets, secrets);

    let too_few = reconstruct_all(&layout, &quorum[..2]);
    println!("quorum 1,3 alone: {}", too_few.unwrap_err());
    Ok(())
}
