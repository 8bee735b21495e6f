//! Dealerless setup: every participant deals its own secret and the
//! received sub-shares are summed. No one ever sees the others' secrets.

use gruppen::analysis::setup_coalition_check;
use gruppen::harness::{derive_party_seeds, DeliveryOrder, Simulation};
use gruppen::scheme::{reconstruct_all, LayoutId, Params, PointLayout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(4, 3, "p=11".parse()?)?;
    let layout = PointLayout::new(params, LayoutId::SecretsFirst);
    let f = params.spec();
    let secrets: Vec<_> = [3, 1, 4, 1].iter().map(|&v| f.from_integer(v)).collect();
    let seeds = derive_party_seeds(2024, 4);

    let sim = Simulation::run_setup(&layout, &secrets, &seeds, DeliveryOrder::ReceiverMajor)?;
    println!("{} setup messages", sim.transcript().messages.len());
    let bundles: Vec<_> = sim.bundles().into_iter().flatten().collect();
    let rec = reconstruct_all(&layout, &bundles[1..])?;
    println!("participants 2,3,4 reconstruct: {:?}", rec.secrets.iter().map(|s| s.to_hex()).collect::<Vec<_>>());
    assert_eq!(rec.secrets, secrets);

    let check = setup_coalition_check(&layout, &[1, 2], 4)?;
    println!(
        "coalition {{1,2}} vs honest 4: rank {} (expected {}), secret hidden: {}",
        check.rank, check.expected, check.secret_hidden
    );
    assert!(check.pass());
    Ok(())
}
