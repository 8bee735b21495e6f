use gruppen::analysis::{rank_report, KnowledgeMatrix};
use gruppen::field::FieldSpec;
use gruppen::harness::{adversary_view, DeliveryOrder, HarnessError, Simulation, Transcript};
use gruppen::recovery::{RecoveryError, RecoveryMode};
use gruppen::scheme::{deal_random, reconstruct_all, LayoutId, Params, PointLayout};
use gruppen::setup::homomorphic_add;
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn smallest_prime_above(bound: u64) -> u64 {
    (bound + 1..).find(|&c| (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0)).unwrap()
}

/// `(n, k)` with `2 <= k < n <= 6`, a layout, and the smallest admissible prime field.
fn instance() -> impl Strategy<Value = PointLayout> {
    (3usize..=6)
        .prop_flat_map(|n| (Just(n), 2..n, any::<bool>()))
        .prop_map(|(n, k, sf)| {
            let p = smallest_prime_above((n * (n - k + 1)) as u64);
            let params = Params::new(n, k, FieldSpec::prime(p).unwrap()).unwrap();
            let id = if sf { LayoutId::SecretsFirst } else { LayoutId::ParticipantMajor };
            PointLayout::new(params, id)
        })
}

fn instance_with_roles() -> impl Strategy<Value = (PointLayout, usize, Vec<usize>)> {
    instance().prop_flat_map(|layout| {
        let (n, k) = (layout.params().n(), layout.params().k());
        (Just(layout), 1..=n).prop_flat_map(move |(layout, requester)| {
            let others: Vec<usize> = (1..=n).filter(|&i| i != requester).collect();
            (Just(layout), Just(requester), subsequence(others, k))
        })
    })
}

fn order() -> impl Strategy<Value = DeliveryOrder> {
    prop_oneof![
        Just(DeliveryOrder::SenderMajor),
        Just(DeliveryOrder::ReceiverMajor),
        any::<u64>().prop_map(DeliveryOrder::Shuffled),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_quorum_reconstructs((layout, _, quorum) in instance_with_roles(), seed in any::<u64>()) {
        let d = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(seed));
        let pool: Vec<_> = quorum.iter().map(|&i| d.bundle(i).clone()).collect();
        let rec = reconstruct_all(&layout, &pool).unwrap();
        prop_assert_eq!(rec.polynomial, d.polynomial.clone().unwrap());
        let want: Vec<_> = d.secrets().into_iter().map(Option::unwrap).collect();
        prop_assert_eq!(rec.secrets, want);
    }

    #[test]
    fn masked_and_full_state_recovery_are_correct(
        (layout, requester, quorum) in instance_with_roles(),
        seed in any::<u64>(),
        order in order(),
        full in any::<bool>(),
    ) {
        let d = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(seed));
        let mut sim = Simulation::from_bundles(&layout, d.bundles.clone(), order).unwrap();
        let mode = if full { RecoveryMode::FullState } else { RecoveryMode::Masked };
        sim.forget(requester, full).unwrap();
        let got = sim.run_recovery(requester, &quorum, mode, seed ^ 1).unwrap();
        prop_assert_eq!(Some(got.secret), d.bundle(requester).secret);
        if full {
            prop_assert_eq!(&got.share, &d.bundle(requester).share);
        } else {
            prop_assert!(got.share.is_empty());
        }
        prop_assert_eq!(sim.bundles()[requester - 1].clone(), Some(d.bundle(requester).clone()));
    }

    #[test]
    fn transcripts_round_trip(
        (layout, requester, quorum) in instance_with_roles(),
        seed in any::<u64>(),
        order in order(),
        mode in prop_oneof![Just(RecoveryMode::Naive), Just(RecoveryMode::Masked), Just(RecoveryMode::FullState)],
    ) {
        let d = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(seed));
        let mut sim = Simulation::from_bundles(&layout, d.bundles, order).unwrap();
        match sim.run_recovery(requester, &quorum, mode, seed) {
            Ok(_) => {}
            // Naive recovery may be refused; a refusal must leave nothing behind.
            Err(HarnessError::Recovery(RecoveryError::Refused(_))) => {
                prop_assert_eq!(mode, RecoveryMode::Naive);
                prop_assert!(sim.transcript().sessions.is_empty() && sim.transcript().messages.is_empty());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        let text = sim.transcript().to_string();
        let parsed = Transcript::parse(&text).unwrap();
        prop_assert_eq!(&parsed, sim.transcript());
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn dealings_add(layout in instance(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let d1 = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(s1));
        let d2 = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(s2));
        let sum = homomorphic_add(&d1, &d2).unwrap();
        let k = layout.params().k();
        let rec = reconstruct_all(&layout, &sum.bundles[..k]).unwrap();
        for (i, s) in rec.secrets.iter().enumerate() {
            prop_assert_eq!(Some(*s), d1.secrets()[i].map(|a| a + d2.secrets()[i].unwrap()));
        }
    }

    /// Quorum members learn nothing from a masked session: their rank
    /// equals their rank before it.
    #[test]
    fn masked_session_is_silent_to_the_quorum(
        (layout, requester, quorum) in instance_with_roles(),
        seed in any::<u64>(),
    ) {
        let d = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(seed));
        let mut sim = Simulation::from_bundles(&layout, d.bundles, DeliveryOrder::default()).unwrap();
        let before = KnowledgeMatrix::from_view(&adversary_view(sim.transcript(), &quorum[..1], &[]).unwrap()).unwrap().rank();
        sim.run_recovery(requester, &quorum, RecoveryMode::Masked, seed).unwrap();
        for &m in &quorum {
            let view = adversary_view(sim.transcript(), &[m], &[]).unwrap();
            let report = rank_report(&view).unwrap();
            prop_assert_eq!(report.rank, before);
            prop_assert_eq!(report.determined_secrets, vec![m]);
        }
    }
}
