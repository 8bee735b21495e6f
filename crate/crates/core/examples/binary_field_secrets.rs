//! 128-bit secrets in GF(2^128), written to and read back from bundle files.

use gruppen::codec::BundleFile;
use gruppen::scheme::{deal_with_secrets, reconstruct_all, LayoutId, Params, PointLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(4, 2, "gf2=128".parse()?)?;
    let layout = PointLayout::new(params, LayoutId::ParticipantMajor);
    let f = params.spec();
    let secrets = vec![
        f.parse_hex("000102030405060708090a0b0c0d0e0f")?,
        f.parse_hex("ffffffffffffffffffffffffffffffff")?,
        f.parse_hex("0123456789abcdef0123456789abcdef")?,
        f.zero(),
    ];
    let dealing = deal_with_secrets(&layout, &secrets, &mut ChaCha20Rng::seed_from_u64(5))?;

    let files: Vec<String> = [2, 4]
        .iter()
        .map(|&i| BundleFile { layout: layout.clone(), bundle: dealing.bundle(i).clone() }.encode())
        .collect();
    print!("{}", files[0]);
    let bundles = files
        .iter()
        .map(|t| BundleFile::decode(t).map(|f| f.bundle))
        .collect::<Result<Vec<_>, _>>()?;
    let rec = reconstruct_all(&layout, &bundles)?;
    for (i, s) in rec.secrets.iter().enumerate() {
        println!("secret {}: {}", i + 1, s.to_hex());
    }
    assert_eq!(rec.secrets, secrets);
    Ok(())
}
