//! Text formats for participant bundles and secret lists.
//!
//! Bundle file, one per participant:
//!
//! ```text
//! gruppen-bundle v1
//! n 3
//! k 2
//! field p=13
//! layout secrets-first
//! participant 1
//! secret 5
//! share a
//! ```
//!
//! `secret` may be absent (withheld or lost). `share` lists the `n-k`
//! values. Values are big-endian hex of fixed width: `ceil(s/4)` digits for
//! `GF(2^s)`, the digit count of `p-1` for `GF(p)`.
//!
//! Secrets file: one hex value per line, participant order. Blank lines and
//! `#` comments are ignored in both formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::scheme::{LayoutId, ParticipantBundle, Params, PointLayout, SchemeError};

const BUNDLE_MAGIC: &str = "gruppen-bundle v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing {0} line")]
    Missing(&'static str),
}

fn err(line: usize, message: impl Into<String>) -> CodecError {
    CodecError::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// A bundle together with the public parameters it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleFile {
    pub layout: PointLayout,
    pub bundle: ParticipantBundle,
}

impl BundleFile {
    pub fn encode(&self) -> String {
        let params = self.layout.params();
        let mut out = String::new();
        let _ = writeln!(out, "{BUNDLE_MAGIC}");
        let _ = writeln!(out, "n {}", params.n());
        let _ = writeln!(out, "k {}", params.k());
        let _ = writeln!(out, "field {}", params.spec());
        let _ = writeln!(out, "layout {}", self.layout.id());
        let _ = writeln!(out, "participant {}", self.bundle.participant);
        if let Some(s) = self.bundle.secret {
            let _ = writeln!(out, "secret {}", s.to_hex());
        }
        let shares: Vec<String> = self.bundle.share.iter().map(FieldElement::to_hex).collect();
        let _ = writeln!(out, "share {}", shares.join(" "));
        out
    }

    pub fn decode(text: &str) -> Result<Self, CodecError> {
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, BUNDLE_MAGIC)) => {}
            Some((no, other)) => return Err(err(no, format!("expected {BUNDLE_MAGIC:?}, found {other:?}"))),
            None => return Err(CodecError::Missing("header")),
        }
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (no, line) in lines {
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "n" | "k" | "field" | "layout" | "participant" | "secret" | "share" => {
                    if fields.insert(key, (no, rest.trim())).is_some() {
                        return Err(err(no, format!("duplicate {key} line")));
                    }
                }
                other => return Err(err(no, format!("unknown key {other:?}"))),
            }
        }
        let get = |key: &'static str| fields.get(key).copied().ok_or(CodecError::Missing(key));
        let number = |key: &'static str| -> Result<usize, CodecError> {
            let (no, v) = get(key)?;
            v.parse().map_err(|_| err(no, format!("bad {key} {v:?}")))
        };
        let (no, field) = get("field")?;
        let spec: FieldSpec = field.parse().map_err(|e| err(no, format!("{e}")))?;
        let params = Params::new(number("n")?, number("k")?, spec)?;
        let (no, layout) = get("layout")?;
        let id: LayoutId = layout.parse().map_err(|e| err(no, format!("{e}")))?;
        let layout = PointLayout::new(params, id);
        let value = |no: usize, w: &str| spec.parse_hex(w).map_err(|e| err(no, e.to_string()));
        let secret = match fields.get("secret") {
            Some(&(no, v)) => Some(value(no, v)?),
            None => None,
        };
        let (no, share) = get("share")?;
        let share = share
            .split_whitespace()
            .map(|w| value(no, w))
            .collect::<Result<Vec<_>, _>>()?;
        let bundle = ParticipantBundle {
            participant: number("participant")?,
            secret,
            share,
        };
        bundle.validate(&layout)?;
        Ok(BundleFile { layout, bundle })
    }
}

pub fn encode_secrets(secrets: &[FieldElement]) -> String {
    secrets.iter().map(|s| s.to_hex() + "\n").collect()
}

pub fn decode_secrets(spec: FieldSpec, text: &str) -> Result<Vec<FieldElement>, CodecError> {
    content_lines(text)
        .map(|(no, line)| spec.parse_hex(line).map_err(|e| err(no, e.to_string())))
        .collect()
}

/// Decode secrets and check there is one per participant.
pub fn decode_secrets_for(params: Params, text: &str) -> Result<Vec<FieldElement>, CodecError> {
    let secrets = decode_secrets(params.spec(), text)?;
    if secrets.len() != params.n() {
        return Err(SchemeError::SecretCount {
            expected: params.n(),
            got: secrets.len(),
        }
        .into());
    }
    Ok(secrets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::deal_random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn layout(n: usize, k: usize, field: &str, id: LayoutId) -> PointLayout {
        PointLayout::new(Params::new(n, k, field.parse().unwrap()).unwrap(), id)
    }

    #[test]
    fn fixture_bundle_text() {
        let l = layout(3, 2, "p=13", LayoutId::SecretsFirst);
        let f = l.spec();
        let file = BundleFile {
            layout: l,
            bundle: ParticipantBundle {
                participant: 1,
                secret: Some(f.from_integer(5)),
                share: vec![f.from_integer(10)],
            },
        };
        let text = file.encode();
        assert_eq!(
            text,
            "gruppen-bundle v1\nn 3\nk 2\nfield p=13\nlayout secrets-first\nparticipant 1\nsecret 5\nshare a\n"
        );
        assert_eq!(BundleFile::decode(&text).unwrap(), file);
    }

    #[test]
    fn binary_field_widths() {
        let l = layout(5, 2, "gf2=8", LayoutId::ParticipantMajor);
        let d = deal_random(&l, &mut ChaCha20Rng::seed_from_u64(1));
        let text = BundleFile {
            layout: l.clone(),
            bundle: d.bundle(2).clone(),
        }
        .encode();
        let share_line = text.lines().find(|l| l.starts_with("share ")).unwrap();
        let words: Vec<&str> = share_line.split(' ').skip(1).collect();
        assert_eq!(words.len(), 3);
        assert!(words.iter().all(|w| w.len() == 2));
    }

    #[test]
    fn withheld_secret_round_trips() {
        let l = layout(4, 2, "p=13", LayoutId::ParticipantMajor);
        let mut b = deal_random(&l, &mut ChaCha20Rng::seed_from_u64(2)).bundle(3).clone();
        b.secret = None;
        let file = BundleFile { layout: l, bundle: b };
        let text = file.encode();
        assert!(!text.contains("secret"));
        assert_eq!(BundleFile::decode(&text).unwrap(), file);
    }

    #[test]
    fn decode_errors() {
        let good = "gruppen-bundle v1\nn 3\nk 2\nfield p=13\nlayout secrets-first\nparticipant 1\nshare a\n";
        assert!(BundleFile::decode(good).is_ok());
        assert_eq!(BundleFile::decode(""), Err(CodecError::Missing("header")));
        assert!(matches!(BundleFile::decode(&good.replace("v1", "v2")), Err(CodecError::Parse { .. })));
        assert_eq!(
            BundleFile::decode(&good.replace("share a\n", "")),
            Err(CodecError::Missing("share"))
        );
        assert!(matches!(
            BundleFile::decode(&good.replace("share a", "share a b")),
            Err(CodecError::Scheme(SchemeError::ShareLength { .. }))
        ));
        assert!(matches!(
            BundleFile::decode(&good.replace("share a", "share d")),
            Err(CodecError::Parse { line: 7, .. })
        ));
        assert!(matches!(
            BundleFile::decode(&good.replace("p=13", "p=5")),
            Err(CodecError::Scheme(SchemeError::FieldTooSmall { .. }))
        ));
        assert!(BundleFile::decode(&good.replace("secrets-first", "sideways")).is_err());
        assert!(BundleFile::decode(&good.replace("participant 1", "participant 4")).is_err());
        assert!(BundleFile::decode(&format!("{good}share b\n")).is_err());
        assert!(BundleFile::decode(&format!("{good}color blue\n")).is_err());
    }

    #[test]
    fn secrets_file() {
        let params = Params::new(3, 2, "gf2=4".parse().unwrap()).unwrap();
        let f = params.spec();
        let s = vec![f.from_integer(0), f.element(0xf).unwrap(), f.element(0x9).unwrap()];
        let text = encode_secrets(&s);
        assert_eq!(text, "0\nf\n9\n");
        assert_eq!(decode_secrets_for(params, &format!("# secrets\n{text}\n")).unwrap(), s);
        assert!(matches!(
            decode_secrets_for(params, "0\nf\n"),
            Err(CodecError::Scheme(SchemeError::SecretCount { expected: 3, got: 2 }))
        ));
        assert!(decode_secrets_for(params, "0\n10\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn bundles_round_trip(seed in any::<u64>(), participant in 1usize..=5, binary in any::<bool>()) {
            let l = if binary {
                layout(5, 3, "gf2=16", LayoutId::ParticipantMajor)
            } else {
                layout(5, 3, "p=65521", LayoutId::SecretsFirst)
            };
            let d = deal_random(&l, &mut ChaCha20Rng::seed_from_u64(seed));
            let file = BundleFile { layout: l, bundle: d.bundle(participant).clone() };
            prop_assert_eq!(BundleFile::decode(&file.encode()).unwrap(), file);
        }
    }
}
