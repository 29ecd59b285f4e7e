//! Content fingerprinting for duplicate detection. The digest is taken
//! over the canonical printed form, so comments, whitespace, and
//! `set-info` metadata never affect it, while any token-level change to
//! declarations or clauses does. Clause order and names are kept as-is
//! (no alpha-renaming): this is file-level deduplication.

use std::collections::BTreeMap;
use std::collections::HashMap;

use sha2::{Digest as _, Sha256};

use crate::ast::Script;
use crate::printer::canonical_form;

pub const DIGEST_ALGORITHM: &str = "sha-256";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest {
    bytes: [u8; 32],
}

impl Digest {
    pub fn bytes(&self) -> &[u8; 32] {
        &self.bytes
    }

    pub fn algorithm(&self) -> &'static str {
        DIGEST_ALGORITHM
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.bytes)
    }

    pub fn from_hex(text: &str) -> Option<Digest> {
        let raw = hex::decode(text).ok()?;
        let bytes: [u8; 32] = raw.try_into().ok()?;
        Some(Digest { bytes })
    }
}

impl std::fmt::Display for Digest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

pub fn canonical_fingerprint(script: &Script) -> Digest {
    let text = canonical_form(script);
    let bytes: [u8; 32] = Sha256::digest(text.as_bytes()).into();
    Digest { bytes }
}

/// Whether deduplication pools digests per repository (as in the
/// benchmark inventory tables) or across the whole corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DedupScope {
    #[default]
    PerRepository,
    Global,
}

impl std::str::FromStr for DedupScope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-repository" => Ok(DedupScope::PerRepository),
            "global" => Ok(DedupScope::Global),
            other => Err(format!("unknown dedup scope `{}`", other)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DedupEntry {
    pub repository: String,
    pub id: String,
    pub digest: Digest,
}

#[derive(Debug, Clone, Default)]
pub struct RepoCounts {
    pub total: usize,
    pub unique: usize,
}

#[derive(Debug, Clone)]
pub struct DedupOutcome {
    pub total: usize,
    pub unique: usize,
    pub per_repository: BTreeMap<String, RepoCounts>,
    /// `(duplicate, first occurrence)` pairs, in input order.
    pub duplicates: Vec<(DedupEntry, DedupEntry)>,
}

/// First occurrence of a digest within its scope group wins; later
/// entries are reported as duplicates of it.
pub fn dedup(entries: &[DedupEntry], scope: DedupScope) -> DedupOutcome {
    let mut first_seen: HashMap<(Option<&str>, Digest), &DedupEntry> = HashMap::new();
    let mut per_repository: BTreeMap<String, RepoCounts> = BTreeMap::new();
    let mut duplicates = Vec::new();
    let mut unique = 0usize;
    for entry in entries {
        let group = match scope {
            DedupScope::PerRepository => Some(entry.repository.as_str()),
            DedupScope::Global => None,
        };
        let counts = per_repository.entry(entry.repository.clone()).or_default();
        counts.total += 1;
        match first_seen.entry((group, entry.digest)) {
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(entry);
                counts.unique += 1;
                unique += 1;
            }
            std::collections::hash_map::Entry::Occupied(slot) => {
                duplicates.push((entry.clone(), (*slot.get()).clone()));
            }
        }
    }
    DedupOutcome {
        total: entries.len(),
        unique,
        per_repository,
        duplicates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_script;

    fn fp(text: &str) -> Digest {
        canonical_fingerprint(&parse_script(text).unwrap())
    }

    #[test]
    fn comments_whitespace_and_metadata_do_not_matter() {
        let base = fp("(set-logic HORN)(declare-fun p (Int) Bool)\
            (assert (forall ((x Int)) (p x)))(check-sat)");
        let commented = fp("; a comment\n(set-logic HORN) (declare-fun p (Int) Bool)\n\
            (assert (forall ((x Int)) (p x))) ; end\n(check-sat)\n");
        let with_info = fp("(set-logic HORN)(set-info :status sat)(declare-fun p (Int) Bool)\
            (assert (forall ((x Int)) (p x)))(check-sat)");
        assert_eq!(base, commented);
        assert_eq!(base, with_info);
    }

    #[test]
    fn one_numeral_changes_the_digest() {
        let a = fp("(set-logic HORN)(declare-fun p (Int) Bool)(assert (p 1))(check-sat)");
        let b = fp("(set-logic HORN)(declare-fun p (Int) Bool)(assert (p 2))(check-sat)");
        assert_ne!(a, b);
    }

    #[test]
    fn clause_order_and_names_are_significant() {
        let a = fp("(set-logic HORN)(declare-fun p (Int) Bool)(assert (p 1))(assert (p 2))(check-sat)");
        let b = fp("(set-logic HORN)(declare-fun p (Int) Bool)(assert (p 2))(assert (p 1))(check-sat)");
        assert_ne!(a, b);
        let renamed = fp("(set-logic HORN)(declare-fun q (Int) Bool)(assert (q 1))(assert (q 2))(check-sat)");
        assert_ne!(a, renamed);
    }

    #[test]
    fn dedup_counts_whitespace_and_comment_pairs_once() {
        // 228 files where exactly one pair differs only in whitespace
        // and one pair only in comments: 226 unique digests, mirroring
        // a 228/226 repository inventory row.
        let mut entries = Vec::new();
        let mut push = |id: String, text: String| {
            entries.push(DedupEntry {
                repository: "lra-ts".into(),
                id,
                digest: fp(&text),
            });
        };
        for i in 0..224 {
            push(
                format!("bench{:03}.smt2", i),
                format!(
                    "(set-logic HORN)(declare-fun inv (Real) Bool)\
                     (assert (forall ((x Real)) (=> (= x {}.0) (inv x))))(check-sat)",
                    i
                ),
            );
        }
        let ws_base = "(set-logic HORN)(declare-fun inv (Real) Bool)\
            (assert (forall ((x Real)) (=> (> x 0.5) (inv x))))(check-sat)";
        push("ws-a.smt2".into(), ws_base.into());
        push("ws-b.smt2".into(), ws_base.replace(')', ")\n  "));
        let cm_base = "(set-logic HORN)(declare-fun inv (Real) Bool)\
            (assert (forall ((x Real)) (=> (< x 0.25) (inv x))))(check-sat)";
        push("cm-a.smt2".into(), cm_base.into());
        push("cm-b.smt2".into(), format!("; duplicate with comments\n{}", cm_base));
        assert_eq!(entries.len(), 228);

        let outcome = dedup(&entries, DedupScope::PerRepository);
        assert_eq!(outcome.total, 228);
        assert_eq!(outcome.unique, 226);
        assert_eq!(outcome.duplicates.len(), 2);
        let counts = &outcome.per_repository["lra-ts"];
        assert_eq!((counts.total, counts.unique), (228, 226));
    }

    #[test]
    fn scope_changes_cross_repository_duplicates() {
        let digest = fp("(set-logic HORN)(check-sat)");
        let entries = vec![
            DedupEntry {
                repository: "a".into(),
                id: "x.smt2".into(),
                digest,
            },
            DedupEntry {
                repository: "b".into(),
                id: "y.smt2".into(),
                digest,
            },
        ];
        assert_eq!(dedup(&entries, DedupScope::PerRepository).unique, 2);
        assert_eq!(dedup(&entries, DedupScope::Global).unique, 1);
    }
}
