//! Lookup of integer sequences against the OEIS: offline by default against
//! a small bundled fixture set, optionally online against the public search
//! endpoint (falling back to the fixtures on any network problem).

use std::time::Duration;

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use serde::Serialize;
use thiserror::Error;

/// Minimum number of query terms accepted (shorter prefixes match too many
/// sequences to be meaningful).
pub const MIN_TERMS: usize = 6;

const OEIS_SEARCH_URL: &str = "https://oeis.org/search";
const FIXTURES: &str = include_str!("../fixtures/oeis_fixtures.txt");

/// Where a lookup is allowed to go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OeisMode {
    Offline,
    Online,
}

/// Where the returned identifiers actually came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OeisSource {
    Fixture,
    Network,
}

/// The result of one lookup: the query echoed back, the matching OEIS ids
/// ("A" + 6 digits), and whether they came from the network or the bundled
/// fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OeisMatch {
    pub terms: Vec<BigInt>,
    pub ids: Vec<String>,
    pub source: OeisSource,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OeisError {
    #[error("sequence lookup needs at least {MIN_TERMS} terms, got {got}")]
    TooFewTerms { got: usize },
}

static FIXTURE_TABLE: Lazy<Vec<(String, Vec<BigInt>)>> = Lazy::new(|| {
    FIXTURES
        .lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| {
            let (id, rest) = line
                .split_once(':')
                .expect("fixture line must be 'Annnnnn: t1,t2,…'");
            let terms = rest
                .split(',')
                .map(|t| t.trim().parse::<BigInt>().expect("fixture term"))
                .collect();
            (id.trim().to_owned(), terms)
        })
        .collect()
});

/// Ids of every fixture sequence containing the query as a consecutive run.
fn fixture_ids(terms: &[BigInt]) -> Vec<String> {
    FIXTURE_TABLE
        .iter()
        .filter(|(_, known)| {
            known.len() >= terms.len() && known.windows(terms.len()).any(|w| w == terms)
        })
        .map(|(id, _)| id.clone())
        .collect()
}

/// Pull every integer that follows a `"number"` key out of a JSON document,
/// without committing to the exact response schema.
fn extract_id_numbers(body: &str) -> Vec<u64> {
    let mut out = Vec::new();
    let key = "\"number\"";
    let mut rest = body;
    while let Some(at) = rest.find(key) {
        rest = &rest[at + key.len()..];
        let after = rest.trim_start().strip_prefix(':').unwrap_or(rest);
        let digits: String = after
            .trim_start()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if let Ok(n) = digits.parse::<u64>() {
            let id = n;
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    out
}

fn network_ids(base_url: &str, terms: &[BigInt]) -> Result<Vec<String>, String> {
    let query: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    let url = format!("{}?q={}&fmt=json", base_url, query.join(","));
    let agent = ureq::builder()
        .timeout(Duration::from_secs(10))
        .build();
    let body = agent
        .get(&url)
        .call()
        .map_err(|e| e.to_string())?
        .into_string()
        .map_err(|e| e.to_string())?;
    Ok(extract_id_numbers(&body)
        .into_iter()
        .map(|n| format!("A{n:06}"))
        .collect())
}

fn lookup_at(terms: &[BigInt], mode: OeisMode, base_url: &str) -> Result<OeisMatch, OeisError> {
    if terms.len() < MIN_TERMS {
        return Err(OeisError::TooFewTerms { got: terms.len() });
    }
    if mode == OeisMode::Online {
        if let Ok(ids) = network_ids(base_url, terms) {
            return Ok(OeisMatch {
                terms: terms.to_vec(),
                ids,
                source: OeisSource::Network,
            });
        }
    }
    Ok(OeisMatch {
        terms: terms.to_vec(),
        ids: fixture_ids(terms),
        source: OeisSource::Fixture,
    })
}

/// Look a sequence up by at least [`MIN_TERMS`] consecutive terms.
///
/// Offline mode consults only the bundled fixtures (deterministic, no
/// network). Online mode queries the OEIS search endpoint and degrades to
/// the fixture answer on any network failure, flagging the downgrade in
/// `source`.
pub fn lookup(terms: &[BigInt], mode: OeisMode) -> Result<OeisMatch, OeisError> {
    lookup_at(terms, mode, OEIS_SEARCH_URL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::binomial_exact;
    use crate::sequences::catalan_exact;

    fn big(terms: &[i64]) -> Vec<BigInt> {
        terms.iter().map(|&t| BigInt::from(t)).collect()
    }

    #[test]
    fn partial_sum_tables_match_their_catalogued_sequences() {
        let alpha = lookup(&big(&[1, 3, 9, 29, 99, 351]), OeisMode::Offline).unwrap();
        assert_eq!(alpha.ids, vec!["A006134"]);
        assert_eq!(alpha.source, OeisSource::Fixture);

        let beta = lookup(&big(&[1, 2, 4, 9, 23, 65]), OeisMode::Offline).unwrap();
        assert_eq!(beta.ids, vec!["A014137"]);

        let gamma = lookup(&big(&[2, 7, 23, 78, 274, 988]), OeisMode::Offline).unwrap();
        assert!(gamma.ids.is_empty(), "γ has no catalogued counterpart");

        let delta = lookup(&big(&[1, 2, 5, 12, 31, 82]), OeisMode::Offline).unwrap();
        assert_eq!(delta.ids, vec!["A097893"]);
    }

    #[test]
    fn runs_may_start_anywhere_inside_a_fixture() {
        let m = lookup(&big(&[6, 20, 70, 252, 924, 3432]), OeisMode::Offline).unwrap();
        assert_eq!(m.ids, vec!["A000984"]);
        // Eight terms starting at the fourth Catalan number.
        let m = lookup(
            &big(&[5, 14, 42, 132, 429, 1430, 4862, 16796]),
            OeisMode::Offline,
        )
        .unwrap();
        assert_eq!(m.ids, vec!["A000108"]);
        // A run that overshoots the stored tail does not match.
        let m = lookup(
            &big(&[1723, 4862, 13815, 39468, 1, 2]),
            OeisMode::Offline,
        )
        .unwrap();
        assert!(m.ids.is_empty());
    }

    #[test]
    fn fixture_terms_agree_with_the_library() {
        let table = &*FIXTURE_TABLE;
        let terms = |id: &str| -> &[BigInt] {
            &table.iter().find(|(i, _)| i == id).unwrap().1
        };

        let central: Vec<BigInt> = (0..12).map(|n| binomial_exact(2 * n, n as i64)).collect();
        assert_eq!(terms("A000984"), &central[..]);

        let catalan: Vec<BigInt> = (0..12).map(catalan_exact).collect();
        assert_eq!(terms("A000108"), &catalan[..]);

        let motzkin: Vec<BigInt> = (0u64..12)
            .map(|n| (0..=n / 2).map(|k| binomial_exact(n, 2 * k as i64) * catalan_exact(k)).sum())
            .collect();
        assert_eq!(terms("A001006"), &motzkin[..]);

        // Two match targets are prefix-sum transforms of term sequences
        // bundled alongside them.
        let prefix_sums = |base: &[BigInt]| -> Vec<BigInt> {
            let mut acc = BigInt::from(0);
            base.iter()
                .map(|t| {
                    acc += t;
                    acc.clone()
                })
                .collect()
        };
        for (terms_id, sums_id) in [("A000984", "A006134"), ("A000108", "A014137")] {
            assert_eq!(
                terms(sums_id),
                &prefix_sums(terms(terms_id))[..],
                "{sums_id} is the prefix-sum of {terms_id}"
            );
        }

        // The third target is the prefix-sum of the central trinomial
        // sequence (the value table the Motzkin cases point at).
        use crate::sequences::central_trinomial_exact;
        let trinomial: Vec<BigInt> = (0..12).map(central_trinomial_exact).collect();
        assert_eq!(terms("A097893"), &prefix_sums(&trinomial)[..]);
    }

    #[test]
    fn short_queries_are_rejected() {
        assert_eq!(
            lookup(&big(&[1, 2, 3, 4, 5]), OeisMode::Offline).unwrap_err(),
            OeisError::TooFewTerms { got: 5 }
        );
    }

    #[test]
    fn unreachable_network_degrades_to_fixtures() {
        let m = lookup_at(
            &big(&[1, 3, 9, 29, 99, 351]),
            OeisMode::Online,
            "https://127.0.0.1:1/search",
        )
        .unwrap();
        assert_eq!(m.source, OeisSource::Fixture);
        assert_eq!(m.ids, vec!["A006134"]);
    }

    #[test]
    fn id_extraction_is_schema_tolerant() {
        let body = r#"{"results":[{"number":984,"name":"x"},{"number": 6134 ,"name":"y"},{"number":984}],"count":3}"#;
        assert_eq!(extract_id_numbers(body), vec![984, 6134]);
        assert!(extract_id_numbers("{\"count\":0}").is_empty());
    }

    #[test]
    #[ignore = "requires network access to oeis.org"]
    fn online_lookup_hits_the_public_endpoint() {
        let m = lookup(&big(&[1, 2, 6, 20, 70, 252, 924, 3432]), OeisMode::Online).unwrap();
        assert_eq!(m.source, OeisSource::Network);
        assert!(m.ids.contains(&"A000984".to_owned()));
    }
}
