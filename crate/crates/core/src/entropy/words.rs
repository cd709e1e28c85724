//! Counts `r(n)` of words of length `n` over `{x^±1, y^±1}` that multiply to the identity.

use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::ring::dense::power_traces;
use crate::ring::GroupRingElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordGroup {
    Heisenberg,
    Z2,
    Free2,
}

impl WordGroup {
    pub fn name(&self) -> &'static str {
        match self {
            WordGroup::Heisenberg => "heisenberg",
            WordGroup::Z2 => "z2",
            WordGroup::Free2 => "free2",
        }
    }
}

/// `counts[n] = r(n)` for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordCountTable {
    pub group: WordGroup,
    pub counts: Vec<BigUint>,
}

impl WordCountTable {
    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(n)
    }

    /// Cache format: `{"version":1,"group":…,"nMax":…,"counts":["1","0","4",…]}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "version": 1,
            "group": self.group,
            "nMax": self.n_max(),
            "counts": self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let group: WordGroup = serde_json::from_value(v["group"].clone())?;
        let n_max = v["nMax"]
            .as_u64()
            .ok_or_else(|| Error::InvalidInput("cache is missing nMax".into()))?;
        let raw = v["counts"]
            .as_array()
            .ok_or_else(|| Error::InvalidInput("cache is missing counts".into()))?;
        let counts = raw
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| s.parse::<BigUint>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad count {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if counts.len() as u64 != n_max + 1 {
            return invalid("cache count list does not match nMax");
        }
        Ok(WordCountTable { group, counts })
    }
}

fn walk_generator() -> GroupRingElement {
    let one = |k, l| (crate::ring::Monomial::new(k, l, 0), 1);
    GroupRingElement::from_terms([one(1, 0), one(-1, 0), one(0, 1), one(0, -1)]).expect("valid")
}

/// `r_Γ(n)` as the constant terms of `(x + x⁻¹ + y + y⁻¹)^n`, exact in 128 bits.
pub fn word_count_heisenberg(n_max: usize) -> Result<WordCountTable> {
    let t = power_traces(&walk_generator(), n_max)?;
    let counts = t
        .into_iter()
        .map(|c| {
            u128::try_from(c)
                .map(BigUint::from)
                .map_err(|_| Error::Overflow("word counts"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WordCountTable {
        group: WordGroup::Heisenberg,
        counts,
    })
}

/// `r_{Z²}(2n) = C(2n, n)²`.
pub fn word_count_z2(n_max: usize) -> WordCountTable {
    let mut counts = vec![BigUint::zero(); n_max + 1];
    let mut binom = BigUint::one();
    for n in 0..=n_max / 2 {
        if n > 0 {
            // C(2n, n) = C(2n-2, n-1)·(2n)(2n-1)/n²
            binom = binom * BigUint::from(2 * n * (2 * n - 1)) / BigUint::from(n * n);
        }
        counts[2 * n] = &binom * &binom;
    }
    WordCountTable {
        group: WordGroup::Z2,
        counts,
    }
}

/// Closed walks on the 4-regular tree, tracked by distance from the root.
pub fn word_count_free(n_max: usize) -> WordCountTable {
    let mut dist = vec![BigUint::one()];
    let mut counts = vec![BigUint::one()];
    for _ in 1..=n_max {
        let mut next = vec![BigUint::zero(); dist.len() + 1];
        for (d, w) in dist.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if d == 0 {
                next[1] += w * 4u32;
            } else {
                next[d - 1] += w;
                next[d + 1] += w * 3u32;
            }
        }
        dist = next;
        counts.push(dist[0].clone());
    }
    WordCountTable {
        group: WordGroup::Free2,
        counts,
    }
}

pub fn word_counts(group: WordGroup, n_max: usize) -> Result<WordCountTable> {
    match group {
        WordGroup::Heisenberg => word_count_heisenberg(n_max),
        WordGroup::Z2 => Ok(word_count_z2(n_max)),
        WordGroup::Free2 => Ok(word_count_free(n_max)),
    }
}

/// Reads the table from `path` if it holds the same group with at least `n_max`
/// entries; otherwise computes it and writes the cache.
pub fn word_counts_cached(group: WordGroup, n_max: usize, path: &Path) -> Result<WordCountTable> {
    if let Ok(text) = std::fs::read_to_string(path) {
        if let Ok(table) = serde_json::from_str::<serde_json::Value>(&text)
            .map_err(Error::from)
            .and_then(|v| WordCountTable::from_json(&v))
        {
            if table.group == group && table.n_max() >= n_max {
                return Ok(WordCountTable {
                    group,
                    counts: table.counts[..=n_max].to_vec(),
                });
            }
        }
    }
    let table = word_counts(group, n_max)?;
    std::fs::write(path, serde_json::to_string_pretty(&table.to_json())?)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, step: impl Fn((i64, i64, i64), usize) -> (i64, i64, i64)) -> u64 {
        let mut c = 0;
        for w in 0..4usize.pow(n as u32) {
            let mut p = (0, 0, 0);
            let mut r = w;
            for _ in 0..n {
                p = step(p, r % 4);
                r /= 4;
            }
            if p == (0, 0, 0) {
                c += 1;
            }
        }
        c
    }

    fn heis_step(p: (i64, i64, i64), g: usize) -> (i64, i64, i64) {
        let (k, l, m) = p;
        match g {
            0 => (k + 1, l, m + l),
            1 => (k - 1, l, m - l),
            2 => (k, l + 1, m),
            _ => (k, l - 1, m),
        }
    }

    #[test]
    fn heisenberg_matches_brute_force() {
        let t = word_count_heisenberg(8).unwrap();
        for n in 0..=8 {
            assert_eq!(t.counts[n], BigUint::from(brute(n, heis_step)), "n={n}");
        }
        assert_eq!(t.counts[2], BigUint::from(4u32));
    }

    #[test]
    fn z2_matches_brute_force() {
        let t = word_count_z2(8);
        let step = |(k, l, _): (i64, i64, i64), g: usize| match g {
            0 => (k + 1, l, 0),
            1 => (k - 1, l, 0),
            2 => (k, l + 1, 0),
            _ => (k, l - 1, 0),
        };
        for n in 0..=8 {
            assert_eq!(t.counts[n], BigUint::from(brute(n, step)), "n={n}");
        }
        assert_eq!(t.counts[4], BigUint::from(36u32));
    }

    #[test]
    fn free_series() {
        let t = word_count_free(8);
        let want = [1u32, 0, 4, 0, 28, 0, 232, 0, 2092];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(t.counts[n], BigUint::from(*w));
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wc.json");
        let a = word_counts_cached(WordGroup::Heisenberg, 12, &path).unwrap();
        let b = word_counts_cached(WordGroup::Heisenberg, 10, &path).unwrap();
        assert_eq!(&a.counts[..=10], &b.counts[..]);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["group"], "heisenberg");
        assert_eq!(v["nMax"], 12);
        assert_eq!(v["counts"][4], "28");
    }
}
