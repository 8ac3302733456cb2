use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::item::WebSplitItem;
use crate::error::{Error, Result};

/// Train/validation/test proportions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SplitRatios([f64; 3]);

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        let r = [train, val, test];
        let valid = r.iter().all(|x| x.is_finite() && *x >= 0.0)
            && (r.iter().sum::<f64>() - 1.0).abs() < 1e-9;
        if valid {
            Ok(SplitRatios(r))
        } else {
            Err(Error::BadRatios(r.to_vec()))
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    /// Validation and test sizes are `floor(ratio * n)`; training takes the
    /// rest. With 5,546 sentences at 0.8/0.1/0.1 this gives 4,438/554/554.
    pub fn sizes(&self, n: usize) -> [usize; 3] {
        let take = |r: f64| ((r * n as f64) + 1e-9).floor() as usize;
        let val = take(self.0[1]).min(n);
        let test = take(self.0[2]).min(n - val);
        [n - val - test, val, test]
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios([0.8, 0.1, 0.1])
    }
}

impl TryFrom<[f64; 3]> for SplitRatios {
    type Error = Error;

    fn try_from(r: [f64; 3]) -> Result<Self> {
        SplitRatios::new(r[0], r[1], r[2])
    }
}

impl From<SplitRatios> for [f64; 3] {
    fn from(r: SplitRatios) -> Self {
        r.0
    }
}

impl FromStr for SplitRatios {
    type Err = Error;

    /// Parses `train,val,test`, e.g. `0.8,0.1,0.1`.
    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::BadRatios(vec![]))?;
        match values.as_slice() {
            [a, b, c] => SplitRatios::new(*a, *b, *c),
            _ => Err(Error::BadRatios(values)),
        }
    }
}

impl fmt::Display for SplitRatios {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Debug, Clone, Default)]
pub struct DataSplit {
    pub train: Vec<WebSplitItem>,
    pub val: Vec<WebSplitItem>,
    pub test: Vec<WebSplitItem>,
}

/// Shuffles the distinct complex sentences with a seeded RNG, cuts them by
/// `ratios`, and sends every item to the split of its complex sentence.
/// Items keep their relative order inside each split.
pub fn split_train_val_test(items: Vec<WebSplitItem>, ratios: SplitRatios, seed: u64) -> DataSplit {
    let distinct: BTreeSet<&str> = items.iter().map(|i| i.complex.raw()).collect();
    let mut sentences: Vec<String> = distinct.into_iter().map(String::from).collect();
    sentences.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let [train_n, val_n, _] = ratios.sizes(sentences.len());
    let assignment: HashMap<String, usize> = sentences
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let slot = if i < train_n {
                0
            } else if i < train_n + val_n {
                1
            } else {
                2
            };
            (s, slot)
        })
        .collect();

    let mut split = DataSplit::default();
    for item in items {
        match assignment[item.complex.raw()] {
            0 => split.train.push(item),
            1 => split.val.push(item),
            _ => split.test.push(item),
        }
    }
    split
}
