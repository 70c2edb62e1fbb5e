use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::system::{CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::rational::{parse_q, to_f64, Q};

/// Positive rational weight `q_v` for every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    q: Vec<Q>,
}

impl WeightAssignment {
    pub fn uniform(rank: usize, q: Q) -> Result<Self> {
        Self::new(vec![q; rank])
    }

    pub fn new(q: Vec<Q>) -> Result<Self> {
        if let Some(bad) = q.iter().find(|x| !x.is_positive()) {
            return Err(Error::Precondition(format!(
                "weights must be positive, got {bad}"
            )));
        }
        Ok(WeightAssignment { q })
    }

    /// Per-generator weights given by name; every generator must be listed.
    pub fn from_map(sys: &CoxeterSystem, map: &BTreeMap<String, Q>) -> Result<Self> {
        for name in map.keys() {
            sys.generator(name)?;
        }
        let q = sys
            .names()
            .iter()
            .map(|n| {
                map.get(n)
                    .cloned()
                    .ok_or_else(|| Error::Config(format!("no weight for generator `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q)
    }

    /// Parses `"1/3"` (uniform) or `"a=1/2,b=1/3"` (per generator).
    pub fn parse(sys: &CoxeterSystem, text: &str) -> Result<Self> {
        if !text.contains('=') {
            return Self::uniform(sys.rank(), parse_q(text)?);
        }
        let mut map = BTreeMap::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad weight entry `{part}`")))?;
            map.insert(k.trim().to_string(), parse_q(v)?);
        }
        Self::from_map(sys, &map)
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn get(&self, s: u8) -> &Q {
        &self.q[s as usize]
    }

    pub fn values(&self) -> &[Q] {
        &self.q
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.q.iter().map(to_f64).collect()
    }

    /// The common value when all weights agree.
    pub fn uniform_value(&self) -> Option<&Q> {
        let first = self.q.first()?;
        self.q.iter().all(|x| x == first).then_some(first)
    }

    pub fn inverse(&self) -> Self {
        WeightAssignment {
            q: self.q.iter().map(|x| x.recip()).collect(),
        }
    }

    pub fn le_one(&self) -> bool {
        self.q.iter().all(|x| *x <= Q::one())
    }

    pub fn ge_one(&self) -> bool {
        self.q.iter().all(|x| *x >= Q::one())
    }

    /// `q^w`, the product of `q_v` over the letters of `x`.
    pub fn weight(&self, x: &Element) -> Q {
        self.weight_of_word(x.word())
    }

    pub fn weight_of_word(&self, word: &[u8]) -> Q {
        word.iter()
            .fold(Q::one(), |acc, &s| acc * &self.q[s as usize])
    }

    /// `Π_{v∈T} q_v/(1+q_v)`, the chamber mass of a cube of type `T`.
    pub fn chamber_factor(&self, t: u64) -> Q {
        super::system::members(t).fold(Q::one(), |acc, s| {
            let q = &self.q[s as usize];
            acc * q / (Q::one() + q)
        })
    }

    pub fn describe(&self, sys: &CoxeterSystem) -> String {
        match self.uniform_value() {
            Some(q) => q.to_string(),
            None if self.q.is_empty() => String::new(),
            None => sys
                .names()
                .iter()
                .zip(&self.q)
                .map(|(n, q)| format!("{n}={q}"))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// Weight of an element checked against a commuting rewrite of its word.
pub fn weight(sys: &CoxeterSystem, x: &Element, q: &WeightAssignment) -> Q {
    let w = q.weight(x);
    if cfg!(debug_assertions) {
        if let Some(alt) = sys.commuting_rewrite(x, x.len()) {
            debug_assert_eq!(q.weight_of_word(&alt), w);
        }
    }
    debug_assert!(!w.is_zero());
    w
}
