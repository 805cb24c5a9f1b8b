use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Order-`k` character model estimated from counts over every length-`k+1`
/// window of a corpus.
///
/// Events seen in training get their relative frequency. An unseen symbol,
/// or any symbol after an unseen context, gets the add-one estimate
/// `1 / (context total + alphabet size)`, so surprisal stays finite.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel<S: Ord> {
    order: usize,
    counts: BTreeMap<Vec<S>, BTreeMap<S, u64>>,
    alphabet: BTreeSet<S>,
}

pub fn build_ngram<S: Ord + Clone>(corpus: &[S], order: usize) -> Result<NGramModel<S>> {
    if corpus.len() <= order {
        return Err(Error::CorpusTooShort { len: corpus.len(), order });
    }
    let mut counts: BTreeMap<Vec<S>, BTreeMap<S, u64>> = BTreeMap::new();
    for window in corpus.windows(order + 1) {
        let (context, symbol) = window.split_at(order);
        *counts.entry(context.to_vec()).or_default().entry(symbol[0].clone()).or_default() += 1;
    }
    let alphabet = corpus.iter().cloned().collect();
    Ok(NGramModel { order, counts, alphabet })
}

impl<S: Ord + Clone> NGramModel<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &BTreeSet<S> {
        &self.alphabet
    }

    /// Widen the declared alphabet beyond the symbols seen in training.
    pub fn with_alphabet(mut self, symbols: impl IntoIterator<Item = S>) -> Self {
        self.alphabet.extend(symbols);
        self
    }

    /// Frequency table of one context, if it was seen.
    pub fn table(&self, context: &[S]) -> Option<&BTreeMap<S, u64>> {
        self.counts.get(context)
    }

    pub fn probability(&self, context: &[S], symbol: &S) -> f64 {
        let table = self.counts.get(context);
        let total: u64 = table.map_or(0, |t| t.values().sum());
        match table.and_then(|t| t.get(symbol)) {
            Some(&n) => n as f64 / total as f64,
            None => 1.0 / (total as f64 + self.alphabet.len() as f64),
        }
    }

    /// `-log2 P(symbol | context)` for every position that has a full
    /// context, i.e. positions `order..text.len()`.
    pub fn surprisals(&self, text: &[S]) -> Result<Vec<f64>> {
        if let Some(position) = text.iter().position(|s| !self.alphabet.contains(s)) {
            return Err(Error::UnknownSymbol { position });
        }
        Ok(text
            .windows(self.order + 1)
            .map(|w| {
                let (context, symbol) = w.split_at(self.order);
                -libm::log2(self.probability(context, &symbol[0]))
            })
            .collect())
    }

    /// Mean surprisal in bits per predicted symbol.
    pub fn surprisal(&self, text: &[S]) -> Result<f64> {
        if text.len() <= self.order {
            return Err(Error::CorpusTooShort { len: text.len(), order: self.order });
        }
        let values = self.surprisals(text)?;
        Ok(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// A reader of a text: either one who knows it by heart or one who only
/// knows its statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum Recipient<S: Ord> {
    Memorized(Vec<S>),
    Model(NGramModel<S>),
}

/// Mean per-symbol entropy the recipient assigns to `text`, in bits.
///
/// A memorized recipient predicts each position with certainty: a match
/// costs nothing and a mismatch (or a position past the memorized copy) is
/// an impossible event with infinite surprisal.
pub fn observer_surprisal<S: Ord + Clone>(recipient: &Recipient<S>, text: &[S]) -> Result<f64> {
    match recipient {
        Recipient::Memorized(copy) => {
            if text.is_empty() {
                return Ok(0.0);
            }
            let matches = text.iter().enumerate().all(|(i, s)| copy.get(i) == Some(s));
            Ok(if matches { 0.0 } else { f64::INFINITY })
        }
        Recipient::Model(model) => model.surprisal(text),
    }
}
