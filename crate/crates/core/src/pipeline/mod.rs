//! Raw text to ordered term sequences.
//!
//! `tokenize -> remove_stopwords -> stem`, after which every surviving term
//! is numbered densely from 0. Positions are assigned after filtering, so a
//! sentence with three content words always yields positions 0, 1, 2.

pub mod porter;
pub mod stopwords;

use std::collections::HashSet;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stemming {
    #[default]
    Porter,
    None,
}

/// Immutable preprocessing settings.
///
/// When `lowercase` is on, stop-words are lowercased on the way in so they
/// match the tokens they are compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    lowercase: bool,
    stopwords: HashSet<String>,
    stemming: Stemming,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            stopwords: stopwords::english(),
            stemming: Stemming::Porter,
        }
    }
}

impl PipelineConfig {
    pub fn with_lowercase(mut self, lowercase: bool) -> Self {
        self.lowercase = lowercase;
        if lowercase {
            self.stopwords = self
                .stopwords
                .into_iter()
                .map(|w| w.to_lowercase())
                .collect();
        }
        self
    }

    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let lowercase = self.lowercase;
        self.stopwords = words
            .into_iter()
            .map(Into::into)
            .map(|w: String| if lowercase { w.to_lowercase() } else { w })
            .collect();
        self
    }

    /// Replace the stop-word list with the contents of `path`.
    pub fn with_stopwords_file(self, path: impl AsRef<Path>) -> Result<Self> {
        let words = stopwords::load(path)?;
        Ok(self.with_stopwords(words))
    }

    pub fn with_stemming(mut self, stemming: Stemming) -> Self {
        self.stemming = stemming;
        self
    }

    pub fn lowercase(&self) -> bool {
        self.lowercase
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn stemming(&self) -> Stemming {
        self.stemming
    }
}

/// A document reduced to its ordered terms. The index of a term in
/// [`terms`](Self::terms) is its ordinal position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProcessedDocument {
    id: String,
    terms: Vec<String>,
}

impl ProcessedDocument {
    /// Wrap an already-normalized term sequence.
    pub fn from_terms<I, S>(id: impl Into<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            id: id.into(),
            terms: terms.into_iter().map(Into::into).collect(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Split into maximal runs of alphanumeric characters.
pub fn tokenize(text: &str, config: &PipelineConfig) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| {
            if config.lowercase {
                t.to_lowercase()
            } else {
                t.to_string()
            }
        })
        .collect()
}

pub fn remove_stopwords(tokens: Vec<String>, config: &PipelineConfig) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| !config.stopwords.contains(t))
        .collect()
}

pub fn stem(token: &str) -> String {
    porter::stem(token)
}

pub fn preprocess(raw: &RawDocument, config: &PipelineConfig) -> ProcessedDocument {
    ProcessedDocument {
        id: raw.id.clone(),
        terms: preprocess_text(&raw.text, config),
    }
}

pub(crate) fn preprocess_text(text: &str, config: &PipelineConfig) -> Vec<String> {
    let kept = remove_stopwords(tokenize(text, config), config);
    match config.stemming {
        Stemming::Porter => kept.iter().map(|t| stem(t)).collect(),
        Stemming::None => kept,
    }
}
