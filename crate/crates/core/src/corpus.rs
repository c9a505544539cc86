//! Document collections, document-frequency statistics and persistence.
//!
//! # Corpus file layout
//!
//! UTF-8, one JSON object per line. The first line is a header carrying the
//! statistics; every following line is one document:
//!
//! ```text
//! {"format":"tscs-corpus","version":1,"documents":2,"df":{"john":2,"love":2,"mari":2}}
//! {"id":"a.txt","text":"John loves Mary","terms":["john","love","mari"]}
//! {"id":"b.txt","text":"Mary loves John","terms":["mari","love","john"]}
//! ```
//!
//! On load the statistics are recomputed from the documents and must agree
//! with the header. Blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{self, PipelineConfig, ProcessedDocument, RawDocument};
use crate::similarity::{self, Alpha, SimilarityResult, Weighting, WeightingScheme};

const FORMAT_NAME: &str = "tscs-corpus";
const FORMAT_VERSION: u32 = 1;

/// Document count and per-term document frequencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    documents: usize,
    df: BTreeMap<String, usize>,
}

impl CorpusStats {
    pub fn from_documents<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a ProcessedDocument>,
    {
        let mut stats = Self::default();
        for doc in docs {
            stats.observe(doc);
        }
        stats
    }

    /// Build directly from counts. Entries with `df = 0` are dropped.
    pub fn from_counts<I, S>(documents: usize, df: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Self {
            documents,
            df: df
                .into_iter()
                .filter(|(_, n)| *n > 0)
                .map(|(t, n)| (t.into(), n))
                .collect(),
        }
    }

    pub fn document_count(&self) -> usize {
        self.documents
    }

    pub fn df(&self, term: &str) -> usize {
        self.df.get(term).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, usize)> {
        self.df.iter().map(|(t, n)| (t.as_str(), *n))
    }

    /// `1 + ln(N / df)`, with `df` floored at 1.
    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df(term).max(1);
        1.0 + (self.documents as f64 / df as f64).ln()
    }

    fn observe(&mut self, doc: &ProcessedDocument) {
        self.documents += 1;
        let distinct: BTreeSet<&str> = doc.terms().iter().map(String::as_str).collect();
        for term in distinct {
            *self.df.entry(term.to_string()).or_default() += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    pub text: String,
    pub doc: ProcessedDocument,
}

/// An insertion-ordered set of processed documents plus matching statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    entries: IndexMap<String, CorpusDocument>,
    stats: CorpusStats,
}

/// Outcome of [`Corpus::load_directory`]: the corpus plus every file that
/// could not be read.
#[derive(Debug)]
pub struct DirectoryLoad {
    pub corpus: Corpus,
    pub skipped: Vec<Error>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_document(
        &mut self,
        raw: &RawDocument,
        config: &PipelineConfig,
    ) -> Result<&ProcessedDocument> {
        let doc = pipeline::preprocess(raw, config);
        self.insert(raw.text.clone(), doc)
    }

    /// Insert a document that has already been preprocessed.
    pub fn insert(&mut self, text: String, doc: ProcessedDocument) -> Result<&ProcessedDocument> {
        if doc.id().is_empty() {
            return Err(Error::EmptyId);
        }
        if self.entries.contains_key(doc.id()) {
            return Err(Error::DuplicateId(doc.id().to_string()));
        }
        self.stats.observe(&doc);
        let entry = self
            .entries
            .entry(doc.id().to_string())
            .or_insert(CorpusDocument { text, doc });
        Ok(&entry.doc)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CorpusDocument> {
        self.entries.get(id)
    }

    pub fn documents(&self) -> impl Iterator<Item = &ProcessedDocument> {
        self.entries.values().map(|e| &e.doc)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CorpusDocument> {
        self.entries.values()
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    /// Statistics rebuilt from scratch; always equal to [`stats`](Self::stats).
    pub fn recompute_stats(&self) -> CorpusStats {
        CorpusStats::from_documents(self.documents())
    }

    pub fn scheme(&self, weighting: Weighting) -> Result<WeightingScheme<'_>> {
        match weighting {
            Weighting::Tf => Ok(WeightingScheme::tf()),
            Weighting::TfIdf => WeightingScheme::tf_idf(&self.stats),
        }
    }

    /// Every `*.txt` file directly under `path`, in file-name order, with the
    /// file name as id. Unreadable files are skipped and reported.
    pub fn load_directory(
        path: impl AsRef<Path>,
        config: &PipelineConfig,
    ) -> Result<DirectoryLoad> {
        let mut corpus = Corpus::new();
        let mut skipped = Vec::new();
        for file in text_files(path.as_ref())? {
            let id = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            match fs::read_to_string(&file) {
                Ok(text) => {
                    corpus.add_document(&RawDocument::new(id, text), config)?;
                }
                Err(source) => skipped.push(Error::io(&file, source)),
            }
        }
        Ok(DirectoryLoad { corpus, skipped })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_to(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header = Header {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            documents: self.stats.documents,
            df: self.stats.df.clone(),
        };
        serde_json::to_writer(&mut out, &header)?;
        writeln!(out)?;
        for entry in self.entries.values() {
            let record = Record {
                id: entry.doc.id().to_string(),
                text: entry.text.clone(),
                terms: entry.doc.terms().to_vec(),
            };
            serde_json::to_writer(&mut out, &record)?;
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut header: Option<(usize, Header)> = None;
        let mut corpus = Corpus::new();
        for (index, line) in BufReader::new(input).lines().enumerate() {
            let number = index + 1;
            let line = line.map_err(|e| Error::io(Path::new("<corpus>"), e))?;
            if line.trim().is_empty() {
                continue;
            }
            if header.is_none() {
                let parsed: Header =
                    serde_json::from_str(&line).map_err(|e| malformed(number, e))?;
                if parsed.format != FORMAT_NAME || parsed.version != FORMAT_VERSION {
                    return Err(Error::MalformedRecord {
                        line: number,
                        message: format!(
                            "unsupported corpus format {} v{}",
                            parsed.format, parsed.version
                        ),
                    });
                }
                header = Some((number, parsed));
                continue;
            }
            let record: Record = serde_json::from_str(&line).map_err(|e| malformed(number, e))?;
            let doc = ProcessedDocument::from_terms(record.id, record.terms);
            corpus
                .insert(record.text, doc)
                .map_err(|e| Error::MalformedRecord {
                    line: number,
                    message: e.to_string(),
                })?;
        }
        let Some((line, header)) = header else {
            return Err(Error::MalformedRecord {
                line: 1,
                message: "missing corpus header".to_string(),
            });
        };
        let stored = CorpusStats {
            documents: header.documents,
            df: header.df,
        };
        if stored != corpus.stats {
            return Err(Error::MalformedRecord {
                line,
                message: "stored statistics disagree with the documents".to_string(),
            });
        }
        Ok(corpus)
    }

    /// All-pairs similarity under one alpha and weighting scheme.
    pub fn pairwise_matrix(
        &self,
        alpha: Alpha,
        scheme: &WeightingScheme<'_>,
    ) -> Result<SimilarityMatrix> {
        if self.is_empty() {
            return Err(Error::Empty("corpus"));
        }
        let docs: Vec<&ProcessedDocument> = self.documents().collect();
        let upper: Vec<Vec<SimilarityResult>> = (0..docs.len())
            .into_par_iter()
            .map(|i| {
                (i..docs.len())
                    .map(|j| similarity::tscs(docs[i], docs[j], alpha, scheme))
                    .collect()
            })
            .collect();
        let n = docs.len();
        let cells = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i <= j {
                            upper[i][j - i]
                        } else {
                            upper[j][i - j]
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SimilarityMatrix {
            ids: docs.iter().map(|d| d.id().to_string()).collect(),
            cells,
        })
    }
}

fn malformed(line: usize, err: serde_json::Error) -> Error {
    Error::MalformedRecord {
        line,
        message: err.to_string(),
    }
}

/// `*.txt` regular files directly under `dir`, sorted by file name.
pub fn text_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.extension().is_some_and(|ext| ext == "txt") && !path.is_dir() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    version: u32,
    documents: usize,
    df: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    text: String,
    terms: Vec<String>,
}

/// Square, symmetric matrix of pair results in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    pub ids: Vec<String>,
    pub cells: Vec<Vec<SimilarityResult>>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &SimilarityResult {
        &self.cells[i][j]
    }

    /// Write the TSCS values as CSV with an `id` corner cell, ids across the
    /// header row and down the first column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        let mut header = vec!["id".to_string()];
        header.extend(self.ids.iter().cloned());
        writer.write_record(&header)?;
        for (id, row) in self.ids.iter().zip(&self.cells) {
            let mut record = vec![id.clone()];
            record.extend(row.iter().map(|r| r.tscs.to_string()));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }
}
