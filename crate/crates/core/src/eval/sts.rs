//! Sentence-pair datasets in the SemEval STS layout: one pair per line, the
//! two sentences separated by a tab, with an optional parallel gold file
//! holding one relatedness score per line.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParaphrasePair {
    pub id: String,
    pub text_a: String,
    pub text_b: String,
    pub gold: Option<f64>,
}

/// Load every pair from `inputs`, in file order, concatenated. When `gold` is
/// given it must name one score file per input file.
pub fn load_sts_dataset<P: AsRef<Path>>(
    inputs: &[P],
    gold: Option<&[PathBuf]>,
) -> Result<Vec<ParaphrasePair>> {
    if let Some(gold) = gold {
        if gold.len() != inputs.len() {
            return Err(Error::GoldFileCount {
                inputs: inputs.len(),
                golds: gold.len(),
            });
        }
    }
    let mut pairs = Vec::new();
    for (index, input) in inputs.iter().enumerate() {
        let input = input.as_ref();
        let mut file_pairs = read_pairs(input)?;
        if let Some(gold) = gold {
            let gold_path = &gold[index];
            let scores = read_gold(gold_path)?;
            if scores.len() != file_pairs.len() {
                return Err(Error::GoldLengthMismatch {
                    input_path: input.to_path_buf(),
                    gold_path: gold_path.clone(),
                    input: file_pairs.len(),
                    gold: scores.len(),
                });
            }
            for (pair, score) in file_pairs.iter_mut().zip(scores) {
                pair.gold = Some(score);
            }
        }
        pairs.append(&mut file_pairs);
    }
    Ok(pairs)
}

fn read_pairs(path: &Path) -> Result<Vec<ParaphrasePair>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    text.lines()
        .enumerate()
        .map(|(index, line)| {
            let line_no = index + 1;
            let bad = |message: &str| Error::MalformedLine {
                path: path.to_path_buf(),
                line: line_no,
                message: message.to_string(),
            };
            let line = line.strip_suffix('\r').unwrap_or(line);
            let mut fields = line.split('\t');
            let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad("expected exactly two tab-separated sentences"));
            };
            if a.trim().is_empty() || b.trim().is_empty() {
                return Err(bad("empty sentence"));
            }
            Ok(ParaphrasePair {
                id: format!("{name}:{line_no}"),
                text_a: a.to_string(),
                text_b: b.to_string(),
                gold: None,
            })
        })
        .collect()
}

fn read_gold(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(index, line)| {
            line.trim()
                .parse::<f64>()
                .map_err(|e| Error::MalformedLine {
                    path: path.to_path_buf(),
                    line: index + 1,
                    message: format!("bad gold score `{}`: {e}", line.trim()),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_line() {
        let f = file("a cat sits\tthe cat is sitting\n");
        let pairs = load_sts_dataset(&[f.path()], None).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].text_a, "a cat sits");
        assert_eq!(pairs[0].text_b, "the cat is sitting");
        let name = f.path().file_name().unwrap().to_string_lossy();
        assert_eq!(pairs[0].id, format!("{name}:1"));
        assert_eq!(pairs[0].gold, None);
    }

    #[test]
    fn empty_file() {
        let f = file("");
        assert!(load_sts_dataset(&[f.path()], None).unwrap().is_empty());
    }

    #[test]
    fn crlf_and_concatenation() {
        let a = file("x y\tx z\r\np q\tq p\r\n");
        let b = file("m\tn\n");
        let pairs = load_sts_dataset(&[a.path(), b.path()], None).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[1].text_b, "q p");
        assert!(pairs[2].id.ends_with(":1"));
    }

    #[test]
    fn malformed_line_reports_position() {
        let f = file("ok\tfine\nno tab here\n");
        match load_sts_dataset(&[f.path()], None).unwrap_err() {
            Error::MalformedLine { line, path, .. } => {
                assert_eq!(line, 2);
                assert_eq!(path, f.path());
            }
            other => panic!("unexpected {other}"),
        }
        let f = file("a\tb\tc\n");
        assert!(matches!(
            load_sts_dataset(&[f.path()], None).unwrap_err(),
            Error::MalformedLine { line: 1, .. }
        ));
        let f = file("a\t \n");
        assert!(load_sts_dataset(&[f.path()], None).is_err());
    }

    #[test]
    fn gold_scores_attached() {
        let f = file("a\tb\nc\td\n");
        let g = file("4.5\n0.25\n");
        let pairs = load_sts_dataset(&[f.path()], Some(&[g.path().to_path_buf()])).unwrap();
        assert_eq!(pairs[0].gold, Some(4.5));
        assert_eq!(pairs[1].gold, Some(0.25));
    }

    #[test]
    fn gold_length_mismatch() {
        let f = file("a\tb\nc\td\n");
        let g = file("4.5\n");
        let err = load_sts_dataset(&[f.path()], Some(&[g.path().to_path_buf()])).unwrap_err();
        assert!(matches!(
            err,
            Error::GoldLengthMismatch {
                input: 2,
                gold: 1,
                ..
            }
        ));
        let err = load_sts_dataset(&[f.path()], Some(&[])).unwrap_err();
        assert!(matches!(err, Error::GoldFileCount { .. }));
    }

    #[test]
    fn bad_gold_value() {
        let f = file("a\tb\n");
        let g = file("high\n");
        let err = load_sts_dataset(&[f.path()], Some(&[g.path().to_path_buf()])).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_sts_dataset(&["/no/such/file.txt"], None).unwrap_err(),
            Error::Io { .. }
        ));
    }
}
