//! JSON exchange format for map words.
//!
//! ```json
//! {"word": [
//!   {"kind": "pl", "breaks": ["0", "3/10"], "slopes": ["2", "4/7"], "anchor": "3/10", "inverse": false},
//!   {"kind": "rotation", "alpha": "0.25"},
//!   {"kind": "exp", "sigma": "2", "center": "0.4"},
//!   {"kind": "quad", "sigma": "2", "center": "0"}
//! ],
//!  "provenance": {"h0": {"word": [...]}, "F0": {"word": [...]}}}
//! ```
//!
//! Reals are decimal strings or `p/q` rationals; bare JSON numbers are also
//! accepted on input. Letters are listed in composition order, the last one
//! acting first.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elementary::ElementaryMap;
use crate::error::MapSpecError;
use crate::word::{Letter, MapWord};

/// A real literal as it appears in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real(pub String);

impl Real {
    pub fn from_f64(x: f64) -> Self {
        Real(format!("{x}"))
    }

    pub fn to_f64(&self) -> Result<f64, MapSpecError> {
        parse_real(&self.0)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(serde_json::Number),
            Str(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Num(n) => Real(n.to_string()),
            Raw::Str(s) => Real(s.trim().to_string()),
        })
    }
}

/// Parses a decimal literal or a `p/q` rational into a double.
pub fn parse_real(s: &str) -> Result<f64, MapSpecError> {
    let bad = || MapSpecError::BadNumber(s.to_string());
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LetterDoc {
    Pl {
        breaks: Vec<Real>,
        slopes: Vec<Real>,
        anchor: Real,
        #[serde(default, skip_serializing_if = "is_false")]
        inverse: bool,
    },
    Rotation {
        alpha: Real,
        #[serde(default, skip_serializing_if = "is_false")]
        inverse: bool,
    },
    Exp {
        sigma: Real,
        center: Real,
        #[serde(default, skip_serializing_if = "is_false")]
        inverse: bool,
    },
    Quad {
        sigma: Real,
        center: Real,
        #[serde(default, skip_serializing_if = "is_false")]
        inverse: bool,
    },
}

impl LetterDoc {
    pub fn inverse(&self) -> bool {
        match self {
            LetterDoc::Pl { inverse, .. }
            | LetterDoc::Rotation { inverse, .. }
            | LetterDoc::Exp { inverse, .. }
            | LetterDoc::Quad { inverse, .. } => *inverse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordDoc {
    pub word: Vec<LetterDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub h0: WordDoc,
    #[serde(rename = "F0")]
    pub f0: WordDoc,
}

/// A map-spec file: the word, plus the ground truth for synthesized instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpecDoc {
    pub word: Vec<LetterDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

/// Parsed map file.
#[derive(Debug, Clone)]
pub struct MapDocument {
    pub word: MapWord,
    /// `(h0, F0)` when the file records how the map was synthesized.
    pub provenance: Option<(MapWord, MapWord)>,
    pub doc: MapSpecDoc,
}

pub fn parse_document(json: &str) -> Result<MapDocument, MapSpecError> {
    let doc: MapSpecDoc = serde_json::from_str(json)?;
    let word = word_from_docs(&doc.word)?;
    let provenance = match &doc.provenance {
        Some(p) => Some((word_from_docs(&p.h0.word)?, word_from_docs(&p.f0.word)?)),
        None => None,
    };
    Ok(MapDocument {
        word,
        provenance,
        doc,
    })
}

pub fn parse_word(json: &str) -> Result<MapWord, MapSpecError> {
    Ok(parse_document(json)?.word)
}

pub fn word_from_docs(letters: &[LetterDoc]) -> Result<MapWord, MapSpecError> {
    letters
        .iter()
        .enumerate()
        .map(|(index, l)| {
            letter_from_doc(l).map_err(|e| match e {
                MapSpecError::Letter { source, .. } => MapSpecError::Letter { index, source },
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(MapWord::from_letters)
}

fn letter_from_doc(l: &LetterDoc) -> Result<Letter, MapSpecError> {
    let wrap_err = |source| MapSpecError::Letter { index: 0, source };
    let map = match l {
        LetterDoc::Pl {
            breaks,
            slopes,
            anchor,
            ..
        } => {
            let breaks = breaks
                .iter()
                .map(Real::to_f64)
                .collect::<Result<Vec<_>, _>>()?;
            let slopes = slopes
                .iter()
                .map(Real::to_f64)
                .collect::<Result<Vec<_>, _>>()?;
            ElementaryMap::pl(breaks, slopes, anchor.to_f64()?).map_err(wrap_err)?
        }
        LetterDoc::Rotation { alpha, .. } => ElementaryMap::rotation(alpha.to_f64()?),
        LetterDoc::Exp { sigma, center, .. } => {
            ElementaryMap::exponential(sigma.to_f64()?, center.to_f64()?).map_err(wrap_err)?
        }
        LetterDoc::Quad { sigma, center, .. } => {
            ElementaryMap::quadratic(sigma.to_f64()?, center.to_f64()?).map_err(wrap_err)?
        }
    };
    Ok(if l.inverse() {
        Letter::inverse_of(map)
    } else {
        Letter::forward(map)
    })
}

pub fn letter_to_doc(l: &Letter) -> LetterDoc {
    let inverse = l.inverse;
    match l.map.as_ref() {
        ElementaryMap::Pl(p) => LetterDoc::Pl {
            breaks: p.breaks().iter().copied().map(Real::from_f64).collect(),
            slopes: p.slopes().iter().copied().map(Real::from_f64).collect(),
            anchor: Real::from_f64(p.anchor()),
            inverse,
        },
        ElementaryMap::Rotation { alpha } => LetterDoc::Rotation {
            alpha: Real::from_f64(*alpha),
            inverse,
        },
        ElementaryMap::Exponential { sigma, center } => LetterDoc::Exp {
            sigma: Real::from_f64(*sigma),
            center: Real::from_f64(*center),
            inverse,
        },
        ElementaryMap::Quadratic { sigma, center } => LetterDoc::Quad {
            sigma: Real::from_f64(*sigma),
            center: Real::from_f64(*center),
            inverse,
        },
    }
}

pub fn word_to_doc(w: &MapWord) -> WordDoc {
    WordDoc {
        word: w.letters().iter().map(letter_to_doc).collect(),
    }
}

pub fn document_for(w: &MapWord, provenance: Option<(&MapWord, &MapWord)>) -> MapSpecDoc {
    MapSpecDoc {
        word: word_to_doc(w).word,
        provenance: provenance.map(|(h0, f0)| ProvenanceDoc {
            h0: word_to_doc(h0),
            f0: word_to_doc(f0),
        }),
    }
}

pub fn to_json(w: &MapWord) -> String {
    serde_json::to_string_pretty(&document_for(w, None)).expect("map spec serializes")
}
