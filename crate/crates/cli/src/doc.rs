//! The JSON map document: the one input schema shared by every command,
//! and the serialization the `partition` command round-trips through.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use nval_core::exactlin::{IntMatrix, RatVector};
use nval_core::nvmaps::{CompositeMap, LinearPiece};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDocument {
    pub q: usize,
    pub pieces: Vec<PieceDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceDocument {
    pub m: usize,
    #[serde(rename = "A")]
    pub matrix: Vec<Vec<i64>>,
    /// Rational strings like "1/4" or "0"; omitted means the zero shift.
    #[serde(default)]
    pub shift: Option<Vec<String>>,
}

/// What can go wrong turning a document into a map: a shape problem in
/// the document itself, or a rejection from the map validator.
#[derive(Debug)]
pub enum DocumentError {
    Shape(String),
    Map(nval_core::Error),
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocumentError::Shape(message) => write!(f, "{message}"),
            DocumentError::Map(error) => write!(f, "{error}"),
        }
    }
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        None => (text, "1"),
        Some((n, d)) => (n.trim(), d.trim()),
    };
    let numer =
        BigInt::from_str(numer).map_err(|_| format!("bad rational \"{text}\""))?;
    let denom =
        BigInt::from_str(denom).map_err(|_| format!("bad rational \"{text}\""))?;
    if denom.is_zero() {
        return Err(format!("bad rational \"{text}\": zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Render a rational as "p/q", or "p" when it is an integer. Values are
/// canonical (reduced, positive denominator), so the format is stable.
pub fn rational_string(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

impl MapDocument {
    pub fn to_composite(&self) -> Result<CompositeMap, DocumentError> {
        if self.q == 0 {
            return Err(DocumentError::Shape("q must be at least 1".into()));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (index, piece) in self.pieces.iter().enumerate() {
            pieces.push(self.parse_piece(index, piece)?);
        }
        CompositeMap::new(pieces).map_err(DocumentError::Map)
    }

    fn parse_piece(
        &self,
        index: usize,
        piece: &PieceDocument,
    ) -> Result<LinearPiece, DocumentError> {
        let label = index + 1;
        if piece.matrix.len() != self.q
            || piece.matrix.iter().any(|row| row.len() != self.q)
        {
            return Err(DocumentError::Shape(format!(
                "piece {label}: A must be a {q}x{q} integer matrix",
                q = self.q
            )));
        }
        let refs: Vec<&[i64]> = piece.matrix.iter().map(|row| row.as_slice()).collect();
        let shift = match &piece.shift {
            None => RatVector::zeros(self.q),
            Some(coords) => {
                if coords.len() != self.q {
                    return Err(DocumentError::Shape(format!(
                        "piece {label}: shift must have {q} coordinates",
                        q = self.q
                    )));
                }
                let mut parsed = Vec::with_capacity(self.q);
                for coord in coords {
                    parsed.push(parse_rational(coord).map_err(|message| {
                        DocumentError::Shape(format!("piece {label}: {message}"))
                    })?);
                }
                RatVector::new(parsed)
            }
        };
        LinearPiece::new(piece.m, IntMatrix::from_i64(&refs), shift)
            .map_err(DocumentError::Map)
    }

    /// Serialize a map back into document form (shift always present).
    pub fn from_composite(map: &CompositeMap) -> MapDocument {
        let pieces = map
            .pieces()
            .iter()
            .map(|piece| {
                let matrix = (0..map.q())
                    .map(|i| {
                        piece
                            .row_i64(i)
                            .expect("partition keeps entries within input range")
                    })
                    .collect();
                PieceDocument {
                    m: piece.multiplicity(),
                    matrix,
                    shift: Some(piece.shift().iter().map(rational_string).collect()),
                }
            })
            .collect();
        MapDocument {
            q: map.q(),
            pieces,
        }
    }
}

/// i64 view of one matrix row, None if any entry overflows.
trait RowI64 {
    fn row_i64(&self, row: usize) -> Option<Vec<i64>>;
}

impl RowI64 for LinearPiece {
    fn row_i64(&self, row: usize) -> Option<Vec<i64>> {
        self.matrix().row(row).iter().map(BigInt::to_i64).collect()
    }
}
