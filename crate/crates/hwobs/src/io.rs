//! Bit-exact serialization of the toolkit's artifacts.
//!
//! Every artifact is one self-describing JSON document with a
//! `schema_version` field. Complex entries are `[re, im]` pairs; serde_json
//! prints binary64 values in shortest round-trip form, so read(write(x)) is
//! bit-identical. Non-finite numbers are rejected on both paths.
//!
//! File extensions: `.hwmat` (matrix), `.hwbloch` (Bloch vector), `.hwwit`
//! (witness spec), `.hwrec` (measurement record), `.hwstate` (state spec).

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acbound::{WitnessReport, WitnessSpec};
use crate::bloch::{BlochError, BlochVector};
use crate::hw_basis::PhasePoint;
use crate::numerics::ComplexMatrix;
use crate::ramsey::MeasurementRecord;
use crate::states::StateSpec;

pub const SCHEMA_VERSION: &str = "hwobs/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("unsupported schema version '{0}', expected '{SCHEMA_VERSION}'")]
    UnknownSchema(String),
    #[error("entries length {got} does not match rows*cols = {want}")]
    EntryCount { got: usize, want: usize },
    #[error("document contains a non-finite number")]
    NonFinite,
    #[error("invalid document: {0}")]
    Validation(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("file error: {0}")]
    File(#[from] std::io::Error),
}

impl From<BlochError> for IoError {
    fn from(e: BlochError) -> Self {
        IoError::Validation(e.to_string())
    }
}

fn check_schema(version: &str) -> Result<(), IoError> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(IoError::UnknownSchema(version.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub schema_version: String,
    pub rows: usize,
    pub cols: usize,
    /// Row-major [re, im] pairs.
    pub entries: Vec<[f64; 2]>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix, metadata: BTreeMap<String, String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
            metadata,
        }
    }

    pub fn into_matrix(&self) -> Result<ComplexMatrix, IoError> {
        check_schema(&self.schema_version)?;
        let want = self.rows * self.cols;
        if self.entries.len() != want {
            return Err(IoError::EntryCount {
                got: self.entries.len(),
                want,
            });
        }
        if self
            .entries
            .iter()
            .any(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(IoError::NonFinite);
        }
        let data = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Ok(ComplexMatrix::from_rows(self.rows, self.cols, data))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochDocument {
    pub schema_version: String,
    pub d: usize,
    pub components: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub schema_version: String,
    pub witness: WitnessSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub schema_version: String,
    pub state: StateSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDocument {
    pub schema_version: String,
    pub record: MeasurementRecord,
}

fn to_pretty<T: Serialize>(doc: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn write_matrix_str(m: &ComplexMatrix) -> Result<String, IoError> {
    write_matrix_str_with(m, BTreeMap::new())
}

pub fn write_matrix_str_with(
    m: &ComplexMatrix,
    metadata: BTreeMap<String, String>,
) -> Result<String, IoError> {
    to_pretty(&MatrixDocument::from_matrix(m, metadata))
}

pub fn read_matrix_str(s: &str) -> Result<ComplexMatrix, IoError> {
    serde_json::from_str::<MatrixDocument>(s)?.into_matrix()
}

pub fn write_bloch_str(v: &BlochVector) -> Result<String, IoError> {
    to_pretty(&BlochDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        d: v.dim(),
        components: v.components().to_vec(),
    })
}

pub fn read_bloch_str(s: &str) -> Result<BlochVector, IoError> {
    let doc: BlochDocument = serde_json::from_str(s)?;
    check_schema(&doc.schema_version)?;
    if doc.components.iter().any(|c| !c.is_finite()) {
        return Err(IoError::NonFinite);
    }
    Ok(BlochVector::new(doc.d, doc.components)?)
}

pub fn write_witness_str(w: &WitnessSpec) -> Result<String, IoError> {
    if !w.bound.is_finite() {
        return Err(IoError::NonFinite);
    }
    to_pretty(&WitnessDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        witness: w.clone(),
    })
}

pub fn read_witness_str(s: &str) -> Result<WitnessSpec, IoError> {
    let doc: WitnessDocument = serde_json::from_str(s)?;
    check_schema(&doc.schema_version)?;
    let w = doc.witness;
    if !w.bound.is_finite() {
        return Err(IoError::NonFinite);
    }
    if w.parties.iter().any(|&d| d < 2) {
        return Err(IoError::Validation("party dimension below 2".into()));
    }
    for (ti, term) in w.terms.iter().enumerate() {
        if term.len() != w.parties.len() {
            return Err(IoError::Validation(format!(
                "term {ti} has {} factors, expected {}",
                term.len(),
                w.parties.len()
            )));
        }
    }
    Ok(w)
}

pub fn write_state_str(s: &StateSpec) -> Result<String, IoError> {
    to_pretty(&StateDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        state: s.clone(),
    })
}

pub fn read_state_str(s: &str) -> Result<StateSpec, IoError> {
    let doc: StateDocument = serde_json::from_str(s)?;
    check_schema(&doc.schema_version)?;
    Ok(doc.state)
}

pub fn write_record_str(r: &MeasurementRecord) -> Result<String, IoError> {
    to_pretty(&RecordDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        record: r.clone(),
    })
}

pub fn read_record_str(s: &str) -> Result<MeasurementRecord, IoError> {
    let doc: RecordDocument = serde_json::from_str(s)?;
    check_schema(&doc.schema_version)?;
    let r = doc.record;
    if r.count_up + r.count_down != r.shots {
        return Err(IoError::Validation(
            "count_up + count_down must equal shots".into(),
        ));
    }
    if r.d < 2 || r.l >= r.d || r.m >= r.d {
        return Err(IoError::Validation("phase point outside the grid".into()));
    }
    Ok(r)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    Ok(std::fs::write(path, contents)?)
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}

/// CSV with header `l,m,component`, one grid point per line.
pub fn bloch_to_csv(v: &BlochVector) -> String {
    let d = v.dim();
    let mut out = String::from("l,m,component\n");
    for p in crate::hw_basis::non_identity_points(d).expect("valid dimension") {
        let c = v.component(&p);
        out.push_str(&format!("{},{},{}\n", p.l(), p.m(), c));
    }
    out
}

/// CSV with header and a single record line.
pub fn witness_report_to_csv(r: &WitnessReport) -> String {
    format!(
        "value,bound,violated,noise_threshold,noise_resistance\n{},{},{},{},{}\n",
        r.value, r.bound, r.violated, r.noise_threshold, r.noise_resistance
    )
}

/// Parse a `L,M` CLI point argument against dimension d.
pub fn parse_point(d: usize, s: &str) -> Result<PhasePoint, IoError> {
    let (l, m) = s
        .split_once(',')
        .ok_or_else(|| IoError::Validation(format!("expected L,M but got '{s}'")))?;
    let l: i64 = l
        .trim()
        .parse()
        .map_err(|_| IoError::Validation(format!("invalid integer '{l}'")))?;
    let m: i64 = m
        .trim()
        .parse()
        .map_err(|_| IoError::Validation(format!("invalid integer '{m}'")))?;
    PhasePoint::new(d, l, m).map_err(|e| IoError::Validation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acbound::{BoundKind, ObservableLabel};
    use crate::hw_basis;
    use crate::{bloch, ramsey, states};
    use proptest::prelude::*;

    #[test]
    fn matrix_round_trip_bit_exact() {
        let p = PhasePoint::new(4, 1, 1).unwrap();
        let q = hw_basis::hw_observable(&p).matrix;
        let s = write_matrix_str(&q).unwrap();
        let back = read_matrix_str(&s).unwrap();
        assert_eq!(q, back, "bit-for-bit round trip");
    }

    #[test]
    fn bad_documents_rejected() {
        let q = hw_basis::hw_observable(&PhasePoint::new(2, 1, 0).unwrap()).matrix;
        let good = write_matrix_str(&q).unwrap();
        // wrong schema
        let bad = good.replace(SCHEMA_VERSION, "hwobs/999");
        assert!(matches!(
            read_matrix_str(&bad),
            Err(IoError::UnknownSchema(_))
        ));
        // entry count mismatch
        let bad = good.replace("\"rows\": 2", "\"rows\": 3");
        assert!(matches!(read_matrix_str(&bad), Err(IoError::EntryCount { .. })));
        // non-finite
        let doc = MatrixDocument {
            schema_version: SCHEMA_VERSION.into(),
            rows: 1,
            cols: 1,
            entries: vec![[f64::NAN, 0.0]],
            metadata: BTreeMap::new(),
        };
        assert!(matches!(doc.into_matrix(), Err(IoError::NonFinite)));
        // not JSON at all
        assert!(read_matrix_str("not json").is_err());
    }

    #[test]
    fn bloch_round_trip_and_csv() {
        let rho = states::random_density(3, 3, 17).unwrap();
        let v = bloch::decompose(&rho).unwrap();
        let s = write_bloch_str(&v).unwrap();
        let back = read_bloch_str(&s).unwrap();
        assert_eq!(v.components(), back.components());
        let csv = bloch_to_csv(&v);
        assert!(csv.starts_with("l,m,component\n"));
        assert_eq!(csv.lines().count(), 9); // header + 8 points
    }

    #[test]
    fn witness_round_trip() {
        let w = WitnessSpec {
            parties: vec![4, 4, 4],
            terms: vec![
                vec![
                    ObservableLabel::Point { l: 1, m: 0 },
                    ObservableLabel::Point { l: 1, m: 0 },
                    ObservableLabel::Conj { l: 1, m: 0 },
                ],
                vec![
                    ObservableLabel::Identity,
                    ObservableLabel::Point { l: 0, m: 2 },
                    ObservableLabel::Point { l: 0, m: 2 },
                ],
            ],
            bound: 1.0,
            bound_kind: BoundKind::Separable,
            description: "test".into(),
        };
        let s = write_witness_str(&w).unwrap();
        let back = read_witness_str(&s).unwrap();
        assert_eq!(s, write_witness_str(&back).unwrap());
        // term arity mismatch rejected
        let bad = WitnessSpec {
            terms: vec![vec![ObservableLabel::Identity]],
            ..w
        };
        let s = write_witness_str(&bad).unwrap();
        assert!(matches!(read_witness_str(&s), Err(IoError::Validation(_))));
    }

    #[test]
    fn state_and_record_round_trips() {
        let spec = StateSpec::IsotropicMix {
            base: Box::new(StateSpec::Ghz { parties: 3, d: 4 }),
            p: 0.5,
        };
        let s = write_state_str(&spec).unwrap();
        let back = read_state_str(&s).unwrap();
        assert_eq!(s, write_state_str(&back).unwrap());

        let rho = states::random_density(3, 3, 1).unwrap();
        let p = PhasePoint::new(3, 1, 1).unwrap();
        let rec = ramsey::sample(&rho, &p, 1000, 5).unwrap();
        let s = write_record_str(&rec).unwrap();
        assert_eq!(read_record_str(&s).unwrap(), rec);
        // inconsistent counts rejected
        let bad = s.replace("\"count_up\": ", "\"count_up\": 1");
        assert!(read_record_str(&bad).is_err());
    }

    #[test]
    fn parse_point_cases() {
        let p = parse_point(4, "1,3").unwrap();
        assert_eq!((p.l(), p.m()), (1, 3));
        let p = parse_point(4, " 2 , 1 ").unwrap();
        assert_eq!((p.l(), p.m()), (2, 1));
        assert!(parse_point(4, "1").is_err());
        assert!(parse_point(4, "a,b").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(250))]

        #[test]
        fn fuzz_matrix_round_trip(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<Complex64> = (0..rows * cols)
                .map(|_| Complex64::new(rng.gen_range(-1e6..1e6), rng.gen_range(-1e6..1e6)))
                .collect();
            let m = ComplexMatrix::from_rows(rows, cols, data);
            let back = read_matrix_str(&write_matrix_str(&m).unwrap()).unwrap();
            prop_assert_eq!(m, back);
        }

        #[test]
        fn fuzz_corrupt_documents_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let s = String::from_utf8_lossy(&bytes);
            let _ = read_matrix_str(&s);
            let _ = read_bloch_str(&s);
            let _ = read_witness_str(&s);
            let _ = read_state_str(&s);
            let _ = read_record_str(&s);
        }

        #[test]
        fn fuzz_truncated_valid_document(cut in 0usize..200) {
            let q = hw_basis::hw_observable(&PhasePoint::new(3, 1, 2).unwrap()).matrix;
            let s = write_matrix_str(&q).unwrap();
            let cut = cut.min(s.len().saturating_sub(1));
            let _ = read_matrix_str(&s[..cut]);
        }
    }
}
