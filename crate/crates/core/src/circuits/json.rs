//! `{n_qubits, gates: [{label, targets, params}]}` with angles in radians.
//! Gates outside the named vocabulary carry an explicit row-major `matrix`
//! of `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError};
use crate::simkernel::{GateKind, GateOp, Matrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub label: String,
    pub targets: Vec<usize>,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub n_qubits: usize,
    pub gates: Vec<GateDoc>,
}

impl From<&GateOp> for GateDoc {
    fn from(g: &GateOp) -> Self {
        let matrix = match g.kind() {
            GateKind::Custom { matrix, .. } => {
                Some(matrix.as_slice().iter().map(|z| [z.re, z.im]).collect())
            }
            _ => None,
        };
        GateDoc {
            label: g.label().to_string(),
            targets: g.targets().to_vec(),
            params: g.kind().params(),
            matrix,
        }
    }
}

impl TryFrom<&GateDoc> for GateOp {
    type Error = CircuitError;

    fn try_from(doc: &GateDoc) -> Result<Self, Self::Error> {
        let kind = match &doc.matrix {
            Some(entries) => {
                let dim = (entries.len() as f64).sqrt().round() as usize;
                if dim * dim != entries.len() {
                    return Err(crate::simkernel::SimError::DimensionMismatch {
                        expected: dim * dim,
                        got: entries.len(),
                    }
                    .into());
                }
                let data = entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
                GateKind::Custom {
                    label: doc.label.clone(),
                    matrix: Matrix::from_vec(dim, data),
                }
            }
            None => GateKind::from_label(&doc.label, &doc.params)?,
        };
        Ok(GateOp::new(kind, doc.targets.clone())?)
    }
}

impl From<&Circuit> for CircuitDoc {
    fn from(c: &Circuit) -> Self {
        CircuitDoc {
            n_qubits: c.n_qubits(),
            gates: c.gates().iter().map(GateDoc::from).collect(),
        }
    }
}

impl TryFrom<&CircuitDoc> for Circuit {
    type Error = CircuitError;

    fn try_from(doc: &CircuitDoc) -> Result<Self, Self::Error> {
        let gates = doc
            .gates
            .iter()
            .map(GateOp::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Circuit::from_gates(doc.n_qubits, gates)
    }
}

impl Circuit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitDoc::from(self)).expect("circuit document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let doc: CircuitDoc = serde_json::from_str(text)?;
        Circuit::try_from(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::build_scrambler;

    #[test]
    fn round_trip_is_bit_exact() {
        let c = build_scrambler(0.3141592653589793).unwrap();
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(back, c);
        for (a, b) in c.gates().iter().zip(back.gates()) {
            for (x, y) in a.kind().params().iter().zip(b.kind().params()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn custom_matrix_survives() {
        let m = GateKind::U3 {
            theta: 0.1,
            phi: 0.2,
            lambda: 0.3,
        }
        .matrix();
        let g = GateOp::custom("blob", m, vec![1]).unwrap();
        let c = Circuit::from_gates(2, vec![g]).unwrap();
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(Circuit::from_json(r#"{"n_qubits": 1, "gates": [{"label": "warp", "targets": [0]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"n_qubits": 1, "gates": [{"label": "rz", "targets": [0]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"n_qubits": 1, "gates": [{"label": "h", "targets": [3]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"n_qubits": 1}"#).is_err());
    }
}
