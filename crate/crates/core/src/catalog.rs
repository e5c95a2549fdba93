//! Built-in generator sets that close at desk scale.

use serde::Deserialize;

use crate::circuit::{embed_gate, GateKind};
use crate::error::{Error, Result};
use crate::group::{close_group, ClosureOptions, FiniteGroup};
use crate::matrix::{CMatrix, MatrixPairs, UnitaryMatrix};

pub const NAMED_GROUPS: &[&str] = &[
    "z2",
    "z8",
    "z2_3",
    "s3",
    "d4",
    "pauli1",
    "pauli2",
    "clifford1",
    "cnot_phase2",
];

fn gate(kind: GateKind) -> UnitaryMatrix {
    UnitaryMatrix::new(kind.matrix()).expect("built-in gates are unitary")
}

pub fn x_gate() -> UnitaryMatrix {
    gate(GateKind::X)
}

pub fn y_gate() -> UnitaryMatrix {
    gate(GateKind::Y)
}

pub fn z_gate() -> UnitaryMatrix {
    gate(GateKind::Z)
}

pub fn h_gate() -> UnitaryMatrix {
    gate(GateKind::H)
}

pub fn s_gate() -> UnitaryMatrix {
    gate(GateKind::S)
}

pub fn t_gate(k: u32) -> UnitaryMatrix {
    gate(GateKind::T(k))
}

fn permutation_matrix(p: &[usize]) -> UnitaryMatrix {
    let n = p.len();
    let m = CMatrix::from_fn(n, n, |r, c| {
        if p[c] == r {
            crate::matrix::c(1.0, 0.0)
        } else {
            crate::matrix::c(0.0, 0.0)
        }
    });
    UnitaryMatrix::new(m).expect("permutation matrices are unitary")
}

fn on_each_qubit(kinds: &[GateKind], n: usize) -> Vec<UnitaryMatrix> {
    (0..n)
        .flat_map(|q| {
            kinds
                .iter()
                .map(move |&k| embed_gate(k, &[q], n).expect("single-qubit gate fits"))
        })
        .collect()
}

/// Generators of a named group.
///
/// `pauli1` is generated by X, Y and Z so that the scalars `{+-1, +-i}`
/// belong to it (X and Z alone generate the real dihedral group `d4`).
pub fn named_generators(name: &str) -> Result<Vec<UnitaryMatrix>> {
    use GateKind::*;
    Ok(match name {
        "z2" => vec![x_gate()],
        "z8" => vec![t_gate(3)],
        "z2_3" => on_each_qubit(&[Z], 3),
        "s3" => vec![permutation_matrix(&[1, 0, 2]), permutation_matrix(&[1, 2, 0])],
        "d4" => vec![x_gate(), z_gate()],
        "pauli1" => vec![x_gate(), y_gate(), z_gate()],
        "pauli2" => on_each_qubit(&[X, Y, Z], 2),
        "clifford1" => vec![h_gate(), s_gate()],
        "cnot_phase2" => vec![
            embed_gate(Cnot, &[0, 1], 2)?,
            embed_gate(S, &[0], 2)?,
            embed_gate(S, &[1], 2)?,
        ],
        other => {
            return Err(Error::Parse(format!(
                "unknown group {other}; expected one of {}",
                NAMED_GROUPS.join(", ")
            )))
        }
    })
}

pub fn named_group(name: &str, opts: ClosureOptions) -> Result<FiniteGroup> {
    close_group(&named_generators(name)?, opts)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    generators: Vec<MatrixPairs>,
}

/// Reads `{"generators": [[[[re, im], ...], ...], ...]}`.
pub fn generators_from_json(text: &str) -> Result<Vec<UnitaryMatrix>> {
    let file: GeneratorFile = serde_json::from_str(text)?;
    file.generators
        .iter()
        .enumerate()
        .map(|(index, m)| {
            UnitaryMatrix::from_pairs(&m.0).map_err(|e| match e {
                Error::NotUnitary { residual, .. } => Error::NotUnitary { index, residual },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_named_groups() {
        let expected = [
            ("z2", 2, 2),
            ("z8", 8, 8),
            ("z2_3", 8, 8),
            ("s3", 6, 3),
            ("d4", 8, 5),
            ("pauli1", 16, 10),
            ("clifford1", 192, 0),
        ];
        for (name, order, classes) in expected {
            let g = named_group(name, ClosureOptions::default()).unwrap();
            assert_eq!(g.order(), order, "{name}");
            if classes > 0 {
                assert_eq!(g.class_count(), classes, "{name}");
            }
        }
    }

    #[test]
    fn generator_file_reports_bad_index() {
        let text = r#"{"generators": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[1,0],[1,0]],[[0,0],[1,0]]]]}"#;
        match generators_from_json(text) {
            Err(Error::NotUnitary { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_name() {
        assert!(named_generators("e8").is_err());
    }
}
