use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ModelPoint;
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, Complex64, DensityMatrix, HermitianMatrix};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    dim: usize,
    d: usize,
    rho: JsonMatrix,
    tangents: Vec<JsonMatrix>,
    #[serde(default)]
    label: String,
}

fn to_json(m: &CMatrix) -> JsonMatrix {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn from_json(rows: &JsonMatrix, dim: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::FormatError(format!("{what} is not {dim}x{dim}")));
    }
    Ok(CMatrix::from_fn(dim, dim, |j, k| {
        let [re, im] = rows[j][k];
        Complex64::new(re, im)
    }))
}

fn hermitian(m: CMatrix, what: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m).map_err(|e| Error::InvalidModel(format!("hermiticity: {what}: {e}")))
}

/// Parses and validates a model from its JSON text.
pub fn model_from_json(text: &str) -> Result<ModelPoint> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| Error::FormatError(e.to_string()))?;
    if file.dim == 0 {
        return Err(Error::FormatError("dim must be positive".into()));
    }
    if file.tangents.len() != file.d {
        return Err(Error::FormatError(format!(
            "d = {} but {} tangents given",
            file.d,
            file.tangents.len()
        )));
    }
    let rho = hermitian(from_json(&file.rho, file.dim, "rho")?, "rho")?;
    let rho = DensityMatrix::new(rho).map_err(|e| match e {
        Error::SingularState { min_eigenvalue } => Error::InvalidModel(format!(
            "positivity: smallest eigenvalue {min_eigenvalue:e}"
        )),
        other => other,
    })?;
    let tangents = file
        .tangents
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let what = format!("tangent {}", i + 1);
            hermitian(from_json(t, file.dim, &what)?, &what)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelPoint::new(rho, tangents, file.label).map_err(|e| match e {
        Error::DegenerateModel(msg) => Error::InvalidModel(format!("independence: {msg}")),
        other => other,
    })
}

pub fn model_to_json(m: &ModelPoint) -> String {
    let file = ModelFile {
        dim: m.dim(),
        d: m.d(),
        rho: to_json(m.rho().as_matrix()),
        tangents: m
            .tangents()
            .iter()
            .map(|t| to_json(t.as_matrix()))
            .collect(),
        label: m.label().to_string(),
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelPoint> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::FormatError(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

pub fn save_model(m: &ModelPoint, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(m) + "\n")
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_dim2;

    fn invalid_reason(text: &str) -> String {
        match model_from_json(text) {
            Err(Error::InvalidModel(msg)) => msg.split(':').next().unwrap().to_string(),
            other => panic!("expected InvalidModel, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = example_dim2(0.95, 0.3).unwrap();
        let back = model_from_json(&model_to_json(&m)).unwrap();
        assert_eq!(back.rho().as_matrix(), m.rho().as_matrix());
        for (a, b) in back.tangents().iter().zip(m.tangents()) {
            assert_eq!(a.as_matrix(), b.as_matrix());
        }
        assert_eq!(back.label(), m.label());
    }

    #[test]
    fn names_failed_invariant() {
        let t = r#"[[[1,0],[0,0]],[[0,0],[-1,0]]]"#;
        let nonherm = format!(
            r#"{{"dim":2,"d":1,"rho":[[[0.5,0],[0.3,0]],[[0,0],[0.5,0]]],"tangents":[{t}]}}"#
        );
        assert_eq!(invalid_reason(&nonherm), "hermiticity");
        let trace = format!(
            r#"{{"dim":2,"d":1,"rho":[[[0.45,0],[0,0]],[[0,0],[0.45,0]]],"tangents":[{t}]}}"#
        );
        assert_eq!(invalid_reason(&trace), "trace");
        let singular =
            format!(r#"{{"dim":2,"d":1,"rho":[[[1,0],[0,0]],[[0,0],[0,0]]],"tangents":[{t}]}}"#);
        assert_eq!(invalid_reason(&singular), "positivity");
        let traced = r#"{"dim":2,"d":1,"rho":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]],"tangents":[[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#;
        assert_eq!(invalid_reason(traced), "traceless");
        let dependent = format!(
            r#"{{"dim":2,"d":2,"rho":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]],"tangents":[{t},{t}]}}"#
        );
        assert_eq!(invalid_reason(&dependent), "independence");
    }

    #[test]
    fn malformed_text_is_format_error() {
        assert!(matches!(model_from_json("{"), Err(Error::FormatError(_))));
        assert!(matches!(
            model_from_json(r#"{"dim":2,"d":1,"rho":[[[1,0]]],"tangents":[]}"#),
            Err(Error::FormatError(_))
        ));
    }
}
