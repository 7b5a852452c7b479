//! Fixed-seed inputs shared by the benchmarks.

use qcrb_core::logderiv::fisher_sld;
use qcrb_core::model::{example_dim2, example_dim4};
use qcrb_core::random::{random_model, random_weight};
use qcrb_core::{ModelPoint, WeightMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed;

/// A model paired with the weight it is benchmarked under.
pub struct Case {
    pub name: String,
    pub model: ModelPoint,
    pub weight: WeightMatrix,
}

fn sld_weighted(model: ModelPoint) -> Case {
    let weight = WeightMatrix::new(fisher_sld(&model).real_part()).expect("SLD weight");
    Case {
        name: model.label().to_string(),
        model,
        weight,
    }
}

/// The two builtin examples at a = 0.95, r = 0.1.
pub fn examples() -> Vec<Case> {
    vec![
        sld_weighted(example_dim2(0.95, 0.1).expect("dim2 example")),
        sld_weighted(example_dim4(0.95, 0.1).expect("dim4 example")),
    ]
}

/// One random two-parameter model per Hilbert-space dimension.
pub fn random_cases(dims: &[usize]) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    dims.iter()
        .map(|&dim| Case {
            name: format!("random-dim{dim}"),
            model: random_model(&mut rng, dim, 2).expect("random model"),
            weight: random_weight(&mut rng, 2),
        })
        .collect()
}
