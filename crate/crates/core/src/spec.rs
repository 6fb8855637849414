//! JSON class specifications.
//!
//! ```json
//! {"type": "shifted_subset", "N": [1, 3, 4], "s_max": 16, "horizon": 32}
//! {"type": "product", "parts": [{"type": "full", "horizon": 8}, {"type": "parity", "k_max": 4, "horizon": 12}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::class::{FiniteClass, DEFAULT_CAP};
use crate::classes::{
    enumerate_linear_class, make_atdim_example_class, make_full_class, make_parity_class,
    make_product_class, make_shifted_subset_class, make_taxonomy_class, IntervalSet, RateTable,
};
use crate::error::{Error, Result};

fn default_cap() -> u64 {
    DEFAULT_CAP as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSpec {
    Full {
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    ShiftedSubset {
        #[serde(rename = "N")]
        n: IntervalSet,
        s_max: u64,
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    Product {
        parts: Vec<ClassSpec>,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    LinearGrid {
        d: usize,
        weight_bound: u64,
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    Parity {
        k_max: usize,
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    AtdimExample {
        depth: usize,
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
    Taxonomy {
        rate: RateTable,
        s_max: u64,
        horizon: usize,
        #[serde(default = "default_cap")]
        cap: u64,
    },
}

impl ClassSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    pub fn build(&self) -> Result<FiniteClass> {
        match self {
            ClassSpec::Full { horizon, cap } => make_full_class(*horizon, u128::from(*cap)),
            ClassSpec::ShiftedSubset { n, s_max, horizon, cap } => {
                make_shifted_subset_class(n, *s_max, *horizon, u128::from(*cap))
            }
            ClassSpec::Product { parts, cap } => {
                let built = parts.iter().map(ClassSpec::build).collect::<Result<Vec<_>>>()?;
                make_product_class(&built, u128::from(*cap))
            }
            ClassSpec::LinearGrid { d, weight_bound, horizon, cap } => {
                enumerate_linear_class(*d, *weight_bound, *horizon, u128::from(*cap))
            }
            ClassSpec::Parity { k_max, horizon, cap } => make_parity_class(*k_max, *horizon, u128::from(*cap)),
            ClassSpec::AtdimExample { depth, horizon, cap } => {
                make_atdim_example_class(*depth, *horizon, u128::from(*cap))
            }
            ClassSpec::Taxonomy { rate, s_max, horizon, cap } => {
                make_taxonomy_class(rate, *s_max, *horizon, u128::from(*cap))
            }
        }
    }

    /// Window length when the spec is a linear grid.
    pub fn linear_d(&self) -> Option<usize> {
        match self {
            ClassSpec::LinearGrid { d, .. } => Some(*d),
            _ => None,
        }
    }
}
