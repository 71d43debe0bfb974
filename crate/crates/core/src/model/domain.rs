use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::problem::Problem;

/// Preference-domain restrictions a problem satisfies. Always derived from
/// the utility tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainFlags {
    pub identical: bool,
    pub additive: bool,
    pub nonzero_marginals: bool,
    pub zero_one_marginals: bool,
    pub positive_additive: bool,
}

impl DomainFlags {
    /// True when every flag set in `required` is also set here.
    pub fn satisfies(&self, required: &DomainFlags) -> bool {
        (!required.identical || self.identical)
            && (!required.additive || self.additive)
            && (!required.nonzero_marginals || self.nonzero_marginals)
            && (!required.zero_one_marginals || self.zero_one_marginals)
            && (!required.positive_additive || self.positive_additive)
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.identical {
            parts.push("identical");
        }
        if self.additive {
            parts.push("additive");
        }
        if self.nonzero_marginals {
            parts.push("non-zero marginals");
        }
        if self.zero_one_marginals {
            parts.push("0/1 marginals");
        }
        if parts.is_empty() {
            "general monotone".to_string()
        } else {
            parts.join(", ")
        }
    }
}

pub fn classify(problem: &Problem) -> DomainFlags {
    let utilities = problem.utilities();
    let identical = utilities.windows(2).all(|pair| pair[0] == pair[1]);
    let additive = utilities.iter().all(|u| u.is_additive());
    let nonzero_marginals = utilities.iter().all(|u| u.marginals().all(|d| d > Zero::zero()));
    let zero_one_marginals = utilities
        .iter()
        .all(|u| u.marginals().all(|d| d.is_zero() || d.is_one()));
    DomainFlags {
        identical,
        additive,
        nonzero_marginals,
        zero_one_marginals,
        positive_additive: additive && nonzero_marginals,
    }
}
