//! JSON group specifications.
//!
//! ```json
//! {"catalog": "S3"}
//! {"permutation": {"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}}
//! {"product": [{"catalog": "S3"}, {"catalog": "Z2"}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::catalog::{catalog_group, validate_name};
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Catalog(String),
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))
    }

    /// Structural checks only: catalog names, permutation shapes and
    /// non-empty products. Nothing is enumerated.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Catalog(name) => validate_name(name),
            GroupSpec::Permutation { degree, generators } => {
                if *degree == 0 {
                    return Err(Error::MalformedSpec("permutation degree must be positive".into()));
                }
                for g in generators {
                    let mut seen = vec![false; *degree];
                    if g.len() != *degree || !g.iter().all(|&x| x < *degree && !std::mem::replace(&mut seen[x], true)) {
                        return Err(Error::InvalidPermutation(format!("{g:?} on {degree} points")));
                    }
                }
                Ok(())
            }
            GroupSpec::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::MalformedSpec("empty product".into()));
                }
                factors.iter().try_for_each(GroupSpec::validate)
            }
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Catalog(name) => catalog_group(name),
            GroupSpec::Permutation { degree, generators } => {
                if *degree == 0 {
                    return Err(Error::MalformedSpec("permutation degree must be positive".into()));
                }
                FiniteGroup::from_permutation_generators(*degree, generators)
            }
            GroupSpec::Product(factors) => {
                let (first, rest) = factors
                    .split_first()
                    .ok_or_else(|| Error::MalformedSpec("empty product".into()))?;
                let mut group = first.build()?;
                for f in rest {
                    group = direct_product(&group, &f.build()?)?;
                }
                Ok(group)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_is_structural() {
        assert!(GroupSpec::parse(r#"{"catalog": "S3xQ8"}"#).unwrap().validate().is_ok());
        assert!(GroupSpec::parse(r#"{"catalog": "S9"}"#).unwrap().validate().is_err());
        assert!(GroupSpec::parse(r#"{"catalog": "S3x"}"#).unwrap().validate().is_err());
        let bad = GroupSpec::parse(r#"{"permutation": {"degree": 3, "generators": [[0, 0, 1]]}}"#).unwrap();
        assert!(bad.validate().is_err());
        let short = GroupSpec::parse(r#"{"permutation": {"degree": 3, "generators": [[1, 0]]}}"#).unwrap();
        assert!(short.validate().is_err());
        assert!(GroupSpec::Product(vec![]).validate().is_err());
    }

    #[test]
    fn parses_all_forms() {
        let g = GroupSpec::parse(r#"{"catalog": "S3"}"#).unwrap().build().unwrap();
        assert_eq!(g.order(), 6);
        let g = GroupSpec::parse(r#"{"permutation": {"degree": 3, "generators": [[1,0,2],[1,2,0]]}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(g.order(), 6);
        let spec = GroupSpec::parse(r#"{"product": [{"catalog": "S3"}, {"catalog": "Z2"}]}"#).unwrap();
        let g = spec.build().unwrap();
        assert_eq!((g.order(), g.label()), (12, "S3xZ2"));
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(GroupSpec::parse(&text).unwrap(), spec);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"catalog": 3}"#,
            r#"{"group": "S3"}"#,
            "not json",
            r#"{"product": []}"#,
        ] {
            let r = GroupSpec::parse(bad).and_then(|s| s.build());
            assert!(r.is_err(), "{bad}");
        }
        let r = GroupSpec::parse(r#"{"permutation": {"degree": 2, "generators": [[0,0]]}}"#)
            .unwrap()
            .build();
        assert!(matches!(r, Err(Error::InvalidPermutation(_))));
    }
}
