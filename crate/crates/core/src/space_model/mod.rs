//! Homogeneous spaces reduced to isotropy data: summand dimensions, Killing
//! coefficients and structural constants, plus diagonal invariant metrics.

mod catalog;
mod io;

pub use catalog::{
    catalog, exceptional_wallach_descriptor, flag_r2_descriptor, full_flag_sun_descriptor,
    resolve_space, wallach_descriptor, wallach_from_a, CatalogEntry, Exceptional, WallachFamily,
};
pub use io::{load_descriptor, parse_descriptor, save_descriptor, to_json_string};

use std::collections::BTreeMap;

use crate::error::{EswError, Result};
use crate::scalar::{Rational, Scalar};

/// One ordered term of the expansion of a symmetric constant, 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Scalar,
}

/// Fully symmetric structural constants `[ijk]`, stored once per sorted triple.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct StructureConstants {
    r: usize,
    entries: BTreeMap<[usize; 3], Scalar>,
}

impl StructureConstants {
    pub fn new(r: usize) -> Self {
        StructureConstants {
            r,
            entries: BTreeMap::new(),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Sets `[ijk]` (1-based, any order). Zero values are not stored.
    pub fn set(&mut self, triple: [usize; 3], value: Scalar) -> Result<()> {
        let mut t = triple;
        t.sort_unstable();
        if t[0] < 1 || t[2] > self.r {
            return Err(EswError::validation(
                format!("constants triple ({},{},{})", triple[0], triple[1], triple[2]),
                format!("index out of range 1..={}", self.r),
            ));
        }
        if value.is_negative() || value.to_f64().is_nan() {
            return Err(EswError::validation(
                format!("constants triple ({},{},{})", triple[0], triple[1], triple[2]),
                format!("value {value} must be nonnegative"),
            ));
        }
        if value.is_zero() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, value);
        }
        Ok(())
    }

    /// `[ijk]` for 1-based indices in any order; 0 when absent.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        let mut t = [i, j, k];
        t.sort_unstable();
        self.entries
            .get(&t)
            .cloned()
            .unwrap_or(Scalar::Exact(Rational::zero()))
    }

    /// Nonzero entries keyed by sorted 1-based triple.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize; 3], &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every distinct permutation of every stored triple, 0-based.
    pub fn ordered_terms(&self) -> Vec<OrderedTerm> {
        let mut out = Vec::new();
        for (t, v) in &self.entries {
            let [a, b, c] = [t[0] - 1, t[1] - 1, t[2] - 1];
            let mut perms = vec![
                (a, b, c),
                (a, c, b),
                (b, a, c),
                (b, c, a),
                (c, a, b),
                (c, b, a),
            ];
            perms.sort_unstable();
            perms.dedup();
            for (i, j, k) in perms {
                out.push(OrderedTerm {
                    i,
                    j,
                    k,
                    value: v.clone(),
                });
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }
}

/// A homogeneous space in the form consumed by every formula of the crate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDescriptor {
    name: String,
    dims: Vec<u64>,
    killing: Vec<Scalar>,
    constants: StructureConstants,
    trivial_dim: usize,
    notes: String,
}

impl SpaceDescriptor {
    pub fn new(
        name: impl Into<String>,
        dims: Vec<u64>,
        killing: Vec<Scalar>,
        constants: StructureConstants,
        trivial_dim: usize,
        notes: impl Into<String>,
    ) -> Result<Self> {
        let r = dims.len();
        if r == 0 {
            return Err(EswError::validation("r", "must be positive"));
        }
        if killing.len() != r {
            return Err(EswError::validation(
                "killing",
                format!("length {} does not match r = {r}", killing.len()),
            ));
        }
        if constants.r() != r {
            return Err(EswError::validation(
                "constants",
                format!("built for r = {} but r = {r}", constants.r()),
            ));
        }
        if let Some(k) = dims.iter().position(|&d| d == 0) {
            return Err(EswError::validation(
                format!("dims[{k}]"),
                "dimension must be positive",
            ));
        }
        if dims.iter().sum::<u64>() < 2 {
            return Err(EswError::validation("dims", "total dimension must be at least 2"));
        }
        if let Some(k) = killing
            .iter()
            .position(|b| b.is_negative() || b.to_f64().is_nan())
        {
            return Err(EswError::validation(
                format!("killing[{k}]"),
                "coefficient must be nonnegative",
            ));
        }
        if trivial_dim >= r.max(1) && trivial_dim > 0 {
            return Err(EswError::validation(
                "trivial_dim",
                format!("must be smaller than r = {r}"),
            ));
        }
        Ok(SpaceDescriptor {
            name: name.into(),
            dims,
            killing,
            constants,
            trivial_dim,
            notes: notes.into(),
        })
    }

    /// Descriptor with `b_k = 1` for every summand and no trivial variations.
    pub fn with_unit_killing(
        name: impl Into<String>,
        dims: Vec<u64>,
        constants: StructureConstants,
    ) -> Result<Self> {
        let r = dims.len();
        Self::new(name, dims, vec![Scalar::int(1); r], constants, 0, "")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// Total dimension `n = Σ d_k`.
    pub fn n(&self) -> u64 {
        self.dims.iter().sum()
    }

    pub fn killing(&self) -> &[Scalar] {
        &self.killing
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn trivial_dim(&self) -> usize {
        self.trivial_dim
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn is_exact(&self) -> bool {
        self.killing.iter().all(Scalar::is_exact) && self.constants.is_exact()
    }

    /// Non-fatal findings: a zero Killing coefficient on a summand that still
    /// appears in a nonzero structural constant.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, b) in self.killing.iter().enumerate() {
            if !b.is_zero() {
                continue;
            }
            let touched: Vec<String> = self
                .constants
                .iter()
                .filter(|(t, _)| t.contains(&(k + 1)))
                .map(|(t, _)| format!("({},{},{})", t[0], t[1], t[2]))
                .collect();
            if !touched.is_empty() {
                out.push(format!(
                    "killing[{k}] is 0 but summand {} appears in {}",
                    k + 1,
                    touched.join(", ")
                ));
            }
        }
        out
    }

    /// Same space with summands reordered: new summand `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let r = self.r();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return Err(EswError::Domain("not a permutation".into()));
        }
        let mut inv = vec![0; r];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut c = StructureConstants::new(r);
        for (t, v) in self.constants.iter() {
            c.set([inv[t[0] - 1] + 1, inv[t[1] - 1] + 1, inv[t[2] - 1] + 1], v.clone())?;
        }
        Self::new(
            self.name.clone(),
            perm.iter().map(|&p| self.dims[p]).collect(),
            perm.iter().map(|&p| self.killing[p].clone()).collect(),
            c,
            self.trivial_dim,
            self.notes.clone(),
        )
    }
}

/// Positive coefficients `(x_1, …, x_r)` of a diagonal invariant metric.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct DiagonalMetric {
    x: Vec<Scalar>,
}

impl DiagonalMetric {
    pub fn new(x: Vec<Scalar>) -> Result<Self> {
        if x.is_empty() {
            return Err(EswError::validation("metric", "empty"));
        }
        if let Some(k) = x.iter().position(|v| !v.is_positive() || !v.to_f64().is_finite()) {
            return Err(EswError::validation(
                format!("metric x[{}]", k + 1),
                format!("{} is not a positive finite number", x[k]),
            ));
        }
        Ok(DiagonalMetric { x })
    }

    pub fn from_f64(x: &[f64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| Scalar::Approx(v)).collect())
    }

    pub fn from_rationals(x: Vec<Rational>) -> Result<Self> {
        Self::new(x.into_iter().map(Scalar::Exact).collect())
    }

    /// Metric with integer coefficients.
    pub fn from_ints(x: &[i64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| Scalar::int(v)).collect())
    }

    /// The standard metric `(1, …, 1)`.
    pub fn standard(r: usize) -> Self {
        DiagonalMetric {
            x: vec![Scalar::int(1); r],
        }
    }

    pub fn x(&self) -> &[Scalar] {
        &self.x
    }

    pub fn r(&self) -> usize {
        self.x.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.x.iter().map(Scalar::to_f64).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.x.iter().all(Scalar::is_exact)
    }

    pub fn scaled(&self, c: &Scalar) -> Result<Self> {
        Self::new(self.x.iter().map(|v| v.clone() * c.clone()).collect())
    }

    /// Representative with `x_1 = 1`.
    pub fn gauge_normalized(&self) -> Self {
        let c = self.x[0].recip();
        DiagonalMetric {
            x: self.x.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn check_len(&self, space: &SpaceDescriptor) -> Result<()> {
        if self.r() != space.r() {
            return Err(EswError::validation(
                "metric",
                format!("has {} entries but {} has r = {}", self.r(), space.name(), space.r()),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_expansion_counts() {
        let mut c = StructureConstants::new(3);
        c.set([1, 2, 3], Scalar::int(1)).unwrap();
        c.set([1, 1, 2], Scalar::int(1)).unwrap();
        c.set([3, 3, 3], Scalar::int(1)).unwrap();
        let terms = c.ordered_terms();
        assert_eq!(terms.len(), 6 + 3 + 1);
    }

    #[test]
    fn symmetric_lookup() {
        let mut c = StructureConstants::new(3);
        c.set([3, 1, 2], Scalar::exact(1, 3)).unwrap();
        assert_eq!(c.get(2, 3, 1), Scalar::exact(1, 3));
        assert_eq!(c.get(1, 1, 2), Scalar::int(0));
    }

    #[test]
    fn out_of_range_triple_named() {
        let mut c = StructureConstants::new(3);
        let e = c.set([1, 2, 4], Scalar::int(1)).unwrap_err();
        assert!(e.to_string().contains("(1,2,4)"), "{e}");
    }

    #[test]
    fn negative_constant_rejected() {
        let mut c = StructureConstants::new(2);
        assert!(c.set([1, 1, 2], Scalar::exact(-1, 2)).is_err());
    }

    #[test]
    fn descriptor_validation() {
        let c = StructureConstants::new(2);
        assert!(SpaceDescriptor::new("x", vec![1, 2], vec![Scalar::int(1)], c.clone(), 0, "").is_err());
        assert!(SpaceDescriptor::new("x", vec![1], vec![Scalar::int(1)], StructureConstants::new(1), 0, "").is_err());
        assert!(SpaceDescriptor::new("x", vec![0, 2], vec![Scalar::int(1); 2], c.clone(), 0, "").is_err());
        assert!(SpaceDescriptor::new("x", vec![1, 2], vec![Scalar::int(1); 2], c, 0, "").is_ok());
    }

    #[test]
    fn zero_killing_warning() {
        let mut c = StructureConstants::new(2);
        c.set([1, 1, 2], Scalar::int(1)).unwrap();
        let d = SpaceDescriptor::new("x", vec![2, 2], vec![Scalar::int(1), Scalar::int(0)], c, 0, "").unwrap();
        assert_eq!(d.warnings().len(), 1);
    }

    #[test]
    fn metric_positivity() {
        assert!(DiagonalMetric::from_f64(&[1.0, 0.0]).is_err());
        assert!(DiagonalMetric::from_f64(&[1.0, f64::INFINITY]).is_err());
        let g = DiagonalMetric::from_ints(&[2, 4]).unwrap().gauge_normalized();
        assert_eq!(g.x()[1], Scalar::int(2));
    }

    #[test]
    fn permutation_relabels_constants() {
        let mut c = StructureConstants::new(3);
        c.set([1, 1, 2], Scalar::int(5)).unwrap();
        let d = SpaceDescriptor::with_unit_killing("x", vec![1, 2, 3], c).unwrap();
        let p = d.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[3, 1, 2]);
        assert_eq!(p.constants().get(2, 2, 3), Scalar::int(5));
    }
}
