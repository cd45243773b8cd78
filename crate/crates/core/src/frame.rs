//! Frames of discernment: single-variable [`Frame`]s and [`ProductFrame`]s
//! over several variables.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{EvidenceError, Result};
use crate::set::{ConfigSet, FocalSet, SetLike};

/// Largest product frame, in configurations.
pub const MAX_CONFIGURATIONS: usize = 1 << 16;

/// The domain a body of evidence lives on.
pub trait Space: Clone + PartialEq + fmt::Debug {
    type Set: SetLike;

    /// Number of atoms (|Ω|).
    fn size(&self) -> usize;
    fn empty_set(&self) -> Self::Set;
    fn full_set(&self) -> Self::Set;
    /// Whether every element of `set` lies inside this frame.
    fn fits(&self, set: &Self::Set) -> bool;
    /// Labels of the atoms in `set`, in atom order.
    fn atom_labels(&self, set: &Self::Set) -> Vec<String>;
    /// Mask view of a set; only valid when `size() <= 64`.
    fn set_to_mask(&self, set: &Self::Set) -> u64;
    /// Inverse of [`Space::set_to_mask`].
    fn set_from_mask(&self, mask: u64) -> Self::Set;

    fn complement(&self, set: &Self::Set) -> Self::Set {
        self.full_set().difference(set)
    }

    /// `{a b}` rendering used by the evidence file format.
    fn render_set(&self, set: &Self::Set) -> String {
        format!("{{{}}}", self.atom_labels(set).join(" "))
    }
}

/// A single-variable frame of discernment.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > 64 {
            return Err(EvidenceError::InvalidFrame(format!(
                "a frame needs between 1 and 64 labels, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(EvidenceError::InvalidFrame("empty label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(EvidenceError::InvalidFrame(format!("duplicate label {l}")));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Builds a set from labels, failing on labels outside the frame.
    pub fn set<'a, I: IntoIterator<Item = &'a str>>(&self, labels: I) -> Result<FocalSet> {
        labels
            .into_iter()
            .map(|l| self.index_of(l).ok_or(EvidenceError::ElementOutOfRange))
            .collect::<Result<Vec<_>>>()
            .map(FocalSet::from_indices)
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Frame").field(&self.labels).finish()
    }
}

impl Space for Frame {
    type Set = FocalSet;

    fn size(&self) -> usize {
        self.labels.len()
    }
    fn empty_set(&self) -> FocalSet {
        FocalSet::EMPTY
    }
    fn full_set(&self) -> FocalSet {
        FocalSet::full(self.labels.len())
    }
    fn fits(&self, set: &FocalSet) -> bool {
        set.span() <= self.labels.len()
    }
    fn atom_labels(&self, set: &FocalSet) -> Vec<String> {
        set.indices().map(|i| self.labels[i].clone()).collect()
    }
    fn set_to_mask(&self, set: &FocalSet) -> u64 {
        set.mask()
    }
    fn set_from_mask(&self, mask: u64) -> FocalSet {
        FocalSet::from_mask(mask)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub frame: Frame,
}

/// Cartesian product of named single-variable frames. Configurations are
/// numbered row-major: the last variable varies fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductFrame {
    variables: Arc<[Variable]>,
    strides: Arc<[usize]>,
    size: usize,
}

impl ProductFrame {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        if variables.is_empty() {
            return Err(EvidenceError::InvalidFrame("product frame without variables".into()));
        }
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v.name.as_str()) {
                return Err(EvidenceError::InvalidFrame(format!("duplicate variable {}", v.name)));
            }
        }
        let mut size = 1usize;
        let mut strides = vec![0; variables.len()];
        for (k, v) in variables.iter().enumerate().rev() {
            strides[k] = size;
            size = size
                .checked_mul(v.frame.size())
                .filter(|&s| s <= MAX_CONFIGURATIONS)
                .ok_or_else(|| {
                    EvidenceError::InvalidFrame(format!(
                        "product frame exceeds {MAX_CONFIGURATIONS} configurations"
                    ))
                })?;
        }
        Ok(ProductFrame {
            variables: variables.into(),
            strides: strides.into(),
            size,
        })
    }

    pub fn single(name: impl Into<String>, frame: Frame) -> Self {
        Self::new(vec![Variable {
            name: name.into(),
            frame,
        }])
        .expect("a single frame always forms a valid product")
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.name.as_str())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    /// Per-variable value indices of a configuration.
    pub fn decode(&self, config: usize) -> Vec<usize> {
        self.variables
            .iter()
            .zip(self.strides.iter())
            .map(|(v, &s)| (config / s) % v.frame.size())
            .collect()
    }

    pub fn encode(&self, values: &[usize]) -> usize {
        values.iter().zip(self.strides.iter()).map(|(v, s)| v * s).sum()
    }

    /// The frame over `names`, in the given order, taking component frames
    /// from `self`.
    pub fn sub_frame<S: AsRef<str>>(&self, names: &[S]) -> Result<ProductFrame> {
        let vars = names
            .iter()
            .map(|n| {
                self.position(n.as_ref())
                    .map(|p| self.variables[p].clone())
                    .ok_or(EvidenceError::NotASubset)
            })
            .collect::<Result<Vec<_>>>()?;
        if vars.is_empty() {
            return Err(EvidenceError::NotASubset);
        }
        ProductFrame::new(vars)
    }

    /// Merges two frames: variables of `self` first, then the new ones of
    /// `other`. Shared variables must carry identical frames.
    pub fn join(&self, other: &ProductFrame) -> Result<ProductFrame> {
        let mut vars = self.variables.to_vec();
        for v in other.variables.iter() {
            match self.position(&v.name) {
                Some(p) if self.variables[p].frame != v.frame => {
                    return Err(EvidenceError::FrameMismatch)
                }
                Some(_) => {}
                None => vars.push(v.clone()),
            }
        }
        ProductFrame::new(vars)
    }

    /// For each variable of `target`, its position in `self` (`None` when
    /// absent).
    pub(crate) fn positions_in(&self, target: &ProductFrame) -> Vec<Option<usize>> {
        target.variables.iter().map(|v| self.position(&v.name)).collect()
    }

    fn config_label(&self, config: usize) -> String {
        let values = self.decode(config);
        if self.variables.len() == 1 {
            return self.variables[0].frame.labels()[values[0]].clone();
        }
        let parts: Vec<&str> = self
            .variables
            .iter()
            .zip(values)
            .map(|(v, x)| v.frame.labels()[x].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Parses a configuration label (`a` for one variable, `(a,0)` otherwise).
    pub fn parse_config(&self, text: &str) -> Result<usize> {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != self.variables.len() {
            return Err(EvidenceError::ElementOutOfRange);
        }
        let values = parts
            .iter()
            .zip(self.variables.iter())
            .map(|(p, v)| v.frame.index_of(p).ok_or(EvidenceError::ElementOutOfRange))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&values))
    }
}

impl Space for ProductFrame {
    type Set = ConfigSet;

    fn size(&self) -> usize {
        self.size
    }
    fn empty_set(&self) -> ConfigSet {
        ConfigSet::empty(self.size)
    }
    fn full_set(&self) -> ConfigSet {
        ConfigSet::full(self.size)
    }
    fn fits(&self, set: &ConfigSet) -> bool {
        set.width() == self.size.div_ceil(64).max(1) && set.indices().all(|i| i < self.size)
    }
    fn atom_labels(&self, set: &ConfigSet) -> Vec<String> {
        set.indices().map(|c| self.config_label(c)).collect()
    }
    fn set_to_mask(&self, set: &ConfigSet) -> u64 {
        assert!(self.size <= 64);
        set.indices().fold(0, |m, i| m | (1 << i))
    }
    fn set_from_mask(&self, mask: u64) -> ConfigSet {
        ConfigSet::from_indices(self.size, FocalSet::from_mask(mask).indices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> ProductFrame {
        ProductFrame::new(vec![
            Variable {
                name: "x".into(),
                frame: Frame::new(["a", "b", "c"]).unwrap(),
            },
            Variable {
                name: "y".into(),
                frame: Frame::new(["0", "1"]).unwrap(),
            },
        ])
        .unwrap()
    }

    #[test]
    fn frame_validation() {
        assert!(Frame::new(["a", "b"]).is_ok());
        assert!(Frame::new(Vec::<String>::new()).is_err());
        assert!(Frame::new(["a", "a"]).is_err());
        assert!(Frame::new([""]).is_err());
        assert!(Frame::new((0..65).map(|i| i.to_string())).is_err());
        assert!(Frame::new((0..64).map(|i| i.to_string())).is_ok());
    }

    #[test]
    fn labels_to_sets() {
        let f = Frame::new(["a", "b", "c"]).unwrap();
        assert_eq!(f.set(["a", "c"]).unwrap(), FocalSet::from_mask(0b101));
        assert_eq!(f.set(["q"]), Err(EvidenceError::ElementOutOfRange));
        assert_eq!(f.render_set(&FocalSet::from_mask(0b110)), "{b c}");
        assert_eq!(f.render_set(&FocalSet::EMPTY), "{}");
    }

    #[test]
    fn row_major_configurations() {
        let f = xy();
        assert_eq!(f.size(), 6);
        assert_eq!(f.encode(&[1, 0]), 2);
        assert_eq!(f.decode(5), vec![2, 1]);
        assert_eq!(f.parse_config("(b,1)").unwrap(), 3);
        assert_eq!(f.render_set(&ConfigSet::from_indices(6, [2, 3])), "{(b,0) (b,1)}");
        assert!(f.parse_config("(b)").is_err());
    }

    #[test]
    fn sub_frame_and_join() {
        let f = xy();
        let y = f.sub_frame(&["y"]).unwrap();
        assert_eq!(y.size(), 2);
        assert_eq!(f.sub_frame(&["z"]), Err(EvidenceError::NotASubset));
        let yx = y.join(&f).unwrap();
        assert_eq!(yx.variable_names().collect::<Vec<_>>(), vec!["y", "x"]);
    }

    #[test]
    fn oversized_product_rejected() {
        let big = Frame::new((0..64).map(|i| i.to_string())).unwrap();
        let vars = (0..3)
            .map(|i| Variable {
                name: format!("v{i}"),
                frame: big.clone(),
            })
            .collect();
        assert!(ProductFrame::new(vars).is_err());
    }
}
