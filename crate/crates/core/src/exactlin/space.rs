use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::Error;

/// A finite-dimensional space with a named basis.
///
/// Tensor products use the left-major convention: `e_i ⊗ e_j` sits at index
/// `i * dim_right + j`; [`tensor_index`] is the single place that encodes it.
#[derive(Clone)]
pub struct BasedSpace {
    labels: Arc<[String]>,
}

/// Index of `e_i ⊗ e_j` in a tensor product whose right factor has dimension `right_dim`.
#[inline]
pub fn tensor_index(i: usize, j: usize, right_dim: usize) -> usize {
    i * right_dim + j
}

/// Index of a pure tensor `e_{i_1} ⊗ … ⊗ e_{i_n}` where factor `k` has dimension `dims[k]`.
#[inline]
pub fn multi_index(indices: &[usize], dims: &[usize]) -> usize {
    indices.iter().zip(dims).fold(0, |acc, (i, d)| tensor_index(acc, *i, *d))
}

/// Inverse of [`multi_index`].
pub fn split_index(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, Error> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(BasedSpace { labels: labels.into() })
    }

    /// Basis `prefix0, prefix1, …`.
    pub fn numbered(prefix: &str, dim: usize) -> Self {
        BasedSpace { labels: (0..dim).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().into() }
    }

    /// The ground field as a one-dimensional space.
    pub fn ground() -> Self {
        BasedSpace { labels: vec!["1".to_string()].into() }
    }

    pub fn zero() -> Self {
        BasedSpace { labels: Vec::<String>::new().into() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn tensor(&self, other: &BasedSpace) -> BasedSpace {
        let wrap = |s: &str| if s.contains('⊗') { format!("({s})") } else { s.to_string() };
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        for a in self.labels.iter() {
            for b in other.labels.iter() {
                labels.push(format!("{}⊗{}", wrap(a), wrap(b)));
            }
        }
        BasedSpace { labels: labels.into() }
    }

    /// `self^{⊗n}`; the zeroth power is the ground field.
    pub fn power(&self, n: usize) -> BasedSpace {
        (1..n).fold(if n == 0 { BasedSpace::ground() } else { self.clone() }, |acc, _| acc.tensor(self))
    }

    /// The subset of basis labels at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> BasedSpace {
        BasedSpace { labels: indices.iter().map(|&i| self.labels[i].clone()).collect::<Vec<_>>().into() }
    }
}

impl PartialEq for BasedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for BasedSpace {}

impl fmt::Debug for BasedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() <= 8 {
            write!(f, "BasedSpace{:?}", &*self.labels)
        } else {
            write!(f, "BasedSpace(dim {})", self.dim())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_labels_follow_index_convention() {
        let a = BasedSpace::numbered("a", 2);
        let b = BasedSpace::numbered("b", 3);
        let ab = a.tensor(&b);
        assert_eq!(ab.label(tensor_index(1, 2, 3)), "a1⊗b2");
        assert_eq!(multi_index(&[1, 0, 2], &[2, 2, 3]), 8);
        assert_eq!(split_index(8, &[2, 2, 3]), vec![1, 0, 2]);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(BasedSpace::new(vec!["x".into(), "x".into()]).is_err());
    }
}
