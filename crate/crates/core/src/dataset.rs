//! Feature matrices and multi-label datasets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::labels::LabelVector;

/// Row-major feature storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Dense {
        dim: usize,
        values: Vec<f64>,
    },
    /// Compressed sparse rows. Row `i` owns `indices[indptr[i]..indptr[i + 1]]`.
    Sparse {
        dim: usize,
        indptr: Vec<usize>,
        indices: Vec<u32>,
        values: Vec<f64>,
    },
}

/// A borrowed feature row.
#[derive(Debug, Clone, Copy)]
pub enum Row<'a> {
    Dense(&'a [f64]),
    Sparse { indices: &'a [u32], values: &'a [f64] },
}

impl<'a> Row<'a> {
    #[inline]
    pub fn dot(&self, weights: &[f64]) -> f64 {
        match *self {
            Row::Dense(x) => x.iter().zip(weights).map(|(a, b)| a * b).sum(),
            Row::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .map(|(&i, v)| v * weights[i as usize])
                .sum(),
        }
    }

    /// `out += scale * x`.
    #[inline]
    pub fn add_scaled_to(&self, scale: f64, out: &mut [f64]) {
        match *self {
            Row::Dense(x) => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o += scale * v;
                }
            }
            Row::Sparse { indices, values } => {
                for (&i, v) in indices.iter().zip(values) {
                    out[i as usize] += scale * v;
                }
            }
        }
    }

    /// Nonzero (or explicitly stored) entries as `(index, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        let (dense, sparse) = match *self {
            Row::Dense(x) => (Some(x), None),
            Row::Sparse { indices, values } => (None, Some((indices, values))),
        };
        let dense_iter = dense
            .into_iter()
            .flat_map(|x| x.iter().copied().enumerate().filter(|(_, v)| v.to_bits() != 0));
        let sparse_iter = sparse
            .into_iter()
            .flat_map(|(ix, vs)| ix.iter().map(|&i| i as usize).zip(vs.iter().copied()));
        dense_iter.chain(sparse_iter)
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; dim];
        for (i, v) in self.entries() {
            out[i] = v;
        }
        out
    }
}

impl Features {
    pub fn dense(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 && !values.is_empty() {
            return Err(Error::shape("dense features with zero dimension"));
        }
        if dim > 0 && values.len() % dim != 0 {
            return Err(Error::shape(format!(
                "{} dense values do not divide into rows of {dim}",
                values.len()
            )));
        }
        Ok(Features::Dense { dim, values })
    }

    /// Builds CSR storage from per-row `(index, value)` lists.
    pub fn sparse_from_rows(dim: usize, rows: Vec<Vec<(u32, f64)>>) -> Result<Self> {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for (r, row) in rows.into_iter().enumerate() {
            for (i, v) in row {
                if i as usize >= dim {
                    return Err(Error::shape(format!(
                        "row {r}: feature index {i} outside [0, {dim})"
                    )));
                }
                indices.push(i);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(Features::Sparse {
            dim,
            indptr,
            indices,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Features::Dense { dim, .. } | Features::Sparse { dim, .. } => *dim,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Features::Dense { dim, values } => {
                if *dim == 0 {
                    0
                } else {
                    values.len() / dim
                }
            }
            Features::Sparse { indptr, .. } => indptr.len().saturating_sub(1),
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        match self {
            Features::Dense { dim, values } => Row::Dense(&values[i * dim..(i + 1) * dim]),
            Features::Sparse {
                indptr,
                indices,
                values,
                ..
            } => {
                let (a, b) = (indptr[i], indptr[i + 1]);
                Row::Sparse {
                    indices: &indices[a..b],
                    values: &values[a..b],
                }
            }
        }
    }

    /// The rows at `idx`, in that order, keeping the storage kind.
    pub fn select(&self, idx: &[usize]) -> Features {
        match self {
            Features::Dense { dim, values } => {
                let mut out = Vec::with_capacity(idx.len() * dim);
                for &i in idx {
                    out.extend_from_slice(&values[i * dim..(i + 1) * dim]);
                }
                Features::Dense {
                    dim: *dim,
                    values: out,
                }
            }
            Features::Sparse {
                dim,
                indptr,
                indices,
                values,
            } => {
                let mut new_ptr = Vec::with_capacity(idx.len() + 1);
                let mut new_idx = Vec::new();
                let mut new_val = Vec::new();
                new_ptr.push(0);
                for &i in idx {
                    let (a, b) = (indptr[i], indptr[i + 1]);
                    new_idx.extend_from_slice(&indices[a..b]);
                    new_val.extend_from_slice(&values[a..b]);
                    new_ptr.push(new_idx.len());
                }
                Features::Sparse {
                    dim: *dim,
                    indptr: new_ptr,
                    indices: new_idx,
                    values: new_val,
                }
            }
        }
    }
}

/// Instances paired with `±1` label vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    features: Features,
    labels: Vec<LabelVector>,
    num_labels: usize,
    label_names: Option<Vec<String>>,
}

impl MultiLabelDataset {
    pub fn new(features: Features, labels: Vec<LabelVector>, num_labels: usize) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::shape(format!(
                "{} feature rows but {} label rows",
                features.rows(),
                labels.len()
            )));
        }
        if let Some((i, y)) = labels.iter().enumerate().find(|(_, y)| y.len() != num_labels) {
            return Err(Error::shape(format!(
                "instance {i} has {} labels, expected {num_labels}",
                y.len()
            )));
        }
        if let Features::Sparse { dim, indices, .. } = &features {
            if let Some(&bad) = indices.iter().find(|&&i| i as usize >= *dim) {
                return Err(Error::shape(format!(
                    "feature index {bad} outside [0, {dim})"
                )));
            }
        }
        Ok(MultiLabelDataset {
            features,
            labels,
            num_labels,
            label_names: None,
        })
    }

    pub fn with_label_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.num_labels {
            return Err(Error::shape(format!(
                "{} label names for {} labels",
                names.len(),
                self.num_labels
            )));
        }
        self.label_names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.dim()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn labels(&self) -> &[LabelVector] {
        &self.labels
    }

    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        self.features.row(i)
    }

    #[inline]
    pub fn label(&self, i: usize) -> &LabelVector {
        &self.labels[i]
    }

    /// Same features, new labels.
    pub fn with_labels(&self, labels: Vec<LabelVector>) -> Result<Self> {
        let mut out = MultiLabelDataset::new(self.features.clone(), labels, self.num_labels)?;
        out.label_names = self.label_names.clone();
        Ok(out)
    }

    /// The instances at `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> Self {
        MultiLabelDataset {
            features: self.features.select(idx),
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            num_labels: self.num_labels,
            label_names: self.label_names.clone(),
        }
    }

    /// Mean number of relevant labels per instance.
    pub fn cardinality(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let total: usize = self.labels.iter().map(LabelVector::num_relevant).sum();
        total as f64 / self.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn row_counts_must_agree() {
        let x = Features::dense(2, vec![0.0; 6]).unwrap();
        let labels = vec![LabelVector::negative(1); 2];
        assert!(MultiLabelDataset::new(x, labels, 1).is_err());
    }

    #[test]
    fn sparse_index_out_of_range_rejected() {
        assert!(Features::sparse_from_rows(2, vec![vec![(2, 1.0)]]).is_err());
        let bad = Features::Sparse {
            dim: 2,
            indptr: vec![0, 1],
            indices: vec![5],
            values: vec![1.0],
        };
        assert!(MultiLabelDataset::new(bad, vec![LabelVector::negative(1)], 1).is_err());
    }

    #[test]
    fn dense_and_sparse_rows_agree() {
        let dense = Features::dense(3, vec![1.0, 0.0, 2.0, 0.0, -1.0, 0.0]).unwrap();
        let sparse =
            Features::sparse_from_rows(3, vec![vec![(0, 1.0), (2, 2.0)], vec![(1, -1.0)]]).unwrap();
        let w = [0.5, 2.0, -1.0];
        for i in 0..2 {
            assert_eq!(dense.row(i).dot(&w), sparse.row(i).dot(&w));
            assert_eq!(dense.row(i).to_dense(3), sparse.row(i).to_dense(3));
        }
        let picked = sparse.select(&[1, 0]);
        assert_eq!(picked.row(0).to_dense(3), vec![0.0, -1.0, 0.0]);
    }
}
