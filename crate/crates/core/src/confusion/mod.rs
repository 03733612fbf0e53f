//! Where predictors go wrong: the row-normalized confusion matrix, the
//! thresholded confusion graph, Girvan–Newman clusters of that graph, a
//! cluster-ordered heatmap export, and the hapax-productivity regression.

mod graph;
mod heatmap;
mod matrix;
mod productivity;

pub use graph::{
    edge_betweenness, girvan_newman, threshold_graph, weak_components, Clustering, ConfusionGraph,
    DEFAULT_THETA,
};
pub use heatmap::{order_for_heatmap, HeatmapExport};
pub use matrix::{confusion_matrix, ConfusionMatrix};
pub use productivity::{f_from_r2, f_survival, hapax_counts, ols_regression, RegressionResult};
