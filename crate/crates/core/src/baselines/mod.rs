//! Predictors that need no neural framework. Both emit the same
//! [`PredictionRecord`](crate::eval::PredictionRecord)s external models do.

mod features;
mod labels;
mod random;
mod softmax;

pub use features::{extract_features, fnv1a, FeatureSpec};
pub use labels::{LabelSpace, Labeled};
pub use random::{random_baseline, random_ranking};
pub use softmax::{
    loss_and_grad, predict_softmax, train_softmax, Example, Head, SoftmaxHyper, SoftmaxModel,
    TrainReport, MODEL_FORMAT, MODEL_VERSION,
};
