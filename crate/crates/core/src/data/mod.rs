//! Tabular data model: schema, columnar datasets, split conditions and paths.

mod condition;
mod dataset;
mod schema;

pub use condition::{Op, Path, SplitCondition, Threshold};
pub use dataset::{
    filter_by_path, load_dataset, read_csv, read_records, split_train_test, Column, Dataset,
    DatasetView, TrainTest, Value,
};
pub use schema::{AttrKind, Attribute, Schema};
