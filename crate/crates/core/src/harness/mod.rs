//! Synthetic populations, experiment sweeps and result tables.

mod emit;
mod experiment;
mod synth;

pub use emit::{
    emit_results, read_results_json, write_attribute_shift_csv, write_heatmap_csv,
    write_partial_csv, write_results_csv, write_results_json, write_scatter_csv, RESULT_COLUMNS,
};
pub use experiment::{
    run_experiment, run_pair, run_seed, ExperimentConfig, ExperimentResult, PairSpec, Regime,
    RegimeResult,
};
pub use synth::{
    generate_synthetic, ground_truth, CellTruth, LabelRule, SynthConfig, Synthetic,
    MAX_SYNTH_ATTRS,
};
