//! PAC successive-cancellation decoders.

pub mod list;
pub mod llr;
pub mod sc;

pub use list::{
    list_decode, pac_scl_decode, select_survivors, CompetitionRecord, DecodeOptions, DecodedPath,
    ListDecodeOutput, TraceEntry,
};
pub use llr::{calc_pm, hard_decision, llr_f, llr_g};
pub use sc::{forced_path_metrics, pac_sc_decode, sc_walk};
